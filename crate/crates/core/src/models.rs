//! Built-in reference models with closed-form results: the critical
//! dissipative boson lattice and the dissipative XY fermion chain.
//!
//! The boson model is purely dissipative with 4D+1 linear Lindblad operators
//! per cell: a local loss L⁽¹⁾ = √(2Dη) â and, for every lattice edge,
//! the four operators L⁽²±⁾ = ŵ₊ + i ŵ'₋ and L⁽³±⁾ = ŵ₊ ± ŵ'₋ coupling the
//! two end points.  Its steady-state covariance γ̃(k) has diagonal
//! (η+2)/(2(η−c_k)) and off-diagonal ±i s_k/(2(η−c_k)); the model is gapped
//! for η > 1 and critical at η = 1 in D ≥ 2 dimensions.
//!
//! The XY chain is the fermionic form of the dissipative spin-1/2 XY model:
//! nearest-neighbour hopping and pairing with chemical potential μ, linear
//! Lindblad operators √η(ŵ_{j+} + e^{iφ} ŵ_{(j+1)+}) and, optionally, the
//! Hermitian dephasing operators √ζ(2â†â − 1).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_j1, fresnel, sine_integral};
use crate::stencil::{CBlock, CVec, CouplingStencil, Displacement, LatticeSpec, Statistics};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// Critical dissipative bosons
// ---------------------------------------------------------------------------

/// Parameters of the critical dissipative boson lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalBosonParams {
    /// Spatial dimension D ≥ 1 (closed forms cover D = 1, 2, 3).
    pub dims: usize,
    /// Local loss rate η ≥ 0; the model is stable iff η ≥ 1.
    pub eta: f64,
}

impl Default for CriticalBosonParams {
    fn default() -> Self {
        CriticalBosonParams { dims: 1, eta: 1.5 }
    }
}

impl CriticalBosonParams {
    /// c_k = Σ_a cos(k_a)/D.
    pub fn c_k(&self, k: &[f64]) -> f64 {
        k.iter().map(|ka| ka.cos()).sum::<f64>() / self.dims as f64
    }

    /// s_k = Σ_a sin(k_a)/D.
    pub fn s_k(&self, k: &[f64]) -> f64 {
        k.iter().map(|ka| ka.sin()).sum::<f64>() / self.dims as f64
    }

    /// Small-momentum expansion parameter ε = 4(η−1), proportional to the gap.
    pub fn epsilon(&self) -> f64 {
        4.0 * (self.eta - 1.0)
    }

    /// Dissipative gap Δ = 2D(η−1) (zero at the critical point η = 1).
    pub fn gap(&self) -> f64 {
        2.0 * self.dims as f64 * (self.eta - 1.0)
    }

    /// Residue poles z_± = η ± √(η²−1) of the 1D Fourier integral.
    pub fn z_poles(&self) -> (f64, f64) {
        let s = (self.eta * self.eta - 1.0).sqrt();
        (self.eta - s, self.eta + s)
    }

    /// Closed-form steady-state covariance block γ̃(k); singular where
    /// c_k = η (only reachable for η ≤ 1).
    pub fn gamma_momentum(&self, k: &[f64]) -> CBlock {
        let denom = 2.0 * (self.eta - self.c_k(k));
        let d = (self.eta + 2.0) / denom;
        let o = self.s_k(k) / denom;
        CBlock::from_row_slice(2, 2, &[c(d, 0.0), c(0.0, o), c(0.0, -o), c(d, 0.0)])
    }
}

/// Build the coupling stencil of the critical boson model: no Hamiltonian,
/// the 4D+1 Lindblad families L⁽¹⁾, L⁽²±⁾_a, L⁽³±⁾_a, no quadratic terms.
pub fn critical_boson_stencil(p: &CriticalBosonParams) -> CouplingStencil {
    assert!(p.dims >= 1, "critical boson model needs D >= 1");
    assert!(p.eta >= 0.0, "loss rate eta must be nonnegative");
    let d = p.dims;
    let mut s = CouplingStencil::new(Statistics::Boson, LatticeSpec::infinite(d, 1));

    let origin: Displacement = vec![0; d];
    let amp = (2.0 * d as f64 * p.eta).sqrt();
    let mut fam1 = BTreeMap::new();
    fam1.insert(origin.clone(), CVec::from_vec(vec![c(amp, 0.0), c(0.0, -amp)]));
    s.add_lindblad_family(fam1);

    for a in 0..d {
        for sgn in [1i64, -1] {
            let mut ea = origin.clone();
            ea[a] = sgn;
            // L⁽²±⁾ = ŵ_{0+} + i ŵ_{±e_a,−}
            let mut fam2 = BTreeMap::new();
            fam2.insert(origin.clone(), CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
            fam2.insert(ea.clone(), CVec::from_vec(vec![c(0.0, 0.0), c(0.0, 1.0)]));
            s.add_lindblad_family(fam2);
            // L⁽³±⁾ = ŵ_{0+} ± ŵ_{±e_a,−}
            let mut fam3 = BTreeMap::new();
            fam3.insert(origin.clone(), CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
            fam3.insert(ea, CVec::from_vec(vec![c(0.0, 0.0), c(sgn as f64, 0.0)]));
            s.add_lindblad_family(fam3);
        }
    }
    s
}

/// Exact steady-state correlations of the 1D boson model at separation r.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boson1dCorrelations {
    /// γ_{+,+}(r) = γ_{−,−}(r) = (η+2) z_−^r / (2√(η²−1)).
    pub diagonal: f64,
    /// γ_{+,−}(r) = −z_−^{r−1}(1−z_−²)/(4√(η²−1)) for r ≥ 1; exactly 0 at
    /// r = 0 by the k ↦ −k antisymmetry of γ̃_{+,−}.
    pub off_diagonal: f64,
}

/// The η → 1⁺ limit of the off-diagonal 1D correlation at any r ≥ 1.
pub const CRITICAL_BOSON_OFFDIAG_GAPLESS_LIMIT: f64 = -0.5;

/// Evaluate the exact 1D correlations by residue integration of γ̃(k).
/// Requires a gapped model (η > 1); the diagonal part diverges as η → 1
/// while the off-diagonal converges to [`CRITICAL_BOSON_OFFDIAG_GAPLESS_LIMIT`].
pub fn critical_boson_exact_1d(r: i64, eta: f64) -> Result<Boson1dCorrelations> {
    if eta <= 1.0 {
        return Err(Error::GaplessInput { eta });
    }
    let r = r.unsigned_abs() as i32;
    let root = (eta * eta - 1.0).sqrt();
    let zm = eta - root;
    let diagonal = (eta + 2.0) * zm.powi(r) / (2.0 * root);
    let off_diagonal = if r == 0 {
        0.0
    } else {
        -zm.powi(r - 1) * (1.0 - zm * zm) / (4.0 * root)
    };
    Ok(Boson1dCorrelations { diagonal, off_diagonal })
}

/// Constant term of the D = 2 logarithmic decay law, ≈ −0.5159, recomputed
/// from its closed form −2 ln 2 + √(2/π)·[2 sin½ + 2 cos½ + 2√π(S(π^{−1/2}) −
/// C(π^{−1/2}))] with the Fresnel integrals S and C.
pub fn critical_boson_log_constant() -> f64 {
    let (s, cc) = fresnel(1.0 / PI.sqrt());
    let bracket = 2.0 * 0.5f64.sin() + 2.0 * 0.5f64.cos() + 2.0 * PI.sqrt() * (s - cc);
    -2.0 * (2.0f64).ln() + (2.0 / PI).sqrt() * bracket
}

/// Large-distance asymptotic predictions for the critical boson model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BosonAsymptotics {
    /// γ_{+,+}(r); `None` for D = 2 with η ≤ 1, where the logarithmic law
    /// needs a nonzero gap as infrared regulator.
    pub diagonal: Option<f64>,
    /// γ_{+,−}(r), evaluated at the given direction.
    pub off_diagonal: f64,
}

/// Evaluate the asymptotic decay laws at distance r along `direction`
/// (any nonzero vector with D components):
///
/// * D = 2 diagonal: (η+2)/π · (−ln √(η−1) − 0.5159 − ln r), isotropic;
/// * D = 2 off-diagonal: −sin(φ_r + π/4)/(√2 π r) · (1 − J₁(Kr));
/// * D = 3 diagonal: 9/(2π²r) · Si(Kr) → 9/(4πr), isotropic;
/// * D = 3 off-diagonal: −(cos θ_r + sin θ_r (cos φ_r + sin φ_r))/(2π²) ·
///   (π/2 − sin(Kr))/r².
///
/// The momentum cutoff K models the Brillouin-zone boundary and defaults to
/// π; the oscillatory remainders J₁(Kr) and sin(Kr) are cutoff-sensitive.
pub fn critical_boson_asymptotics(
    p: &CriticalBosonParams,
    r: f64,
    direction: &[f64],
    cutoff: Option<f64>,
) -> Result<BosonAsymptotics> {
    if p.dims != 2 && p.dims != 3 {
        return Err(Error::UnsupportedDimension { dims: p.dims });
    }
    assert_eq!(direction.len(), p.dims, "direction must have D components");
    assert!(r > 0.0, "asymptotic forms need r > 0");
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "direction must be nonzero");
    let k = cutoff.unwrap_or(PI);

    if p.dims == 2 {
        let phi_r = direction[1].atan2(direction[0]);
        let diagonal = if p.eta > 1.0 {
            Some(
                (p.eta + 2.0) / PI
                    * (-(p.eta - 1.0).sqrt().ln() + critical_boson_log_constant() - r.ln()),
            )
        } else {
            None
        };
        let off_diagonal =
            -(phi_r + PI / 4.0).sin() / (2.0f64.sqrt() * PI * r) * (1.0 - bessel_j1(k * r));
        return Ok(BosonAsymptotics { diagonal, off_diagonal });
    }

    let theta_r = (direction[2] / norm).acos();
    let phi_r = direction[1].atan2(direction[0]);
    let diagonal = Some(9.0 / (2.0 * PI * PI * r) * sine_integral(k * r));
    let angular = theta_r.cos() + theta_r.sin() * (phi_r.cos() + phi_r.sin());
    let off_diagonal = -angular / (2.0 * PI * PI) * (PI / 2.0 - (k * r).sin()) / (r * r);
    Ok(BosonAsymptotics { diagonal, off_diagonal })
}

// ---------------------------------------------------------------------------
// Dissipative XY fermion chain
// ---------------------------------------------------------------------------

/// Parameters of the dissipative XY chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XYChainParams {
    /// Chemical potential μ.
    pub mu: f64,
    /// Pairing strength α.
    pub alpha: f64,
    /// Linear dissipation rate η ≥ 0.
    pub eta: f64,
    /// Dissipation phase φ.
    pub phi: f64,
    /// Dephasing rate ζ ≥ 0; ζ = 0 gives a quasifree model.
    pub zeta: f64,
}

impl Default for XYChainParams {
    fn default() -> Self {
        XYChainParams { mu: 0.0, alpha: 0.2, eta: 1.0, phi: 2.0 * PI / 5.0, zeta: 0.0 }
    }
}

impl XYChainParams {
    /// f(k) = −2η(1 + cos φ cos k), the real part entering both branches ξ±.
    pub fn f_k(&self, k: f64) -> f64 {
        -2.0 * self.eta * (1.0 + self.phi.cos() * k.cos())
    }

    /// c(k) = μ − 2 cos k + 2iα sin k.
    pub fn c_k(&self, k: f64) -> Complex64 {
        c(self.mu - 2.0 * k.cos(), 2.0 * self.alpha * k.sin())
    }

    /// Single-particle spectral branches ξ±(k) = (f ± √(f² − |2c|²))/2 of the
    /// quasifree (ζ = 0) model.
    pub fn xi(&self, k: f64) -> (Complex64, Complex64) {
        let f = self.f_k(k);
        let disc = f * f - 4.0 * self.c_k(k).norm_sqr();
        let root = if disc >= 0.0 { c(disc.sqrt(), 0.0) } else { c(0.0, (-disc).sqrt()) };
        ((c(f, 0.0) + root) / 2.0, (c(f, 0.0) - root) / 2.0)
    }

    /// Closed-form quasifree steady-state covariance
    /// γ̃(k) = sin φ sin k / (2i (1 + cos φ cos k)) · 1₂, independent of μ, α.
    pub fn gamma_momentum(&self, k: f64) -> CBlock {
        let v = -0.5 * self.phi.sin() * k.sin() / (1.0 + self.phi.cos() * k.cos());
        CBlock::from_row_slice(2, 2, &[c(0.0, v), c(0.0, 0.0), c(0.0, 0.0), c(0.0, v)])
    }
}

/// Build the coupling stencil of the XY chain: Hamiltonian blocks
/// h(0) = −(μ/2)σ_y, h(±1) = (σ_y ∓ iασ_x)/2, Lindblad family
/// ℓ(0) = √η e₊, ℓ(1) = √η e^{iφ} e₊ and, for ζ > 0, the dephasing
/// stencil m(0,0) = √ζ σ_y.
pub fn xy_chain_stencil(p: &XYChainParams) -> CouplingStencil {
    assert!(p.eta >= 0.0 && p.zeta >= 0.0, "dissipation rates must be nonnegative");
    let mut s = CouplingStencil::new(Statistics::Fermion, LatticeSpec::infinite(1, 1));

    let sigma_y = CBlock::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let mut h = BTreeMap::new();
    h.insert(vec![0i64], sigma_y.scale(-p.mu / 2.0));
    // (σ_y ∓ iα σ_x)/2 at r = ±1
    h.insert(
        vec![1i64],
        CBlock::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(0., (-1.0 - p.alpha) / 2.0), c(0., (1.0 - p.alpha) / 2.0), c(0., 0.)],
        ),
    );
    h.insert(
        vec![-1i64],
        CBlock::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(0., (-1.0 + p.alpha) / 2.0), c(0., (1.0 + p.alpha) / 2.0), c(0., 0.)],
        ),
    );
    s.set_hamiltonian(h);

    if p.eta > 0.0 {
        let amp = p.eta.sqrt();
        let mut fam = BTreeMap::new();
        fam.insert(vec![0i64], CVec::from_vec(vec![c(amp, 0.0), c(0.0, 0.0)]));
        fam.insert(
            vec![1i64],
            CVec::from_vec(vec![amp * Complex64::new(0.0, p.phi).exp(), c(0.0, 0.0)]),
        );
        s.add_lindblad_family(fam);
    }

    if p.zeta > 0.0 {
        let mut fam = BTreeMap::new();
        fam.insert((vec![0i64], vec![0i64]), sigma_y.scale(p.zeta.sqrt()));
        s.add_quadratic_family(fam);
    }
    s
}

/// Dissipative gap of the quasifree XY chain and the momentum realizing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XYChainGap {
    /// Δ = −max_k Re ξ₊(k).
    pub gap: f64,
    /// A momentum k ∈ (0, 2π] at which the maximum is attained.
    pub argmax_k: f64,
}

/// Dissipative gap of the quasifree XY chain, Δ = −max_k Re ξ₊(k), found on
/// a dense momentum grid and sharpened by golden-section refinement around
/// the grid maximum (Re ξ₊ can have cusps where the discriminant changes
/// sign, so derivative-free refinement is used).
pub fn xy_chain_gap(p: &XYChainParams) -> Result<XYChainGap> {
    if p.zeta != 0.0 {
        return Err(Error::QuadraticNotSupported);
    }
    let re_xi = |k: f64| p.xi(k).0.re;
    let n = 4096usize;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let k = 2.0 * PI * (i as f64 + 1.0) / n as f64;
        let v = re_xi(k);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let kc = 2.0 * PI * (best_i as f64 + 1.0) / n as f64;
    let mut a = kc - 2.0 * PI / n as f64;
    let mut b = kc + 2.0 * PI / n as f64;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = re_xi(x1);
    let mut f2 = re_xi(x2);
    for _ in 0..120 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = re_xi(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = re_xi(x1);
        }
    }
    let k_star = 0.5 * (a + b);
    Ok(XYChainGap { gap: -re_xi(k_star).max(best), argmax_k: k_star })
}

/// One closed-form covariance block of the quasifree XY chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XYChainGamma {
    /// Scalar value v with γ(r) = v · 1₂.
    pub value: f64,
    /// Decay base z_− = −(1 − |sin φ|)/cos φ (0 when `phase_singular`).
    pub z_minus: f64,
    /// True at cos φ = 0, where the formula degenerates to the limit
    /// γ(r) = sign(sin φ)·(1/4)·δ_{r,1}·1₂.
    pub phase_singular: bool,
}

/// Exact quasifree (ζ = 0) steady-state covariance of the XY chain,
/// γ(r) = (1/2)·sin φ/(1 + |sin φ|)·z_−^{r−1}·1₂ for r ≥ 1; γ(0) = 0 and
/// γ(−r) = −γ(r) by the antisymmetry of the covariance matrix.  The result
/// is independent of μ and α (and of η, which cancels), but η > 0 is
/// required for the steady state to be unique.
pub fn xy_chain_exact_gamma(r: i64, phi: f64, eta: f64) -> XYChainGamma {
    assert!(eta > 0.0, "the closed form assumes a unique steady state (eta > 0)");
    let (sin_phi, cos_phi) = phi.sin_cos();
    if cos_phi.abs() < 1e-12 {
        let value = if r.abs() == 1 {
            sin_phi.signum() * 0.25 * r.signum() as f64
        } else {
            0.0
        };
        return XYChainGamma { value, z_minus: 0.0, phase_singular: true };
    }
    let z_minus = -(1.0 - sin_phi.abs()) / cos_phi;
    let value = match r {
        0 => 0.0,
        _ => {
            let prefactor = 0.5 * sin_phi / (1.0 + sin_phi.abs());
            r.signum() as f64 * prefactor * z_minus.powi(r.abs() as i32 - 1)
        }
    };
    XYChainGamma { value, z_minus, phase_singular: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::max_abs;

    #[test]
    fn boson_bath_matrix_matches_closed_form_in_momentum_space() {
        // b~(k) = 2D [[eta+2, i(eta - c_k + s_k)], [-i(...), eta+2]]
        for dims in 1..=3usize {
            let p = CriticalBosonParams { dims, eta: 1.7 };
            let s = critical_boson_stencil(&p);
            let k: Vec<f64> = (0..dims).map(|a| 0.3 + 0.7 * a as f64).collect();
            let b = s.fourier_b(&k);
            let d = 2.0 * dims as f64;
            let off = d * (p.eta - p.c_k(&k) + p.s_k(&k));
            let want = CBlock::from_row_slice(
                2,
                2,
                &[
                    c(d * (p.eta + 2.0), 0.0),
                    c(0.0, off),
                    c(0.0, -off),
                    c(d * (p.eta + 2.0), 0.0),
                ],
            );
            assert!(max_abs(&(b - want)) < 1e-13, "D={dims}");
        }
    }

    #[test]
    fn boson_stencil_has_4d_plus_1_lindblad_families() {
        for dims in 1..=3usize {
            let s = critical_boson_stencil(&CriticalBosonParams { dims, eta: 1.0 });
            assert_eq!(s.lindblad_families().len(), 4 * dims + 1);
            assert!(s.is_quasifree());
            assert!(s.hamiltonian().is_empty());
        }
    }

    #[test]
    fn boson_gamma_momentum_is_diagonal_at_k_pi() {
        // s_k = 0 at k = (pi, ..., pi), so gamma~ must be diagonal there.
        let p = CriticalBosonParams { dims: 2, eta: 1.5 };
        let g = p.gamma_momentum(&[PI, PI]);
        assert!(g[(0, 1)].norm() < 1e-15 && g[(1, 0)].norm() < 1e-15);
        assert!((g[(0, 0)].re - (p.eta + 2.0) / (2.0 * (p.eta + 1.0))).abs() < 1e-15);
    }

    #[test]
    fn boson_exact_1d_matches_direct_substitution() {
        // eta = 2, r = 0: gamma_{++} = 4/(2 sqrt(3)) = 2/sqrt(3)
        let g = critical_boson_exact_1d(0, 2.0).unwrap();
        assert!((g.diagonal - 2.0 / 3.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.off_diagonal, 0.0);
        // successive ratios are z_-
        let (zm, _) = CriticalBosonParams { dims: 1, eta: 2.0 }.z_poles();
        let g1 = critical_boson_exact_1d(1, 2.0).unwrap();
        let g2 = critical_boson_exact_1d(2, 2.0).unwrap();
        assert!((g2.diagonal / g1.diagonal - zm).abs() < 1e-14);
        assert!((g2.off_diagonal / g1.off_diagonal - zm).abs() < 1e-14);
    }

    #[test]
    fn boson_exact_1d_off_diagonal_approaches_minus_half_at_gap_closure() {
        for r in [1i64, 3, 7] {
            let g = critical_boson_exact_1d(r, 1.0 + 1e-12).unwrap();
            assert!(
                (g.off_diagonal - CRITICAL_BOSON_OFFDIAG_GAPLESS_LIMIT).abs() < 1e-5,
                "r={r}: {}",
                g.off_diagonal
            );
        }
        assert!(matches!(
            critical_boson_exact_1d(2, 1.0),
            Err(Error::GaplessInput { .. })
        ));
    }

    #[test]
    fn boson_log_constant_recomputes_to_published_value() {
        assert!((critical_boson_log_constant() + 0.5159).abs() < 1e-4);
    }

    #[test]
    fn boson_asymptotics_d2_off_diagonal_vanishes_on_nodal_direction() {
        let p = CriticalBosonParams { dims: 2, eta: 1.0 };
        // phi_r = -pi/4 makes sin(phi_r + pi/4) = 0.
        let g = critical_boson_asymptotics(&p, 25.0, &[1.0, -1.0], None).unwrap();
        assert!(g.off_diagonal.abs() < 1e-15);
        assert!(g.diagonal.is_none());
    }

    #[test]
    fn boson_asymptotics_d3_diagonal_tends_to_coulomb_tail() {
        let p = CriticalBosonParams { dims: 3, eta: 1.0 };
        let r = 5.0e3;
        let g = critical_boson_asymptotics(&p, r, &[1.0, 0.0, 0.0], None).unwrap();
        let tail = 9.0 / (4.0 * PI * r);
        assert!((g.diagonal.unwrap() / tail - 1.0).abs() < 1e-3);
    }

    #[test]
    fn boson_asymptotics_rejects_unsupported_dimension() {
        let p = CriticalBosonParams { dims: 1, eta: 1.0 };
        assert!(matches!(
            critical_boson_asymptotics(&p, 5.0, &[1.0], None),
            Err(Error::UnsupportedDimension { dims: 1 })
        ));
    }

    #[test]
    fn xy_fourier_h_matches_closed_form() {
        let p = XYChainParams { mu: 0.7, alpha: 0.3, ..Default::default() };
        let s = xy_chain_stencil(&p);
        for k in [0.1f64, 1.2, 2.9, 5.5] {
            let h = s.fourier_h(&[k]);
            // h~(k) = (cos k - mu/2) sigma_y - alpha sin k sigma_x
            let sy = k.cos() - p.mu / 2.0;
            let sx = -p.alpha * k.sin();
            let want =
                CBlock::from_row_slice(2, 2, &[c(0., 0.), c(sx, -sy), c(sx, sy), c(0., 0.)]);
            assert!(max_abs(&(h - want)) < 1e-14, "k={k}");
        }
    }

    #[test]
    fn xy_gap_reproduces_eta_one_minus_cos_phi() {
        // Delta = eta (1 - cos phi) for phi in [-pi/2, pi/2] at mu=0, alpha=1/2.
        for i in 0..20 {
            let phi = -PI / 2.0 + PI * i as f64 / 19.0;
            let p = XYChainParams { mu: 0.0, alpha: 0.5, eta: 1.0, phi, zeta: 0.0 };
            let g = xy_chain_gap(&p).unwrap();
            assert!((g.gap - (1.0 - phi.cos())).abs() < 1e-9, "phi={phi}: {}", g.gap);
        }
        // ... and eta (1 + cos phi) on the complementary arc.
        let p = XYChainParams { mu: 0.0, alpha: 0.5, eta: 1.3, phi: 2.5, zeta: 0.0 };
        let g = xy_chain_gap(&p).unwrap();
        assert!((g.gap - 1.3 * (1.0 + 2.5f64.cos())).abs() < 1e-9);
    }

    #[test]
    fn xy_gap_closes_at_phi_zero_and_without_dissipation() {
        let p = XYChainParams { mu: 0.0, alpha: 0.5, eta: 1.0, phi: 0.0, zeta: 0.0 };
        assert!(xy_chain_gap(&p).unwrap().gap.abs() < 1e-12);
        let p = XYChainParams { mu: 0.3, alpha: 0.5, eta: 0.0, phi: 1.0, zeta: 0.0 };
        assert!(xy_chain_gap(&p).unwrap().gap.abs() < 1e-12);
    }

    #[test]
    fn xy_gap_requires_quasifree_model() {
        let p = XYChainParams { zeta: 0.25, ..Default::default() };
        assert!(matches!(xy_chain_gap(&p), Err(Error::QuadraticNotSupported)));
    }

    #[test]
    fn xy_exact_gamma_matches_published_decay_base() {
        let phi = 2.0 * PI / 5.0;
        let g = xy_chain_exact_gamma(1, phi, 1.0);
        assert!((g.z_minus - (-0.1584)).abs() < 5e-5, "z_- = {}", g.z_minus);
        assert!(!g.phase_singular);
        let pref = 0.5 * phi.sin() / (1.0 + phi.sin());
        assert!((g.value - pref).abs() < 1e-15);
        // gamma(r)/gamma(r-1) = z_-
        let g4 = xy_chain_exact_gamma(4, phi, 1.0);
        let g3 = xy_chain_exact_gamma(3, phi, 1.0);
        assert!((g4.value / g3.value - g.z_minus).abs() < 1e-12);
    }

    #[test]
    fn xy_exact_gamma_is_odd_and_vanishes_at_origin() {
        let phi = 1.1;
        assert_eq!(xy_chain_exact_gamma(0, phi, 1.0).value, 0.0);
        let gp = xy_chain_exact_gamma(3, phi, 1.0);
        let gm = xy_chain_exact_gamma(-3, phi, 1.0);
        assert!((gp.value + gm.value).abs() < 1e-15);
    }

    #[test]
    fn xy_exact_gamma_handles_singular_phase_and_zero_phase() {
        let g = xy_chain_exact_gamma(1, PI / 2.0, 1.0);
        assert!(g.phase_singular);
        assert!((g.value - 0.25).abs() < 1e-15);
        assert_eq!(xy_chain_exact_gamma(2, PI / 2.0, 1.0).value, 0.0);
        // phi = 0: gamma vanishes identically (gapless but not critical).
        assert_eq!(xy_chain_exact_gamma(5, 0.0, 1.0).value, 0.0);
    }

    #[test]
    fn xy_gamma_momentum_is_independent_of_mu_and_alpha() {
        let base = XYChainParams { mu: 0.0, alpha: 0.0, eta: 1.0, phi: 1.3, zeta: 0.0 };
        let other = XYChainParams { mu: 1.0, alpha: 0.5, ..base };
        for k in [0.4f64, 1.9, 4.4] {
            assert!(max_abs(&(base.gamma_momentum(k) - other.gamma_momentum(k))) < 1e-15);
        }
    }

    #[test]
    fn xy_stencil_with_dephasing_is_quadratic_and_valid() {
        let p = XYChainParams { zeta: 0.25, ..Default::default() };
        let s = xy_chain_stencil(&p);
        assert!(!s.is_quasifree());
        assert!(s.validate().pass());
        assert_eq!(s.quadratic_families().len(), 1);
    }
}
