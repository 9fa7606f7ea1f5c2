//! Asymptotic spatial decay of steady-state correlations.
//!
//! In one dimension the steady-state equation reduces, beyond the
//! inhomogeneous region, to the matrix difference equation
//! Σ_n C_n γ⃗(r−d+n) = 0 with C_n = x(d−n)⊗1 + 1⊗x(n−d) acting on the
//! row-major vectorization γ⃗ of γ(r).  Its decay modes β (|β| ≤ 1) are
//! obtained either from the companion-block transfer matrix (when C_R is
//! invertible) or as reciprocals of the roots of det L(z) = Σ_n z^{R−n}C_n
//! with |z| ≥ 1 (the matrix-pencil route).
//!
//! For quasifree models the momentum-space covariance γ̃(k) continues to a
//! rational function γ̃(z) of z = e^{ik}; its poles ζ inside the unit disc
//! bound the correlation length via ξ₁ ≤ −1/ln|ζ|.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{build_stencil_evolution, RBlock, StencilEvolution};
use crate::linalg::{min_singular_vector, polynomial_roots, CMat};
use crate::stencil::CouplingStencil;

/// Tolerance band around the unit circle for mode classification.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// The blocks C_0 … C_R of the 1D matrix difference equation, with
/// R = 2d and d the range of the x stencil.
#[derive(Clone, Debug)]
pub struct DifferenceStencil {
    pub bands: usize,
    /// Interaction range d of the x stencil.
    pub d: i64,
    /// C_n for n = 0..=R, each 4b²×4b².
    pub c: Vec<RBlock>,
}

impl DifferenceStencil {
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    /// Residual of the difference equation Σ_n C_n γ⃗(r−d+n) applied to a
    /// windowed sequence of row-major vectorized covariance blocks
    /// `gamma_vec[i] = γ⃗(r0 + i)`; returns the max-norm residual over all
    /// positions where the full stencil fits.
    pub fn residual(&self, gamma_vec: &[nalgebra::DVector<f64>]) -> f64 {
        let r_len = self.c.len();
        let mut worst = 0.0f64;
        for start in 0..gamma_vec.len().saturating_sub(r_len - 1) {
            let mut acc = nalgebra::DVector::zeros(self.c[0].nrows());
            for (n, cn) in self.c.iter().enumerate() {
                acc += cn * &gamma_vec[start + n];
            }
            worst = worst.max(acc.amax());
        }
        worst
    }
}

/// Row-major vectorization of a real block.
pub fn vec_row(blk: &RBlock) -> nalgebra::DVector<f64> {
    let nb = blk.nrows();
    nalgebra::DVector::from_fn(nb * nb, |i, _| blk[(i / nb, i % nb)])
}

/// Build the difference stencil of a one-dimensional stencil.
pub fn build_difference_stencil(stencil: &CouplingStencil) -> Result<DifferenceStencil> {
    if stencil.lattice.dims != 1 {
        return Err(Error::NotOneDimensional { dims: stencil.lattice.dims });
    }
    let ev = build_stencil_evolution(stencil)?;
    difference_stencil_from_evolution(&ev)
}

fn difference_stencil_from_evolution(ev: &StencilEvolution) -> Result<DifferenceStencil> {
    let nb = 2 * ev.bands;
    let d = ev.x.keys().map(|r| r[0].abs()).max().unwrap_or(0);
    let eye = RBlock::identity(nb, nb);
    let zero = RBlock::zeros(nb, nb);
    let x_at = |u: i64| ev.x.get(&vec![u]).unwrap_or(&zero).clone();
    let r_len = 2 * d + 1;
    let mut c = Vec::with_capacity(r_len as usize);
    for n in 0..r_len {
        let cn = x_at(d - n).kronecker(&eye) + eye.kronecker(&x_at(n - d));
        c.push(cn);
    }
    Ok(DifferenceStencil { bands: ev.bands, d, c })
}

/// Companion-block transfer matrix of a difference stencil together with
/// its eigenvalues and the physical decay modes (|β| ≤ 1 + 1e-9).
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub matrix: RBlock,
    pub eigenvalues: Vec<Complex64>,
    pub modes: Vec<Complex64>,
}

/// Build the transfer matrix T with top block row [A_{R−1}, …, A_0],
/// A_m = −C_R⁻¹C_m, advancing (γ⃗(r+R−1), …, γ⃗(r)) by one site.
pub fn transfer_matrix(ds: &DifferenceStencil) -> Result<TransferMatrix> {
    let big_r = ds.order();
    let m = ds.c[0].nrows();
    if big_r == 0 {
        return Ok(TransferMatrix {
            matrix: RBlock::zeros(0, 0),
            eigenvalues: Vec::new(),
            modes: Vec::new(),
        });
    }
    let svd = ds.c[big_r].clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = smax / smin.max(1e-300);
    if !(cond < 1e12) {
        return Err(Error::SingularLeadingBlock { cond });
    }
    let lu = ds.c[big_r].clone().lu();
    let mut t = RBlock::zeros(m * big_r, m * big_r);
    for n in 0..big_r {
        let a = -lu.solve(&ds.c[n]).ok_or(Error::NonFiniteSolve)?;
        t.view_mut((0, m * (big_r - 1 - n)), (m, m)).copy_from(&a);
    }
    for blk in 1..big_r {
        t.view_mut((m * blk, m * (blk - 1)), (m, m))
            .copy_from(&RBlock::identity(m, m));
    }
    let eigenvalues = crate::linalg::eigenvalues(&crate::linalg::complexify(&t))?;
    let modes = cluster_modes(
        eigenvalues
            .iter()
            .copied()
            .filter(|b| b.norm() <= 1.0 + UNIT_CIRCLE_TOL),
    );
    Ok(TransferMatrix { matrix: t, eigenvalues, modes })
}

/// Roots of the matrix pencil determinant det L(z) = det Σ_n z^{R−n}C_n
/// together with the implied decay modes β = 1/z for |z| ≥ 1 − 1e-9.
#[derive(Clone, Debug)]
pub struct PencilRoots {
    pub roots: Vec<Complex64>,
    pub modes: Vec<Complex64>,
}

/// Root-find det L(z) by sampling on the unit circle, inverse-DFT
/// interpolation of the determinant polynomial, and companion-matrix roots.
pub fn pencil_poles(ds: &DifferenceStencil) -> Result<PencilRoots> {
    let big_r = ds.order();
    let m = ds.c[0].nrows();
    let deg = m * big_r; // degree bound of det L
    if big_r == 0 {
        // L(z) = C_0 is constant: regular iff det C_0 ≠ 0, with no roots.
        let det = crate::linalg::complexify(&ds.c[0]).determinant();
        if det.norm() < 1e-250 {
            return Err(Error::IrregularPencil);
        }
        return Ok(PencilRoots { roots: Vec::new(), modes: Vec::new() });
    }

    let eval_det = |z: Complex64| -> Complex64 {
        let mut l = CMat::zeros(m, m);
        for (n, cn) in ds.c.iter().enumerate() {
            let w = z.powu((big_r - n) as u32);
            l.zip_apply(cn, |o, c| *o += w * c);
        }
        l.determinant()
    };

    // Regularity probe at deg+1 deterministic quasi-random points.
    let golden = 0.618_033_988_749_894_9_f64;
    let mut regular = false;
    for j in 0..=deg {
        let ang = 2.0 * std::f64::consts::PI * ((j as f64 * golden).fract());
        let rad = 0.7 + 0.6 * ((j as f64 * std::f64::consts::SQRT_2).fract());
        if eval_det(Complex64::from_polar(rad, ang)).norm() > 1e-250 {
            regular = true;
            break;
        }
    }
    if !regular {
        return Err(Error::IrregularPencil);
    }

    // Interpolate det L on 2·deg+1 roots of unity.
    let nodes = 2 * deg + 1;
    let samples: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            eval_det(Complex64::from_polar(1.0, ang))
        })
        .collect();
    let mut coeffs = Vec::with_capacity(deg + 1);
    for mm in 0..=deg {
        let mut a = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (j * mm) as f64 / nodes as f64;
            a += s * Complex64::from_polar(1.0, ang);
        }
        coeffs.push(a / nodes as f64);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale < 1e-250 {
        return Err(Error::IrregularPencil);
    }

    let roots = polynomial_roots(&coeffs);
    let modes = cluster_modes(
        roots
            .iter()
            .filter(|z| z.norm() >= 1.0 - UNIT_CIRCLE_TOL)
            .map(|z| 1.0 / z),
    );
    Ok(PencilRoots { roots, modes })
}

/// Distinct decay modes: eigenvalues within 1e-3 of each other are merged
/// into their mean.  This absorbs both genuine degeneracies (the vectorized
/// recurrence repeats each covariance mode) and the ε^{1/m} splitting that an
/// m-fold root suffers under root finding; the splitting is symmetric, so the
/// cluster mean recovers the root to near machine precision.
fn cluster_modes(modes: impl IntoIterator<Item = Complex64>) -> Vec<Complex64> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for m in modes {
        if let Some((mean, count)) = clusters
            .iter_mut()
            .find(|(mean, _)| (*mean - m).norm() < 1e-3)
        {
            let n = *count as f64;
            *mean = (*mean * n + m) / (n + 1.0);
            *count += 1;
        } else {
            clusters.push((m, 1));
        }
    }
    clusters.into_iter().map(|(mean, _)| mean).collect()
}

/// Interior poles of the analytically continued momentum-space covariance
/// γ̃(z) along one axis, and the correlation-length bound ξ = −1/ln|ζ_max|.
#[derive(Clone, Debug)]
pub struct MomentumPoles {
    pub poles: Vec<Complex64>,
    pub xi: f64,
}

/// Options for [`momentum_poles`].
#[derive(Clone, Debug)]
pub struct PoleOptions {
    /// Sampling circles |z| = ρ.
    pub radii: Vec<f64>,
    /// Angles per circle.
    pub angles: usize,
    /// Transverse-momentum grid points per extra dimension (D ≥ 2).
    pub transverse: usize,
}

impl Default for PoleOptions {
    fn default() -> Self {
        PoleOptions { radii: vec![0.90, 0.95, 0.99], angles: 64, transverse: 256 }
    }
}

/// Locate the poles of γ̃(z) inside the unit disc by rational least-squares
/// fitting of samples on circles |z| < 1.  For D ≥ 2 the transverse momenta
/// are scanned on a grid and the worst (largest-|ζ|) direction is reported,
/// maximizing the correlation-length bound.
pub fn momentum_poles(
    stencil: &CouplingStencil,
    axis: usize,
    opts: &PoleOptions,
) -> Result<MomentumPoles> {
    if !stencil.is_quasifree() {
        return Err(Error::QuadraticNotSupported);
    }
    let ev = build_stencil_evolution(stencil)?;
    let dims = stencil.lattice.dims;
    assert!(axis < dims, "axis out of range");

    let mut best: Option<MomentumPoles> = None;
    let transverse_axes: Vec<usize> = (0..dims).filter(|&a| a != axis).collect();
    let n_perp = if transverse_axes.is_empty() {
        1
    } else {
        opts.transverse.pow(transverse_axes.len() as u32)
    };
    let mut kperp = vec![0.0f64; transverse_axes.len()];
    for flat in 0..n_perp {
        let mut rem = flat;
        for slot in (0..transverse_axes.len()).rev() {
            let i = rem % opts.transverse;
            rem /= opts.transverse;
            kperp[slot] = 2.0 * std::f64::consts::PI * (i as f64 + 1.0) / opts.transverse as f64;
        }
        let found = poles_at_transverse(&ev, axis, &transverse_axes, &kperp, opts)?;
        let better = match &best {
            None => true,
            Some(b) => found.xi > b.xi,
        };
        if better {
            best = Some(found);
        }
    }
    Ok(best.expect("at least one transverse point"))
}

fn poles_at_transverse(
    ev: &StencilEvolution,
    axis: usize,
    transverse_axes: &[usize],
    kperp: &[f64],
    opts: &PoleOptions,
) -> Result<MomentumPoles> {
    let nb = 2 * ev.bands;
    let n2 = nb * nb;
    let d = ev.x.keys().map(|r| r[axis].abs()).max().unwrap_or(0).max(1);

    // γ̃(z) at complex z (continuation of z = e^{ik_axis}).
    let gamma_at = |z: Complex64| -> Option<CMat> {
        let mut a = CMat::zeros(nb, nb);
        let mut bt = CMat::zeros(nb, nb); // Σ x(r) z^{+r} e^{+ik⊥·r⊥}
        let mut y = CMat::zeros(nb, nb);
        let zinv = 1.0 / z;
        let phase_perp = |r: &Vec<i64>, sign: f64| -> Complex64 {
            let mut arg = 0.0;
            for (slot, &ax) in transverse_axes.iter().enumerate() {
                arg += sign * kperp[slot] * r[ax] as f64;
            }
            Complex64::from_polar(1.0, arg)
        };
        for (r, blk) in &ev.x {
            let wa = zinv.powi(r[axis] as i32) * phase_perp(r, -1.0);
            let wb = z.powi(r[axis] as i32) * phase_perp(r, 1.0);
            a.zip_apply(blk, |o, c| *o += wa * c);
            bt.zip_apply(blk, |o, c| *o += wb * c);
        }
        for (r, blk) in &ev.y {
            let w = zinv.powi(r[axis] as i32) * phase_perp(r, -1.0);
            y.zip_apply(blk, |o, c| *o += w * c);
        }
        let b = bt.transpose();
        let eye = CMat::identity(nb, nb);
        let m = eye.kronecker(&a) + b.transpose().kronecker(&eye);
        let rhs = nalgebra::DVector::from_column_slice((-&y).as_slice());
        let sol = m.lu().solve(&rhs)?;
        Some(CMat::from_column_slice(nb, nb, sol.as_slice()))
    };

    // Sample on the circles.
    let mut zs = Vec::new();
    let mut fs: Vec<CMat> = Vec::new();
    for &rho in &opts.radii {
        for j in 0..opts.angles {
            let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / opts.angles as f64;
            let z = Complex64::from_polar(rho, ang);
            if let Some(g) = gamma_at(z) {
                zs.push(z);
                fs.push(g);
            }
        }
    }
    if zs.len() < 8 {
        return Err(Error::NonFiniteSolve);
    }

    let order = (4 * n2 * d as usize).min((zs.len() - 2) / 2).min(24).max(4);
    let scale = fs
        .iter()
        .flat_map(|g| g.iter())
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);

    let mut poles: Vec<Complex64> = Vec::new();
    for p in 0..nb {
        for q in 0..nb {
            // Homogeneous fit P(z) − f(z)·Q(z) ≈ 0.
            let rows = zs.len();
            let mut mfit = CMat::zeros(rows, 2 * (order + 1));
            for (i, &z) in zs.iter().enumerate() {
                let f = fs[i][(p, q)];
                let mut zp = Complex64::new(1.0, 0.0);
                for j in 0..=order {
                    mfit[(i, j)] = zp;
                    mfit[(i, order + 1 + j)] = -f * zp;
                    zp *= z;
                }
            }
            let (v, _smin) = min_singular_vector(&mfit);
            let pcoef: Vec<Complex64> = (0..=order).map(|j| v[j]).collect();
            let qcoef: Vec<Complex64> = (0..=order).map(|j| v[order + 1 + j]).collect();
            let candidates = polynomial_roots(&qcoef);
            for zeta in candidates {
                if !zeta.is_finite() || zeta.norm() > 1.0 + 1e-6 {
                    continue;
                }
                // Residue-based Froissart filter: spurious pole-zero pairs
                // carry negligible residue.
                let pval = horner(&pcoef, zeta);
                let qprime = horner_derivative(&qcoef, zeta);
                if qprime.norm() < 1e-300 {
                    continue;
                }
                let residue = pval / qprime;
                if residue.norm() <= 1e-10 * scale {
                    continue;
                }
                if (zeta.norm() - 1.0).abs() < 1e-6 {
                    return Err(Error::PoleOnUnitCircle { modulus: zeta.norm() });
                }
                if zeta.norm() < 1.0 - UNIT_CIRCLE_TOL
                    && !poles.iter().any(|z| (z - zeta).norm() < 1e-6)
                {
                    poles.push(zeta);
                }
            }
        }
    }
    let xi = poles
        .iter()
        .map(|z| -1.0 / z.norm().ln())
        .fold(0.0f64, f64::max);
    Ok(MomentumPoles { poles, xi })
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * j as f64;
    }
    acc
}

/// Exponential-decay fit |value(r)| ≈ prefactor · rate^r.
#[derive(Clone, Debug)]
pub struct DecayFit {
    /// Modulus of the fitted decay mode, e^{slope}.
    pub rate: f64,
    pub prefactor: f64,
    /// Root-mean-square residual of the fit in log space.
    pub rms: f64,
    /// True when the fit used the envelope peaks of oscillatory data.
    pub envelope: bool,
}

/// Least-squares fit of log|value| against r, skipping samples below the
/// burn-in and below the 1e-14 noise floor.  Non-monotone data is fitted on
/// the peaks of its |value| envelope.
pub fn fit_exponential_decay(samples: &[(f64, f64)], burn_in: f64) -> Result<DecayFit> {
    let mut usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(r, v)| *r >= burn_in && v.abs() > 1e-14)
        .map(|&(r, v)| (r, v.abs()))
        .collect();
    usable.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if usable.len() < 6 {
        return Err(Error::InsufficientData { needed: 6, got: usable.len() });
    }

    let monotone = usable.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9));
    let (points, envelope) = if monotone {
        (usable.clone(), false)
    } else {
        let mut peaks = Vec::new();
        for i in 1..usable.len() - 1 {
            if usable[i].1 >= usable[i - 1].1 && usable[i].1 >= usable[i + 1].1 {
                peaks.push(usable[i]);
            }
        }
        if peaks.len() >= 4 {
            (peaks, true)
        } else {
            (usable.clone(), false)
        }
    };

    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(r, _)| r).sum();
    let sy: f64 = points.iter().map(|(_, v)| v.ln()).sum();
    let sxx: f64 = points.iter().map(|(r, _)| r * r).sum();
    let sxy: f64 = points.iter().map(|(r, v)| r * v.ln()).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData { needed: 6, got: points.len() });
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (points
        .iter()
        .map(|(r, v)| {
            let res = v.ln() - slope * r - intercept;
            res * res
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit { rate: slope.exp(), prefactor: intercept.exp(), rms, envelope })
}
