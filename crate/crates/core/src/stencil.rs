//! Translation-invariant model definitions.
//!
//! A quadratic Lindbladian lattice model lives on a D-dimensional lattice
//! with b orbitals per cell and is written in the Majorana basis
//! ŵ_{n,c,±} (cell n, orbital c, quadrature ±).  Within a cell the 2b
//! Majorana indices are ordered orbital-major: (c=0,+), (c=0,−), (c=1,+), …
//!
//! The model data are finite-range stencils:
//! * `h`: Hamiltonian blocks h(r), a complex 2b×2b matrix per displacement r,
//!   such that Ĥ = Σ_{n,r} ŵ_n† h(r) ŵ_{n−r} (schematically);
//! * `ell`: one map r ↦ complex 2b-vector ℓ_s(r) per linear Lindblad family s,
//!   L̂_{n,s} = Σ_r ℓ_s(r)·ŵ_{n+r};
//! * `m`: one map (r, r′) ↦ complex 2b×2b block per Hermitian quadratic
//!   Lindblad family u, M̂_{n,u} = Σ_{r,r′} ŵ_{n+r} m_u(r,r′) ŵ_{n+r′}.
//!
//! The statistics fixes the symmetry class: fermionic h and m_u are
//! antisymmetric under (r, transpose) ↦ (−r, ·) while bosonic ones are
//! symmetric, and both are Hermitian in the same sense.  Raw input that
//! mixes conventions (e.g. one-sided hopping terms) can be canonicalized
//! with the `*_raw` setters, which project onto the symmetry class; the
//! projection only changes the operator by an additive constant.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integer lattice displacement.
pub type Displacement = Vec<i64>;
/// Complex 2b×2b coupling block.
pub type CBlock = DMatrix<Complex64>;
/// Complex 2b-component Lindblad coefficient vector.
pub type CVec = DVector<Complex64>;

/// Particle statistics of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Fermion,
    Boson,
}

impl Statistics {
    /// Sign of the transpose symmetry: h(r) = sign · h^T(−r).
    pub fn transpose_sign(self) -> f64 {
        match self {
            Statistics::Fermion => -1.0,
            Statistics::Boson => 1.0,
        }
    }
}

/// Lattice extent: finite with periodic wrapping, or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extent {
    Finite(Vec<usize>),
    Infinite,
}

/// Lattice geometry: dimension, orbitals per cell, extent.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    pub dims: usize,
    pub bands: usize,
    pub extent: Extent,
}

impl LatticeSpec {
    pub fn finite(shape: &[usize], bands: usize) -> Self {
        assert!(!shape.is_empty() && bands >= 1, "lattice must have D >= 1 and b >= 1");
        assert!(shape.iter().all(|&l| l >= 1), "lattice extents must be positive");
        LatticeSpec { dims: shape.len(), bands, extent: Extent::Finite(shape.to_vec()) }
    }

    pub fn infinite(dims: usize, bands: usize) -> Self {
        assert!(dims >= 1 && bands >= 1, "lattice must have D >= 1 and b >= 1");
        LatticeSpec { dims, bands, extent: Extent::Infinite }
    }

    /// Finite shape, or an error for infinite lattices.
    pub fn shape(&self) -> Result<&[usize]> {
        match &self.extent {
            Extent::Finite(s) => Ok(s),
            Extent::Infinite => Err(Error::InfiniteLattice),
        }
    }

    /// Number of cells of a finite lattice.
    pub fn cells(&self) -> Result<usize> {
        Ok(self.shape()?.iter().product())
    }

    /// Number of modes N = b · ∏ L_a of a finite lattice.
    pub fn modes(&self) -> Result<usize> {
        Ok(self.bands * self.cells()?)
    }
}

/// One symmetry check of a validation report.
#[derive(Clone, Debug)]
pub struct SymmetryCheck {
    pub rule: String,
    pub location: String,
    pub violation: f64,
}

/// Result of checking a stencil against its symmetry class.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<SymmetryCheck>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.violation <= self.tolerance)
    }

    pub fn max_violation(&self) -> f64 {
        self.checks.iter().map(|c| c.violation).fold(0.0, f64::max)
    }

    /// Checks that exceed the tolerance.
    pub fn failures(&self) -> Vec<&SymmetryCheck> {
        self.checks.iter().filter(|c| c.violation > self.tolerance).collect()
    }
}

/// Absolute tolerance for stencil symmetry checks (inputs are analytic
/// coefficients, not measured data).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Translation-invariant coupling data of a quadratic Lindbladian model.
#[derive(Clone, Debug)]
pub struct CouplingStencil {
    pub statistics: Statistics,
    pub lattice: LatticeSpec,
    h: BTreeMap<Displacement, CBlock>,
    ell: Vec<BTreeMap<Displacement, CVec>>,
    m: Vec<BTreeMap<(Displacement, Displacement), CBlock>>,
}

impl CouplingStencil {
    pub fn new(statistics: Statistics, lattice: LatticeSpec) -> Self {
        CouplingStencil { statistics, lattice, h: BTreeMap::new(), ell: Vec::new(), m: Vec::new() }
    }

    fn assert_block(&self, blk: &CBlock) {
        let n = 2 * self.lattice.bands;
        assert_eq!((blk.nrows(), blk.ncols()), (n, n), "coupling block must be 2b x 2b");
    }

    fn assert_disp(&self, r: &[i64]) {
        assert_eq!(r.len(), self.lattice.dims, "displacement must have D components");
    }

    /// Set the Hamiltonian stencil as given (expected already in the
    /// symmetry class; `validate` reports any violation).
    pub fn set_hamiltonian(&mut self, h: BTreeMap<Displacement, CBlock>) {
        for (r, blk) in &h {
            self.assert_disp(r);
            self.assert_block(blk);
        }
        self.h = prune(h);
    }

    /// Set the Hamiltonian from raw coefficients of Ĥ = Σ ŵ h ŵ, projecting
    /// onto the symmetry class of the statistics.  The discarded component
    /// only contributes an additive constant to Ĥ.
    pub fn set_hamiltonian_raw(&mut self, raw: BTreeMap<Displacement, CBlock>) {
        for (r, blk) in &raw {
            self.assert_disp(r);
            self.assert_block(blk);
        }
        self.h = canonicalize_blocks(self.statistics, &raw);
    }

    /// Append one linear Lindblad family ℓ_s.
    pub fn add_lindblad_family(&mut self, family: BTreeMap<Displacement, CVec>) {
        for (r, v) in &family {
            self.assert_disp(r);
            assert_eq!(v.len(), 2 * self.lattice.bands, "Lindblad vector must have 2b entries");
        }
        self.ell.push(family);
    }

    /// Append one quadratic Lindblad family m_u, stored as given.
    pub fn add_quadratic_family(&mut self, family: BTreeMap<(Displacement, Displacement), CBlock>) {
        for ((r, rp), blk) in &family {
            self.assert_disp(r);
            self.assert_disp(rp);
            self.assert_block(blk);
        }
        self.m.push(family);
    }

    /// Append one quadratic Lindblad family from raw coefficients,
    /// projecting onto the symmetry class.
    pub fn add_quadratic_family_raw(
        &mut self,
        family: BTreeMap<(Displacement, Displacement), CBlock>,
    ) {
        for ((r, rp), blk) in &family {
            self.assert_disp(r);
            self.assert_disp(rp);
            self.assert_block(blk);
        }
        self.m.push(canonicalize_pair_blocks(self.statistics, &family));
    }

    pub fn hamiltonian(&self) -> &BTreeMap<Displacement, CBlock> {
        &self.h
    }

    pub fn lindblad_families(&self) -> &[BTreeMap<Displacement, CVec>] {
        &self.ell
    }

    pub fn quadratic_families(&self) -> &[BTreeMap<(Displacement, Displacement), CBlock>] {
        &self.m
    }

    /// A model is quasifree when it has no quadratic Lindblad terms.
    pub fn is_quasifree(&self) -> bool {
        self.m.iter().all(|f| f.is_empty())
    }

    /// Interaction range d: maximum displacement component magnitude with a
    /// nonzero coupling.
    pub fn range(&self) -> i64 {
        let mut d = 0i64;
        let mut upd = |r: &Displacement| {
            for &c in r {
                d = d.max(c.abs());
            }
        };
        for r in self.h.keys() {
            upd(r);
        }
        for fam in &self.ell {
            for r in fam.keys() {
                upd(r);
            }
        }
        for fam in &self.m {
            for (r, rp) in fam.keys() {
                upd(r);
                upd(rp);
            }
        }
        d
    }

    /// Check the stored stencils against the symmetry class of the
    /// statistics.  Report-only; never fails.
    pub fn validate(&self) -> ValidationReport {
        let sign = self.statistics.transpose_sign();
        let mut checks = Vec::new();
        let zero = CBlock::zeros(2 * self.lattice.bands, 2 * self.lattice.bands);

        let mut keys: BTreeSet<Displacement> = BTreeSet::new();
        for r in self.h.keys() {
            keys.insert(r.clone());
            keys.insert(neg(r));
        }
        for r in &keys {
            let hr = self.h.get(r).unwrap_or(&zero);
            let hm = self.h.get(&neg(r)).unwrap_or(&zero);
            checks.push(SymmetryCheck {
                rule: "h(r) = h^+(-r)".into(),
                location: format!("r={r:?}"),
                violation: max_abs(&(hr - hm.adjoint())),
            });
            checks.push(SymmetryCheck {
                rule: match self.statistics {
                    Statistics::Fermion => "h(r) = -h^T(-r)".into(),
                    Statistics::Boson => "h(r) = h^T(-r)".into(),
                },
                location: format!("r={r:?}"),
                violation: max_abs(&(hr - hm.transpose().scale(sign))),
            });
        }

        for (u, fam) in self.m.iter().enumerate() {
            let mut pairs: BTreeSet<(Displacement, Displacement)> = BTreeSet::new();
            for (r, rp) in fam.keys() {
                pairs.insert((r.clone(), rp.clone()));
                pairs.insert((rp.clone(), r.clone()));
            }
            for (r, rp) in &pairs {
                let a = fam.get(&(r.clone(), rp.clone())).unwrap_or(&zero);
                let b = fam.get(&(rp.clone(), r.clone())).unwrap_or(&zero);
                checks.push(SymmetryCheck {
                    rule: format!("m_{u}(r,r') = m_{u}^+(r',r)"),
                    location: format!("r={r:?}, r'={rp:?}"),
                    violation: max_abs(&(a - b.adjoint())),
                });
                checks.push(SymmetryCheck {
                    rule: match self.statistics {
                        Statistics::Fermion => format!("m_{u}(r,r') = -m_{u}^T(r',r)"),
                        Statistics::Boson => format!("m_{u}(r,r') = m_{u}^T(r',r)"),
                    },
                    location: format!("r={r:?}, r'={rp:?}"),
                    violation: max_abs(&(a - b.transpose().scale(sign))),
                });
            }
        }

        ValidationReport { tolerance: SYMMETRY_TOL, checks }
    }

    /// Fourier transform of the Hamiltonian stencil, h̃(k) = Σ_r e^{−ik·r} h(r).
    pub fn fourier_h(&self, k: &[f64]) -> CBlock {
        fourier_block_map(&self.h, k, 2 * self.lattice.bands)
    }

    /// Fourier transform of one Lindblad family, ℓ̃_s(k) = Σ_r e^{−ik·r} ℓ_s(r).
    pub fn fourier_ell(&self, s: usize, k: &[f64]) -> CVec {
        let mut out = CVec::zeros(2 * self.lattice.bands);
        for (r, v) in &self.ell[s] {
            let ph = phase(k, r);
            out.axpy(ph, v, Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Momentum-space bath matrix b̃(k) = Σ_s ℓ̃_s(k) ℓ̃_s†(k).
    pub fn fourier_b(&self, k: &[f64]) -> CBlock {
        let n = 2 * self.lattice.bands;
        let mut out = CBlock::zeros(n, n);
        for s in 0..self.ell.len() {
            let l = self.fourier_ell(s, k);
            out.gerc(Complex64::new(1.0, 0.0), &l, &l, Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Real-space bath stencil b(r) = Σ_{n,s} ℓ_s(r−n) ℓ_s†(−n); the support
    /// is contained in displacements of norm ≤ 2d.
    pub fn build_b_stencil(&self) -> BTreeMap<Displacement, CBlock> {
        let n = 2 * self.lattice.bands;
        let mut out: BTreeMap<Displacement, CBlock> = BTreeMap::new();
        for fam in &self.ell {
            for (ra, va) in fam {
                for (rb, vb) in fam {
                    let r: Displacement = ra.iter().zip(rb).map(|(a, b)| a - b).collect();
                    let blk = out.entry(r).or_insert_with(|| CBlock::zeros(n, n));
                    blk.gerc(Complex64::new(1.0, 0.0), va, vb, Complex64::new(1.0, 0.0));
                }
            }
        }
        prune(out)
    }
}

/// Report-only symmetry validation (free-function form).
pub fn validate_stencil(stencil: &CouplingStencil) -> ValidationReport {
    stencil.validate()
}

/// Real-space bath stencil of a model (free-function form).
pub fn build_b_stencil(stencil: &CouplingStencil) -> BTreeMap<Displacement, CBlock> {
    stencil.build_b_stencil()
}

/// e^{−i k·r}
pub(crate) fn phase(k: &[f64], r: &[i64]) -> Complex64 {
    let dot: f64 = k.iter().zip(r).map(|(ka, &ra)| ka * ra as f64).sum();
    Complex64::new(0.0, -dot).exp()
}

pub(crate) fn neg(r: &[i64]) -> Displacement {
    r.iter().map(|&c| -c).collect()
}

pub(crate) fn max_abs(m: &CBlock) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn prune<K: Ord>(map: BTreeMap<K, CBlock>) -> BTreeMap<K, CBlock> {
    map.into_iter().filter(|(_, blk)| max_abs(blk) > 0.0).collect()
}

fn fourier_block_map(map: &BTreeMap<Displacement, CBlock>, k: &[f64], n: usize) -> CBlock {
    let mut out = CBlock::zeros(n, n);
    for (r, blk) in map {
        let ph = phase(k, r);
        out.zip_apply(blk, |o, b| *o += ph * b);
    }
    out
}

/// Project a displacement-indexed block map onto the symmetry class:
/// first (anti)symmetrize a(r) = (raw(r) + sign·raw^T(−r))/2, then keep the
/// Hermitian component (a(r) + a†(−r))/2, which for class-consistent a is
/// the elementwise imaginary (fermion) or real (boson) part.
fn canonicalize_blocks(
    statistics: Statistics,
    raw: &BTreeMap<Displacement, CBlock>,
) -> BTreeMap<Displacement, CBlock> {
    let sign = statistics.transpose_sign();
    let mut keys: BTreeSet<Displacement> = BTreeSet::new();
    for r in raw.keys() {
        keys.insert(r.clone());
        keys.insert(neg(r));
    }
    let mut out = BTreeMap::new();
    for r in keys {
        let mut a = match raw.get(&r) {
            Some(blk) => blk.clone(),
            None => {
                let any = raw.values().next().expect("nonempty map");
                CBlock::zeros(any.nrows(), any.ncols())
            }
        };
        if let Some(blk) = raw.get(&neg(&r)) {
            a += blk.transpose().scale(sign);
        }
        a.scale_mut(0.5);
        let proj = match statistics {
            Statistics::Fermion => a.map(|z| Complex64::new(0.0, z.im)),
            Statistics::Boson => a.map(|z| Complex64::new(z.re, 0.0)),
        };
        out.insert(r, proj);
    }
    prune(out)
}

/// Same projection for quadratic Lindblad stencils, with the pair
/// (r, r′) ↦ (r′, r) playing the role of r ↦ −r.
fn canonicalize_pair_blocks(
    statistics: Statistics,
    raw: &BTreeMap<(Displacement, Displacement), CBlock>,
) -> BTreeMap<(Displacement, Displacement), CBlock> {
    let sign = statistics.transpose_sign();
    let mut keys: BTreeSet<(Displacement, Displacement)> = BTreeSet::new();
    for (r, rp) in raw.keys() {
        keys.insert((r.clone(), rp.clone()));
        keys.insert((rp.clone(), r.clone()));
    }
    let mut out = BTreeMap::new();
    for (r, rp) in keys {
        let mut a = match raw.get(&(r.clone(), rp.clone())) {
            Some(blk) => blk.clone(),
            None => {
                let any = raw.values().next().expect("nonempty map");
                CBlock::zeros(any.nrows(), any.ncols())
            }
        };
        if let Some(blk) = raw.get(&(rp.clone(), r.clone())) {
            a += blk.transpose().scale(sign);
        }
        a.scale_mut(0.5);
        let proj = match statistics {
            Statistics::Fermion => a.map(|z| Complex64::new(0.0, z.im)),
            Statistics::Boson => a.map(|z| Complex64::new(z.re, 0.0)),
        };
        out.insert((r, rp), proj);
    }
    out.into_iter().filter(|(_, blk)| max_abs(blk) > 0.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{xy_chain_stencil, XYChainParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn xy_chain_hamiltonian_passes_validation() {
        let p = XYChainParams { mu: 0.0, alpha: 0.2, eta: 1.0, phi: 1.0, zeta: 0.0 };
        let report = xy_chain_stencil(&p).validate();
        assert!(report.pass(), "violations: {:?}", report.failures());
    }

    #[test]
    fn symmetric_fermionic_hamiltonian_fails_validation() {
        let mut s = CouplingStencil::new(Statistics::Fermion, LatticeSpec::infinite(1, 1));
        let sx = CBlock::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let mut h = BTreeMap::new();
        h.insert(vec![0], sx);
        s.set_hamiltonian(h);
        assert!(!s.validate().pass());
    }

    #[test]
    fn all_zero_stencil_passes_validation() {
        let s = CouplingStencil::new(Statistics::Boson, LatticeSpec::infinite(2, 1));
        assert!(s.validate().pass());
        assert!(s.is_quasifree());
        assert_eq!(s.range(), 0);
    }

    #[test]
    fn raw_one_sided_hopping_canonicalizes_to_symmetric_form() {
        // A one-sided fermionic hopping term sigma_y + i*alpha*sigma_x placed
        // at r = -1 only must canonicalize to (sigma_y -+ i*alpha*sigma_x)/2
        // at r = +-1, reproducing the standard XY-chain blocks.
        let alpha = 0.2;
        let mut s = CouplingStencil::new(Statistics::Fermion, LatticeSpec::infinite(1, 1));
        let raw_block = CBlock::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(0., -1. + alpha), c(0., 1. + alpha), c(0., 0.)],
        ); // sigma_y + i*alpha*sigma_x
        let mut h = BTreeMap::new();
        h.insert(vec![-1], raw_block);
        s.set_hamiltonian_raw(h);

        let hp = &s.hamiltonian()[&vec![1i64]];
        // (sigma_y - i*alpha*sigma_x)/2
        assert!((hp[(0, 1)] - c(0., (-1. - alpha) / 2.)).norm() < 1e-15);
        assert!((hp[(1, 0)] - c(0., (1. - alpha) / 2.)).norm() < 1e-15);
        assert!(s.validate().pass());
    }

    #[test]
    fn b_stencil_of_xy_chain_matches_closed_form() {
        let eta: f64 = 0.7;
        let phi: f64 = 1.1;
        let p = XYChainParams { mu: 0.0, alpha: 0.0, eta, phi, zeta: 0.0 };
        let b = xy_chain_stencil(&p).build_b_stencil();
        // b(0) = eta (sigma_z + 1), b(+-1) = eta e^{+-i phi} (sigma_z + 1)/2
        let b0 = &b[&vec![0i64]];
        assert!((b0[(0, 0)] - c(2.0 * eta, 0.0)).norm() < 1e-14);
        assert!(b0[(1, 1)].norm() < 1e-14 && b0[(0, 1)].norm() < 1e-14);
        let b1 = &b[&vec![1i64]];
        let want = eta * c(phi.cos(), phi.sin());
        assert!((b1[(0, 0)] - want).norm() < 1e-14);
        let bm1 = &b[&vec![-1i64]];
        assert!((bm1[(0, 0)] - want.conj()).norm() < 1e-14);
    }

    #[test]
    fn b_stencil_is_hermitian_under_reflection() {
        let p = XYChainParams { mu: 0.3, alpha: 0.4, eta: 1.2, phi: 0.7, zeta: 0.0 };
        let s = xy_chain_stencil(&p);
        let b = s.build_b_stencil();
        for (r, blk) in &b {
            let other = &b[&neg(r)];
            assert!(max_abs(&(blk - other.adjoint())) < 1e-14);
        }
    }

    #[test]
    fn no_lindblads_gives_zero_b() {
        let s = CouplingStencil::new(Statistics::Fermion, LatticeSpec::infinite(1, 2));
        assert!(s.build_b_stencil().is_empty());
    }
}
