//! Brute-force dense Liouvillian for tiny fermionic lattices.
//!
//! The master equation ∂_t ρ = −i[Ĥ, ρ] + Σ_s (L̂_s ρ L̂_s† − ½{L̂_s†L̂_s, ρ})
//! is vectorized column-major into a 4^N×4^N superoperator built from
//! Jordan–Wigner Majorana operators with {ŵ_i, ŵ_j} = δ_ij.  This serves
//! as an exact oracle for the covariance-level machinery: for quasifree
//! systems the Liouvillian eigenvalues are the subset sums of the
//! eigenvalues of X, so in particular the spectral gaps coincide.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{cell_count, coords_of, wrap_index};
use crate::linalg::CMat;
use crate::stencil::{CouplingStencil, Statistics};

/// Largest supported number of fermionic modes (4^N×4^N superoperator).
pub const MAX_MODES: usize = 5;

/// Dense Liouvillian superoperator and its spectrum.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: CMat,
    pub spectrum: Vec<Complex64>,
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Jordan–Wigner Majorana operators ŵ_{m,+}, ŵ_{m,-} (interleaved) on the
/// 2^N-dimensional Fock space, normalized to {ŵ_i, ŵ_j} = δ_ij.
fn majoranas(n_modes: usize) -> Vec<CMat> {
    let one = Complex64::new(1.0, 0.0);
    let eye = CMat::identity(2, 2);
    let zee = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![one, -one]));
    let mut lower = CMat::zeros(2, 2);
    lower[(0, 1)] = one; // annihilator: a|1⟩ = |0⟩

    let mut out = Vec::with_capacity(2 * n_modes);
    for m in 0..n_modes {
        let mut a = CMat::identity(1, 1);
        for j in 0..n_modes {
            let factor = if j < m {
                &zee
            } else if j == m {
                &lower
            } else {
                &eye
            };
            a = kron(&a, factor);
        }
        let adag = a.adjoint();
        let s = 1.0 / 2.0f64.sqrt();
        out.push((&a + &adag).scale(s));
        out.push(((&adag - &a) * Complex64::new(0.0, s)).scale(1.0));
    }
    out
}

/// Build the dense Liouvillian of a fermionic stencil on a finite periodic
/// lattice with N = b·∏L_a ≤ [`MAX_MODES`] modes, and its spectrum.
pub fn dense_liouvillian_fermion(
    stencil: &CouplingStencil,
    shape: &[usize],
) -> Result<Liouvillian> {
    if stencil.statistics != Statistics::Fermion {
        return Err(Error::Invalid(
            "the dense Liouvillian oracle supports fermionic stencils only".into(),
        ));
    }
    let bands = stencil.lattice.bands;
    let cells = cell_count(shape);
    let n_modes = bands * cells;
    if n_modes > MAX_MODES {
        return Err(Error::TooLarge { n: n_modes, max: MAX_MODES });
    }
    let nb = 2 * bands;
    let n2 = 2 * n_modes;
    let w = majoranas(n_modes);
    let dim = 1usize << n_modes;

    // Dense coupling matrices on the wrapped lattice.
    let mut h_mat = CMat::zeros(n2, n2);
    for n in 0..cells {
        let nc = coords_of(n, shape);
        for (r, blk) in stencil.hamiltonian() {
            let col: Vec<i64> = nc.iter().zip(r).map(|(a, d)| a - d).collect();
            let j = wrap_index(&col, shape);
            let mut dst = h_mat.view_mut((nb * n, nb * j), (nb, nb));
            dst += blk;
        }
    }
    let mut jumps: Vec<CMat> = Vec::new(); // operators on Fock space
    for fam in stencil.lindblad_families() {
        for n in 0..cells {
            let nc = coords_of(n, shape);
            let mut op = CMat::zeros(dim, dim);
            for (r, v) in fam {
                let coords: Vec<i64> = nc.iter().zip(r).map(|(a, d)| a + d).collect();
                let cell = wrap_index(&coords, shape);
                for comp in 0..nb {
                    op += w[nb * cell + comp].scale(1.0) * v[comp];
                }
            }
            jumps.push(op);
        }
    }
    for fam in stencil.quadratic_families() {
        for n in 0..cells {
            let nc = coords_of(n, shape);
            let mut op = CMat::zeros(dim, dim);
            for ((r, rp), blk) in fam {
                let rowc: Vec<i64> = nc.iter().zip(r).map(|(a, d)| a + d).collect();
                let colc: Vec<i64> = nc.iter().zip(rp).map(|(a, d)| a + d).collect();
                let rcell = wrap_index(&rowc, shape);
                let ccell = wrap_index(&colc, shape);
                for p in 0..nb {
                    for q in 0..nb {
                        let c = blk[(p, q)];
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        op += (&w[nb * rcell + p] * &w[nb * ccell + q]).scale(1.0) * c;
                    }
                }
            }
            jumps.push(op);
        }
    }

    // Ĥ = Σ_{ij} H_ij ŵ_i ŵ_j on Fock space.
    let mut h_op = CMat::zeros(dim, dim);
    for i in 0..n2 {
        for j in 0..n2 {
            let c = h_mat[(i, j)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            h_op += (&w[i] * &w[j]).scale(1.0) * c;
        }
    }

    // Column-major vectorization of the master equation.
    let eye = CMat::identity(dim, dim);
    let mut sup = (kron(&eye, &h_op) - kron(&h_op.transpose(), &eye))
        * Complex64::new(0.0, -1.0);
    for l in &jumps {
        let ldl = l.adjoint() * l;
        sup += kron(&l.conjugate(), l)
            - (kron(&eye, &ldl) + kron(&ldl.transpose(), &eye)).scale(0.5);
    }

    let spectrum: Vec<Complex64> = sup.clone().eigenvalues().ok_or(Error::NonFiniteSolve)?
        .iter()
        .copied()
        .collect();
    Ok(Liouvillian { matrix: sup, spectrum })
}

/// Spectral gap Δ = −max_{λ≠0} Re λ of a Liouvillian spectrum.  Eigenvalues
/// with |λ| below 1e-8 of the spectral scale count as the steady-state zero.
pub fn liouvillian_gap(spectrum: &[Complex64]) -> f64 {
    let scale = spectrum.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let tol = 1e-8 * scale;
    spectrum
        .iter()
        .filter(|z| z.norm() > tol)
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min)
        .min(f64::INFINITY)
}
