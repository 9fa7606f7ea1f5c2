//! Assembly of the covariance equation of motion.
//!
//! For a quadratic open system the covariance matrix evolves as
//! ∂_t Γ = XΓ + ΓXᵀ + Y + Σ_u Z_uΓZ_uᵀ with real matrices
//!
//! * fermions: X = −2iH − B_r − 2Σ_u M_u², Y = B_i, Z_u = 2iM_u;
//! * bosons:   X = −2iτH + iτB_i − 2Σ_u (τM_u)², Y = τB_rτ, Z_u = 2iτM_u,
//!
//! where B = Σ_s ℓ_s ℓ_s† is the bath matrix, B_r/B_i are its elementwise
//! real/imaginary parts, and τ is the block-diagonal symplectic form
//! (σ_y per orbital in the interleaved (orbital, ±) Majorana ordering).
//!
//! Translation invariance reduces everything to 2b×2b stencils x(r), y(r),
//! z_u(r, r′) and, for quasifree models, to momentum-space blocks
//! x̃(k) = −2ih̃(k) − b̃_r(k) (fermions) or −2iτh̃(k) + iτb̃_i(k) (bosons),
//! with b̃_r(k) = (b̃(k) + b̃*(−k))/2 and b̃_i(k) = (b̃(k) − b̃*(−k))/(2i).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{coords_of, wrap_index};
use crate::stencil::{CBlock, CouplingStencil, Displacement, Statistics};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real 2b×2b (or 2N×2N) evolution block.
pub type RBlock = DMatrix<f64>;

/// Absolute tolerance (relative to the coupling scale) on the imaginary
/// residue of the evolution matrices.
pub const REALNESS_TOL: f64 = 1e-12;

/// Block-diagonal symplectic form τ: one σ_y per orbital in the interleaved
/// (orbital, ±) ordering.
pub fn tau(bands: usize) -> CBlock {
    let mut t = CBlock::zeros(2 * bands, 2 * bands);
    for c in 0..bands {
        t[(2 * c, 2 * c + 1)] = -I;
        t[(2 * c + 1, 2 * c)] = I;
    }
    t
}

/// One quadratic-Lindblad evolution family in stencil form: the real blocks
/// z_u(r, r′) of Z_u = 2iM_u (fermions) or 2iτM_u (bosons).
pub type ZFamily = Vec<(Displacement, Displacement, RBlock)>;

/// Translation-invariant evolution stencils x(r), y(r), z_u(r, r′).
#[derive(Clone, Debug)]
pub struct StencilEvolution {
    pub statistics: Statistics,
    pub dims: usize,
    pub bands: usize,
    pub x: BTreeMap<Displacement, RBlock>,
    pub y: BTreeMap<Displacement, RBlock>,
    pub z: Vec<ZFamily>,
    /// Largest imaginary part encountered before truncation to real.
    pub imaginary_residue: f64,
}

impl StencilEvolution {
    /// Fourier transform x̃(k) = Σ_r e^{−ik·r} x(r).
    pub fn x_momentum(&self, k: &[f64]) -> CBlock {
        fourier_real_map(&self.x, k, 2 * self.bands)
    }

    /// Fourier transform ỹ(k) = Σ_r e^{−ik·r} y(r).
    pub fn y_momentum(&self, k: &[f64]) -> CBlock {
        fourier_real_map(&self.y, k, 2 * self.bands)
    }
}

fn fourier_real_map(map: &BTreeMap<Displacement, RBlock>, k: &[f64], n: usize) -> CBlock {
    let mut out = CBlock::zeros(n, n);
    for (r, blk) in map {
        let ph = crate::stencil::phase(k, r);
        out.zip_apply(blk, |o, b| *o += ph * b);
    }
    out
}

/// Dense evolution data on a finite periodic lattice.  X and Y are explicit
/// real 2N×2N matrices; the Z_u operators (one per quadratic family and
/// cell) are kept in stencil form because they are sparse, with helpers to
/// apply Σ Z_uΓZ_uᵀ or to materialize them for small N.
#[derive(Clone, Debug)]
pub struct DenseEvolution {
    pub statistics: Statistics,
    pub shape: Vec<usize>,
    pub bands: usize,
    pub x: RBlock,
    pub y: RBlock,
    pub z: Vec<ZFamily>,
}

impl DenseEvolution {
    /// Number of modes N = b·∏L_a.
    pub fn modes(&self) -> usize {
        self.bands * self.shape.iter().product::<usize>()
    }

    /// Σ_{n,u} Z_{n,u} Γ Z_{n,u}ᵀ assembled block-wise from the z stencils.
    pub fn apply_z_sum(&self, gamma: &RBlock) -> RBlock {
        let nb = 2 * self.bands;
        let cells: usize = self.shape.iter().product();
        let mut out = RBlock::zeros(nb * cells, nb * cells);
        for fam in &self.z {
            for n in 0..cells {
                let nc = coords_of(n, &self.shape);
                for (r1, r1p, z1) in fam {
                    for (r2, r2p, z2) in fam {
                        let row = self.wrapped(&nc, r1);
                        let col = self.wrapped(&nc, r2);
                        let grow = self.wrapped(&nc, r1p);
                        let gcol = self.wrapped(&nc, r2p);
                        let gblk = gamma.view((nb * grow, nb * gcol), (nb, nb));
                        let prod = z1 * gblk * z2.transpose();
                        let mut dst = out.view_mut((nb * row, nb * col), (nb, nb));
                        dst += prod;
                    }
                }
            }
        }
        out
    }

    /// Materialize every Z_{n,u} as a dense 2N×2N matrix (small lattices).
    pub fn z_dense(&self) -> Vec<RBlock> {
        let nb = 2 * self.bands;
        let cells: usize = self.shape.iter().product();
        let mut zs = Vec::new();
        for fam in &self.z {
            for n in 0..cells {
                let nc = coords_of(n, &self.shape);
                let mut zm = RBlock::zeros(nb * cells, nb * cells);
                for (r, rp, blk) in fam {
                    let row = self.wrapped(&nc, r);
                    let col = self.wrapped(&nc, rp);
                    let mut dst = zm.view_mut((nb * row, nb * col), (nb, nb));
                    dst += blk;
                }
                zs.push(zm);
            }
        }
        zs
    }

    /// Right-hand side of the equation of motion, XΓ + ΓXᵀ + Y + ΣZΓZᵀ.
    pub fn equation_of_motion(&self, gamma: &RBlock) -> RBlock {
        let mut out = &self.x * gamma + gamma * self.x.transpose() + &self.y;
        if !self.z.is_empty() {
            out += self.apply_z_sum(gamma);
        }
        out
    }

    fn wrapped(&self, base: &[i64], r: &[i64]) -> usize {
        let coords: Vec<i64> = base.iter().zip(r).map(|(b, d)| b + d).collect();
        wrap_index(&coords, &self.shape)
    }
}

/// Build the translation-invariant evolution stencils from a coupling
/// stencil, verifying that the resulting blocks are real.
pub fn build_stencil_evolution(stencil: &CouplingStencil) -> Result<StencilEvolution> {
    let bands = stencil.lattice.bands;
    let nb = 2 * bands;
    let dims = stencil.lattice.dims;
    let b = stencil.build_b_stencil();
    let t = tau(bands);

    let mut x: BTreeMap<Displacement, CBlock> = BTreeMap::new();
    let mut y: BTreeMap<Displacement, CBlock> = BTreeMap::new();
    let add = |map: &mut BTreeMap<Displacement, CBlock>, r: &Displacement, blk: CBlock| {
        let e = map.entry(r.clone()).or_insert_with(|| CBlock::zeros(nb, nb));
        *e += blk;
    };

    match stencil.statistics {
        Statistics::Fermion => {
            for (r, h) in stencil.hamiltonian() {
                add(&mut x, r, h.scale(1.0) * (-2.0 * I));
            }
            for (r, blk) in &b {
                // x −= b_r, y += b_i (elementwise real/imaginary parts).
                add(&mut x, r, blk.map(|z| Complex64::new(-z.re, 0.0)));
                add(&mut y, r, blk.map(|z| Complex64::new(z.im, 0.0)));
            }
        }
        Statistics::Boson => {
            for (r, h) in stencil.hamiltonian() {
                add(&mut x, r, &t * h * (-2.0 * I));
            }
            for (r, blk) in &b {
                let br = blk.map(|z| Complex64::new(z.re, 0.0));
                let bi = blk.map(|z| Complex64::new(z.im, 0.0));
                add(&mut x, r, &t * bi * I);
                add(&mut y, r, &t * br * &t);
            }
        }
    }

    // Quadratic families: z_u(r, r′) = 2i m (fermion) / 2i τm (boson) and the
    // −2 Σ M² (or (τM)²) contribution to x from the stencil convolution.
    let mut z: Vec<Vec<(Displacement, Displacement, CBlock)>> = Vec::new();
    for fam in stencil.quadratic_families() {
        let mut zfam = Vec::new();
        let mut eff: Vec<(Displacement, Displacement, CBlock)> = Vec::new();
        for ((r, rp), m) in fam {
            let m_eff = match stencil.statistics {
                Statistics::Fermion => m.clone(),
                Statistics::Boson => &t * m,
            };
            zfam.push((r.clone(), rp.clone(), m_eff.scale(1.0) * (2.0 * I)));
            eff.push((r.clone(), rp.clone(), m_eff));
        }
        // (M_eff²) blocks: entries (r1, r1′) and (r2, r2′) chain when r1′ = r2,
        // contributing at displacement r1 − r2′.
        for (r1, r1p, m1) in &eff {
            for (r2, r2p, m2) in &eff {
                if r1p == r2 {
                    let disp: Displacement = r1.iter().zip(r2p).map(|(a, b)| a - b).collect();
                    add(&mut x, &disp, (m1 * m2).scale(-2.0));
                }
            }
        }
        z.push(zfam);
    }

    // Verify realness and truncate.
    let mut residue = 0.0f64;
    let mut scale = 0.0f64;
    let mut to_real = |map: BTreeMap<Displacement, CBlock>| -> BTreeMap<Displacement, RBlock> {
        map.into_iter()
            .map(|(r, blk)| {
                for v in blk.iter() {
                    residue = residue.max(v.im.abs());
                    scale = scale.max(v.norm());
                }
                (r, blk.map(|v| v.re))
            })
            .filter(|(_, blk)| blk.amax() > 0.0)
            .collect()
    };
    let x = to_real(x);
    let y = to_real(y);
    let z: Vec<ZFamily> = z
        .into_iter()
        .map(|fam| {
            fam.into_iter()
                .map(|(r, rp, blk)| {
                    for v in blk.iter() {
                        residue = residue.max(v.im.abs());
                        scale = scale.max(v.norm());
                    }
                    (r, rp, blk.map(|v| v.re))
                })
                .collect()
        })
        .collect();

    let limit = REALNESS_TOL * scale.max(1.0);
    if residue > limit {
        return Err(Error::NonRealResult { residue, limit });
    }
    Ok(StencilEvolution { statistics: stencil.statistics, dims, bands, x, y, z, imaginary_residue: residue })
}

/// Assemble the dense evolution matrices on a finite periodic lattice of the
/// given shape by wrapping the evolution stencils.
pub fn build_dense(stencil: &CouplingStencil, shape: &[usize]) -> Result<DenseEvolution> {
    assert_eq!(shape.len(), stencil.lattice.dims, "shape must have D components");
    let ev = build_stencil_evolution(stencil)?;
    let bands = ev.bands;
    let nb = 2 * bands;
    let cells: usize = shape.iter().product();
    let mut x = RBlock::zeros(nb * cells, nb * cells);
    let mut y = RBlock::zeros(nb * cells, nb * cells);
    for n in 0..cells {
        let nc = coords_of(n, shape);
        for (r, blk) in &ev.x {
            let col: Vec<i64> = nc.iter().zip(r).map(|(a, d)| a - d).collect();
            let j = wrap_index(&col, shape);
            let mut dst = x.view_mut((nb * n, nb * j), (nb, nb));
            dst += blk;
        }
        for (r, blk) in &ev.y {
            let col: Vec<i64> = nc.iter().zip(r).map(|(a, d)| a - d).collect();
            let j = wrap_index(&col, shape);
            let mut dst = y.view_mut((nb * n, nb * j), (nb, nb));
            dst += blk;
        }
    }
    Ok(DenseEvolution {
        statistics: ev.statistics,
        shape: shape.to_vec(),
        bands,
        x,
        y,
        z: ev.z,
    })
}

/// Momentum-space evolution blocks (x̃(k), ỹ(k)) of a quasifree stencil.
pub fn build_momentum(stencil: &CouplingStencil, k: &[f64]) -> Result<(CBlock, CBlock)> {
    if !stencil.is_quasifree() {
        return Err(Error::QuadraticNotSupported);
    }
    assert_eq!(k.len(), stencil.lattice.dims, "momentum must have D components");
    let h = stencil.fourier_h(k);
    let bk = stencil.fourier_b(k);
    let neg_k: Vec<f64> = k.iter().map(|v| -v).collect();
    let b_neg_conj = stencil.fourier_b(&neg_k).conjugate();
    let br = (&bk + &b_neg_conj).scale(0.5);
    let bi = (&bk - &b_neg_conj) * Complex64::new(0.0, -0.5); // (b̃(k) − b̃*(−k))/(2i)
    match stencil.statistics {
        Statistics::Fermion => Ok(((h * (-2.0 * I)) - br, bi)),
        Statistics::Boson => {
            let t = tau(stencil.lattice.bands);
            let x = (&t * h) * (-2.0 * I) + (&t * bi) * I;
            let y = &t * br * &t;
            Ok((x, y))
        }
    }
}
