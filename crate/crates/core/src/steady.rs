//! Steady-state covariance matrices by three mutually checking routes:
//! a dense solve of XΓ + ΓXᵀ + Σ_u Z_uΓZ_uᵀ = −Y on a finite lattice,
//! per-momentum Lyapunov solves x̃(k)γ̃(k) + γ̃(k)x̃ᵀ(−k) = −ỹ(k) for
//! quasifree models, and RK4 time integration of the equation of motion.
//!
//! Translation invariance is exploited throughout: dense solutions are
//! reduced to the stencil γ(r) by translation averaging, and the momentum
//! route pairs k with −k through γ̃(−k) = γ̃*(k).  For correlation profiles
//! along a lattice axis, [`axis_correlations`] avoids storing the full grid
//! and sums the transverse momenta on the fly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::evolution::{build_momentum, build_stencil_evolution, DenseEvolution, RBlock};
use crate::lattice::{cell_count, coords_of, k_of, negated_indices, wrap_index};
use crate::linalg::{complexify, max_abs, LyapunovSolver, SINGULARITY_RTOL};
use crate::stencil::{CBlock, CouplingStencil, Statistics};

/// Steady-state covariance data in real and/or momentum space.
///
/// Both representations are indexed by the row-major cell index of the
/// finite lattice: `real_space[wrap_index(r, shape)]` holds γ(r) and
/// `momentum_space[i]` holds γ̃(k) at the grid point `k_of(coords_of(i))`.
#[derive(Clone, Debug)]
pub struct CovarianceField {
    pub statistics: Statistics,
    pub bands: usize,
    pub shape: Vec<usize>,
    pub real_space: Option<Vec<RBlock>>,
    pub momentum_space: Option<Vec<CBlock>>,
    /// Max-norm residual of the defining equation, re-substituted.
    pub residual: f64,
    /// Largest deviation of an individual block row from the translation
    /// average (dense route only).
    pub translation_deviation: f64,
}

impl CovarianceField {
    /// Real-space block γ(r), with r wrapped periodically.
    pub fn gamma(&self, r: &[i64]) -> Result<&RBlock> {
        let rs = self.real_space.as_ref().ok_or(Error::MissingRepresentation)?;
        Ok(&rs[wrap_index(r, &self.shape)])
    }

    /// Momentum-space block γ̃(k) at grid point index `i`.
    pub fn gamma_momentum(&self, i: usize) -> Result<&CBlock> {
        let ms = self.momentum_space.as_ref().ok_or(Error::MissingRepresentation)?;
        Ok(&ms[i])
    }

    /// Momentum vector of grid point index `i`.
    pub fn k_at(&self, i: usize) -> Vec<f64> {
        let c: Vec<usize> = coords_of(i, &self.shape).iter().map(|&v| v as usize).collect();
        k_of(&c, &self.shape)
    }
}

/// Solve the dense steady-state equation XΓ + ΓXᵀ + ΣZ_uΓZ_uᵀ = −Y.
///
/// Quasifree systems use the Schur-form Sylvester solver directly; systems
/// with quadratic Lindblad operators iterate Γ ← lyap(X, −Y − ΣZΓZᵀ) on the
/// cached Schur factorization, which converges geometrically whenever the
/// dissipative contribution of the Z terms is subdominant.
pub fn solve_steady_dense(ev: &DenseEvolution) -> Result<CovarianceField> {
    let solver = LyapunovSolver::new_real(&ev.x)?;
    let y_c = complexify(&ev.y);
    let mut gamma = real_part(&solver.solve(&(-&y_c))?);
    if !ev.z.is_empty() {
        let max_sweeps = 500usize;
        let mut last_update = f64::INFINITY;
        let mut converged = false;
        for _ in 0..max_sweeps {
            let rhs = complexify(&(-&ev.y - ev.apply_z_sum(&gamma)));
            let next = real_part(&solver.solve(&rhs)?);
            last_update = (&next - &gamma).amax();
            gamma = next;
            if last_update <= 1e-13 * gamma.amax().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { iterations: max_sweeps, last_update });
        }
    }
    // Project onto the statistics symmetry class to suppress roundoff.
    gamma = match ev.statistics {
        Statistics::Fermion => (&gamma - gamma.transpose()).scale(0.5),
        Statistics::Boson => (&gamma + gamma.transpose()).scale(0.5),
    };
    let residual = ev.equation_of_motion(&gamma).amax();

    // Translation-average Γ into the stencil γ(r).
    let nb = 2 * ev.bands;
    let cells = cell_count(&ev.shape);
    let mut real_space = vec![RBlock::zeros(nb, nb); cells];
    let mut translation_deviation = 0.0f64;
    for ridx in 0..cells {
        let r = coords_of(ridx, &ev.shape);
        let mut mean = RBlock::zeros(nb, nb);
        for n in 0..cells {
            let nc = coords_of(n, &ev.shape);
            let col: Vec<i64> = nc.iter().zip(&r).map(|(a, d)| a - d).collect();
            let j = wrap_index(&col, &ev.shape);
            mean += gamma.view((nb * n, nb * j), (nb, nb));
        }
        mean /= cells as f64;
        for n in 0..cells {
            let nc = coords_of(n, &ev.shape);
            let col: Vec<i64> = nc.iter().zip(&r).map(|(a, d)| a - d).collect();
            let j = wrap_index(&col, &ev.shape);
            let dev = (gamma.view((nb * n, nb * j), (nb, nb)) - &mean).amax();
            translation_deviation = translation_deviation.max(dev);
        }
        real_space[ridx] = mean;
    }

    Ok(CovarianceField {
        statistics: ev.statistics,
        bands: ev.bands,
        shape: ev.shape.clone(),
        real_space: Some(real_space),
        momentum_space: None,
        residual,
        translation_deviation,
    })
}

/// Solve the per-momentum Lyapunov equation x̃(k)γ̃ + γ̃x̃ᵀ(−k) = −ỹ(k),
/// using x̃(−k) = x̃*(k).
pub fn solve_lyapunov_k(x: &CBlock, y: &CBlock, k: &[f64]) -> Result<CBlock> {
    let nb = x.nrows();
    let eye = CBlock::identity(nb, nb);
    // Column-major vectorization: vec(x̃γ̃) = (1 ⊗ x̃)vec γ̃ and
    // vec(γ̃ x̃ᵀ(−k)) = (x̃(−k) ⊗ 1)vec γ̃ with x̃(−k) = x̃*(k).
    let m = eye.kronecker(x) + x.conjugate().kronecker(&eye);
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    // The scale of ỹ guards against uniformly tiny blocks at a gap closure,
    // where a purely relative test would miss the singularity.
    if smin <= SINGULARITY_RTOL * smax.max(max_abs(y)) {
        return Err(Error::SingularAtK { k: k.to_vec() });
    }
    let rhs = nalgebra::DVector::from_column_slice((-y).as_slice());
    let sol = svd.solve(&rhs, 0.0).map_err(|_| Error::NonFiniteSolve)?;
    Ok(CBlock::from_column_slice(nb, nb, sol.as_slice()))
}

/// Solve the steady state of a quasifree stencil on a uniform momentum grid
/// and inverse-Fourier-transform to real space.
pub fn solve_steady_momentum(stencil: &CouplingStencil, grid: &[usize]) -> Result<CovarianceField> {
    let bands = stencil.lattice.bands;
    let cells = cell_count(grid);
    let mut momentum = vec![CBlock::zeros(2 * bands, 2 * bands); cells];
    let mut residual = 0.0f64;
    for i in 0..cells {
        let idx: Vec<usize> = coords_of(i, grid).iter().map(|&v| v as usize).collect();
        let neg = wrap_index(
            &negated_indices(&idx, grid).iter().map(|&v| v as i64).collect::<Vec<_>>(),
            grid,
        );
        if neg < i {
            momentum[i] = momentum[neg].conjugate();
            continue;
        }
        let k = k_of(&idx, grid);
        let (x, y) = build_momentum(stencil, &k)?;
        let g = solve_lyapunov_k(&x, &y, &k)?;
        residual = residual.max(max_abs(&(&x * &g + &g * x.adjoint() + &y)));
        momentum[i] = g;
    }

    let real_blocks = fourier_grid(&momentum, grid, FourierDirection::ToRealSpace);
    let mut scale = 0.0f64;
    let mut imag = 0.0f64;
    for blk in &real_blocks {
        for v in blk.iter() {
            scale = scale.max(v.norm());
            imag = imag.max(v.im.abs());
        }
    }
    let limit = 1e-9 * scale.max(1.0);
    if imag > limit {
        return Err(Error::NonRealResult { residue: imag, limit });
    }
    let real_space = real_blocks.iter().map(|b| b.map(|v| v.re)).collect();

    Ok(CovarianceField {
        statistics: stencil.statistics,
        bands,
        shape: grid.to_vec(),
        real_space: Some(real_space),
        momentum_space: Some(momentum),
        residual,
        translation_deviation: 0.0,
    })
}

/// Direction of the discrete Fourier pair γ̃(k) = Σ_r e^{−ik·r} γ(r),
/// γ(r) = (1/∏L) Σ_k e^{ik·r} γ̃(k).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierDirection {
    ToMomentum,
    ToRealSpace,
}

/// Fill the missing representation of a covariance field from the present
/// one; the round trip is the identity up to roundoff.
pub fn fourier_pair(field: &CovarianceField, direction: FourierDirection) -> Result<CovarianceField> {
    let mut out = field.clone();
    match direction {
        FourierDirection::ToMomentum => {
            let rs = field.real_space.as_ref().ok_or(Error::MissingRepresentation)?;
            let blocks: Vec<CBlock> = rs.iter().map(complexify).collect();
            out.momentum_space = Some(fourier_grid(&blocks, &field.shape, direction));
        }
        FourierDirection::ToRealSpace => {
            let ms = field.momentum_space.as_ref().ok_or(Error::MissingRepresentation)?;
            let blocks = fourier_grid(ms, &field.shape, direction);
            out.real_space = Some(blocks.iter().map(|b| b.map(|v| v.re)).collect());
        }
    }
    Ok(out)
}

/// Discrete Fourier transform of a block field on the momentum grid
/// k_a = 2π(i_a+1)/L_a, implemented with per-axis FFT passes.
fn fourier_grid(blocks: &[CBlock], shape: &[usize], direction: FourierDirection) -> Vec<CBlock> {
    let cells = cell_count(shape);
    assert_eq!(blocks.len(), cells);
    let nb = blocks[0].nrows();
    let mut planner = FftPlanner::new();
    let mut out = vec![CBlock::zeros(nb, nb); cells];

    // The grid index i corresponds to the DFT frequency (i+1) mod L per
    // axis; shift accordingly before (inverse) or after (forward) the FFT.
    let shifted = |i: usize| -> usize {
        let c = coords_of(i, shape);
        let s: Vec<i64> = c.iter().map(|&v| v + 1).collect();
        wrap_index(&s, shape)
    };

    let mut chan = vec![Complex64::new(0.0, 0.0); cells];
    for p in 0..nb {
        for q in 0..nb {
            match direction {
                FourierDirection::ToRealSpace => {
                    for i in 0..cells {
                        chan[shifted(i)] = blocks[i][(p, q)];
                    }
                }
                FourierDirection::ToMomentum => {
                    for i in 0..cells {
                        chan[i] = blocks[i][(p, q)];
                    }
                }
            }
            for axis in 0..shape.len() {
                let l = shape[axis];
                let fft = match direction {
                    FourierDirection::ToRealSpace => planner.plan_fft_inverse(l),
                    FourierDirection::ToMomentum => planner.plan_fft_forward(l),
                };
                let stride: usize = shape[axis + 1..].iter().product();
                let outer: usize = shape[..axis].iter().product();
                let mut line = vec![Complex64::new(0.0, 0.0); l];
                for o in 0..outer {
                    for s in 0..stride {
                        let base = o * l * stride + s;
                        for j in 0..l {
                            line[j] = chan[base + j * stride];
                        }
                        fft.process(&mut line);
                        for j in 0..l {
                            chan[base + j * stride] = line[j];
                        }
                    }
                }
            }
            match direction {
                FourierDirection::ToRealSpace => {
                    let norm = 1.0 / cells as f64;
                    for r in 0..cells {
                        out[r][(p, q)] = chan[r] * norm;
                    }
                }
                FourierDirection::ToMomentum => {
                    for i in 0..cells {
                        out[i][(p, q)] = chan[shifted(i)];
                    }
                }
            }
        }
    }
    out
}

fn real_part(m: &CBlock) -> RBlock {
    m.map(|v| v.re)
}

/// Options for [`evolve_covariance`].
#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// Time step; defaults to 0.1/‖X‖_max.
    pub dt: Option<f64>,
    pub t_max: f64,
    /// Stop early once ‖∂_tΓ‖_max falls below this.
    pub stop_tol: f64,
    /// Divergence bound on ‖Γ‖_max (bosonic instability guard).
    pub bound: f64,
    /// Upper bound on the number of stored trajectory samples.
    pub max_samples: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { dt: None, t_max: 100.0, stop_tol: 1e-10, bound: 1e9, max_samples: 128 }
    }
}

/// Sampled RK4 trajectory of the covariance equation of motion.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<(f64, RBlock)>,
    pub gamma: RBlock,
    pub time: f64,
    /// True if the run stopped because ‖∂_tΓ‖_max < stop_tol.
    pub converged: bool,
}

/// Integrate ∂_tΓ = XΓ + ΓXᵀ + Y + ΣZ_uΓZ_uᵀ with classical RK4.
pub fn evolve_covariance(
    ev: &DenseEvolution,
    gamma0: &RBlock,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let dt = opts.dt.unwrap_or_else(|| 0.1 / ev.x.amax().max(1e-30));
    assert!(dt > 0.0, "time step must be positive");
    let steps = (opts.t_max / dt).ceil() as usize;
    let stride = (steps / opts.max_samples.max(1)).max(1);

    let mut gamma = gamma0.clone();
    let mut t = 0.0f64;
    let mut samples = vec![(0.0, gamma.clone())];
    let mut converged = false;
    for step in 0..steps {
        let k1 = ev.equation_of_motion(&gamma);
        if k1.amax() < opts.stop_tol {
            converged = true;
            break;
        }
        let k2 = ev.equation_of_motion(&(&gamma + k1.scale(dt / 2.0)));
        let k3 = ev.equation_of_motion(&(&gamma + k2.scale(dt / 2.0)));
        let k4 = ev.equation_of_motion(&(&gamma + k3.scale(dt)));
        gamma += (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0);
        t += dt;
        let sup = gamma.amax();
        if !sup.is_finite() || sup > opts.bound {
            return Err(Error::Diverged { t, bound: opts.bound });
        }
        if (step + 1) % stride == 0 {
            samples.push((t, gamma.clone()));
        }
    }
    Ok(Trajectory { samples, gamma, time: t, converged })
}

/// Policy for momentum grid points where the Lyapunov block is singular
/// (gap closure, e.g. the zero mode of a critical model).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularPolicy {
    /// Propagate [`Error::SingularAtK`].
    Error,
    /// Drop the offending grid points from the momentum sum.
    Omit,
}

/// Correlation profile γ(r·e_axis) for r = 0..=max_r.
#[derive(Clone, Debug)]
pub struct AxisCorrelations {
    pub values: Vec<RBlock>,
    /// Number of momentum grid points omitted as singular.
    pub omitted: usize,
    pub imaginary_residue: f64,
}

/// Compute γ(r·e_axis) for a quasifree stencil on a `shape` momentum grid
/// without materializing the full field: transverse momenta are summed on
/// the fly and k is paired with −k via γ̃(−k) = γ̃*(k).
pub fn axis_correlations(
    stencil: &CouplingStencil,
    shape: &[usize],
    axis: usize,
    max_r: usize,
    policy: SingularPolicy,
) -> Result<AxisCorrelations> {
    if !stencil.is_quasifree() {
        return Err(Error::QuadraticNotSupported);
    }
    let ev = build_stencil_evolution(stencil)?;
    let dims = shape.len();
    assert_eq!(dims, stencil.lattice.dims, "grid must have D components");
    assert!(axis < dims, "axis out of range");
    let nb = 2 * ev.bands;
    let n2 = nb * nb;

    // Per-displacement, per-axis phase tables e^{-i k_a(i) r_a}.
    let tables = |map: &std::collections::BTreeMap<Vec<i64>, RBlock>| -> Vec<(RBlock, Vec<Vec<Complex64>>)> {
        map.iter()
            .map(|(r, blk)| {
                let per_axis: Vec<Vec<Complex64>> = (0..dims)
                    .map(|a| {
                        let l = shape[a];
                        (0..l)
                            .map(|i| {
                                let k = 2.0 * std::f64::consts::PI * (i as f64 + 1.0) / l as f64;
                                Complex64::from_polar(1.0, -k * r[a] as f64)
                            })
                            .collect()
                    })
                    .collect();
                (blk.clone(), per_axis)
            })
            .collect()
    };
    let x_tab = tables(&ev.x);
    let y_tab = tables(&ev.y);

    let cells = cell_count(shape);
    let mut s = vec![CBlock::zeros(nb, nb); shape[axis]];
    let mut omitted = 0usize;
    let mut xk = CBlock::zeros(nb, nb);
    let mut yk = CBlock::zeros(nb, nb);
    let mut m = CBlock::zeros(n2, n2);
    let mut rhs = vec![Complex64::new(0.0, 0.0); n2];
    let mut idx = vec![0usize; dims];

    for i in 0..cells {
        // Row-major odometer.
        if i > 0 {
            for a in (0..dims).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        let neg = negated_indices(&idx, shape);
        let neg_flat = wrap_index(&neg.iter().map(|&v| v as i64).collect::<Vec<_>>(), shape);
        if neg_flat < i {
            continue; // handled as the conjugate of its partner
        }

        assemble(&mut xk, &x_tab, &idx);
        assemble(&mut yk, &y_tab, &idx);

        // Vectorized 4b² system (1 ⊗ x̃(k) + x̃(−k) ⊗ 1) vec γ̃ = −vec ỹ,
        // with x̃(−k) = x̃*(k), solved in place by Gaussian elimination.
        m.fill(Complex64::new(0.0, 0.0));
        for a in 0..nb {
            for bcol in 0..nb {
                let xa = xk[(a, bcol)];
                let xc = xa.conj();
                for c in 0..nb {
                    m[(a + nb * c, bcol + nb * c)] += xa;
                    m[(c + nb * a, c + nb * bcol)] += xc;
                }
            }
        }
        for col in 0..nb {
            for row in 0..nb {
                rhs[row + nb * col] = -yk[(row, col)];
            }
        }
        let rhs_scale = rhs.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if !gauss_solve(&mut m, &mut rhs, rhs_scale) {
            match policy {
                SingularPolicy::Error => {
                    return Err(Error::SingularAtK { k: k_of(&idx, shape) });
                }
                SingularPolicy::Omit => {
                    omitted += if neg_flat == i { 1 } else { 2 };
                    continue;
                }
            }
        }
        let acc = &mut s[idx[axis]];
        for col in 0..nb {
            for row in 0..nb {
                acc[(row, col)] += rhs[row + nb * col];
            }
        }
        if neg_flat != i {
            let acc = &mut s[neg[axis]];
            for col in 0..nb {
                for row in 0..nb {
                    acc[(row, col)] += rhs[row + nb * col].conj();
                }
            }
        }
    }

    // γ(r e_axis) = (1/∏L) Σ_{i_axis} e^{+i k r} Σ_{k⊥} γ̃(k).
    let l = shape[axis];
    let norm = 1.0 / cells as f64;
    let mut values = Vec::with_capacity(max_r + 1);
    let mut imag = 0.0f64;
    let mut scale = 0.0f64;
    for r in 0..=max_r {
        let mut g = CBlock::zeros(nb, nb);
        for (ia, sk) in s.iter().enumerate() {
            let k = 2.0 * std::f64::consts::PI * (ia as f64 + 1.0) / l as f64;
            let ph = Complex64::from_polar(1.0, k * r as f64);
            g.zip_apply(sk, |o, v| *o += ph * v);
        }
        g *= Complex64::new(norm, 0.0);
        for v in g.iter() {
            imag = imag.max(v.im.abs());
            scale = scale.max(v.norm());
        }
        values.push(g.map(|v| v.re));
    }
    let limit = 1e-9 * scale.max(1.0);
    if imag > limit && omitted == 0 {
        return Err(Error::NonRealResult { residue: imag, limit });
    }
    Ok(AxisCorrelations { values, omitted, imaginary_residue: imag })
}

/// Axis correlations extrapolated to the thermodynamic limit from grids of
/// linear size L, 2L, and 4L with the ansatz γ_L = γ_∞ + a/L + b/L³.
pub fn axis_correlations_extrapolated(
    stencil: &CouplingStencil,
    base_shape: &[usize],
    axis: usize,
    max_r: usize,
    policy: SingularPolicy,
) -> Result<AxisCorrelations> {
    let mut runs = Vec::new();
    for scale in [1usize, 2, 4] {
        let shape: Vec<usize> = base_shape.iter().map(|&l| l * scale).collect();
        runs.push(axis_correlations(stencil, &shape, axis, max_r, policy)?);
    }
    let nb = runs[0].values[0].nrows();
    // Solve the 3×3 Vandermonde-like system per entry with s = 1, 1/2, 1/4.
    let v = DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 1.0, 1.0, 1.0, 0.5, 0.125, 1.0, 0.25, 0.015625],
    );
    let lu = v.lu();
    let mut values = Vec::with_capacity(max_r + 1);
    for r in 0..=max_r {
        let mut g = RBlock::zeros(nb, nb);
        for p in 0..nb {
            for q in 0..nb {
                let rhs = nalgebra::DVector::from_vec(vec![
                    runs[0].values[r][(p, q)],
                    runs[1].values[r][(p, q)],
                    runs[2].values[r][(p, q)],
                ]);
                let sol = lu.solve(&rhs).expect("fixed 3x3 system is regular");
                g[(p, q)] = sol[0];
            }
        }
        values.push(g);
    }
    Ok(AxisCorrelations {
        values,
        omitted: runs.iter().map(|a| a.omitted).sum(),
        imaginary_residue: runs.iter().fold(0.0, |m, a| m.max(a.imaginary_residue)),
    })
}

fn assemble(out: &mut CBlock, tab: &[(RBlock, Vec<Vec<Complex64>>)], idx: &[usize]) {
    out.fill(Complex64::new(0.0, 0.0));
    for (blk, per_axis) in tab {
        let mut ph = Complex64::new(1.0, 0.0);
        for (a, &ia) in idx.iter().enumerate() {
            ph *= per_axis[a][ia];
        }
        out.zip_apply(blk, |o, b| *o += ph * b);
    }
}

/// In-place Gaussian elimination with partial pivoting; returns false when a
/// pivot falls below 1e-12 of the problem scale (singular system).  The
/// right-hand-side scale participates so that uniformly tiny systems at a
/// gap closure are flagged rather than solved to huge values.
fn gauss_solve(m: &mut CBlock, rhs: &mut [Complex64], rhs_scale: f64) -> bool {
    let n = m.nrows();
    let scale = m
        .iter()
        .map(|v| v.norm())
        .fold(rhs_scale.max(1e-300), f64::max);
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].norm_sqr();
        for row in col + 1..n {
            let v = m[(row, col)].norm_sqr();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best.sqrt() <= 1e-12 * scale {
            return false;
        }
        if piv != col {
            m.swap_rows(piv, col);
            rhs.swap(piv, col);
        }
        let inv = Complex64::new(1.0, 0.0) / m[(col, col)];
        for row in col + 1..n {
            let f = m[(row, col)] * inv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for c in col + 1..n {
                let sub = f * m[(col, c)];
                m[(row, c)] -= sub;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    for col in (0..n).rev() {
        let mut v = rhs[col];
        for c in col + 1..n {
            v -= m[(col, c)] * rhs[c];
        }
        rhs[col] = v / m[(col, col)];
    }
    true
}
