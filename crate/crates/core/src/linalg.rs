//! Dense complex linear-algebra kernels shared by the solvers: a
//! Bartels–Stewart Sylvester/Lyapunov solver built on the complex Schur
//! decomposition, Kronecker-vectorized small solves with SVD rank
//! diagnostics, polynomial root finding via companion matrices, and
//! least-squares helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVecN = DVector<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative threshold below which eigenvalue sums and singular values are
/// treated as zero.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Promote a real matrix to a complex one.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Largest entry modulus (zero for empty matrices).
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a dense complex matrix via the complex Schur form.  More
/// robust on (near-)degenerate spectra than the real-Schur route.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let schur =
        nalgebra::Schur::try_new(m.clone(), 1e-14, 1_000_000).ok_or(Error::NonFiniteSolve)?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Solver for the continuous-time equation A·G + G·Aᵀ = C (note the
/// transpose, not the adjoint: this is the form obeyed by covariance
/// matrices).  The Schur factorization A = Q T Q^H is computed once and
/// reused across right-hand sides.
pub struct LyapunovSolver {
    q: CMat,
    t: CMat,
    scale: f64,
}

impl LyapunovSolver {
    /// Factorize the complex matrix `a`.
    pub fn new(a: CMat) -> Result<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "Lyapunov solver needs a square matrix");
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteSolve);
        }
        let scale = max_abs(&a).max(1.0);
        let schur = nalgebra::Schur::try_new(a, 1e-14, 1_000_000).ok_or(Error::NonFiniteSolve)?;
        let (q, t) = schur.unpack();
        Ok(LyapunovSolver { q, t, scale })
    }

    /// Factorize a real matrix.
    pub fn new_real(a: &DMatrix<f64>) -> Result<Self> {
        Self::new(complexify(a))
    }

    /// Eigenvalues of A (the diagonal of the Schur factor).
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Solve A·G + G·Aᵀ = C for G.  Fails with `SingularSteadyState` when
    /// an eigenvalue pair satisfies λ_i + λ_j ≈ 0, which is exactly the
    /// degenerate case of a non-unique (or non-existent) steady state.
    pub fn solve(&self, c: &CMat) -> Result<CMat> {
        let n = self.t.nrows();
        assert_eq!((c.nrows(), c.ncols()), (n, n), "right-hand side must match A");
        // Transform C into the Schur basis: F = Q^H C conj(Q).
        let f = self.q.adjoint() * c * self.q.conjugate();
        let mut g = CMat::zeros(n, n);
        // T Gt + Gt Tᵀ = F with T upper triangular: sweep columns j from the
        // last to the first; column j sees already-computed columns i > j
        // through Gt[:,i]·T[j,i].
        for j in (0..n).rev() {
            let mut rhs = f.column(j).clone_owned();
            for i in (j + 1)..n {
                let tji = self.t[(j, i)];
                if tji.norm() != 0.0 {
                    rhs.axpy(-tji, &g.column(i).clone_owned(), ONE);
                }
            }
            // Back-substitution on (T + T_jj·1) x = rhs.
            let tjj = self.t[(j, j)];
            for i in (0..n).rev() {
                let diag = self.t[(i, i)] + tjj;
                if diag.norm() < SINGULARITY_RTOL * self.scale {
                    return Err(Error::SingularSteadyState);
                }
                let xi = rhs[i] / diag;
                rhs[i] = xi;
                for row in 0..i {
                    let tri = self.t[(row, i)];
                    if tri.norm() != 0.0 {
                        rhs[row] -= tri * xi;
                    }
                }
            }
            g.set_column(j, &rhs);
        }
        let out = &self.q * g * self.q.transpose();
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteSolve);
        }
        Ok(out)
    }
}

/// Solve the generalized pair equation A·G + G·B = C by Kronecker
/// vectorization and SVD, for small dimensions (the system is n²×n²).
/// Returns `None` when the linear map is numerically singular.
pub fn solve_pair_kron(a: &CMat, b: &CMat, c: &CMat) -> Option<CMat> {
    let n = a.nrows();
    let eye = CMat::identity(n, n);
    // Column-major vectorization: vec(A G) = (1⊗A) vec G, vec(G B) = (Bᵀ⊗1) vec G.
    let m = eye.kronecker(a) + b.transpose().kronecker(&eye);
    let rhs = CVecN::from_column_slice(c.as_slice());
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 || svd.singular_values.min() < SINGULARITY_RTOL * smax {
        return None;
    }
    let sol = svd.solve(&rhs, 0.0).ok()?;
    Some(CMat::from_column_slice(n, n, sol.as_slice()))
}

/// Least-squares solve min ‖A x − b‖₂ via SVD with relative cutoff.
pub fn lstsq(a: &CMat, b: &CVecN) -> Result<CVecN> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(b, SINGULARITY_RTOL * smax.max(f64::MIN_POSITIVE))
        .map_err(|_| Error::NonFiniteSolve)
}

/// Right-singular vector of the smallest singular value of A, together with
/// that singular value.  Used for homogeneous least-squares fits A x ≈ 0.
pub fn min_singular_vector(a: &CMat) -> (CVecN, f64) {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("SVD with right singular vectors");
    let (mut idx, mut smin) = (0usize, f64::INFINITY);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < smin {
            smin = *s;
            idx = i;
        }
    }
    (vt.row(idx).adjoint(), smin)
}

/// Roots of the polynomial c₀ + c₁ z + … + c_n zⁿ (coefficients in
/// ascending order), via the eigenvalues of the companion matrix.  Leading
/// and trailing near-zero coefficients are stripped relative to the largest
/// coefficient; trailing zeros contribute roots at z = 0.
pub fn polynomial_roots(coefficients: &[Complex64]) -> Vec<Complex64> {
    let scale = coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let tol = 1e-14 * scale;
    let mut hi = coefficients.len();
    while hi > 0 && coefficients[hi - 1].norm() <= tol {
        hi -= 1;
    }
    let mut lo = 0usize;
    while lo < hi && coefficients[lo].norm() <= tol {
        lo += 1;
    }
    if hi <= lo + 1 {
        // Constant polynomial (after stripping): only the z = 0 roots remain.
        return vec![Complex64::new(0.0, 0.0); lo.min(coefficients.len().saturating_sub(1))];
    }
    let c = &coefficients[lo..hi];
    let n = c.len() - 1;
    let lead = c[n];
    let mut comp = CMat::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); lo];
    match nalgebra::Schur::try_new(comp, 1e-14, 1_000_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            roots.extend((0..n).map(|i| t[(i, i)]));
        }
        None => return roots,
    }
    roots
}
