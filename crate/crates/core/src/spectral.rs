//! Dissipative gaps and gapped paths between Liouvillians.
//!
//! For quasifree systems the relaxation rates are governed by the spectrum
//! of x̃(k): the dissipative gap is Δ = −max_k max Re eig x̃(k), and the
//! system is stable iff Δ ≥ 0.  An auxiliary on-site dissipator with rate κ
//! shifts x̃(k) by exactly −κ·1, so the gap increases exactly by κ; this is
//! the mechanism behind connecting two gapped Liouvillians by a continuous
//! path of gapped Liouvillians.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{build_momentum, DenseEvolution};
use crate::lattice::{cell_count, coords_of, k_of};
use crate::stencil::{CouplingStencil, Displacement, Statistics};

/// Dissipative gap at a single point: Δ and the maximizer of the spectral
/// abscissa of x̃(k).
#[derive(Clone, Debug)]
pub struct GapPoint {
    pub gap: f64,
    pub argmax_k: Vec<f64>,
}

/// Gap values along a one-parameter family of Liouvillians.
#[derive(Clone, Debug)]
pub struct GapCurve {
    pub parameters: Vec<f64>,
    pub gaps: Vec<f64>,
    pub argmax_k: Vec<Vec<f64>>,
}

impl GapCurve {
    /// Smallest gap along the curve.
    pub fn min_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices of samples with Δ ≤ 0 (gap closed or unstable).
    pub fn gapless_samples(&self) -> Vec<usize> {
        self.gaps
            .iter()
            .enumerate()
            .filter(|(_, &g)| g <= 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Spectral abscissa of x̃(k).
fn abscissa(stencil: &CouplingStencil, k: &[f64]) -> Result<f64> {
    let (x, _) = build_momentum(stencil, k)?;
    let evs = x.eigenvalues().ok_or(Error::NonFiniteSolve)?;
    Ok(evs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Dissipative gap of a quasifree stencil, Δ = −max_k max Re eig x̃(k),
/// maximized over a uniform momentum grid.  In one dimension the grid
/// maximum is refined by a golden-section search between its neighbors.
pub fn dissipative_gap(stencil: &CouplingStencil, grid: &[usize]) -> Result<GapPoint> {
    assert_eq!(grid.len(), stencil.lattice.dims, "grid must have D components");
    let cells = cell_count(grid);
    let mut best = f64::NEG_INFINITY;
    let mut best_k = vec![0.0; grid.len()];
    for i in 0..cells {
        let idx: Vec<usize> = coords_of(i, grid).iter().map(|&v| v as usize).collect();
        let k = k_of(&idx, grid);
        let a = abscissa(stencil, &k)?;
        if a > best {
            best = a;
            best_k = k;
        }
    }
    if grid.len() == 1 {
        let dk = 2.0 * std::f64::consts::PI / grid[0] as f64;
        let (k, a) = golden_max(|k| abscissa(stencil, &[k]), best_k[0] - dk, best_k[0] + dk)?;
        if a > best {
            best = a;
            best_k = vec![k];
        }
    }
    Ok(GapPoint { gap: -best, argmax_k: best_k })
}

/// Dissipative gap of a dense evolution, Δ = −max Re eig X.
pub fn dissipative_gap_dense(ev: &DenseEvolution) -> f64 {
    let evs = ev.x.complex_eigenvalues();
    -evs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

fn golden_max(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..120 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let k = 0.5 * (a + b);
    Ok((k, f(k)?))
}

/// Append the gap-boosting auxiliary dissipator with rate κ: on-site
/// Lindblad operators √κ·ŵ_{c±} for every fermionic band, or
/// √κ·(ŵ_{c+} − iŵ_{c−}) for every bosonic band.  Either choice shifts
/// x̃(k) by exactly −κ·1.
pub fn append_aux_dissipator(stencil: &CouplingStencil, kappa: f64) -> Result<CouplingStencil> {
    if kappa < 0.0 {
        return Err(Error::NegativeRate { rate: kappa });
    }
    let mut out = stencil.clone();
    if kappa == 0.0 {
        return Ok(out);
    }
    let bands = stencil.lattice.bands;
    let nb = 2 * bands;
    let origin: Displacement = vec![0; stencil.lattice.dims];
    let amp = kappa.sqrt();
    for c in 0..bands {
        match stencil.statistics {
            Statistics::Fermion => {
                for comp in [2 * c, 2 * c + 1] {
                    let mut v = crate::stencil::CVec::zeros(nb);
                    v[comp] = Complex64::new(amp, 0.0);
                    let mut fam = BTreeMap::new();
                    fam.insert(origin.clone(), v);
                    out.add_lindblad_family(fam);
                }
            }
            Statistics::Boson => {
                let mut v = crate::stencil::CVec::zeros(nb);
                v[2 * c] = Complex64::new(amp, 0.0);
                v[2 * c + 1] = Complex64::new(0.0, -amp);
                let mut fam = BTreeMap::new();
                fam.insert(origin.clone(), v);
                out.add_lindblad_family(fam);
            }
        }
    }
    Ok(out)
}

/// A path between two Liouvillians: couplings are interpolated as the
/// convex combination of the endpoint data (Hamiltonian blocks affinely,
/// Lindblad amplitudes with weights √(1−g) and √g so that their dissipators
/// enter affinely), plus the auxiliary dissipator with rate κ.
#[derive(Clone, Debug)]
pub struct PathSpec {
    pub start: CouplingStencil,
    pub end: CouplingStencil,
    /// Piecewise-linear waypoints (g, κ); must begin at (0, 0) and end at
    /// (1, 0).
    pub schedule: Vec<(f64, f64)>,
}

impl PathSpec {
    pub fn new(
        start: CouplingStencil,
        end: CouplingStencil,
        schedule: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if start.statistics != end.statistics || start.lattice != end.lattice {
            return Err(Error::Invalid(
                "path endpoints must share statistics and lattice".into(),
            ));
        }
        if schedule.len() < 2 {
            return Err(Error::Invalid("schedule needs at least two waypoints".into()));
        }
        for &(_, kappa) in &schedule {
            if kappa < 0.0 {
                return Err(Error::NegativeRate { rate: kappa });
            }
        }
        let first = schedule.first().unwrap();
        let last = schedule.last().unwrap();
        if first != &(0.0, 0.0) || last != &(1.0, 0.0) {
            return Err(Error::Invalid(
                "schedule must start at (g, κ) = (0, 0) and end at (1, 0)".into(),
            ));
        }
        Ok(PathSpec { start, end, schedule })
    }

    /// The default four-leg schedule (0,0) → (0,κ₀) → (1,κ₀) → (1,0).
    pub fn default_schedule(kappa0: f64) -> Vec<(f64, f64)> {
        vec![(0.0, 0.0), (0.0, kappa0), (1.0, kappa0), (1.0, 0.0)]
    }

    /// Piecewise-linear (g, κ) at path parameter t ∈ [0, 1], uniform in the
    /// segment index.
    pub fn at(&self, t: f64) -> (f64, f64) {
        let segs = self.schedule.len() - 1;
        let s = (t.clamp(0.0, 1.0) * segs as f64).min(segs as f64 - 1e-12);
        let i = s.floor() as usize;
        let f = s - i as f64;
        let (g0, k0) = self.schedule[i];
        let (g1, k1) = self.schedule[i + 1];
        (g0 + f * (g1 - g0), k0 + f * (k1 - k0))
    }

    /// The interpolated stencil at path parameter t, including the κ(t)
    /// auxiliary dissipator.
    pub fn stencil_at(&self, t: f64) -> Result<CouplingStencil> {
        let (g, kappa) = self.at(t);
        let mixed = interpolate_stencils(&self.start, &self.end, g)?;
        append_aux_dissipator(&mixed, kappa)
    }
}

/// Convex combination of two coupling stencils: h ← (1−g)h₁ + g h₂; the
/// Lindblad and quadratic families of both endpoints are carried with
/// amplitudes scaled by √(1−g) and √g, so every dissipator contributes
/// affinely to the Liouvillian.
pub fn interpolate_stencils(
    s1: &CouplingStencil,
    s2: &CouplingStencil,
    g: f64,
) -> Result<CouplingStencil> {
    if s1.statistics != s2.statistics || s1.lattice != s2.lattice {
        return Err(Error::Invalid(
            "interpolation endpoints must share statistics and lattice".into(),
        ));
    }
    let g = g.clamp(0.0, 1.0);
    let mut out = CouplingStencil::new(s1.statistics, s1.lattice.clone());
    let nb = 2 * s1.lattice.bands;
    let mut h: BTreeMap<Displacement, crate::stencil::CBlock> = BTreeMap::new();
    for (w, src) in [(1.0 - g, s1), (g, s2)] {
        for (r, blk) in src.hamiltonian() {
            let e = h
                .entry(r.clone())
                .or_insert_with(|| crate::stencil::CBlock::zeros(nb, nb));
            *e += blk.scale(w);
        }
    }
    out.set_hamiltonian(h);
    for (w, src) in [(1.0 - g, s1), (g, s2)] {
        if w == 0.0 {
            continue;
        }
        let amp = Complex64::new(w.sqrt(), 0.0);
        for fam in src.lindblad_families() {
            let scaled: BTreeMap<_, _> =
                fam.iter().map(|(r, v)| (r.clone(), v * amp)).collect();
            out.add_lindblad_family(scaled);
        }
        for fam in src.quadratic_families() {
            let scaled: BTreeMap<_, _> =
                fam.iter().map(|(rr, m)| (rr.clone(), m * amp)).collect();
            out.add_quadratic_family(scaled);
        }
    }
    Ok(out)
}

/// Sample the dissipative gap along a path of Liouvillians.
pub fn gap_along_path(path: &PathSpec, grid: &[usize], samples: usize) -> Result<GapCurve> {
    assert!(samples >= 2, "need at least the two path endpoints");
    let mut parameters = Vec::with_capacity(samples);
    let mut gaps = Vec::with_capacity(samples);
    let mut argmax_k = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let stencil = path.stencil_at(t)?;
        let point = dissipative_gap(&stencil, grid)?;
        parameters.push(t);
        gaps.push(point.gap);
        argmax_k.push(point.argmax_k);
    }
    Ok(GapCurve { parameters, gaps, argmax_k })
}

/// Gap curve along a family of stencils φ ↦ stencil(φ) with an auxiliary
/// dissipation schedule κ(t), t ∈ [0, 1].  This covers parameter-space
/// paths (such as winding the XY-chain dissipation phase through a gapless
/// point) that are not convex combinations of their endpoints.
pub fn gap_along_family(
    stencil_at: impl Fn(f64) -> CouplingStencil,
    kappa_at: impl Fn(f64) -> f64,
    grid: &[usize],
    samples: usize,
) -> Result<GapCurve> {
    assert!(samples >= 2, "need at least the two path endpoints");
    let mut parameters = Vec::with_capacity(samples);
    let mut gaps = Vec::with_capacity(samples);
    let mut argmax_k = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let kappa = kappa_at(t);
        if kappa < 0.0 {
            return Err(Error::NegativeRate { rate: kappa });
        }
        let stencil = append_aux_dissipator(&stencil_at(t), kappa)?;
        let point = dissipative_gap(&stencil, grid)?;
        parameters.push(t);
        gaps.push(point.gap);
        argmax_k.push(point.argmax_k);
    }
    Ok(GapCurve { parameters, gaps, argmax_k })
}
