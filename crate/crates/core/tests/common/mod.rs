//! Shared helpers for the integration suites: seeded random model
//! generators with guaranteed damping, so every sampled Liouvillian has a
//! unique steady state and a strictly positive dissipative gap.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lindlat::stencil::{CBlock, CVec, CouplingStencil, LatticeSpec, Statistics};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_block(rng: &mut ChaCha8Rng, nb: usize, scale: f64) -> CBlock {
    DMatrix::from_fn(nb, nb, |_, _| random_complex(rng) * scale)
}

fn displacements(dims: usize, range: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-range..=range).map(move |c| {
                    let mut r = prefix.clone();
                    r.push(c);
                    r
                })
            })
            .collect();
    }
    out
}

/// A random finite-range quasifree model: a raw Hamiltonian stencil
/// (canonicalized onto the symmetry class), a couple of random linear
/// Lindblad families and guaranteed on-site damping with rate `damping` —
/// √damping·ŵ_j per Majorana component for fermions, the lossy mode
/// √damping·(ŵ_{c+} − iŵ_{c−}) per band for bosons.  The Hamiltonian and
/// random-jump amplitudes are kept small against the damping so that bosonic
/// samples stay dynamically stable.
pub fn random_stencil(
    rng: &mut ChaCha8Rng,
    statistics: Statistics,
    dims: usize,
    bands: usize,
    range: i64,
    damping: f64,
) -> CouplingStencil {
    let mut s = CouplingStencil::new(statistics, LatticeSpec::infinite(dims, bands));
    let nb = 2 * bands;
    // Bosonic random couplings must stay well below the guaranteed loss:
    // squeezing terms in H and gain-like linear jumps both push rapidity
    // real parts upward, so their scale shrinks with the stencil size.
    let n_disp = (2 * range + 1).pow(dims as u32) as f64;
    let (h_scale, l_scale) = match statistics {
        Statistics::Fermion => (0.7, 0.5),
        Statistics::Boson => (
            0.1 * damping / n_disp,
            0.15 * damping.sqrt() / n_disp.sqrt(),
        ),
    };

    let mut h = BTreeMap::new();
    for r in displacements(dims, range) {
        h.insert(r, random_block(rng, nb, h_scale));
    }
    s.set_hamiltonian_raw(h);

    for _ in 0..2 {
        let mut fam = BTreeMap::new();
        for r in displacements(dims, range) {
            fam.insert(r, DVector::from_fn(nb, |_, _| random_complex(rng) * l_scale));
        }
        s.add_lindblad_family(fam);
    }

    match statistics {
        Statistics::Fermion => {
            for j in 0..nb {
                let mut fam = BTreeMap::new();
                let mut v: CVec = DVector::zeros(nb);
                v[j] = Complex64::new(damping.sqrt(), 0.0);
                fam.insert(vec![0i64; dims], v);
                s.add_lindblad_family(fam);
            }
        }
        Statistics::Boson => {
            for c in 0..bands {
                let mut fam = BTreeMap::new();
                let mut v: CVec = DVector::zeros(nb);
                v[2 * c] = Complex64::new(damping.sqrt(), 0.0);
                v[2 * c + 1] = Complex64::new(0.0, -damping.sqrt());
                fam.insert(vec![0i64; dims], v);
                s.add_lindblad_family(fam);
            }
        }
    }
    s
}

/// A random fermionic model as in [`random_stencil`], optionally with one
/// small quadratic Lindblad family.
pub fn random_fermion_stencil(
    rng: &mut ChaCha8Rng,
    dims: usize,
    bands: usize,
    range: i64,
    damping: f64,
    quadratic: bool,
) -> CouplingStencil {
    let mut s = random_stencil(rng, Statistics::Fermion, dims, bands, range, damping);

    if quadratic {
        let mut fam = BTreeMap::new();
        let pairs = displacements(dims, 1);
        for r in pairs.iter().take(2) {
            fam.insert((vec![0i64; dims], r.clone()), random_block(rng, 2 * bands, 0.15));
        }
        s.add_quadratic_family_raw(fam);
    }
    s
}
