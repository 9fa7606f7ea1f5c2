//! Index bookkeeping for periodic lattices and momentum grids.
//!
//! Cells are enumerated row-major; momentum grids use the Brillouin-zone
//! convention k_a = 2π(i_a + 1)/L_a with i_a = 0..L_a−1, i.e. k_a ∈ (0, 2π].

use std::f64::consts::PI;

/// Number of cells of a finite lattice.
pub fn cell_count(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// Row-major index of a cell given (possibly out-of-range) coordinates,
/// wrapped periodically.
pub fn wrap_index(coords: &[i64], shape: &[usize]) -> usize {
    let mut idx = 0usize;
    for (c, &l) in coords.iter().zip(shape) {
        let l = l as i64;
        idx = idx * (l as usize) + (c.rem_euclid(l)) as usize;
    }
    idx
}

/// Coordinates of the cell with the given row-major index.
pub fn coords_of(index: usize, shape: &[usize]) -> Vec<i64> {
    let mut rem = index;
    let mut out = vec![0i64; shape.len()];
    for a in (0..shape.len()).rev() {
        out[a] = (rem % shape[a]) as i64;
        rem /= shape[a];
    }
    out
}

/// Momentum vector of a grid point with the given per-axis indices.
pub fn k_of(indices: &[usize], shape: &[usize]) -> Vec<f64> {
    indices
        .iter()
        .zip(shape)
        .map(|(&i, &l)| 2.0 * PI * (i as f64 + 1.0) / l as f64)
        .collect()
}

/// Per-axis indices of the grid point representing −k (k_a ↦ 2π − k_a,
/// modulo the grid).
pub fn negated_indices(indices: &[usize], shape: &[usize]) -> Vec<usize> {
    indices
        .iter()
        .zip(shape)
        .map(|(&i, &l)| (2 * l - 2 - i) % l)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_index_is_periodic() {
        let shape = [4usize, 3];
        assert_eq!(wrap_index(&[0, 0], &shape), 0);
        assert_eq!(wrap_index(&[1, 2], &shape), 5);
        assert_eq!(wrap_index(&[-3, 5], &shape), wrap_index(&[1, 2], &shape));
        for idx in 0..cell_count(&shape) {
            assert_eq!(wrap_index(&coords_of(idx, &shape), &shape), idx);
        }
    }

    #[test]
    fn momentum_grid_covers_open_zero_closed_two_pi() {
        let shape = [4usize];
        let k0 = k_of(&[0], &shape)[0];
        let klast = k_of(&[3], &shape)[0];
        assert!((k0 - PI / 2.0).abs() < 1e-15);
        assert!((klast - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn negated_indices_pair_k_with_minus_k() {
        let shape = [6usize];
        for i in 0..6 {
            let j = negated_indices(&[i], &shape)[0];
            let k = k_of(&[i], &shape)[0];
            let kn = k_of(&[j], &shape)[0];
            let s = (k + kn) % (2.0 * PI);
            assert!(s.abs() < 1e-12 || (s - 2.0 * PI).abs() < 1e-12);
        }
    }
}
