//! Dense matrices for checking the spectral claims on small instances.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CostDiagonal, MixerSpec};
use crate::config::{check_cap, Limits, TOL};
use crate::error::{invalid, Error, Result};

pub type DenseMatrix = DMatrix<Complex64>;

/// Kronecker sum `Σ_j I ⊗ … ⊗ H_{B,j} ⊗ … ⊗ I` with qubit `j` at bit `j`.
pub fn mixer_matrix(m: &MixerSpec) -> Result<DenseMatrix> {
    let n = m.len();
    check_cap("dense matrix", n, Limits::from_env().dense)?;
    let dim = 1usize << n;
    let mut h = DenseMatrix::zeros(dim, dim);
    for (j, &[x, y, z]) in m.axes().iter().enumerate() {
        let local = [
            Complex64::new(z, 0.0),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            Complex64::new(-z, 0.0),
        ];
        for r in 0..dim {
            let rb = r >> j & 1;
            h[(r, r)] += local[3 * rb];
            h[(r, r ^ (1 << j))] += local[2 * rb + (1 - rb)];
        }
    }
    Ok(h)
}

/// `(1 - t) H_B + t diag(d)`.
pub fn interpolated_hamiltonian(m: &MixerSpec, d: &CostDiagonal, t_frac: f64) -> Result<DenseMatrix> {
    if !(0.0..=1.0).contains(&t_frac) {
        return invalid(format!("t_frac {t_frac} outside [0, 1]"));
    }
    super::check_len(m.len(), d.n())?;
    let mut h = mixer_matrix(m)? * Complex64::new(1.0 - t_frac, 0.0);
    for (b, &c) in d.values().iter().enumerate() {
        h[(b, b)] += t_frac * c;
    }
    Ok(h)
}

fn hermiticity_error(h: &DenseMatrix) -> f64 {
    (h - h.adjoint()).camax()
}

/// Real spectrum of a Hermitian matrix, largest first.
pub fn hermitian_eigenvalues(h: &DenseMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    let err = hermiticity_error(h);
    if err > TOL.entry * (1.0 + h.camax()) {
        return Err(Error::NonHermitian(err));
    }
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// `λ_1 - λ_2`, counting multiplicity.
pub fn eigen_gap(h: &DenseMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(h)?;
    if ev.len() < 2 {
        return invalid("eigen gap needs at least a 2x2 matrix");
    }
    Ok(ev[0] - ev[1])
}

/// Real entries with non-negative off-diagonals.
pub fn is_stoquastic(h: &DenseMatrix) -> bool {
    h.iter().all(|z| z.im.abs() < TOL.entry)
        && (0..h.nrows())
            .flat_map(|r| (0..h.ncols()).map(move |c| (r, c)))
            .all(|(r, c)| r == c || h[(r, c)].re >= -TOL.entry)
}

/// Strong connectivity of the graph with an edge `i → j` wherever
/// `|h_ij| > 1e-12`, `i ≠ j`.
pub fn is_irreducible(h: &DenseMatrix) -> bool {
    let dim = h.nrows();
    if dim != h.ncols() {
        return false;
    }
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; dim];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..dim {
                let entry = if forward { h[(i, j)] } else { h[(j, i)] };
                if !seen[j] && i != j && entry.norm() > TOL.entry {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == dim
    };
    dim > 0 && reaches_all(true) && reaches_all(false)
}
