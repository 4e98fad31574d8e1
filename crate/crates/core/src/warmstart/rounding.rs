//! Hyperplane rounding and unit-scale projection onto random subspaces.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{dot, RelaxedSolution};
use crate::error::{invalid, Result};
use crate::graphs::{Cut, WeightedGraph};

/// Expected cut of random-hyperplane rounding: `Σ w_ij arccos(x_i·x_j) / π`.
pub fn hyperplane_expected_cut(g: &WeightedGraph, x: &RelaxedSolution) -> Result<f64> {
    x.check_graph(g)?;
    Ok(g.edges()
        .iter()
        .map(|e| e.w * x.dot(e.u, e.v).acos() / std::f64::consts::PI)
        .sum())
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

/// Side 0 holds the vectors with positive projection on a Gaussian normal.
/// An exact zero projection triggers a redraw of the normal.
pub fn hyperplane_round<R: Rng + ?Sized>(x: &RelaxedSolution, rng: &mut R) -> Cut {
    loop {
        let r = gaussian(rng, x.rank());
        let proj: Vec<f64> = x.vectors().map(|v| dot(v, &r)).collect();
        if proj.iter().all(|&p| p != 0.0) {
            return Cut::new(proj.into_iter().map(|p| p <= 0.0).collect());
        }
    }
}

/// Orthonormal basis (rows) of a uniformly random `k`-dimensional subspace
/// of `R^dim`, by Gram–Schmidt on Gaussian vectors.
fn random_subspace<R: Rng + ?Sized>(rng: &mut R, k: usize, dim: usize) -> Vec<Vec<f64>> {
    'draw: loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut v = gaussian(rng, dim);
            for b in &basis {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(a, bb)| *a -= c * bb);
            }
            let norm = dot(&v, &v).sqrt();
            if norm < 1e-10 {
                continue 'draw;
            }
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
        return basis;
    }
}

/// Unit-scale projection `Π_A(x_i) / ‖Π_A(x_i)‖` onto a uniformly random
/// `k`-dimensional subspace `A`, expressed in an orthonormal basis of `A`.
/// A vanishing projection redraws `A`.
pub fn project_to_subspace<R: Rng + ?Sized>(
    x: &RelaxedSolution,
    k: usize,
    rng: &mut R,
) -> Result<RelaxedSolution> {
    if k == 0 || k >= x.rank() {
        return invalid(format!(
            "subspace dimension {k} must lie in [1, rank = {})",
            x.rank()
        ));
    }
    loop {
        let basis = random_subspace(rng, k, x.rank());
        if let Some(y) = project_onto(x, &basis) {
            return Ok(y);
        }
    }
}

/// Unit-scale projection onto the span of orthonormal `basis` rows; `None`
/// if some vector projects to zero.
fn project_onto(x: &RelaxedSolution, basis: &[Vec<f64>]) -> Option<RelaxedSolution> {
    let mut data = Vec::with_capacity(basis.len() * x.len());
    for v in x.vectors() {
        let coords: Vec<f64> = basis.iter().map(|b| dot(b, v)).collect();
        if dot(&coords, &coords).sqrt() < 1e-12 {
            return None;
        }
        data.extend(coords);
    }
    Some(RelaxedSolution::from_rows_normalized(basis.len(), data))
}

/// Project to a random `k`-dimensional subspace, then hyperplane-round there.
pub fn two_step_round<R: Rng + ?Sized>(
    x: &RelaxedSolution,
    k: usize,
    rng: &mut R,
) -> Result<Cut> {
    let projected = project_to_subspace(x, k, rng)?;
    Ok(hyperplane_round(&projected, rng))
}
