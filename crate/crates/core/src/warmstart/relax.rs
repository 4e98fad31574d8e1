//! Burer–Monteiro relaxation: objective, Riemannian gradient ascent on the
//! product of unit spheres, and the higher-rank SDP proxy.

use rand_distr::{Distribution, StandardNormal};

use super::{dot, normalize, RelaxedSolution};
use crate::error::{invalid, Result};
use crate::graphs::WeightedGraph;
use crate::seeding::{self, derive_seed};

/// `Σ_(i,j) (w_ij / 2)(1 - x_i·x_j)`, i.e. `Σ (w_ij / 4)‖x_i - x_j‖²`.
pub fn bm_objective(g: &WeightedGraph, x: &RelaxedSolution) -> Result<f64> {
    x.check_graph(g)?;
    Ok(objective_unchecked(g, x.rank, &x.data))
}

fn objective_unchecked(g: &WeightedGraph, rank: usize, data: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| {
            let d = dot(
                &data[e.u * rank..(e.u + 1) * rank],
                &data[e.v * rank..(e.v + 1) * rank],
            );
            0.5 * e.w * (1.0 - d)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmConfig {
    /// Stop once the Riemannian gradient norm falls below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for BmConfig {
    fn default() -> Self {
        BmConfig {
            tol: 1e-8,
            max_iters: 10_000,
        }
    }
}

/// Output of a local Burer–Monteiro solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BmSolution {
    pub solution: RelaxedSolution,
    pub objective: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit before the gradient test passed.
    pub stationary: bool,
}

/// Riemannian gradient (tangent projection of the Euclidean gradient),
/// written into `out`; returns its squared norm.
fn riemannian_gradient(
    adj: &[Vec<(usize, f64)>],
    rank: usize,
    data: &[f64],
    out: &mut [f64],
) -> f64 {
    out.fill(0.0);
    let mut sq = 0.0;
    for (i, nbrs) in adj.iter().enumerate() {
        let gi = &mut out[i * rank..(i + 1) * rank];
        for &(j, w) in nbrs {
            let xj = &data[j * rank..(j + 1) * rank];
            for (a, b) in gi.iter_mut().zip(xj) {
                *a -= 0.5 * w * b;
            }
        }
        let xi = &data[i * rank..(i + 1) * rank];
        let radial = dot(gi, xi);
        for (a, b) in gi.iter_mut().zip(xi) {
            *a -= radial * b;
        }
        sq += dot(gi, gi);
    }
    sq
}

/// Gradient ascent with Armijo backtracking from a uniformly random point.
pub fn bm_local_solve(g: &WeightedGraph, k: usize, seed: u64, cfg: &BmConfig) -> Result<BmSolution> {
    if k < 2 {
        return invalid(format!("rank k = {k} must be at least 2"));
    }
    let mut rng = seeding::rng(seed);
    let n = g.n();
    let start: Vec<f64> = (0..n * k).map(|_| StandardNormal.sample(&mut rng)).collect();
    let start = RelaxedSolution::from_rows_normalized(k, start);
    Ok(ascend(g, start, cfg))
}

fn ascend(g: &WeightedGraph, start: RelaxedSolution, cfg: &BmConfig) -> BmSolution {
    let rank = start.rank;
    let adj = g.adjacency();
    let mut x = start.data;
    let mut f = objective_unchecked(g, rank, &x);
    let mut grad = vec![0.0; x.len()];
    let mut trial = vec![0.0; x.len()];
    let mut step = 1.0;
    let mut iterations = 0;
    let mut grad_sq = riemannian_gradient(&adj, rank, &x, &mut grad);

    let mut trial_grad = vec![0.0; x.len()];
    let mut stationary = grad_sq.sqrt() < cfg.tol;
    while !stationary && iterations < cfg.max_iters {
        iterations += 1;
        let mut t = step;
        let accepted = loop {
            for ((y, a), d) in trial.iter_mut().zip(&x).zip(&grad) {
                *y = a + t * d;
            }
            for row in trial.chunks_mut(rank) {
                normalize(row);
            }
            let ft = objective_unchecked(g, rank, &trial);
            let gain = 0.5 * t * grad_sq;
            if ft >= f + gain {
                break Some(ft);
            }
            // Once the predicted gain is below f64 resolution the objective
            // cannot rank the trial; fall back to a shrinking gradient.
            if gain < 1e-14 * (1.0 + f.abs()) && ft >= f - 1e-14 * (1.0 + f.abs()) {
                let trial_sq = riemannian_gradient(&adj, rank, &trial, &mut trial_grad);
                if trial_sq < grad_sq {
                    break Some(ft);
                }
            }
            t *= 0.5;
            if t < 1e-20 {
                break None;
            }
        };
        match accepted {
            Some(ft) => {
                std::mem::swap(&mut x, &mut trial);
                f = ft;
                step = (2.0 * t).min(1e6);
                grad_sq = riemannian_gradient(&adj, rank, &x, &mut grad);
                stationary = grad_sq.sqrt() < cfg.tol;
            }
            None => break,
        }
    }
    BmSolution {
        solution: RelaxedSolution { rank, data: x },
        objective: f,
        grad_norm: grad_sq.sqrt(),
        iterations,
        stationary,
    }
}

/// Rank used for the SDP proxy: `min(n, ⌈√(2n)⌉ + 1)`, at least 2.
pub fn sdp_rank(n: usize) -> usize {
    let root = (2.0 * n as f64).sqrt().ceil() as usize;
    n.min(root + 1).max(2)
}

/// Best of `restarts` Burer–Monteiro solves at [`sdp_rank`], zero-padded to
/// rank `max(n, 2)`. Stands in for the Goemans–Williamson SDP optimum.
pub fn sdp_solve(g: &WeightedGraph, restarts: usize, seed: u64, cfg: &BmConfig) -> Result<BmSolution> {
    if restarts == 0 {
        return invalid("restarts must be at least 1");
    }
    let k = sdp_rank(g.n());
    let mut best: Option<BmSolution> = None;
    for r in 0..restarts {
        let sol = bm_local_solve(g, k, derive_seed(seed, r as u64), cfg)?;
        if best.as_ref().is_none_or(|b| sol.objective > b.objective) {
            best = Some(sol);
        }
    }
    let mut best = best.expect("restarts >= 1");
    best.solution = best.solution.padded(g.n().max(2));
    Ok(best)
}
