//! Best-of-N warm-start selection followed by rotated Bloch initializations.
//!
//! Seed streams derived from the master seed with [`derive_seed`]:
//! attempt `a` uses index `a`, the SDP solve uses `SDP_STREAM`, and rotation
//! `r` uses `ROTATION_STREAM + r`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    bm_local_solve, bm_objective, hyperplane_expected_cut, project_to_subspace, rotate_uniform,
    rotate_vertex_at_top, sdp_solve, to_bloch, BlochAngles, BmConfig, RelaxedSolution,
};
use crate::error::{invalid, Result};
use crate::graphs::{CutExtremes, WeightedGraph};
use crate::seeding::{self, derive_seed};

const SDP_STREAM: u64 = 1 << 32;
const ROTATION_STREAM: u64 = 2 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarmstartMethod {
    /// Local optima of the rank-k Burer–Monteiro relaxation.
    Bm,
    /// SDP solution projected to random k-dimensional subspaces.
    GwProjected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationScheme {
    Uniform,
    VertexAtTop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarmstartConfig {
    pub method: WarmstartMethod,
    pub rank: usize,
    pub attempts: usize,
    pub rotation: RotationScheme,
    pub rotations_per_solution: usize,
    pub seed: u64,
    /// Restarts of the SDP proxy solve (projected method only).
    pub sdp_restarts: usize,
    pub bm: BmConfig,
}

impl Default for WarmstartConfig {
    fn default() -> Self {
        WarmstartConfig {
            method: WarmstartMethod::Bm,
            rank: 2,
            attempts: 5,
            rotation: RotationScheme::VertexAtTop,
            rotations_per_solution: 5,
            seed: 0,
            sdp_restarts: 3,
            bm: BmConfig::default(),
        }
    }
}

/// Summary of the selected relaxed solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarmstartReport {
    pub method: WarmstartMethod,
    pub rank: usize,
    pub attempts: usize,
    pub bm_objective: f64,
    pub hp_expected: f64,
    /// `bm_objective / MaxCut`, when the max cut is known.
    pub kappa_close: Option<f64>,
    /// `hp_expected / MaxCut`, when the max cut is known.
    pub kappa_approx: Option<f64>,
    pub seed: u64,
    pub rotation: RotationScheme,
    /// Whether the underlying Burer–Monteiro solve met its gradient tolerance.
    pub stationary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warmstart {
    pub solution: RelaxedSolution,
    pub initializations: Vec<BlochAngles>,
    pub report: WarmstartReport,
}

fn rotated<R: Rng + ?Sized>(
    x: &RelaxedSolution,
    scheme: RotationScheme,
    rng: &mut R,
) -> Result<RelaxedSolution> {
    match scheme {
        RotationScheme::Uniform => rotate_uniform(x, rng),
        RotationScheme::VertexAtTop => rotate_vertex_at_top(x, rng.random_range(0..x.len())),
    }
}

/// Runs `attempts` solves (or projections), keeps the best by Burer–Monteiro
/// objective, and emits `rotations_per_solution` rotated initializations.
pub fn select_warmstart(
    g: &WeightedGraph,
    cfg: &WarmstartConfig,
    extremes: Option<&CutExtremes>,
) -> Result<Warmstart> {
    if cfg.attempts == 0 {
        return invalid("attempts must be at least 1");
    }
    if !(cfg.rank == 2 || cfg.rank == 3) {
        return invalid(format!("warm-start rank must be 2 or 3, got {}", cfg.rank));
    }

    let mut candidates = Vec::with_capacity(cfg.attempts);
    let stationary;
    match cfg.method {
        WarmstartMethod::Bm => {
            let mut all_stationary = true;
            for a in 0..cfg.attempts {
                let s = bm_local_solve(g, cfg.rank, derive_seed(cfg.seed, a as u64), &cfg.bm)?;
                all_stationary &= s.stationary;
                candidates.push((s.objective, s.solution));
            }
            stationary = all_stationary;
        }
        WarmstartMethod::GwProjected => {
            let sdp = sdp_solve(
                g,
                cfg.sdp_restarts.max(1),
                derive_seed(cfg.seed, SDP_STREAM),
                &cfg.bm,
            )?;
            stationary = sdp.stationary;
            for a in 0..cfg.attempts {
                let mut rng = seeding::rng(derive_seed(cfg.seed, a as u64));
                let y = project_to_subspace(&sdp.solution, cfg.rank, &mut rng)?;
                candidates.push((bm_objective(g, &y)?, y));
            }
        }
    }
    // First attempt wins ties.
    let (objective, solution) = candidates
        .into_iter()
        .reduce(|best, c| if c.0 > best.0 { c } else { best })
        .expect("attempts >= 1");

    let initializations = (0..cfg.rotations_per_solution)
        .map(|r| {
            let mut rng = seeding::rng(derive_seed(cfg.seed, ROTATION_STREAM + r as u64));
            to_bloch(&rotated(&solution, cfg.rotation, &mut rng)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let hp_expected = hyperplane_expected_cut(g, &solution)?;
    let max_cut = extremes.map(|e| e.max_cut).filter(|&m| m != 0.0);
    let report = WarmstartReport {
        method: cfg.method,
        rank: cfg.rank,
        attempts: cfg.attempts,
        bm_objective: objective,
        hp_expected,
        kappa_close: max_cut.map(|m| objective / m),
        kappa_approx: max_cut.map(|m| hp_expected / m),
        seed: cfg.seed,
        rotation: cfg.rotation,
        stationary,
    };
    Ok(Warmstart {
        solution,
        initializations,
        report,
    })
}
