//! Variational search over `(γ, β)`: finite-difference gradient ascent with a
//! backtracking line search, seeded multistart and `p = 1` grid scans.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graphs::WeightedGraph;
use crate::seeding::{self, derive_seed};
use crate::simulator::{MixerSpec, QaoaCircuit, QaoaParams};
use crate::warmstart::BlochAngles;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    /// Initial angles are drawn from `Uniform[0, init_scale]`.
    pub init_scale: f64,
    /// Stop once an accepted step gains less than `W̄ · termination_tol_factor`.
    pub termination_tol_factor: f64,
    pub max_iters: usize,
    /// Central-difference step.
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            init_scale: 0.01,
            termination_tol_factor: 1e-6,
            max_iters: 2000,
            fd_step: 1e-4,
            seed: 0,
        }
    }
}

impl OptConfig {
    fn validate(&self) -> Result<()> {
        let positive = [self.init_scale, self.termination_tol_factor, self.fd_step]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive || self.max_iters == 0 {
            return invalid(format!("optimizer settings must be positive: {self:?}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub params: QaoaParams,
    pub best_value: f64,
    /// `F_p` at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Finite-difference gradient norm at `params`.
    pub grad_norm: f64,
}

impl OptResult {
    pub fn to_json(&self, with_trace: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data serializes");
        if !with_trace {
            v.as_object_mut().expect("struct").remove("trace");
        }
        v
    }
}

fn fd_gradient(circuit: &QaoaCircuit, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = circuit.expectation(&QaoaParams::from_flat(&probe))?;
        probe[i] = x[i] - h;
        let down = circuit.expectation(&QaoaParams::from_flat(&probe))?;
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * h);
    }
    Ok(grad)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn random_start(p: usize, cfg: &OptConfig, seed: u64) -> QaoaParams {
    let mut rng = seeding::rng(seed);
    let flat: Vec<f64> = (0..2 * p).map(|_| rng.random_range(0.0..cfg.init_scale)).collect();
    QaoaParams::from_flat(&flat)
}

/// Gradient ascent from `start`. Step lengths come from the Barzilai–Borwein
/// estimate and are halved until `F` rises by the Armijo margin. The run
/// stops when an accepted step gains less than `W̄ · termination_tol_factor`
/// and the gradient norm is at most `10 · fd_step · W̄`, or when no ascent
/// step can be found.
pub fn optimize_from(
    circuit: &QaoaCircuit,
    w_bar: f64,
    start: &QaoaParams,
    cfg: &OptConfig,
) -> Result<OptResult> {
    cfg.validate()?;
    let mut x = start.to_flat();
    let mut f = circuit.expectation(start)?;
    let mut trace = vec![f];
    if x.is_empty() {
        return Ok(OptResult {
            params: start.clone(),
            best_value: f,
            trace,
            converged: true,
            iterations: 0,
            grad_norm: 0.0,
        });
    }
    let threshold = w_bar * cfg.termination_tol_factor;
    let grad_tol = 10.0 * cfg.fd_step * w_bar;
    let mut g = fd_gradient(circuit, &x, cfg.fd_step)?;
    let mut t = 0.1 / norm(&g).max(1e-12);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let gn = norm(&g);
        if gn == 0.0 {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut step = t;
        while step * gn > 1e-15 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let ft = circuit.expectation(&QaoaParams::from_flat(&trial))?;
            if ft >= f + 1e-4 * step * gn * gn && ft > f {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            converged = gn <= grad_tol;
            break;
        };
        let g_new = fd_gradient(circuit, &x_new, cfg.fd_step)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(g_new.iter().zip(&g)).map(|(a, (b, c))| a * (b - c)).sum();
        let gain = f_new - f;
        t = if sy < 0.0 {
            (s.iter().map(|a| a * a).sum::<f64>() / -sy).clamp(1e-6, 1e3)
        } else {
            (2.0 * step).min(1e3)
        };
        x = x_new;
        f = f_new;
        g = g_new;
        trace.push(f);
        if gain < threshold && norm(&g) <= grad_tol {
            converged = true;
            break;
        }
    }
    Ok(OptResult {
        params: QaoaParams::from_flat(&x),
        best_value: f,
        trace,
        converged,
        iterations,
        grad_norm: norm(&g),
    })
}

/// Optimizes `F_p` from a seeded start near zero. `p = 0` evaluates the
/// initial state.
pub fn optimize(
    g: &WeightedGraph,
    s: &BlochAngles,
    m: &MixerSpec,
    p: usize,
    cfg: &OptConfig,
) -> Result<OptResult> {
    let circuit = QaoaCircuit::new(g, s, m)?;
    optimize_from(&circuit, g.total_abs_weight(), &random_start(p, cfg, cfg.seed), cfg)
}

/// Seed of start `i`: the configured seed for `i = 0`, a derived one after.
fn start_seed(cfg: &OptConfig, i: usize) -> u64 {
    if i == 0 {
        cfg.seed
    } else {
        derive_seed(cfg.seed, i as u64)
    }
}

fn best_of(results: Vec<OptResult>) -> OptResult {
    // Earliest start wins ties.
    results
        .into_iter()
        .reduce(|best, r| if r.best_value > best.best_value { r } else { best })
        .expect("at least one start")
}

/// Best of `starts` independent seeded runs, optionally adding runs seeded
/// from `extra_starts`.
pub fn multistart_from(
    circuit: &QaoaCircuit,
    w_bar: f64,
    p: usize,
    starts: usize,
    extra_starts: &[QaoaParams],
    cfg: &OptConfig,
) -> Result<OptResult> {
    if starts == 0 && extra_starts.is_empty() {
        return invalid("multistart needs at least one start");
    }
    let mut points: Vec<QaoaParams> = extra_starts.to_vec();
    points.extend((0..starts).map(|i| random_start(p, cfg, start_seed(cfg, i))));
    let results = points
        .par_iter()
        .map(|x| optimize_from(circuit, w_bar, x, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(best_of(results))
}

pub fn multistart(
    g: &WeightedGraph,
    s: &BlochAngles,
    m: &MixerSpec,
    p: usize,
    starts: usize,
    cfg: &OptConfig,
) -> Result<OptResult> {
    if starts == 0 {
        return invalid("multistart needs at least one start");
    }
    let circuit = QaoaCircuit::new(g, s, m)?;
    multistart_from(&circuit, g.total_abs_weight(), p, starts, &[], cfg)
}

/// Evenly spaced points from `lo` to `hi` inclusive.
fn linspace((lo, hi): (f64, f64), count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// `F_1` on a `resolution × resolution` grid; row `i` is `β_i`, column `j` is `γ_j`.
pub fn sweep_grid(
    g: &WeightedGraph,
    s: &BlochAngles,
    m: &MixerSpec,
    gamma_range: (f64, f64),
    beta_range: (f64, f64),
    resolution: usize,
) -> Result<Vec<Vec<f64>>> {
    if resolution < 2 {
        return invalid(format!("grid resolution must be at least 2, got {resolution}"));
    }
    let circuit = QaoaCircuit::new(g, s, m)?;
    let gammas = linspace(gamma_range, resolution);
    linspace(beta_range, resolution)
        .par_iter()
        .map(|&beta| {
            gammas
                .iter()
                .map(|&gamma| circuit.expectation(&QaoaParams { gamma: vec![gamma], beta: vec![beta] }))
                .collect()
        })
        .collect()
}

/// Grid axes used by [`sweep_grid`].
pub fn grid_axis(range: (f64, f64), resolution: usize) -> Vec<f64> {
    linspace(range, resolution)
}
