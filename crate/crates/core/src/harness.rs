//! Experiment protocol: warm-starts, depth sweeps with zero-padded seeding,
//! result rows and their CSV form.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graphs::{
    approximation_ratio, brute_force_extremes, cut_value, Cut, CutExtremes, WeightedGraph,
};
use crate::optimizer::{multistart_from, OptConfig};
use crate::seeding::{self, derive_seed};
use crate::simulator::{
    cost_diagonal, interpolated_hamiltonian, mixer_from_state, run_qaoa_noisy, MixerSpec,
    QaoaCircuit, QaoaParams,
};
use crate::simulator::{eigen_gap, hermitian_eigenvalues, is_irreducible, is_stoquastic};
use crate::warmstart::{
    hyperplane_round, select_warmstart, single_cut_epsilon_state, BlochAngles, RotationScheme,
    Warmstart, WarmstartConfig,
};

pub const CSV_HEADER: [&str; 9] = [
    "instance", "variant", "rank", "rotation", "depth", "fp", "ar", "log_error", "wall_ms",
];

/// Hyperplane roundings tried when picking the cut behind the ε-pole state.
const EPSILON_ROUNDINGS: u64 = 10;
const ROUNDING_STREAM: u64 = 3 << 32;
const OPT_STREAM: u64 = 4 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `|+⟩^n` with the transverse-field mixer.
    Standard,
    /// Warm-started state with the transverse-field mixer.
    Warm,
    /// Warm-started state with the custom mixer.
    Warmest,
    /// ε-pole state of a rounded cut with the custom mixer.
    SingleCutEpsilon,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Standard,
        Variant::Warm,
        Variant::Warmest,
        Variant::SingleCutEpsilon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Warm => "warm",
            Variant::Warmest => "warmest",
            Variant::SingleCutEpsilon => "single_cut_epsilon",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .map_or_else(|| invalid(format!("unknown variant '{s}'")), Ok)
    }
}

pub fn rotation_name(r: RotationScheme) -> &'static str {
    match r {
        RotationScheme::Uniform => "uniform",
        RotationScheme::VertexAtTop => "vertex",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub instance_id: String,
    pub variants: Vec<Variant>,
    /// Warm-start settings; `seed` is replaced by each entry of `seeds`.
    pub warmstart: WarmstartConfig,
    pub depths: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Random restarts per depth and initialization, on top of the
    /// zero-padded previous optimum.
    pub starts: usize,
    pub opt: OptConfig,
    /// Phase-damping probability; the reported `fp` is then the noisy
    /// expectation at the noiselessly optimized angles.
    pub noise_q: Option<f64>,
    pub epsilon: f64,
}

impl ExperimentSpec {
    pub fn new(instance_id: impl Into<String>, variants: Vec<Variant>, depths: Vec<usize>) -> Self {
        ExperimentSpec {
            instance_id: instance_id.into(),
            variants,
            warmstart: WarmstartConfig::default(),
            depths,
            seeds: vec![0],
            starts: 2,
            opt: OptConfig::default(),
            noise_q: None,
            epsilon: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depths.is_empty() {
            return invalid("at least one depth is required");
        }
        if self.variants.is_empty() || self.seeds.is_empty() {
            return invalid("at least one variant and one seed are required");
        }
        if let Some(q) = self.noise_q {
            if !(0.0..=1.0).contains(&q) {
                return invalid(format!("noise probability {q} outside [0, 1]"));
            }
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.epsilon) {
            return invalid(format!("epsilon {} outside [0, π/2]", self.epsilon));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub instance: String,
    pub variant: Variant,
    pub rank: Option<usize>,
    pub rotation: Option<RotationScheme>,
    pub depth: usize,
    pub fp: Option<f64>,
    pub ar: Option<f64>,
    pub log_error: Option<f64>,
    pub wall_ms: u64,
    pub seed: u64,
    /// Set when the row failed; numeric fields are then empty.
    pub error: Option<String>,
}

impl ResultRow {
    pub fn csv_record(&self) -> [String; 9] {
        let num = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.12}"));
        [
            self.instance.clone(),
            self.variant.name().to_string(),
            self.rank.map_or_else(String::new, |r| r.to_string()),
            self.rotation.map_or("", rotation_name).to_string(),
            self.depth.to_string(),
            num(self.fp),
            num(self.ar),
            num(self.log_error),
            self.wall_ms.to_string(),
        ]
    }
}

/// Writes the fixed nine-column table.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

/// Failed rows as `instance,variant,depth,error`.
pub fn write_errors_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["instance", "variant", "depth", "error"])?;
    for r in rows {
        if let Some(e) = &r.error {
            w.write_record([&r.instance, r.variant.name(), &r.depth.to_string(), e])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Best `F_p` over a set of initializations at each requested depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthSweep {
    pub depths: Vec<usize>,
    pub values: Vec<f64>,
    pub params: Vec<QaoaParams>,
    pub wall_ms: Vec<u64>,
}

/// Optimizes one initialization over ascending `depths`. Each depth starts
/// from the previous optimum padded with zero layers (the new layers get a
/// small random offset to leave the saddle) plus `starts` random points, and
/// never reports less than the padded optimum itself.
pub fn sweep_depths(
    circuit: &QaoaCircuit,
    w_bar: f64,
    depths: &[usize],
    starts: usize,
    cfg: &OptConfig,
) -> Result<Vec<(f64, QaoaParams, u64)>> {
    let mut out = Vec::with_capacity(depths.len());
    let mut prev = QaoaParams::zeros(0);
    for &p in depths {
        let t0 = Instant::now();
        let cfg_p = OptConfig {
            seed: derive_seed(cfg.seed, p as u64),
            ..cfg.clone()
        };
        let padded = prev.padded(p);
        let padded_value = circuit.expectation(&padded)?;
        let (value, params) = if p == 0 {
            (padded_value, padded)
        } else {
            let mut rng = seeding::rng(derive_seed(cfg_p.seed, u64::MAX));
            let mut nudged = padded.clone();
            for k in prev.depth()..p {
                nudged.gamma[k] = rng.random_range(0.0..cfg.init_scale);
                nudged.beta[k] = rng.random_range(0.0..cfg.init_scale);
            }
            let r = multistart_from(circuit, w_bar, p, starts, &[nudged], &cfg_p)?;
            if r.best_value >= padded_value {
                (r.best_value, r.params)
            } else {
                (padded_value, padded)
            }
        };
        out.push((value, params.clone(), t0.elapsed().as_millis() as u64));
        prev = params;
    }
    Ok(out)
}

struct Prepared {
    variant: Variant,
    inits: Vec<(BlochAngles, MixerSpec)>,
}

fn epsilon_cut(g: &WeightedGraph, ws: &Warmstart, seed: u64) -> Result<Cut> {
    let mut rng = seeding::rng(derive_seed(seed, ROUNDING_STREAM));
    let mut best: Option<(f64, Cut)> = None;
    for _ in 0..EPSILON_ROUNDINGS {
        let c = hyperplane_round(&ws.solution, &mut rng);
        let v = cut_value(g, &c)?;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, c));
        }
    }
    Ok(best.expect("at least one rounding").1)
}

fn prepare(
    g: &WeightedGraph,
    variant: Variant,
    ws: &Warmstart,
    spec: &ExperimentSpec,
    seed: u64,
) -> Result<Prepared> {
    let n = g.n();
    let inits = match variant {
        Variant::Standard => vec![(BlochAngles::plus_state(n), MixerSpec::standard(n))],
        Variant::Warm => ws
            .initializations
            .iter()
            .map(|s| (s.clone(), MixerSpec::standard(n)))
            .collect(),
        Variant::Warmest => ws
            .initializations
            .iter()
            .map(|s| (s.clone(), mixer_from_state(s)))
            .collect(),
        Variant::SingleCutEpsilon => {
            let s = single_cut_epsilon_state(&epsilon_cut(g, ws, seed)?, spec.epsilon)?;
            let m = mixer_from_state(&s);
            vec![(s, m)]
        }
    };
    if inits.is_empty() {
        return invalid("warm-start produced no initializations");
    }
    Ok(Prepared { variant, inits })
}

fn rows_for(
    g: &WeightedGraph,
    prepared: &Prepared,
    spec: &ExperimentSpec,
    extremes: &CutExtremes,
    depths: &[usize],
    seed: u64,
) -> Result<Vec<ResultRow>> {
    let w_bar = g.total_abs_weight();
    let variant_index = Variant::ALL.iter().position(|v| *v == prepared.variant).unwrap() as u64;
    let sweeps = prepared
        .inits
        .par_iter()
        .enumerate()
        .map(|(i, (s, m))| {
            let circuit = QaoaCircuit::new(g, s, m)?;
            let cfg = OptConfig {
                seed: derive_seed(derive_seed(seed, OPT_STREAM + variant_index), i as u64),
                ..spec.opt.clone()
            };
            let sweep = sweep_depths(&circuit, w_bar, depths, spec.starts, &cfg)?;
            sweep
                .into_iter()
                .map(|(v, params, ms)| {
                    let v = match spec.noise_q {
                        Some(q) => run_qaoa_noisy(g, s, m, &params, q)?.1,
                        None => v,
                    };
                    Ok((v, ms))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let warm = prepared.variant != Variant::Standard;
    depths
        .iter()
        .enumerate()
        .map(|(k, &depth)| {
            // First initialization wins ties.
            let fp = sweeps
                .iter()
                .map(|s| s[k].0)
                .reduce(|a, b| if b > a { b } else { a })
                .expect("nonempty");
            let wall_ms = sweeps.iter().map(|s| s[k].1).sum();
            let ar = approximation_ratio(fp, extremes)?;
            Ok(ResultRow {
                instance: row_instance(spec, seed),
                variant: prepared.variant,
                rank: warm.then_some(spec.warmstart.rank),
                rotation: (warm && prepared.variant != Variant::SingleCutEpsilon)
                    .then_some(spec.warmstart.rotation),
                depth,
                fp: Some(fp),
                ar: Some(ar),
                log_error: (ar < 1.0).then(|| (1.0 - ar).log10()),
                wall_ms,
                seed,
                error: None,
            })
        })
        .collect()
}

fn row_instance(spec: &ExperimentSpec, seed: u64) -> String {
    if spec.seeds.len() > 1 {
        format!("{}#{seed}", spec.instance_id)
    } else {
        spec.instance_id.clone()
    }
}

fn failed_rows(spec: &ExperimentSpec, variant: Variant, depths: &[usize], seed: u64, e: &crate::Error) -> Vec<ResultRow> {
    depths
        .iter()
        .map(|&depth| ResultRow {
            instance: row_instance(spec, seed),
            variant,
            rank: None,
            rotation: None,
            depth,
            fp: None,
            ar: None,
            log_error: None,
            wall_ms: 0,
            seed,
            error: Some(e.to_string()),
        })
        .collect()
}

/// Runs every (variant, seed) combination over the requested depths. A
/// failing combination yields rows with `error` set; the others continue.
/// Rows come back sorted by variant, depth and seed.
pub fn run_experiment(g: &WeightedGraph, spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let extremes = brute_force_extremes(g)?;
    let mut depths = spec.depths.clone();
    depths.sort_unstable();
    depths.dedup();

    let needs_warmstart = spec.variants.iter().any(|v| *v != Variant::Standard);
    let mut rows = Vec::new();
    for &seed in &spec.seeds {
        let ws = if needs_warmstart {
            let cfg = WarmstartConfig {
                seed,
                ..spec.warmstart.clone()
            };
            Some(select_warmstart(g, &cfg, Some(&extremes)))
        } else {
            None
        };
        for &variant in &spec.variants {
            let result = match (&ws, variant) {
                (_, Variant::Standard) => {
                    let n = g.n();
                    let prepared = Prepared {
                        variant,
                        inits: vec![(BlochAngles::plus_state(n), MixerSpec::standard(n))],
                    };
                    rows_for(g, &prepared, spec, &extremes, &depths, seed)
                }
                (Some(Ok(ws)), _) => prepare(g, variant, ws, spec, seed)
                    .and_then(|p| rows_for(g, &p, spec, &extremes, &depths, seed)),
                (Some(Err(e)), _) => Err(crate::Error::InvalidArgument(format!("warm-start failed: {e}"))),
                (None, _) => unreachable!("warm-start computed for warm variants"),
            };
            match result {
                Ok(r) => rows.extend(r),
                Err(e @ crate::Error::Capacity { .. }) => return Err(e),
                Err(e) => rows.extend(failed_rows(spec, variant, &depths, seed, &e)),
            }
        }
    }
    rows.sort_by_key(|r| (r.variant, r.depth, r.seed));
    Ok(rows)
}

/// Gap, stoquasticity and irreducibility of `H(t)` at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub t: f64,
    pub gap: f64,
    pub stoquastic: bool,
    pub irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub points: Vec<SpectrumPoint>,
    /// Distinct cost levels, largest first (the spectrum at `t = 1`).
    pub cost_levels: Vec<f64>,
}

/// Scans `H(t) = (1 - t) H_B + t H_C` on `t = 0, 1/steps, …, 1`.
pub fn spectrum_report(g: &WeightedGraph, s: &BlochAngles, steps: usize) -> Result<SpectrumReport> {
    if steps == 0 {
        return invalid("spectrum grid needs at least one step");
    }
    let m = mixer_from_state(s);
    let d = cost_diagonal(g)?;
    let points = (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            let h = interpolated_hamiltonian(&m, &d, t)?;
            Ok(SpectrumPoint {
                t,
                gap: eigen_gap(&h)?,
                stoquastic: is_stoquastic(&h),
                irreducible: is_irreducible(&h),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cost_levels: Vec<f64> = Vec::new();
    let top = hermitian_eigenvalues(&interpolated_hamiltonian(&m, &d, 1.0)?)?;
    for v in top {
        if cost_levels.last().is_none_or(|l| (l - v).abs() > 1e-9) {
            cost_levels.push(v);
        }
    }
    Ok(SpectrumReport {
        n: g.n(),
        points,
        cost_levels,
    })
}

/// Grid scan as CSV: first row is `beta\gamma` then the γ axis; each later
/// row is a β value followed by `F_1` values.
pub fn write_sweep_csv<W: Write>(
    gammas: &[f64],
    betas: &[f64],
    grid: &[Vec<f64>],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["beta\\gamma".to_string()];
    header.extend(gammas.iter().map(|g| format!("{g:.12}")));
    w.write_record(&header)?;
    for (b, row) in betas.iter().zip(grid) {
        let mut rec = vec![format!("{b:.12}")];
        rec.extend(row.iter().map(|f| format!("{f:.12}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
