//! `qwm`: instance generation, warm-starts, QAOA runs, spectral scans and grid sweeps.
//!
//! Exit codes: 0 ok, 2 bad arguments or input, 3 numerical or strictness
//! failure, 4 problem size above a cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qwm_core::graphs::{
    brute_force_extremes, generate_erdos_renyi, generate_karloff, karloff_gw_ratio,
    parse_edge_list_with, serialize_edge_list, Indexing, WeightLaw, WeightedGraph,
};
use qwm_core::harness::{
    run_experiment, spectrum_report, write_csv, write_errors_csv, write_sweep_csv, ExperimentSpec,
    Variant,
};
use qwm_core::optimizer::{grid_axis, sweep_grid, OptConfig};
use qwm_core::simulator::{mixer_from_state, MixerSpec, QaoaCircuit, QaoaParams};
use qwm_core::warmstart::{
    select_warmstart, BlochAngles, RotationScheme, WarmstartConfig, WarmstartMethod,
};
use qwm_core::Error;

#[derive(Parser)]
#[command(name = "qwm", version, about = "Warm-started QAOA for Max-Cut with custom mixers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as an edge list.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Best-of-N warm-start with rotated Bloch initializations.
    Warmstart(WarmstartArgs),
    /// Optimize QAOA variants over depths and write result rows as CSV.
    Run(RunArgs),
    /// Gap, stoquasticity and irreducibility of the interpolated Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Depth-1 grid scan of F over (gamma, beta).
    Sweep(SweepArgs),
    /// Evaluate one parameter point and optionally dump the final state.
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw weights from Uniform[low, high) instead of unit weights.
        #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"])]
        uniform: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Karloff graph J(m, t, b); `t` defaults to m/2.
    Karloff {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bm,
    GwProjected,
}

#[derive(Clone, Copy, ValueEnum)]
enum RotationArg {
    Uniform,
    Vertex,
}

impl From<RotationArg> for RotationScheme {
    fn from(r: RotationArg) -> Self {
        match r {
            RotationArg::Uniform => RotationScheme::Uniform,
            RotationArg::Vertex => RotationScheme::VertexAtTop,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge-list file: header `n m`, then `u v w` lines.
    #[arg(long)]
    instance: PathBuf,
    /// Vertices in the file are numbered from 1.
    #[arg(long)]
    one_indexed: bool,
}

#[derive(Args)]
struct WarmstartOpts {
    #[arg(long, value_enum, default_value = "bm")]
    method: MethodArg,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=3))]
    rank: u32,
    #[arg(long, value_enum, default_value = "vertex")]
    rotation: RotationArg,
    /// Relaxation solves (or projections) to keep the best of.
    #[arg(long, default_value_t = 5)]
    attempts: usize,
    /// Rotated initializations generated from the best solution.
    #[arg(long, default_value_t = 5)]
    rotations: usize,
}

impl WarmstartOpts {
    fn config(&self, seed: u64) -> WarmstartConfig {
        WarmstartConfig {
            method: match self.method {
                MethodArg::Bm => WarmstartMethod::Bm,
                MethodArg::GwProjected => WarmstartMethod::GwProjected,
            },
            rank: self.rank as usize,
            attempts: self.attempts,
            rotation: self.rotation.into(),
            rotations_per_solution: self.rotations,
            seed,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct WarmstartArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    ws: WarmstartOpts,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bloch-angle JSON for every initialization.
    #[arg(long)]
    angles_out: Option<PathBuf>,
    /// Exit with code 3 if the relaxation solver did not reach stationarity.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Variants to run, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "standard,warm,warmest")]
    variant: Vec<String>,
    #[command(flatten)]
    ws: WarmstartOpts,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    depths: Vec<usize>,
    /// Seeds, comma separated; each gives its own rows.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    /// Random optimizer restarts per depth and initialization.
    #[arg(long, default_value_t = 2)]
    starts: usize,
    /// Phase-damping probability applied after every mixer rotation.
    #[arg(long)]
    noise_q: Option<f64>,
    /// Polar offset of the single-cut ε state.
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Initialization as Bloch-angle JSON; `|+⟩^n` when omitted. A list of
    /// initializations uses the first.
    #[arg(long)]
    angles: Option<PathBuf>,
    /// Grid intervals on t ∈ [0, 1].
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "warmest")]
    variant: String,
    #[command(flatten)]
    ws: WarmstartOpts,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 41)]
    resolution: usize,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    gamma_max: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    beta_max: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    angles: Option<PathBuf>,
    /// Use the transverse-field mixer instead of the custom one.
    #[arg(long)]
    standard_mixer: bool,
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    /// Write the final state as little-endian (re, im) f64 pairs.
    #[arg(long)]
    dump_state: Option<PathBuf>,
}

/// Failure tagged with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.chain().find_map(|e| e.downcast_ref::<Error>()) {
            Some(Error::Capacity { .. }) => 4,
            Some(Error::NonHermitian(_) | Error::DegenerateInstance(_)) => 3,
            _ => 2,
        };
        Failure { code, error }
    }
}

fn strict_failure(msg: String) -> Failure {
    Failure {
        code: 3,
        error: anyhow::anyhow!(msg),
    }
}

fn read_instance(args: &InstanceArgs) -> anyhow::Result<(String, WeightedGraph)> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let indexing = if args.one_indexed { Indexing::One } else { Indexing::Zero };
    let g = parse_edge_list_with(&text, indexing)
        .with_context(|| format!("parsing {}", args.instance.display()))?;
    let id = args
        .instance
        .file_stem()
        .map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
    Ok((id, g))
}

/// Accepts either one initialization or a list of them.
fn read_angles(path: &Path) -> anyhow::Result<BlochAngles> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let first_is_list = value.get(0).is_some_and(|v| v.is_array());
    let angles: BlochAngles = if first_is_list {
        serde_json::from_value(value[0].clone())?
    } else {
        serde_json::from_value(value)?
    };
    angles.validate()?;
    Ok(angles)
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(kind: GenerateKind) -> anyhow::Result<()> {
    let (g, out, ratio) = match kind {
        GenerateKind::Er { n, p, seed, uniform, out } => {
            let law = match uniform.as_deref() {
                Some([lo, hi]) => WeightLaw::Uniform(*lo, *hi),
                Some(_) => bail!("--uniform takes LOW HIGH"),
                None => WeightLaw::Unit,
            };
            (generate_erdos_renyi(n, p, law, seed)?, out, None)
        }
        GenerateKind::Karloff { m, t, b, out } => {
            let g = generate_karloff(m, t.unwrap_or(m / 2), b)?;
            (g, out, Some(karloff_gw_ratio(m, b)?))
        }
    };
    fs::write(&out, serialize_edge_list(&g)).with_context(|| format!("writing {}", out.display()))?;
    print!("n {} m {}", g.n(), g.edge_count());
    if let Some(r) = ratio {
        print!(" gw_ratio {r:.4}");
    }
    println!();
    Ok(())
}

fn cmd_warmstart(args: WarmstartArgs) -> Result<(), Failure> {
    let (_, g) = read_instance(&args.instance)?;
    let extremes = brute_force_extremes(&g).ok();
    let ws = select_warmstart(&g, &args.ws.config(args.seed), extremes.as_ref())
        .map_err(anyhow::Error::from)?;
    let report = serde_json::to_string_pretty(&ws.report).map_err(anyhow::Error::from)?;
    write_or_print(args.out.as_deref(), &report)?;
    if let Some(path) = &args.angles_out {
        let angles = serde_json::to_string_pretty(&ws.initializations).map_err(anyhow::Error::from)?;
        fs::write(path, angles)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if args.strict && !ws.report.stationary {
        return Err(strict_failure("relaxation solver did not reach stationarity".into()));
    }
    Ok(())
}

fn parse_variants(names: &[String]) -> anyhow::Result<Vec<Variant>> {
    let mut out = Vec::new();
    for name in names {
        let v = Variant::parse(name.trim())?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

fn errors_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".errors.csv");
    out.with_file_name(name)
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let (id, g) = read_instance(&args.instance)?;
    let mut spec = ExperimentSpec::new(id, parse_variants(&args.variant)?, args.depths.clone());
    spec.warmstart = args.ws.config(0);
    spec.seeds = args.seed.clone();
    spec.starts = args.starts;
    spec.noise_q = args.noise_q;
    spec.epsilon = args.epsilon;
    spec.opt = OptConfig::default();
    let rows = run_experiment(&g, &spec)?;
    let file = fs::File::create(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    write_csv(&rows, file)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        let path = errors_path(&args.out);
        write_errors_csv(&rows, fs::File::create(&path)?)?;
        eprintln!("{failed} rows failed; details in {}", path.display());
    }
    Ok(())
}

fn cmd_spectrum(args: SpectrumArgs) -> anyhow::Result<()> {
    let (_, g) = read_instance(&args.instance)?;
    let s = match &args.angles {
        Some(p) => read_angles(p)?,
        None => BlochAngles::plus_state(g.n()),
    };
    let report = spectrum_report(&g, &s, args.steps)?;
    write_or_print(args.out.as_deref(), &serde_json::to_string_pretty(&report)?)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let (_, g) = read_instance(&args.instance)?;
    let variant = Variant::parse(&args.variant)?;
    let (s, m) = match variant {
        Variant::Standard => (BlochAngles::plus_state(g.n()), MixerSpec::standard(g.n())),
        Variant::Warm | Variant::Warmest => {
            let ws = select_warmstart(&g, &args.ws.config(args.seed), None)?;
            let s = ws.initializations.into_iter().next().context("no initializations")?;
            let m = if variant == Variant::Warm { MixerSpec::standard(g.n()) } else { mixer_from_state(&s) };
            (s, m)
        }
        Variant::SingleCutEpsilon => bail!("sweep supports standard, warm and warmest"),
    };
    let (gr, br) = ((0.0, args.gamma_max), (0.0, args.beta_max));
    let grid = sweep_grid(&g, &s, &m, gr, br, args.resolution)?;
    let file = fs::File::create(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    write_sweep_csv(&grid_axis(gr, args.resolution), &grid_axis(br, args.resolution), &grid, file)?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let (_, g) = read_instance(&args.instance)?;
    let s = match &args.angles {
        Some(p) => read_angles(p)?,
        None => BlochAngles::plus_state(g.n()),
    };
    let m = if args.standard_mixer { MixerSpec::standard(g.n()) } else { mixer_from_state(&s) };
    let params = QaoaParams::new(args.gamma, args.beta)?;
    let circuit = QaoaCircuit::new(&g, &s, &m)?;
    let state = circuit.state(&params)?;
    let value = qwm_core::simulator::expectation_cut(&state, circuit.diagonal())?;
    println!("{value:.12}");
    if let Some(path) = &args.dump_state {
        fs::write(path, state.to_le_bytes()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { kind } => cmd_generate(kind)?,
        Command::Warmstart(a) => cmd_warmstart(a)?,
        Command::Run(a) => cmd_run(a)?,
        Command::Spectrum(a) => cmd_spectrum(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Simulate(a) => cmd_simulate(a)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
