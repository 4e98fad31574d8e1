use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qwm_core::graphs::{
    brute_force_extremes, generate_erdos_renyi, parse_edge_list, serialize_edge_list, WeightLaw,
    WeightedGraph,
};
use qwm_core::warmstart::{
    depth0_expected_cut, hyperplane_expected_cut, sdp_solve, BlochAngles, BmConfig,
};
use tempfile::TempDir;

fn qwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qwm(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write_graph(dir: &TempDir, name: &str, g: &WeightedGraph) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, serialize_edge_list(g)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn generate_karloff_prints_size_and_ratio() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.txt");
    let stdout = ok(&["generate", "karloff", "--m", "6", "--b", "1", "--out", s(&out)]);
    assert!(stdout.contains("n 20 m 90"), "{stdout}");
    assert!(stdout.contains("gw_ratio 0.9123"), "{stdout}");
    let g = parse_edge_list(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((g.n(), g.edge_count()), (20, 90));

    let bad = qwm(&["generate", "karloff", "--m", "7", "--b", "1", "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn generate_er_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for p in [&a, &b] {
        ok(&["generate", "er", "--n", "8", "--p", "0.5", "--seed", "7", "--out", s(p)]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    ok(&["generate", "er", "--n", "8", "--p", "0.5", "--seed", "7", "--uniform", "0", "1", "--out", s(&a)]);
    assert!(parse_edge_list(&fs::read_to_string(&a).unwrap()).unwrap().edges().iter().all(|e| e.w < 1.0));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(qwm(&["run", "--instance", "/nonexistent", "--out", "/tmp/x.csv"]).status.code(), Some(2));
    assert_eq!(qwm(&["warmstart"]).status.code(), Some(2));
    assert_eq!(qwm(&["frobnicate"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "g.txt", &WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap());
    let out = dir.path().join("r.csv");
    let rank4 = qwm(&["run", "--instance", s(&g), "--rank", "4", "--out", s(&out)]);
    assert_eq!(rank4.status.code(), Some(2));
    let variant = qwm(&["run", "--instance", s(&g), "--variant", "warmer", "--out", s(&out)]);
    assert_eq!(variant.status.code(), Some(2));
}

#[test]
fn warmstart_report_for_a_single_edge() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "edge.txt", &WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap());
    let (report, angles) = (dir.path().join("r.json"), dir.path().join("a.json"));
    ok(&[
        "warmstart", "--instance", s(&g), "--rank", "2", "--out", s(&report),
        "--angles-out", s(&angles), "--strict",
    ]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!((v["kappa_close"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    for key in ["method", "rank", "attempts", "bm_objective", "hp_expected", "kappa_approx", "seed"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let inits: Vec<BlochAngles> = serde_json::from_str(&fs::read_to_string(&angles).unwrap()).unwrap();
    assert_eq!(inits.len(), 5);
    inits.iter().for_each(|a| a.validate().unwrap());
}

#[test]
fn projected_warmstart_matches_direct_rounding_on_average() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(8, 0.5, WeightLaw::Uniform(0.0, 1.0), 21).unwrap();
    let g = write_graph(&dir, "er8.txt", &graph);
    let max_cut = brute_force_extremes(&graph).unwrap().max_cut;
    let sdp = sdp_solve(&graph, 3, 0, &BmConfig::default()).unwrap().solution;
    let direct = hyperplane_expected_cut(&graph, &sdp).unwrap() / max_cut;
    let samples: Vec<f64> = (0..30)
        .map(|seed| {
            let seed = seed.to_string();
            let text = ok(&[
                "warmstart", "--instance", s(&g), "--method", "gw-projected", "--rank", "3",
                "--attempts", "1", "--seed", &seed,
            ]);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            v["kappa_approx"].as_f64().unwrap()
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - direct).abs() <= 3.0 * (var / n).sqrt() + 1e-6, "{mean} vs {direct} (sd {var})");
}

#[test]
fn run_rows_have_the_fixed_layout() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(5, 0.7, WeightLaw::Uniform(0.0, 1.0), 4).unwrap();
    let g = write_graph(&dir, "g5.txt", &graph);
    let out = dir.path().join("rows.csv");
    ok(&[
        "run", "--instance", s(&g), "--variant", "warmest,standard,single_cut_epsilon,warm",
        "--depths", "0,1,2", "--rotations", "2", "--starts", "1", "--out", s(&out),
    ]);
    let rows = read_rows(&out);
    assert_eq!(
        rows[0].join(","),
        "instance,variant,rank,rotation,depth,fp,ar,log_error,wall_ms"
    );
    assert_eq!(rows.len(), 1 + 4 * 3);
    for r in &rows[1..] {
        assert_eq!(r.len(), 9);
        let ar: f64 = r[6].parse().unwrap();
        assert!((-1e-9..=1.0 + 1e-9).contains(&ar));
        assert_eq!(r[0], "g5");
    }
    let variants: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(&variants[..3], &["standard"; 3]);
    assert_eq!(&variants[9..], &["single_cut_epsilon"; 3]);
    assert!(!dir.path().join("rows.errors.csv").exists());
}

#[test]
fn depth_zero_warmest_row_matches_the_formula() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(5, 0.7, WeightLaw::Uniform(0.0, 1.0), 9).unwrap();
    let g = write_graph(&dir, "g.txt", &graph);
    let (out, angles) = (dir.path().join("rows.csv"), dir.path().join("a.json"));
    ok(&["run", "--instance", s(&g), "--variant", "warmest", "--depths", "0", "--out", s(&out)]);
    ok(&["warmstart", "--instance", s(&g), "--angles-out", s(&angles), "--out", s(&dir.path().join("r.json"))]);
    let inits: Vec<BlochAngles> = serde_json::from_str(&fs::read_to_string(&angles).unwrap()).unwrap();
    let best = inits
        .iter()
        .map(|a| depth0_expected_cut(&graph, a).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let fp: f64 = read_rows(&out)[1][5].parse().unwrap();
    assert!((fp - best).abs() < 1e-9, "{fp} vs {best}");
}

#[test]
fn standard_single_edge_run() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "edge.txt", &WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap());
    let out = dir.path().join("rows.csv");
    ok(&["run", "--instance", s(&g), "--variant", "standard", "--depths", "1", "--out", s(&out)]);
    let rows = read_rows(&out);
    assert!(rows[1][6].parse::<f64>().unwrap() >= 0.99);
}

#[test]
fn runs_are_reproducible_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(5, 0.6, WeightLaw::Uniform(0.0, 1.0), 2).unwrap();
    let g = write_graph(&dir, "g.txt", &graph);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        ok(&[
            "run", "--instance", s(&g), "--depths", "1,2", "--seed", "3,4", "--rotations", "2",
            "--noise-q", "0.02", "--out", s(out),
        ]);
    }
    let strip = |p: &Path| -> Vec<Vec<String>> {
        read_rows(p).into_iter().map(|mut r| {
            r.pop();
            r
        }).collect()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(read_rows(&a)[1][0].starts_with("g#"));
}

#[test]
fn capacity_errors_exit_with_four() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(5, 0.8, WeightLaw::Unit, 1).unwrap();
    let g = write_graph(&dir, "g.txt", &graph);
    let out = Command::new(env!("CARGO_BIN_EXE_qwm"))
        .args(["run", "--instance", s(&g), "--variant", "standard", "--out"])
        .arg(dir.path().join("r.csv"))
        .env("QWM_MAX_QUBITS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let spectrum = Command::new(env!("CARGO_BIN_EXE_qwm"))
        .args(["spectrum", "--instance", s(&g)])
        .env("QWM_MAX_QUBITS", "4")
        .output()
        .unwrap();
    assert_eq!(spectrum.status.code(), Some(4));
}

#[test]
fn spectrum_report_for_a_path() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "path.txt", &WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ok(&["spectrum", "--instance", s(&g)])).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    for p in &points[..10] {
        assert!(p["gap"].as_f64().unwrap() > 0.0);
        assert_eq!(p["stoquastic"], true);
        assert_eq!(p["irreducible"], true);
    }
    let levels: Vec<f64> = serde_json::from_value(v["cost_levels"].clone()).unwrap();
    let last_gap = points[10]["gap"].as_f64().unwrap();
    // The top cost level (2) is doubly degenerate, so the t = 1 gap is 0.
    assert_eq!(levels, vec![2.0, 1.0, 0.0]);
    assert!(last_gap.abs() < 1e-12);

    let angles = dir.path().join("y.json");
    fs::write(&angles, r#"[{"theta":1.0,"phi":0.7},{"theta":1.5,"phi":0.0},{"theta":2.0,"phi":0.0}]"#).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["spectrum", "--instance", s(&g), "--angles", s(&angles), "--steps", "2"]))
            .unwrap();
    assert_eq!(v["points"][0]["stoquastic"], false);
}

#[test]
fn sweep_grid_layout_and_ordering() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(6, 0.6, WeightLaw::Uniform(0.0, 1.0), 17).unwrap();
    let g = write_graph(&dir, "g6.txt", &graph);
    let (warmest, standard) = (dir.path().join("w.csv"), dir.path().join("s.csv"));
    ok(&["sweep", "--instance", s(&g), "--variant", "warmest", "--resolution", "21", "--seed", "1", "--out", s(&warmest)]);
    ok(&["sweep", "--instance", s(&g), "--variant", "standard", "--resolution", "21", "--out", s(&standard)]);
    let grid_max = |p: &Path| {
        let rows = read_rows(p);
        assert_eq!(rows.len(), 22);
        assert!(rows.iter().all(|r| r.len() == 22));
        assert_eq!(rows[0][0], "beta\\gamma");
        rows[1..]
            .iter()
            .flat_map(|r| r[1..].iter().map(|x| x.parse::<f64>().unwrap()))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let standard_rows = read_rows(&standard);
    let origin: f64 = standard_rows[1][1].parse().unwrap();
    let d0 = depth0_expected_cut(&graph, &BlochAngles::plus_state(6)).unwrap();
    assert!((origin - d0).abs() < 1e-9);
    assert!(grid_max(&warmest) >= grid_max(&standard));
}

#[test]
fn simulate_dumps_the_state() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "g.txt", &WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap());
    let dump = dir.path().join("state.bin");
    let value: f64 = ok(&[
        "simulate", "--instance", s(&g), "--gamma", "0.3,0.1", "--beta", "0.2,0.4", "--dump-state", s(&dump),
    ])
    .trim()
    .parse()
    .unwrap();
    assert!(value > 0.0 && value <= 3.0);
    let bytes = fs::read(&dump).unwrap();
    assert_eq!(bytes.len(), 8 * 16);
    let probs: f64 = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()).powi(2))
        .sum();
    assert!((probs - 1.0).abs() < 1e-12);
}

#[test]
fn full_protocol_on_six_nodes_is_fast() {
    let dir = TempDir::new().unwrap();
    let graph = generate_erdos_renyi(6, 0.6, WeightLaw::Uniform(0.0, 1.0), 33).unwrap();
    let g = write_graph(&dir, "g6.txt", &graph);
    let t0 = std::time::Instant::now();
    for (rank, rotation) in [("2", "vertex"), ("2", "uniform"), ("3", "vertex"), ("3", "uniform")] {
        let out = dir.path().join(format!("{rank}-{rotation}.csv"));
        ok(&[
            "run", "--instance", s(&g), "--variant", "standard,warm,warmest", "--rank", rank,
            "--rotation", rotation, "--attempts", "5", "--rotations", "5", "--depths", "1,2,4,8",
            "--out", s(&out),
        ]);
        assert_eq!(read_rows(&out).len(), 1 + 3 * 4);
    }
    assert!(t0.elapsed().as_secs() < 300);
}
