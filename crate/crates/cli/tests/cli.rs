//! End-to-end tests driving the compiled binary: file formats, exit codes,
//! determinism, and a full identification round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ltikit"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file exists")
}

/// Parse a signal CSV written by the tool; returns (k, value) pairs.
fn parse_signal(text: &str) -> Vec<(i64, f64)> {
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header == "k,t,value" || header == "k,value", "header {header:?}");
    lines
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            (
                fields[0].parse().unwrap(),
                fields.last().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Self { _dir: dir, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

#[test]
fn gen_exercise1_shape_and_first_sample() {
    let ws = Workspace::new();
    run_ok(&["gen", "--kind", "exercise1", "--out", &ws.arg("e1.csv")]);
    let rows = parse_signal(&read(&ws.path("e1.csv")));
    assert_eq!(rows.len(), 320);
    assert_eq!(rows[0], (0, 1.0));
    // 100 Hz sampling: the time column steps by 0.01.
    let text = read(&ws.path("e1.csv"));
    let second: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let t: f64 = second[1].parse().unwrap();
    assert!((t - 0.01).abs() < 1e-15);
}

#[test]
fn gen_exercise5_is_deterministic_per_seed() {
    let ws = Workspace::new();
    run_ok(&["gen", "--kind", "exercise5", "--seed", "7", "--out", &ws.arg("a.csv")]);
    run_ok(&["gen", "--kind", "exercise5", "--seed", "7", "--out", &ws.arg("b.csv")]);
    run_ok(&["gen", "--kind", "exercise5", "--seed", "8", "--out", &ws.arg("c.csv")]);
    let a = read(&ws.path("a.csv"));
    assert_eq!(a, read(&ws.path("b.csv")), "same seed must be byte-identical");
    assert_ne!(a, read(&ws.path("c.csv")));
    assert_eq!(parse_signal(&a).len(), 4096);
}

#[test]
fn gen_delta_writes_an_impulse() {
    let ws = Workspace::new();
    run_ok(&["gen", "--kind", "delta", "--n", "8", "--out", &ws.arg("d.csv")]);
    let rows = parse_signal(&read(&ws.path("d.csv")));
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0].1, 1.0);
    assert!(rows[1..].iter().all(|&(_, v)| v == 0.0));
}

#[test]
fn fir_design_writes_the_hand_checked_taps() {
    let ws = Workspace::new();
    run_ok(&[
        "fir-design",
        "--order", "5",
        "--fc", "10",
        "--fs", "1000",
        "--window", "hamming",
        "--out", &ws.arg("taps.csv"),
    ]);
    let text = read(&ws.path("taps.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "tap");
    let taps: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
    let expect = [
        0.035638361711606573,
        0.241034568214606,
        0.44665414014757476,
        0.241034568214606,
        0.035638361711606573,
    ];
    assert_eq!(taps.len(), 5);
    for (got, want) in taps.iter().zip(&expect) {
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn filter_and_filtfilt_round_trip_via_files() {
    let ws = Workspace::new();
    run_ok(&[
        "gen", "--kind", "tone", "--freq", "5", "--fs", "500", "--n", "1200",
        "--out", &ws.arg("tone.csv"),
    ]);
    run_ok(&[
        "fir-design", "--order", "101", "--fc", "50", "--fs", "500",
        "--out", &ws.arg("lp.csv"),
    ]);
    run_ok(&[
        "filter", "--filter", &ws.arg("lp.csv"), "--input", &ws.arg("tone.csv"),
        "--out", &ws.arg("causal.csv"),
    ]);
    run_ok(&[
        "filtfilt", "--filter", &ws.arg("lp.csv"), "--input", &ws.arg("tone.csv"),
        "--out", &ws.arg("zero.csv"),
    ]);
    let tone = parse_signal(&read(&ws.path("tone.csv")));
    let zero = parse_signal(&read(&ws.path("zero.csv")));
    assert_eq!(zero.len(), tone.len());
    // In-band tone comes through the zero-phase pass unshifted mid-signal.
    for k in 200..1000 {
        assert!(
            (zero[k].1 - tone[k].1).abs() < 0.01,
            "sample {k}: {} vs {}",
            zero[k].1,
            tone[k].1
        );
    }
    // The causal pass lags by the 50-sample group delay instead.
    let causal = parse_signal(&read(&ws.path("causal.csv")));
    for k in 200..1000 {
        assert!((causal[k].1 - tone[k - 50].1).abs() < 0.01);
    }
}

#[test]
fn iir_design_freqz_and_response_files() {
    let ws = Workspace::new();
    run_ok(&[
        "iir-design", "--order", "4", "--fc", "100", "--fs", "1000",
        "--out", &ws.arg("bw.json"),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&read(&ws.path("bw.json"))).unwrap();
    assert_eq!(doc["domain"], "z");
    assert_eq!(doc["b"].as_array().unwrap().len(), 5);

    // 1000 points at fs = 1 kHz puts a bin exactly on the 100 Hz cut-off.
    run_ok(&[
        "freqz", "--filter", &ws.arg("bw.json"), "--points", "1000",
        "--out", &ws.arg("resp.csv"),
    ]);
    let text = read(&ws.path("resp.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,f_hz,re,im,mag,phase");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 1000);
    // Unit gain at dc, half power at the cut-off.
    assert!((rows[0][4] - 1.0).abs() < 1e-9);
    assert_eq!(rows[100][1], 100.0);
    assert!((rows[100][4] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);

    run_ok(&[
        "impulse", "--tf", &ws.arg("bw.json"), "--n", "32",
        "--out", &ws.arg("imp.csv"),
    ]);
    assert_eq!(parse_signal(&read(&ws.path("imp.csv"))).len(), 32);

    run_ok(&[
        "step-response", "--tf", &ws.arg("bw.json"), "--n", "64",
        "--out", &ws.arg("step.csv"),
    ]);
    let steps = parse_signal(&read(&ws.path("step.csv")));
    assert!((steps.last().unwrap().1 - 1.0).abs() < 0.01, "dc gain settles at 1");
}

#[test]
fn continuous_responses_from_an_s_domain_document() {
    let ws = Workspace::new();
    std::fs::write(
        ws.path("plant.json"),
        r#"{"domain":"s","dt":null,"b":[1.0],"a":[5.0,2.0,1.0]}"#,
    )
    .unwrap();
    run_ok(&[
        "step-response", "--tf", &ws.arg("plant.json"), "--fs", "100", "--t-max", "5",
        "--out", &ws.arg("ys.csv"),
    ]);
    let rows = parse_signal(&read(&ws.path("ys.csv")));
    assert_eq!(rows.len(), 501);
    let closed = |t: f64| 0.2 - 0.2 * (-t).exp() * ((2.0 * t).cos() + 0.5 * (2.0 * t).sin());
    for (i, &(_, v)) in rows.iter().enumerate() {
        assert!((v - closed(i as f64 / 100.0)).abs() < 1e-8);
    }

    run_ok(&[
        "impulse", "--tf", &ws.arg("plant.json"), "--fs", "100", "--t-max", "2",
        "--out", &ws.arg("hs.csv"),
    ]);
    assert_eq!(parse_signal(&read(&ws.path("hs.csv"))).len(), 201);
}

#[test]
fn dft_command_emits_a_parsable_spectrum() {
    let ws = Workspace::new();
    run_ok(&[
        "gen", "--kind", "tone", "--freq", "8", "--fs", "64", "--n", "64",
        "--out", &ws.arg("t.csv"),
    ]);
    run_ok(&[
        "dft", "--input", &ws.arg("t.csv"), "--fft",
        "--out", &ws.arg("spec.csv"),
    ]);
    let text = read(&ws.path("spec.csv"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 64);
    // The 8 Hz bin dominates.
    let best = rows
        .iter()
        .take(32)
        .max_by(|a, b| a[4].total_cmp(&b[4]))
        .unwrap();
    assert_eq!(best[1], 8.0);

    // Non-power-of-two input is refused by the fft path with exit code 1.
    run_ok(&[
        "gen", "--kind", "tone", "--freq", "8", "--fs", "64", "--n", "60",
        "--out", &ws.arg("t60.csv"),
    ]);
    let out = bin()
        .args(["dft", "--input", &ws.arg("t60.csv"), "--fft", "--out", &ws.arg("x.csv")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mra_writes_one_column_per_scale() {
    let ws = Workspace::new();
    run_ok(&["gen", "--kind", "exercise5", "--seed", "3", "--out", &ws.arg("u.csv")]);
    run_ok(&[
        "mra", "--split", "10,70,100,300", "--order", "511", "--window", "hamming",
        "--input", &ws.arg("u.csv"), "--out", &ws.arg("scales.csv"),
    ]);
    let text = read(&ws.path("scales.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,scale_1,scale_2,scale_3,scale_4,scale_5");
    assert_eq!(lines.count(), 4096);
}

#[test]
fn sysid_round_trip_recovers_the_model() {
    let ws = Workspace::new();
    std::fs::write(
        ws.path("true.json"),
        r#"{"domain":"z","dt":0.02,"b":[2.0,1.8,-1.2],"a":[1.0,-0.5,0.0]}"#,
    )
    .unwrap();
    run_ok(&[
        "gen", "--kind", "noise", "--seed", "9", "--n", "2000", "--fs", "50",
        "--out", &ws.arg("u.csv"),
    ]);
    run_ok(&[
        "simulate", "--tf", &ws.arg("true.json"), "--input", &ws.arg("u.csv"),
        "--out", &ws.arg("y.csv"),
    ]);
    run_ok(&[
        "sysid", "--input", &ws.arg("u.csv"), "--output-data", &ws.arg("y.csv"),
        "--nb", "2", "--na", "2", "--alpha", "0", "--drop-contaminated",
        "--out", &ws.arg("model.json"), "--diagnostics", &ws.arg("diag.json"),
    ]);
    let model: serde_json::Value = serde_json::from_str(&read(&ws.path("model.json"))).unwrap();
    assert_eq!(model["domain"], "z");
    assert!((model["dt"].as_f64().unwrap() - 0.02).abs() < 1e-12);
    let b: Vec<f64> = model["b"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let a: Vec<f64> = model["a"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (got, want) in b.iter().zip(&[2.0, 1.8, -1.2]) {
        assert!((got - want).abs() < 1e-6);
    }
    for (got, want) in a.iter().zip(&[1.0, -0.5, 0.0]) {
        assert!((got - want).abs() < 1e-6);
    }
    let diag: serde_json::Value = serde_json::from_str(&read(&ws.path("diag.json"))).unwrap();
    assert_eq!(diag["rows_dropped"], 2);
    assert!(diag["condition_estimate"].as_f64().unwrap() > 1.0);
}

#[test]
fn exit_codes_follow_the_contract() {
    let ws = Workspace::new();
    // Unknown generator kind: usage error.
    let out = bin()
        .args(["gen", "--kind", "chirp", "--out", &ws.arg("x.csv")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Valid flags, invalid numerics: runtime error with a one-line message.
    let out = bin()
        .args([
            "fir-design", "--order", "5", "--fc", "600", "--fs", "1000",
            "--out", &ws.arg("t.csv"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim().lines().count(), 1, "stderr was {err:?}");
}
