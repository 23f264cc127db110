//! Integration tests of the `fhn-torus` binary: exit codes, file formats,
//! determinism, and the simulate/analyze round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fhn-torus"))
}

fn write_config(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn fig2_config(gamma: f64, delta: f64) -> Value {
    json!({
        "n": 3, "a": 0.01, "b": 0.9, "c": 0.9,
        "gamma": gamma, "delta": delta,
    })
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn version_reports_tool_and_schema() {
    let out = bin().arg("--version").output().unwrap();
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("(schema 1)"));
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(0.1, 0.1);
    cfg["coupling"] = json!(1.0);
    let path = write_config(dir.path(), "bad.json", &cfg);
    let out = bin().args(["spectrum"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("coupling"), "stderr: {}", stderr_str(&out));
}

#[test]
fn out_of_range_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(0.1, 0.1);
    cfg["n"] = json!(1);
    let path = write_config(dir.path(), "n1.json", &cfg);
    let out = bin().args(["spectrum"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("n"), "stderr: {}", stderr_str(&out));

    let mut cfg = fig2_config(0.1, 0.1);
    cfg["dt"] = json!(-0.5);
    let path = write_config(dir.path(), "dt.json", &cfg);
    let out = bin().args(["spectrum"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_verdicts_match_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let low = write_config(dir.path(), "low.json", &fig2_config(0.1, 0.1));
    let out = bin().args(["spectrum"]).arg(&low).output().unwrap();
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("origin: stable"));

    let high = write_config(dir.path(), "high.json", &fig2_config(2.0, 2.0));
    let out = bin().args(["spectrum"]).arg(&high).output().unwrap();
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("origin: unstable"));
    assert!(text.contains("(1,1)") && text.contains("(2,2)"), "critical modes: {text}");
}

#[test]
fn spectrum_zero_mode_matches_uncoupled_formula() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(2.0, 2.0));
    let out = bin()
        .args(["spectrum", "--mode", "0,0", "--format", "json"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    // Coupling cancels at (0,0): the uncoupled eigenvalues.
    assert!((records[0]["re"].as_f64().unwrap() + 0.445).abs() < 1e-12);
    assert!((records[0]["im"].as_f64().unwrap() - 0.8324511997708934).abs() < 1e-10);
    assert!((records[1]["im"].as_f64().unwrap() + 0.8324511997708934).abs() < 1e-10);
    assert_eq!(doc["schema_version"], json!(1));
}

#[test]
fn spectrum_invalid_mode_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.1, 0.1));
    let out = bin().args(["spectrum", "--mode", "9,0"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["spectrum", "--mode", "banana"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hopf_boundary_locates_tabulated_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.0, 0.0));
    let results = dir.path().join("boundaries.csv");
    let out = bin()
        .args(["hopf-boundary", "--mode", "1,1", "--vary", "gamma", "--range", "0:2", "--out"])
        .arg(&results)
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let critical: f64 = text
        .lines()
        .find(|l| l.starts_with("critical gamma"))
        .and_then(|l| l.split('=').nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((critical - 0.3615177915509975).abs() < 1e-6, "critical {critical}");
    assert!(text.contains("imaginary part"));
    let stored = fs::read_to_string(&results).unwrap();
    assert!(stored.lines().count() == 2 && stored.starts_with("r,s,vary,critical"));
}

#[test]
fn hopf_boundary_without_crossing_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.0, 0.0));
    let out = bin()
        .args(["hopf-boundary", "--mode", "1,1", "--vary", "gamma", "--range", "0:0.1"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("no boundary"));
}

#[test]
fn simulate_low_coupling_decays_to_small_final_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.1, 0.1));
    let traj = dir.path().join("traj.csv");
    let out = bin().args(["simulate", "--out"]).arg(&traj).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = fs::read_to_string(&traj).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 1 + 18);
    assert_eq!(header[0], "t");
    assert_eq!(header[1], "x_0_0");
    assert_eq!(header[2], "y_0_0");
    assert_eq!(header[18], "y_2_2");
    let last = lines.last().unwrap();
    for field in last.split(',').skip(1) {
        let v: f64 = field.parse().unwrap();
        assert!(v.abs() < 1e-3, "final value {v}");
    }
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(2.0, 2.0);
    cfg["t_end"] = json!(50.0);
    cfg["transient_discard"] = json!(10.0);
    let path = write_config(dir.path(), "cfg.json", &cfg);
    let t1 = dir.path().join("a.csv");
    let t2 = dir.path().join("b.csv");
    assert!(bin().args(["simulate", "--out"]).arg(&t1).arg(&path).output().unwrap().status.success());
    assert!(bin().args(["simulate", "--out"]).arg(&t2).arg(&path).output().unwrap().status.success());
    assert_eq!(fs::read(&t1).unwrap(), fs::read(&t2).unwrap());
}

#[test]
fn simulate_divergence_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(2.0, 2.0);
    cfg["dt"] = json!(10.0);
    cfg["t_end"] = json!(1000.0);
    cfg["transient_discard"] = json!(0.0);
    let path = write_config(dir.path(), "cfg.json", &cfg);
    let out = bin()
        .args(["simulate", "--out"])
        .arg(dir.path().join("traj.csv"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_str(&out).contains("diverged"));
}

#[test]
fn analyze_round_trips_the_in_memory_report() {
    use fhn_torus::analysis::classify_pattern;
    use fhn_torus::dynamics::{fig2_initial_conditions, simulate_torus, IntegratorSettings};
    use fhn_torus::model::{NeuronParams, TorusConfig};

    let dir = tempfile::tempdir().unwrap();
    let cfg = fig2_config(2.0, 2.0);
    let path = write_config(dir.path(), "cfg.json", &cfg);
    let traj_path = dir.path().join("traj.csv");
    assert!(bin().args(["simulate", "--out"]).arg(&traj_path).arg(&path).output().unwrap().status.success());
    let out = bin()
        .args(["analyze", "--format", "json", "--traj"])
        .arg(&traj_path)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let doc: Value = serde_json::from_str(&stdout_str(&out)).unwrap();

    // The same classification computed in-process must agree exactly: the
    // 17-significant-digit CSV round trip is bit-stable.
    let torus = TorusConfig::new(3, NeuronParams::new(0.01, 0.9, 0.9).unwrap(), 2.0, 2.0).unwrap();
    let traj = simulate_torus(&torus, &fig2_initial_conditions(), &IntegratorSettings::default()).unwrap();
    let report = classify_pattern(&traj);
    assert_eq!(doc["torus1"]["kind"], json!("RotatingWave"));
    assert_eq!(doc["torus1"]["phase_shift"].as_f64().unwrap(), report.phase_shift.unwrap());
    let freqs = doc["torus1"]["dominant_freq_per_neuron"].as_array().unwrap();
    assert_eq!(freqs.len(), 9);
    for (got, want) in freqs.iter().zip(&report.dominant_freq_per_neuron) {
        assert_eq!(got.as_f64().unwrap(), *want);
    }
}

#[test]
fn analyze_rejects_malformed_trajectory_with_5() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.1, 0.1));
    let traj = dir.path().join("broken.csv");
    fs::write(&traj, "t,x_0_0\n0.0,1.0\n").unwrap();
    let out = bin()
        .args(["analyze", "--traj"])
        .arg(&traj)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn normal_form_prints_minus_six() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"n": 3, "a": 0.01, "b": 0.9, "c": 0.01, "gamma": 0.0, "delta": 0.0});
    let path = write_config(dir.path(), "hopf.json", &cfg);
    let out = bin().args(["normal-form"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("16s* = -6.000000000000"), "stdout: {text}");
    assert!(text.contains("supercritical"));
}

#[test]
fn normal_form_off_locus_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.1, 0.1));
    let out = bin().args(["normal-form"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(6));
    assert!(stderr_str(&out).contains("Hopf"));
}

#[test]
fn sweep_classification_flips_where_max_re_crosses_zero() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(0.1, 0.1);
    cfg["t_end"] = json!(300.0);
    cfg["transient_discard"] = json!(150.0);
    let path = write_config(dir.path(), "cfg.json", &cfg);
    let out_csv = dir.path().join("sweep.csv");
    let out = bin()
        .args(["sweep", "--vary", "gamma", "--range", "0.1:2", "--steps", "20", "--out"])
        .arg(&out_csv)
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));

    let text = fs::read_to_string(&out_csv).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 20);
    let max_res: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let kinds: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();

    // Exactly one sign change of max Re lambda.
    let crossings: Vec<usize> = max_res
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(crossings.len(), 1, "max_re: {max_res:?}");
    let cross = crossings[0];

    let last_decay = kinds.iter().rposition(|&k| k == "Decay").unwrap();
    let first_wave = kinds.iter().position(|&k| k == "RotatingWave").unwrap();
    assert!(first_wave == last_decay + 1, "kinds: {kinds:?}");
    assert!(
        (last_decay as i64 - cross as i64).abs() <= 1,
        "flip at {last_decay} vs crossing at {cross}"
    );
}

#[test]
fn sweep_rejects_empty_range_and_bad_steps() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "cfg.json", &fig2_config(0.1, 0.1));
    let out = bin()
        .args(["sweep", "--vary", "gamma", "--range", "1:1", "--steps", "5", "--out"])
        .arg(dir.path().join("s.csv"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["sweep", "--vary", "gamma", "--range", "0:1", "--steps", "1", "--out"])
        .arg(dir.path().join("s.csv"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_over_epsilon_reports_triple_frequency_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(2.0, 2.0);
    cfg["epsilon"] = json!(0.5);
    let path = write_config(dir.path(), "two.json", &cfg);
    let out_csv = dir.path().join("eps.csv");
    let out = bin()
        .args(["sweep", "--vary", "epsilon", "--range", "0:1", "--steps", "6", "--out"])
        .arg(&out_csv)
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = fs::read_to_string(&out_csv).unwrap();
    let mut in_phase_rows = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5);
        if fields[3] == "InPhase" {
            in_phase_rows += 1;
            let ratio: f64 = fields[4].parse().unwrap();
            assert!((ratio - 3.0).abs() <= 0.15, "ratio {ratio} in row {line}");
        }
    }
    assert!(in_phase_rows >= 3, "expected several in-phase rows:\n{text}");

    // epsilon sweeps need a two-tori config.
    let single = write_config(dir.path(), "single.json", &fig2_config(2.0, 2.0));
    let out = bin()
        .args(["sweep", "--vary", "epsilon", "--range", "0:1", "--steps", "3", "--out"])
        .arg(dir.path().join("x.csv"))
        .arg(&single)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn explicit_initial_conditions_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = fig2_config(0.1, 0.1);
    cfg["t_end"] = json!(1.0);
    cfg["transient_discard"] = json!(0.0);
    cfg["ic"] = json!({"x": vec![0.5; 9], "y": vec![0.25; 9]});
    let path = write_config(dir.path(), "cfg.json", &cfg);
    let traj = dir.path().join("t.csv");
    assert!(bin().args(["simulate", "--out"]).arg(&traj).arg(&path).output().unwrap().status.success());
    let text = fs::read_to_string(&traj).unwrap();
    let first_row = text.lines().nth(1).unwrap();
    let fields: Vec<f64> = first_row.split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[1], 0.5);
    assert_eq!(fields[2], 0.25);

    // Two-tori explicit ic requires both grids.
    let mut cfg = fig2_config(0.1, 0.1);
    cfg["epsilon"] = json!(0.5);
    cfg["ic"] = json!({"x": vec![0.5; 9], "y": vec![0.25; 9]});
    let path = write_config(dir.path(), "bad.json", &cfg);
    let out = bin().args(["simulate", "--out"]).arg(dir.path().join("u.csv")).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("x2"));
}
