use std::process::{Command, Output};

use serde_json::Value;

fn thermalent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermalent"))
        .args(args)
        .env_remove("THERMALENT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_non_entanglable_state() {
    let v = json(&thermalent(&["classify", "--state", "0.4,0.25,0.33,0.02", "--beta", "1"]));
    assert_eq!(v["in_E"], false);
    assert_eq!(v["in_TE"], false);
    assert!(v["f_star"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_accepts_infinite_beta() {
    let v = json(&thermalent(&["classify", "--state", "0.4,0.25,0.33,0.02", "--beta", "inf"]));
    assert_eq!(v["in_TE"], true);
}

#[test]
fn catalysis_demo_passes() {
    let v = json(&thermalent(&["catalysis-demo"]));
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["sigma_c"], serde_json::json!(["73/100", "27/100"]));
}

#[test]
fn volume_is_byte_identical_across_runs_and_threads() {
    let base = ["volume", "--set", "TNE", "--beta", "0.5", "--samples", "20000", "--seed", "11"];
    let a = thermalent(&base);
    let b = thermalent(&base);
    let mut threaded = vec!["--threads", "3"];
    threaded.extend(base);
    let c = thermalent(&threaded);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["volume", "--set", "E", "--samples", "5000"];
    let env = Command::new(env!("CARGO_BIN_EXE_thermalent"))
        .args(args)
        .env("THERMALENT_SEED", "42")
        .output()
        .unwrap();
    let explicit = thermalent(&["volume", "--set", "E", "--samples", "5000", "--seed", "42"]);
    assert_eq!(env.stdout, explicit.stdout);
    assert_eq!(json(&env)["seed"], 42);
}

#[test]
fn manifest_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("run.json");
    let out = dir.path().join("out.json");
    let status = thermalent(&[
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "critical-temp",
        "--beta-s",
        "5",
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "critical-temp");
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["beta_c1"].as_f64().unwrap() - 3.9058746).abs() < 1e-6);
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = thermalent(&["--format", "csv", "jc", "--initial", "00", "--betaE-range", "0.5:1.5:3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta_e,optimal_time,ground_pop,negativity");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.5,"));
}

#[test]
fn boundary_writes_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("hull.obj");
    let v = json(&thermalent(&["boundary", "--beta", "1", "--grid", "6", "--iters", "20", "--mesh", mesh.to_str().unwrap()]));
    let obj = std::fs::read_to_string(&mesh).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("f ")));
    let frac = v["hull_volume_fraction"].as_f64().unwrap();
    assert!(frac > 0.0 && frac < 1.0);
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["classify", "--state", "0.5,0.5,0.5,0.5", "--beta", "1"][..],
        &["classify", "--state", "0.5,0.5", "--beta", "1"],
        &["volume", "--set", "XYZ"],
        &["jc", "--initial", "11", "--betaE-range", "0.1:1:2"],
        &["classify", "--beta", "1"],
    ] {
        let out = thermalent(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn small_beta_e_override() {
    let out = thermalent(&["jc", "--initial", "11", "--betaE-range", "0.15:0.15:1", "--allow-small-beta-e"]);
    assert!(out.status.success());
}

#[test]
fn renorm_rescales_state() {
    let v = json(&thermalent(&["--renorm", "classify", "--state", "4,2.5,3.3,0.2", "--beta", "1"]));
    assert_eq!(v["in_TE"], false);
}

#[test]
fn io_failure_exits_one() {
    let out = thermalent(&["--out", "/nonexistent-dir/x.json", "catalysis-demo"]);
    assert_eq!(out.status.code(), Some(1));
}
