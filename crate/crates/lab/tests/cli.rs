use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarz-lab")).args(args).env_remove("SCHWARZ_LAB_THREADS").output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn tag<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["theorems"].as_array().unwrap().iter().find(|t| t["theorem"] == id).unwrap()
}

#[test]
fn lindelof_on_the_disc() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("report.json");
    std::fs::write(&config, r#"{"theorems": ["T2_1"], "dom": "disc", "codom": "disc", "samples": 100, "seed": 7}"#).unwrap();
    let o = lab(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["gates_passed"], true);
    let t = tag(&report, "T2_1");
    assert_eq!(t["failures"], 0);
    assert!(t["min_residual"].as_f64().unwrap() >= -1e-9);
    assert!(t["sharpness_gap"].as_f64().unwrap() <= 1e-8);
    assert_eq!(t["count"], 101);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"theorems": "all", "samples": 20, "seed": 42, "gates": {"derivatives": 50, "operator_norms": 10}}"#)
        .unwrap();
    let a = lab(&["run", "--config", config.to_str().unwrap()]);
    let b = Command::new(env!("CARGO_BIN_EXE_schwarz-lab"))
        .args(["run", "--config", config.to_str().unwrap()])
        .env("SCHWARZ_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn directional_sum_reports_its_companion() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = lab(&[
        "check",
        "--theorem",
        "T3_10",
        "--norm",
        "product:2,1",
        "--codom-norm",
        "euclidean",
        "--codom-dim",
        "2",
        "--samples",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out);
    let companion = tag(&report, "C3_11");
    assert_eq!(companion["companion_of"], "T3_10");
    assert_eq!(companion["roster"][0]["kappa"], 2);
    assert_eq!(companion["count"], 50);
}

#[test]
fn unsatisfiable_tags_are_reported() {
    let o = lab(&["check", "--theorem", "T3_10", "--dim", "2", "--norm", "sup", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = tag(&report, "T3_10");
    assert_eq!(t["count"], 0);
    assert!(t["unsatisfiable"][0].as_str().unwrap().contains("product of balls"));
}

#[test]
fn configuration_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"theorems": ["T2_1"], "samples": 0}"#).unwrap();
    for args in [
        vec!["run", "--config", bad.to_str().unwrap()],
        vec!["run", "--config", dir.path().join("missing.json").to_str().unwrap()],
        vec!["check", "--theorem", "T9_9", "--dim", "1"],
        vec!["check", "--theorem", "T2_1", "--norm", "frobenius", "--dim", "2"],
        vec!["check", "--theorem", "T2_1", "--dim", "1", "--tol", "0"],
        vec!["frobnicate"],
    ] {
        let o = lab(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_schwarz-lab"))
        .args(["check", "--theorem", "T2_1", "--dim", "1"])
        .env("SCHWARZ_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn wall_time_goes_to_stderr_only() {
    let o = lab(&["check", "--theorem", "T2_4", "--dim", "2", "--norm", "euclidean", "--samples", "30", "--seed", "7", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(!stdout.contains("elapsed") && !stdout.contains("wall"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("checks"));
}
