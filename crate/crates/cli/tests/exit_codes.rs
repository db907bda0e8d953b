use std::fs;
use std::process::Command;

fn steinkit(dir: &std::path::Path, config: &str, args: &[&str]) -> std::process::Output {
    let cfg = dir.join("c.json");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_steinkit")).current_dir(dir).arg("--config").arg(&cfg).args(args).output().unwrap()
}

const KSD: &str = r#"{"base": {"family": "imq", "dim": 1}, "target": {"family": "gaussian", "mean": [0], "cov_diag": [1]}, "samples": "s.csv"}"#;

#[test]
fn success_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.csv"), "0.1\n-0.4\n1.2\n").unwrap();
    let out = steinkit(dir.path(), KSD, &["ksd"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 3);
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.csv"), "0.1\ninf\n").unwrap();
    let out = steinkit(dir.path(), KSD, &["ksd"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2 column 1"));
    assert_eq!(steinkit(dir.path(), "{not json", &["ksd"]).status.code(), Some(2));
    assert_eq!(steinkit(dir.path(), KSD, &["--threads", "0", "ksd"]).status.code(), Some(2));
}

#[test]
fn divergence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"target": {"family": "gaussian", "mean": [0], "cov_diag": [1e-6]}, "kernel": {"family": "gaussian", "dim": 1},
                  "step_size": 1e6, "iterations": 50, "draw": {"n": 10, "from": {"family": "gaussian", "mean": [0], "cov_diag": [1]}}}"#;
    assert_eq!(steinkit(dir.path(), cfg, &["svgd"]).status.code(), Some(3));
}
