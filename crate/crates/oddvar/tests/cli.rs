//! End-to-end runs of the `oddvar` binary: exit codes, outputs and dumps.

use std::path::Path;
use std::process::{Command, Output};

fn oddvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn sigma_prints_constant_and_rejects_h_above_half() {
    let out = oddvar(&["sigma", "--r", "2", "--h", "0.25", "--tol", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sigma = v["sigma"].as_f64().unwrap();
    assert!((sigma - 2.3868).abs() < 1e-3, "{sigma}");
    assert!(v["tail_bound"].as_f64().unwrap() <= 1e-8);
    assert!(v["version"].as_str().unwrap().starts_with("oddvar "));
    assert_eq!(oddvar(&["sigma", "--r", "2", "--h", "0.6"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(oddvar(&["verify", "nonexistent"]).status.code(), Some(2));
    assert_eq!(oddvar(&["simulate", "fbm", "--n", "0"]).status.code(), Some(2));
    assert_eq!(oddvar(&["simulate", "brownian"]).status.code(), Some(2));
    assert_eq!(oddvar(&["simulate", "fbm", "--f", "cosh"]).status.code(), Some(2));
    assert_eq!(oddvar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(oddvar(&["--help"]).status.code(), Some(0));
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn simulate_fbm_dumps_are_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let d = dir.path().to_str().unwrap();
        let out = oddvar(&[
            "simulate", "fbm", "--h", "0.25", "--n", "10", "--t", "1", "--seed", "7", "--dump-paths", d,
            "--dump-series", d, "--f", "sin",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let path = read(a.path(), "fbm_path.csv");
    assert_eq!(path, read(b.path(), "fbm_path.csv"));
    assert!(path.starts_with("t,value\n0,0\n"));
    assert_eq!(path.lines().count(), 1 + 1025);
    assert!(!path.contains('\r'));
    let series = read(a.path(), "series.csv");
    assert!(series.starts_with("t,phi,psi,left,right,unweighted\n"));
    let manifest: serde_json::Value = serde_json::from_str(&read(a.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["config"]["seed"], 7);
    assert_eq!(manifest["config"]["h"], 0.25);
}

#[test]
fn simulate_fbmbt_reports_identity_residual() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = oddvar(&[
        "simulate", "fbmbt", "--h", "0.25", "--n", "8", "--r", "2", "--seed", "7", "--dump-walk", d,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    let (vn, wn) = (v["v_n"].as_f64().unwrap(), v["w_n"].as_f64().unwrap());
    assert!((vn - wn).abs() <= 1e-9 * vn.abs().max(1.0));
    assert!(v["jstar"].is_i64());
    let walk = read(dir.path(), "walk.csv");
    assert!(walk.starts_with("k,S_k,Z_k\n0,0,0\n"));
    assert_eq!(walk.lines().count(), 1 + 257);
}

#[test]
fn verify_exact_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = oddvar(&["verify", "A5", "--seed", "1", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.starts_with("A5 PASS"), "{line}");
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "A5.json")).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["reports"][0]["seeds"][0], 1);
    assert!(report["reports"][0]["version"].as_str().unwrap().starts_with("oddvar "));
}

#[test]
fn failing_check_exits_one() {
    // A threshold that no Monte Carlo variance can meet
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(&cfg, "replicates = 200\nn = 8\nvariance_se = 1e-9\n").unwrap();
    let out = oddvar(&["verify", "A1", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "h = 0.3\nr = 3\n").unwrap();
    let out = oddvar(&["sigma", "--config", cfg.to_str().unwrap(), "--r", "2"]);
    let v = json(&out);
    assert_eq!(v["config"]["h"], 0.3);
    assert_eq!(v["config"]["r"], 2);
    std::fs::write(&cfg, "hurst = 0.3\n").unwrap();
    assert_eq!(oddvar(&["sigma", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["simulate", "fbmbt", "--n", "10", "--seed", "3", "--f", "exp-x2"];
    let one = oddvar(&[&args[..], &["--threads", "1"]].concat());
    let four = oddvar(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(oddvar(&[&args[..], &["--threads", "0"]].concat()).status.code(), Some(2));
}
