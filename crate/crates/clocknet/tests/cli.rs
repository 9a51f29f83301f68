//! Command-line contract tests: exit codes, golden-file regression, manifest
//! determinism, and config plumbing.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clocknet"))
}

fn stdout_of(args: &[&str]) -> String {
    let output = bin().args(args).output().expect("binary runs");
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 output")
}

#[test]
fn golden_budget_3d() {
    let out = stdout_of(&["budget", "--ntilde", "120", "--omega", "1e5", "--n", "146", "--dim", "3d"]);
    assert_eq!(out, include_str!("golden/budget_3d.csv"));
}

#[test]
fn golden_budget_2d() {
    let out = stdout_of(&["budget", "--ntilde", "120", "--omega", "1e5", "--n", "54", "--dim", "2d"]);
    assert_eq!(out, include_str!("golden/budget_2d.csv"));
}

#[test]
fn golden_scan_row_120() {
    let out = stdout_of(&["scan", "--range", "120", "120"]);
    assert_eq!(out, include_str!("golden/scan_120.csv"));
    // the reproduction row carries the headline numbers
    let row_3d = out.lines().find(|l| l.starts_with("120,3d")).unwrap();
    let fields: Vec<&str> = row_3d.split(',').collect();
    assert_eq!(fields[2], "146", "n_opt");
    let gain: f64 = fields[14].parse().unwrap();
    assert!((gain - 12.0).abs() <= 1.0, "3D gain {gain}");
    let row_2d = out.lines().find(|l| l.starts_with("120,2d")).unwrap();
    let gain2: f64 = row_2d.split(',').nth(14).unwrap().parse::<f64>().unwrap();
    assert!((gain2 - 10.0).abs() <= 1.0, "2D gain {gain2}");
}

#[test]
fn golden_geometry_3d() {
    let out = stdout_of(&["geometry", "--dim", "3d"]);
    assert_eq!(out, include_str!("golden/geometry_3d.csv"));
    let i_row = out.lines().find(|l| l.starts_with("I,3d")).unwrap();
    let i_val: f64 = i_row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((i_val - 4.27).abs() < 0.02);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = stdout_of(&["budget", "--ntilde", "120", "--n", "146", "--dim", "3d", "--format", "json"]);
    let b = stdout_of(&["budget", "--ntilde", "120", "--n", "146", "--dim", "3d", "--format", "json"]);
    assert_eq!(a, b);
    let s1 = stdout_of(&["simulate", "--clocks", "3", "--atoms", "2", "--mode", "sample", "--seed", "5"]);
    let s2 = stdout_of(&["simulate", "--clocks", "3", "--atoms", "2", "--mode", "sample", "--seed", "5"]);
    assert_eq!(s1, s2);
}

#[test]
fn exit_code_contract() {
    // 0: success
    let ok = bin().args(["budget", "--ntilde", "120", "--n", "146", "--dim", "3d"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    // 2: invalid arguments (missing required flag)
    let usage = bin().args(["budget", "--n", "146", "--dim", "3d"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let unknown = bin().args(["budge"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    // 1: computation failure (principal quantum number below the C6 validity root)
    let fail = bin().args(["budget", "--ntilde", "3", "--n", "10", "--dim", "3d"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(!fail.stderr.is_empty(), "failure must explain itself on stderr");
    // 1: optimizer outside the scan range
    let range = bin().args(["optimize", "--ntilde", "30", "--dim", "3d"]).output().unwrap();
    assert_eq!(range.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fisher.csv");
    let status = bin()
        .args(["fisher", "--grid", "11", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("# clocknet fisher"));
    // 11 rows plus manifest and header
    assert_eq!(content.lines().filter(|l| !l.starts_with('#') && !l.starts_with("c,")).count(), 11);
    let last = content.lines().last().unwrap();
    assert!(last.starts_with("1.00000000e0,1.00000000e0,"), "c=1 row: {last}");
}

#[test]
fn config_overrides_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("constants.conf");
    std::fs::write(&cfg, "gamma_dark = 25\nlink_length_L = 5e3\n").unwrap();
    let out = stdout_of(&["params", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["rates"]["gamma_dark"], 25.0);
    assert_eq!(report["rates"]["link_length"], 5000.0);
    let digest = report["manifest"]["config_digest"].as_str().unwrap();
    assert_ne!(digest, "default");
    assert_eq!(digest.len(), 64);

    // an unknown key is a hard error
    std::fs::write(&cfg, "gamma_darc = 25\n").unwrap();
    let bad = bin().args(["params", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn simulate_reports_exact_fidelity() {
    let out = stdout_of(&["simulate", "--clocks", "2", "--atoms", "3", "--mode", "exhaustive"]);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(report["min_fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
    assert_eq!(report["worlds"].as_array().unwrap().len(), 4);
    assert!(report["parity_check_max_dev"].as_f64().unwrap() < 1e-10);
}

#[test]
fn fisher_grid_matches_request() {
    let out = stdout_of(&["fisher", "--grid", "101"]);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#') && !l.starts_with("c,")).collect();
    assert_eq!(rows.len(), 101);
    assert!(rows[0].starts_with("0.00000000e0,"));
}
