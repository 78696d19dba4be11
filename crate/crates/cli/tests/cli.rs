use std::fs;

use phi_ineq::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("phi-ineq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_writes_one_csv_row() {
    let (code, out, err) = run_args(&["verify", "--fn", "cube", "--x", "0.5"]);
    assert_eq!(code, EXIT_PASS, "{err}");
    assert_eq!(out.lines().count(), 2);
    assert!(err.contains("1 PASS"));
}

#[test]
fn output_file_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, out, _) = run_args(&["verify", "--fn", "exp", "--q", "3", "--theorem", "t2", "--kernel", "mt", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["reports"][0]["kernel"], "mt");
    assert_eq!(v["reports"][0]["p"], 1.5);
}

#[test]
fn sweep_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"fn": "square", "kernel": "constant", "theorem": "t1", "x": 0.5, "lambda": 0, "alpha": 1, "q": 1}"#).unwrap();
    let (code, out, _) = run_args(&["sweep", "--config", cfg.to_str().unwrap(), "--alpha", "0.5,2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn corrupted_bound_exits_one() {
    let (code, _, err) = run_args(&["verify", "--fn", "square", "--fault-rhs-scale", "0.9"]);
    assert_eq!(code, EXIT_FAIL, "{err}");
}

#[test]
fn usage_errors_exit_two_and_list_problems() {
    let (code, _, err) = run_args(&["verify", "--fn", "t^", "--alpha", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.lines().count() >= 2, "{err}");
    let (code, _, _) = run_args(&["sweep", "--config", "/nonexistent/plan.json"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, out, _) = run_args(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("Usage"));
}

#[test]
fn coeffs_grid_flags() {
    let (code, out, _) = run_args(&["coeffs", "--alpha", "1", "--lambda", "0,1", "--s", "1", "--q", "2"]);
    assert_eq!(code, EXIT_PASS);
    // 7 closed forms at 2 points each.
    assert_eq!(out.lines().count(), 1 + 14);
    let (code, _, _) = run_args(&["coeffs", "--q", "1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn selftest_json() {
    let (code, out, _) = run_args(&["selftest", "--format", "json"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
}
