use std::fs;

use bootperc::cli::{command, run_with, EXIT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_UNRELIABLE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["bootperc"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn regular3(dir: &tempfile::TempDir) -> String {
    write(dir, "regular3.json", r#"{"type": "regular", "degree": 3}"#)
}

#[test]
fn theory_golden_values() {
    let dir = tempfile::tempdir().unwrap();
    let dist = regular3(&dir);
    let (code, out, _) = run(&["theory", "--dist", &dist, "--alpha", "1", "--omega", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["phi"].as_f64(), v["branch"].as_str()), (Some(1.0), Some("full-activation")));

    let (code, out, _) = run(&["theory", "--dist", &dist, "--alpha", "0", "--omega", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["phi"].as_f64(), v["y_star"].as_f64()), (Some(0.0), Some(1.0)));

    let (code, out, _) = run(&["theory", "--dist", &dist, "--alpha", "0.3", "--omega", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["phi"].as_f64(), Some(1.0));
}

#[test]
fn tangential_root_exits_unreliable() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = format!("{}", 1.0 / 9.0);
    let (code, out, _) = run(&["theory", "--dist", &regular3(&dir), "--alpha", &alpha, "--omega", "2"]);
    assert_eq!(code, EXIT_UNRELIABLE);
    assert!(out.contains("\"tangential\""));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_dist = write(&dir, "bad.json", r#"{"type": "gaussian", "mean": 5}"#);
    assert_eq!(run(&["theory", "--dist", &bad_dist, "--alpha", "0.1", "--omega", "2"]).0, EXIT_CONFIG);
    let unknown = write(&dir, "cfg.json", r#"{"alpha": 0.1, "omgea": 2}"#);
    assert_eq!(run(&["theory", "--config", &unknown]).0, EXIT_CONFIG);
    assert_eq!(run(&["simulate", "--alpha", "0.1", "--omega", "2", "--n", "100"]).0, EXIT_CONFIG);
    assert_eq!(run(&["theory", "--alpha", "1.5", "--omega", "2"]).0, EXIT_CONFIG);
    assert_eq!(run(&["theory", "--alpha", "0.1"]).0, EXIT_CONFIG);
    assert_eq!(run(&["frobnicate"]).0, EXIT_CONFIG);
    let unwritable = dir.path().join("missing").join("out.csv");
    let (code, _, err) = run(&[
        "sweep", "--dist", &regular3(&dir), "--alpha-grid", "0.5", "--omega-grid", "2",
        "--n", "50", "--reps", "1", "--seed", "1", "--out", unwritable.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("cannot write"));
    let (code, _, err) = run(&["simulate", "--alpha", "0.1", "--omega", "2", "--n", "100", "--seed", "1",
        "--engine", "synchronous", "--trajectory", dir.path().join("t.csv").to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("sequential"));
}

#[test]
fn help_documents_every_flag() {
    let root = command();
    for sub in root.get_subcommands() {
        assert!(sub.get_about().is_some(), "{} has no description", sub.get_name());
        for arg in sub.get_arguments() {
            if arg.get_id() == "help" || arg.get_id() == "version" {
                continue;
            }
            assert!(arg.get_help().is_some(), "{} --{} is undocumented", sub.get_name(), arg.get_id());
        }
    }
    let names: Vec<&str> = root.get_subcommands().map(|s| s.get_name()).collect();
    assert_eq!(names, ["theory", "simulate", "sweep", "compare", "concentration"]);
    let (code, out, _) = run(&["sweep", "--help"]);
    assert_eq!(code, EXIT_OK);
    for flag in ["--alpha-grid", "--omega-grid", "--reps", "--seed", "--engine", "--out", "--check", "--threads"] {
        assert!(out.contains(flag), "{flag}");
    }
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--alpha", "0.2", "--omega", "2", "--n", "3000", "--seed", "8", "--engine", "sequential-onfly"];
    let (code, a, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, run(&args).1);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["n"].as_u64(), Some(3000));
    let phi = v["phi"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&phi));
}

#[test]
fn simulate_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, _, _) = run(&["simulate", "--dist", &regular3(&dir), "--alpha", "0.3", "--omega", "2", "--n", "500",
        "--seed", "2", "--engine", "sequential-replay", "--trajectory", path.to_str().unwrap(), "--stride", "1"]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("t,F,F_out,N_in,F_in\n"));
    assert!(text.lines().count() > 2);
}

#[test]
fn sweep_single_cell_row() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["-q", "sweep", "--dist", &regular3(&dir), "--alpha-grid", "1", "--omega-grid", "1",
        "--n", "200", "--reps", "3", "--seed", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "alpha,omega,n,reps,phi_mean,phi_sd,phi_theory,branch\n1,1,200,3,1,0,1,full-activation\n");
}

#[test]
fn sweep_to_file_reports_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, out, err) = run(&["sweep", "--dist", &regular3(&dir), "--alpha-grid", "0,0.3", "--omega-grid", "1:2",
        "--n", "300", "--reps", "2", "--seed", "4", "--out", path.to_str().unwrap(), "--check"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(fs::read_to_string(path).unwrap().lines().count(), 5);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cells"].as_u64(), Some(4));
    assert!(err.contains("cells in"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "run.json", r#"{"dist": {"type": "regular", "degree": 3}, "alpha": 0.3, "omega": 2}"#);
    let (_, from_cfg, _) = run(&["theory", "--config", &cfg]);
    let (_, flagged, _) = run(&["theory", "--config", &cfg, "--alpha", "0"]);
    let a: Value = serde_json::from_str(&from_cfg).unwrap();
    let b: Value = serde_json::from_str(&flagged).unwrap();
    assert_eq!((a["phi"].as_f64(), b["phi"].as_f64()), (Some(1.0), Some(0.0)));
}

#[test]
fn compare_failure_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["compare", "--dist", &regular3(&dir), "--alpha", "0.05", "--omega", "2",
        "--n", "2000", "--reps", "4", "--seed", "3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let expected = if v["pass"].as_bool().unwrap() { EXIT_OK } else { EXIT_FAILED };
    assert_eq!(code, expected);
}

#[test]
fn concentration_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let (code, out, _) = run(&["concentration", "--dist", &regular3(&dir), "--alpha", "0.3", "--omega", "2",
        "--n-list", "100,400", "--reps", "3", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read_to_string(path).unwrap(), out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["concentration", "--alpha", "0.3", "--omega", "2", "--n-list", "400,100", "--seed", "1"]).0, EXIT_CONFIG);
}

#[test]
fn trivial_runs_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let dist = regular3(&dir);
    let phi = |args: &[&str]| {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_OK, "{args:?}: {err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        v
    };
    for engine in ["synchronous", "sequential-replay", "sequential-onfly"] {
        let v = phi(&["simulate", "--dist", &dist, "--alpha", "1", "--omega", "2", "--n", "100", "--seed", "0", "--engine", engine]);
        assert_eq!(v["phi"].as_f64(), Some(1.0));
        let v = phi(&["simulate", "--dist", &dist, "--alpha", "0", "--omega", "0", "--n", "100", "--seed", "0", "--engine", engine]);
        assert_eq!(v["phi"].as_f64(), Some(1.0));
    }
    for alpha in ["1", "0"] {
        let v = phi(&["compare", "--dist", &dist, "--alpha", alpha, "--omega", "2", "--n", "500", "--reps", "3", "--seed", "1"]);
        assert_eq!((v["gap"].as_f64(), v["pass"].as_bool()), (Some(0.0), Some(true)));
    }
}
