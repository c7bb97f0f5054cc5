use std::process::{Command, Output};

use so4top::dynamics::Trajectory;
use so4top::scan::ScanGrid;

fn so4top(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_so4top")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_prints_json_report() {
    let o = so4top(&["classify", "--c1", "5", "--c2", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "classify");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["cartan"].as_array().unwrap().len(), 12);
    assert!((v["ratio"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn equilibria_lists_twelve_cartan_points() {
    let o = so4top(&["equilibria", "--lambda", "4,3,2,1", "--c1", "5", "--c2", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eqs = v["equilibria"].as_array().unwrap();
    let cartan = eqs.iter().filter(|e| e["kind"] == "K0").count();
    assert!(cartan >= 12);
    assert!(eqs.iter().all(|e| e["residual"].as_f64().unwrap() <= 1e-10));
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        &["classify", "--c1", "1", "--c2", "1"][..],
        &["classify", "--c1", "1", "--c2", "2"],
        &["classify", "--lambda", "1,2,3,4", "--c1", "5", "--c2", "3"],
        &["classify", "--lambda", "4,3,2", "--c1", "5", "--c2", "3"],
        &["classify", "--c1", "5"],
        &["scan", "--grid", "1:2"],
        &["simulate", "--steps", "0", "--c1", "5", "--c2", "3", "--family", "t1"],
        &["frobnicate"],
    ] {
        let o = so4top(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = so4top(&["classify", "--c1", "1", "--c2", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("regular"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&so4top(&["--help"])), 0);
    assert_eq!(code(&so4top(&["scan", "--help"])), 0);
}

#[test]
fn drift_violation_exits_three() {
    let o = so4top(&[
        "simulate", "--c1", "5", "--c2", "3", "--family", "t2", "--perturbation", "0.5", "--step", "0.5", "--steps",
        "100", "--tol", "1e-12",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("drift"));
}

#[test]
fn verify_passes_with_exit_zero() {
    let o = so4top(&["verify", "--draws", "4", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["scan", "--grid", "1:2:2,-0.9:0.9:19", "--format", "csv"];
    assert_eq!(so4top(&args).stdout, so4top(&args).stdout);
    let args = ["simulate", "--c1", "5", "--c2", "3", "--family", "t3", "--perturbation", "1e-3", "--seed", "9", "--steps", "50"];
    assert_eq!(so4top(&args).stdout, so4top(&args).stdout);
    let args = ["verify", "--draws", "3", "--seed", "11"];
    assert_eq!(so4top(&args).stdout, so4top(&args).stdout);
}

#[test]
fn seed_changes_perturbation() {
    let run = |seed| {
        so4top(&["simulate", "--c1", "5", "--c2", "3", "--family", "t3", "--perturbation", "1e-3", "--seed", seed, "--steps", "2"])
            .stdout
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("scan.csv");
    std::fs::write(
        &cfg,
        r#"{"lambda": [5.0, 2.2, 1.3, 0.4],
            "grid": {"c1": {"min": 1, "max": 1, "steps": 1}, "slope": {"min": -0.5, "max": 0.5, "steps": 11}},
            "output": {"format": "csv"}}"#,
    )
    .unwrap();
    let o = so4top(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let g = ScanGrid::from_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.lambda, [5.0, 2.2, 1.3, 0.4]);
    assert_eq!(g.cells.len(), 11);

    let o = so4top(&["scan", "--config", cfg.to_str().unwrap(), "--lambda", "4,3,2,1", "--grid", "1:1:1,0:0.5:3"]);
    let g = ScanGrid::from_csv(&stdout(&o)).unwrap();
    assert_eq!(g.lambda, [4.0, 3.0, 2.0, 1.0]);
    assert_eq!(g.cells.len(), 3);
    assert_eq!(g.cells[0].s_family, so4top::scan::SFamily::None);

    std::fs::write(&cfg, "{\"lambda\": [4, 3]}").unwrap();
    assert_eq!(code(&so4top(&["scan", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn simulate_csv_round_trip() {
    let o = so4top(&[
        "simulate", "--lambda", "4,3,2,1", "--state", "0.3,-1.2,0.8,0.5,0.1,-0.7", "--flow", "i", "--step", "1e-3",
        "--steps", "400", "--record-every", "10", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let t = Trajectory::from_csv(&text).unwrap();
    assert_eq!(t.states.len(), 41);
    assert_eq!(t.to_csv().unwrap(), text);
    let d = t.max_relative_drift();
    assert!(d.c1 < 1e-7 && d.h < 1e-7 && d.i < 1e-7);
}

#[test]
fn projected_midpoint_run_keeps_casimirs() {
    let o = so4top(&[
        "simulate", "--state", "0.3,-1.2,0.8,0.5,0.1,-0.7", "--scheme", "midpoint", "--project", "--steps", "500",
        "--step", "1e-2", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let drifts = v["drifts"].as_array().unwrap();
    assert!(drifts.iter().all(|d| d["c1"].as_f64().unwrap() < 1e-12 && d["c2"].as_f64().unwrap() < 1e-12));
}
