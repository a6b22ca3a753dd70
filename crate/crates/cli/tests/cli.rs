use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn flatloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatloop")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let out = flatloop(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flatloop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn geodesic_component_counts() {
    for (n, a, rows) in [("1", "19.74", 3), ("2", "0", 1), ("2", "19.74", 5)] {
        let v = json(&["geodesics", "--n", n, "--a", a, "--format", "json"]);
        assert_eq!(v["components"].as_array().unwrap().len(), rows, "n = {n}, a = {a}");
    }
    let csv = stdout(&flatloop(&["geodesics", "--n", "1", "--a", "19.74", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(flatloop(&["geodesics", "--n", "1", "--a", "-1"]).status.code(), Some(2));
    assert_eq!(flatloop(&["geodesics", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn homology_examples() {
    let v = json(&["homology", "--n", "2", "--k", "1,0", "--side", "morse", "--format", "json"]);
    let ranks: Vec<u64> = v["entries"].as_array().unwrap().iter().map(|e| e["free_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [5, 10, 5]);

    let v = json(&["homology", "--n", "1", "--k", "0", "--side", "floer", "--format", "json"]);
    let entries: Vec<(i64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["degree"].as_i64().unwrap(), e["free_rank"].as_u64().unwrap()))
        .collect();
    assert_eq!(entries, [(-1, 1), (0, 1)]);
    assert_eq!(v["grading"], "cohomological-negative");

    let out = flatloop(&["homology", "--n", "3", "--k", "1,0,0", "--check-all"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("three-way agreement: PASS"));
    assert_eq!(flatloop(&["homology", "--n", "2", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn cz_examples() {
    let index = |args: &[&str]| {
        let mut a = vec!["cz"];
        a.extend_from_slice(args);
        a.extend_from_slice(&["--format", "json"]);
        let v = json(&a);
        (v["value_num"].as_i64().unwrap(), v["method"].as_str().unwrap().to_string())
    };
    assert_eq!(index(&["--shear", "--n", "2"]).0, -2);
    assert_eq!(index(&["--shear", "--n", "3"]).0, -3);
    // S = diag(1, 1) is the quadratic form of x^- in this convention
    assert_eq!(index(&["--quadratic", "1,1"]), (-2, "sz-formula".into()));
    assert_eq!(index(&["--exp-path", "1,1"]), (-2, "crossing-sum".into()));
    assert_eq!(index(&["--quadratic", "-1,1"]).0, index(&["--exp-path", "-1,1"]).0);
    assert_eq!(index(&["--perturbed", "minus"]).0, -2);
    assert_eq!(index(&["--perturbed", "plus"]).0, 0);
    assert_eq!(index(&["--off-cycle"]).0, -1);
    assert_eq!(flatloop(&["cz", "--quadratic", "1,2,3"]).status.code(), Some(2));
    assert_eq!(flatloop(&["cz", "--quadratic", "7,1"]).status.code(), Some(2));
    assert_eq!(flatloop(&["cz"]).status.code(), Some(2));
}

#[test]
fn perturb_examples() {
    let v = json(&["perturb", "--k", "1", "--format", "json"]);
    assert_eq!(v["pass"], true);
    assert_eq!((v["orbit_count"].as_u64(), v["orbit_parity"].as_u64()), (Some(2), Some(0)));
    let b = v["branches"].as_array().unwrap();
    assert_eq!((b[0]["morse_index"].as_u64(), b[1]["morse_index"].as_u64()), (Some(1), Some(0)));
    assert_eq!((b[0]["cz_crossing_sum"].as_i64(), b[1]["cz_crossing_sum"].as_i64()), (Some(-1), Some(0)));
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    assert!((b[0]["action_numeric"].as_f64().unwrap() - (two_pi_sq + 1.0)).abs() < 1e-9);
    assert!(stdout(&flatloop(&["perturb", "--k", "1"])).contains("relation μ_CZ = -Ind: PASS"));

    let out = flatloop(&["perturb", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));

    let v = json(&["perturb", "--k", "2", "--q0", "0.3", "--format", "json"]);
    let b = v["branches"].as_array().unwrap();
    assert!((b[1]["action_numeric"].as_f64().unwrap() - (4.0 * two_pi_sq - 1.0)).abs() < 1e-9);
    assert_eq!(v["orbit_count"], 2);
}

#[test]
fn flow_examples() {
    let csv = scratch("chi.csv");
    let v = json(&["flow", "--chi", "0.25", "--range", "-20,20", "--format", "json", "--output", csv.to_str().unwrap()]);
    assert_eq!(v["limits"], serde_json::json!([0.0, 0.5]));
    assert_eq!(v["pass"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s,chi\n"));
    let summary = json(&["report", "--input", csv.to_str().unwrap(), "--format", "json"]);
    assert_eq!(summary["kind"], "trajectory");
    assert_eq!(summary["limits"], serde_json::json!([0.0, 0.5]));

    let v = json(&["flow", "--orbit", "--n", "1", "--k", "2", "--format", "json"]);
    assert!(v["closure_defect"].as_f64().unwrap() < 1e-10);
    let v = json(&["flow", "--orbit", "--n", "2", "--momentum", "0.5,1", "--format", "json"]);
    assert!(v["closure_defect"].as_f64().unwrap() > 0.1);

    let grid = scratch("cylinder.json");
    let v = json(&["flow", "--cylinder", "--k", "1", "--chi0", "0.25", "--format", "json", "--output", grid.to_str().unwrap()]);
    assert!(v["ansatz_coherence"].as_f64().unwrap() < 1e-6);
    assert!(v["max_energy_increase"].as_f64().unwrap() <= 1e-8);
    let exported: Value = serde_json::from_str(&std::fs::read_to_string(&grid).unwrap()).unwrap();
    assert_eq!(exported["w"].as_array().unwrap().len(), exported["s_grid"].as_array().unwrap().len());
    assert_eq!(json(&["report", "--input", grid.to_str().unwrap(), "--format", "json"])["kind"], "cylinder");

    assert_eq!(flatloop(&["flow", "--chi", "1.5"]).status.code(), Some(2));
    assert_eq!(flatloop(&["flow", "--cylinder", "--s-step", "5"]).status.code(), Some(2));
    assert_eq!(flatloop(&["flow", "--orbit", "--n", "2", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn loop_file_round_trip() {
    let file = scratch("loop.json");
    let out = flatloop(&["loop", "geodesic", "--k", "1,-1", "--q", "0.1,0.7", "--samples", "32", "--output", file.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!((v["dim"].as_u64(), v["N"].as_u64()), (Some(2), Some(32)));
    let eval = json(&["loop", "eval", "--input", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(eval["winding"], serde_json::json!([1, -1]));
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    assert!((eval["energy"].as_f64().unwrap() - 2.0 * two_pi_sq).abs() < 1e-9);

    let circle = scratch("circle.json");
    flatloop(&["loop", "geodesic", "--k", "1", "--q", "0.5", "--output", circle.to_str().unwrap()]);
    let eval = json(&["loop", "eval", "--input", circle.to_str().unwrap(), "--potential", "1,0", "--format", "json"]);
    assert!((eval["perturbed_energy"].as_f64().unwrap() - (two_pi_sq - 1.0)).abs() < 1e-9);

    std::fs::write(&file, r#"{"dim": 1, "N": 4, "winding": [0], "samples": [[0.0], [0.25], [0.5], [0.75]]}"#).unwrap();
    assert_eq!(flatloop(&["loop", "eval", "--input", file.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn paper_filters_and_json() {
    let out = flatloop(&["paper", "--only", "appendix"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains("[appendix]")));
    assert_eq!(flatloop(&["paper", "--only", "nowhere"]).status.code(), Some(2));

    let path = scratch("anchors.json");
    assert!(flatloop(&["paper", "--only", "index", "--json", path.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["anchors"].as_array().unwrap().iter().all(|a| a["section"] == "index" && a["pass"] == true));
}
