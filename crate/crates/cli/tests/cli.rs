use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ptmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad report ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_thm2_emits_a_verifiable_code() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    let out = ptmc(&["construct", "thm2", "--c", "2,2", "--k", "1,1", "--emit", path(&code)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["artifacts"][0], path(&code));

    let out = ptmc(&["verify", "ptmc", "--code", path(&code)]);
    assert_eq!(out.status.code(), Some(0));
    let out = ptmc(&["verify", "ptmc", "--code", path(&code), "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reports_witness_on_non_code() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("bad.json");
    fs::write(&code, r#"{"ambient":{"kind":"torus","moduli":[4,4]},"vertices":[[0,0]]}"#).unwrap();
    let out = ptmc(&["verify", "ptmc", "--code", path(&code), "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert!(!r["details"]["verdict"]["failure"]["witness"].as_array().unwrap().is_empty());
}

#[test]
fn verify_inflation() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    ptmc(&["construct", "thm2", "--c", "3,2", "--k", "1,1", "--emit", path(&code)]);
    let out = ptmc(&["verify", "inflation", "--code", path(&code), "--torus", "8,6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["components"], 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ptmc(&["construct", "thm2", "--c", "1,2", "--k", "1,1"]).status.code(), Some(2));
    assert_eq!(ptmc(&["frobnicate"]).status.code(), Some(2));
    let out = ptmc(&["export", "hive", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--format"));
    let out = ptmc(&["verify", "ptmc", "--code", "/nonexistent/code.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_templates() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("t3.json");
    let out = ptmc(&["construct", "thm3", "--emit", path(&code)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["details"]["census"]["unit-square"], 4);
    assert_eq!(r["details"]["census"]["singleton"], 4);
    let file: Value = serde_json::from_str(&fs::read_to_string(&code).unwrap()).unwrap();
    assert!(file["template"].is_object());
    assert_eq!(ptmc(&["verify", "ptmc", "--code", path(&code)]).status.code(), Some(0));

    let out = ptmc(&["construct", "thm4", "--n", "4", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["status"], "timeout");
}

#[test]
fn search_subcommands() {
    let out = ptmc(&["search", "tiling", "--torus", "6,6,3", "--shape", "unit-square:1", "--shape", "singleton:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["tiles"], 216);

    let out = ptmc(&["search", "tiling", "--torus", "4,4", "--shape", "singleton:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "infeasible");

    let out = ptmc(&["search", "tiling", "--torus", "5,5", "--shape", "singleton:1", "--limit", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["details"]["exhaustive"], true);
    assert!(r["counts"]["solutions"].as_u64().unwrap() > 0);

    let out = ptmc(&["search", "grid-eds", "--m", "4", "--n", "4", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["solutions"], r["details"]["solutions"].as_array().unwrap().len());

    assert_eq!(ptmc(&["search", "tiling", "--torus", "6,6", "--shape", "blob:1"]).status.code(), Some(2));
}

#[test]
fn gamma_subcommands() {
    let out = ptmc(&["gamma", "count-2ptmc", "--threads", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["count"], 262144);

    let out = ptmc(&["gamma", "hive"]);
    let r = report(&out);
    assert_eq!(r["counts"]["tersquares"], 16);
    assert_eq!(r["counts"]["vertices"], 81);

    let out = ptmc(&["gamma", "thm6c"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["size"], 18);

    let out = ptmc(&["gamma", "no-isolated-pds"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["details"]["outcome"], "infeasible");

    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("centers.json");
    let out = ptmc(&["gamma", "extend", "--depth", "3", "--seed", "7", "--emit", path(&emitted)]);
    assert_eq!(out.status.code(), Some(0));
    let centers: Value = serde_json::from_str(&fs::read_to_string(&emitted).unwrap()).unwrap();
    assert_eq!(centers["seed"], 7);
}

#[test]
fn export_formats() {
    let out = ptmc(&["export", "hive", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph gamma2 {"));
    assert_eq!(dot.matches("fillcolor").count(), 81);

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("region.json");
    let rep = dir.path().join("report.json");
    let out = ptmc(&["export", "region", "--depth", "0", "--emit", path(&json), "--out", path(&rep)]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 9);
    let r: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["counts"]["vertices"], 9);
}

#[test]
fn survey_small() {
    let out = ptmc(&["survey", "grid-eds", "--max-side", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["details"]["grids_with_eds"], serde_json::json!([[4, 4]]));
}

#[test]
fn reports_are_reproducible_apart_from_timings() {
    let strip = |o: &Output| {
        let mut v = report(o);
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let a = ptmc(&["construct", "thm3"]);
    let b = ptmc(&["construct", "thm3"]);
    assert_eq!(strip(&a), strip(&b));
    let text = String::from_utf8_lossy(&a.stdout);
    let pos: Vec<usize> = ["command", "inputs_digest", "status", "counts", "details", "artifacts", "timings"]
        .iter()
        .map(|k| text.find(&format!("\n  \"{k}\"")).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}
