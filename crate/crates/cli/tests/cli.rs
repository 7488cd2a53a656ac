use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(args)
        .env_remove("HYPERLAT_CATALOG")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const E8_NULL: &str = "[[3,0],[1,1],[0,0],[0,2],[5,0],[-3,0]]";

#[test]
fn catalog_listing_and_entry() {
    let out = run(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format"], 1);
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["E8_G", "BW4_H", "D3theta", "R3_E", "II_5_1_G"] {
        assert!(names.contains(&n), "{n}");
    }
    let e8 = json(&run(&["catalog", "E8_G"]));
    assert_eq!(e8["selfdual"], true);
    assert_eq!(e8["even"], true);
    assert_eq!(e8["fingerprint"]["theta"][2], 240);
}

#[test]
fn unknown_names_are_usage_errors() {
    assert_eq!(run(&["catalog", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--lattice", "R1_E", "--bound", "x"]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--lattice", "E8_G", "[[1,0]]"]).status.code(), Some(2));
}

#[test]
fn reduce_writes_verified_certificate_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "reduce",
        "--lattice",
        "E8_G",
        E8_NULL,
        "--out",
        cert.to_str().unwrap(),
        "--dump-trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["verified"], true);
    assert_eq!(v["certificate"]["terminal"]["kind"], "AtRho");
    let mut rd = csv::Reader::from_path(&trace).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["step", "height_norm", "height_norm_float"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(&rows[0][1], "25");
    assert_eq!(&rows.last().unwrap()[1], "0");
}

#[test]
fn reduce_accepts_vector_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("v.json");
    std::fs::write(&p, E8_NULL).unwrap();
    let arg = format!("@{}", p.display());
    let a = run(&["reduce", "--lattice", "E8_G", &arg]);
    let b = run(&["reduce", "--lattice", "E8_G", E8_NULL]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_null_vector_is_rejected() {
    let out = run(&["reduce", "--lattice", "E8_G", "[[1,0],[0,0],[0,0],[0,0],[1,0],[0,0]]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_report_shape_and_determinism() {
    let a = run(&["verify", "cone-angles"]);
    let b = run(&["verify", "cone-angles"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["format"], 1);
    assert_eq!(v["claim"], "cone-angles");
    assert_eq!(v["status"], "pass");
    assert!(v["evidence"].is_object());
    let cites = v["citations"].as_array().unwrap();
    assert!(!cites.is_empty());
    assert!(cites.iter().all(|c| c.as_str().unwrap().contains(' ')));
}

#[test]
fn verify_seed_and_budget() {
    let a = run(&["verify", "heisenberg", "--seed", "3", "--budget", "20"]);
    let b = run(&["verify", "heisenberg", "--seed", "3", "--budget", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn census_counts_and_expectation() {
    let out = run(&["census", "--lattice", "R1_E", "--bound", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format"], 1);
    assert_eq!(v["class_count"], 2);
    assert_eq!(run(&["census", "--lattice", "R1_E", "--bound", "9", "--expect", "2"]).status.code(), Some(0));
    assert_eq!(run(&["census", "--lattice", "R1_E", "--bound", "9", "--expect", "1"]).status.code(), Some(1));
}

fn with_catalog(path: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(args)
        .env("HYPERLAT_CATALOG", path)
        .output()
        .unwrap()
}

#[test]
fn catalog_override() {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/catalog.json");
    let mut data: Value = serde_json::from_str(&std::fs::read_to_string(src).unwrap()).unwrap();
    let entries = data["entries"].as_array_mut().unwrap();
    let mut extra = entries.iter().find(|e| e["name"] == "D4_G").unwrap().clone();
    extra["name"] = "MY_D4".into();
    entries.push(extra);
    let p = dir.path().join("catalog.json");
    std::fs::write(&p, serde_json::to_string(&data).unwrap()).unwrap();
    assert_eq!(run(&["catalog", "MY_D4"]).status.code(), Some(2));
    let out = with_catalog(&p, &["catalog", "MY_D4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["fingerprint"]["theta"][2], 24);
    let missing = dir.path().join("absent.json");
    assert_ne!(with_catalog(&missing, &["catalog", "D4_G"]).status.code(), Some(0));
}
