//! End-to-end runs of the `suborbit` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suborbit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_then_verify_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("dec.json");
    let out = run(&[
        "decompose",
        "--sides",
        "2.5,2,1.8",
        "--p-max",
        "200",
        "--output",
        path(&doc),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&doc).unwrap()).unwrap();
    assert_eq!(saved["kind"], "decomposition");
    assert_eq!(saved["verdict"], "feasible");

    let out = run(&["verify-witness", "--input", path(&doc)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "verification");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn witness_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.json");
    let out = run(&["witness", "--two-point", "5,1.5", "--output", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    let doc = suborbit::io::Document::from_json(&text).unwrap();
    assert_eq!(doc.to_json(), text);

    let out = run(&["verify-witness", "--input", path(&file)]);
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn tampered_witness_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.json");
    run(&["witness", "--two-point", "5,1", "--output", path(&file)]);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let x = doc["claimed"][1][0].as_f64().unwrap();
    doc["claimed"][1][0] = Value::from(x + 1e-3);
    std::fs::write(&file, doc.to_string()).unwrap();

    let out = run(&["verify-witness", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn embed_then_verify_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(
        &config,
        r#"{"kind":"config","points":[[0,0],[2,0],[1,1.5]]}"#,
    )
    .unwrap();
    let emb = dir.path().join("e.json");
    let out = run(&[
        "embed-simplex",
        "--input",
        path(&config),
        "--p",
        "3",
        "--escalate",
        "--output",
        path(&emb),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let e: Value = serde_json::from_str(&std::fs::read_to_string(&emb).unwrap()).unwrap();
    assert_eq!(e["kind"], "embedding");
    assert!(e["max_distance_error"].as_f64().unwrap() < 1e-7);

    let out = run(&["verify-witness", "--input", path(&emb)]);
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn infeasible_and_malformed_inputs() {
    let out = run(&["embed-triangle", "--sides", "1,1,3.9", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "infeasible");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = run(&["verify-witness", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "error");

    let out = run(&["certificate", "--turns", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "error");
}

#[test]
fn usage_errors_and_help() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "error");

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "embed-simplex",
        "embed-triangle",
        "min-prime",
        "classify-circle-triangle",
        "decompose",
        "witness",
        "verify-witness",
        "torus-gap-verify",
        "far-point",
        "knaster-search",
        "knaster-euclidean",
        "certificate",
        "orbit-harness",
    ] {
        assert!(help.contains(cmd), "missing {cmd} in help");
    }
}

#[test]
fn seed_changes_random_runs_only_through_the_seed() {
    let a = run(&["far-point", "--n", "4", "--seed", "11"]);
    let b = run(&["far-point", "--n", "4", "--seed", "11"]);
    let c = run(&["far-point", "--n", "4", "--seed", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json(&a)["seed"], 11);
}
