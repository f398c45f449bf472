//! End-to-end checks of the `yangloop` binary: exit codes, report shapes and
//! reconstruction fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_yangloop"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn yangloop")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn borel_suite_passes() {
    let out = run(&["verify", "borel"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn small_cartan_difference_passes_as_json() {
    let out = run(&["verify", "cartan-difference", "--roots", "1", "--order", "6", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cases = v["cases"].as_array().unwrap();
    assert!(!cases.is_empty());
    assert!(cases.iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn sign_flip_mutant_fails_with_first_difference() {
    let out = run(&[
        "verify",
        "cartan-difference",
        "--roots",
        "1",
        "--order",
        "6",
        "--mutation",
        "g-sign-flip",
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&Value> = v["cases"].as_array().unwrap().iter().filter(|c| c["pass"] == Value::Bool(false)).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|c| c.get("first_diff").is_some_and(|d| !d.is_null())));
}

#[test]
fn dropped_hbar_mutant_fails() {
    let out = run(&["verify", "cartan-difference", "--roots", "1", "--order", "6", "--mutation", "drop-borel-hbar"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_and_bad_order_exit_2() {
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "borel", "--order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_reports() {
    let a = run(&["verify", "kernel", "--seed", "5", "--report", "json"]);
    let b = run(&["verify", "kernel", "--seed", "5", "--report", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn expand_g_function() {
    let out = run(&["expand", "G", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["v^2\t-1/24", "v^4\t1/2880", "v^6\t-1/181440"]);
}

#[test]
fn expand_q_number() {
    let out = run(&["expand", "q_number", "--n", "2", "--order", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), ["1\t2", "hbar^2\t1/4", "hbar^4\t1/192"]);
    let neg = run(&["expand", "q_number", "--n", "3", "--order", "2", "--d", "-1"]);
    assert_eq!(String::from_utf8(neg.stdout).unwrap().lines().collect::<Vec<_>>(), ["1\t3", "hbar^2\t1"]);
}

#[test]
fn expand_rejects_bad_symmetrizer() {
    assert_eq!(run(&["expand", "g", "--d", "2"]).status.code(), Some(2));
}

#[test]
fn reconstruct_trivial_weight() {
    let out = run(&["reconstruct", &fixture("trivial.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["finite_dimensional"], Value::Bool(true));
    for p in v["polys"].as_array().unwrap() {
        assert_eq!(p["P"], serde_json::json!(["1"]));
    }
}

#[test]
fn reconstruct_round_trip_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("out.json");
    let out = run(&["reconstruct", &fixture("round_trip.json"), "-o", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["finite_dimensional"], Value::Bool(true));
    // P_1(u) = u − 1, and the odd node is (u − 2)/(u − 3).
    assert_eq!(v["polys"][0]["P"], serde_json::json!(["-1", "1"]));
    assert_eq!(v["polys"][1]["P"], serde_json::json!(["-2", "1"]));
    assert_eq!(v["polys"][1]["Q"], serde_json::json!(["-3", "1"]));
}

#[test]
fn reconstruct_overflow_is_rejected_with_certificate() {
    let out = run(&["reconstruct", &fixture("overflow.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["finite_dimensional"], Value::Bool(false));
    let rejected = v["rejected"].as_array().unwrap();
    assert_eq!(rejected.len(), 1);
    assert_eq!(rejected[0]["i"], 1);
    assert!(rejected[0]["certificate"].is_object());
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["reconstruct", &fixture("malformed.json")]).status.code(), Some(2));
    assert_eq!(run(&["reconstruct", &fixture("missing.json")]).status.code(), Some(2));
}
