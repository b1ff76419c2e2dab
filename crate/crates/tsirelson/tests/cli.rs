use std::process::Command;

use serde_json::Value;
use tsirelson::cli::run;
use tsirelson::report::CSV_HEADER;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tsirelson").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn norm_of_two_units() {
    let (code, out, _) = call(&["norm", "--variant", "toh", "--theta", "0.8", "--inline", "t1+t2"]);
    assert_eq!(code, 0);
    assert!(out.contains("norm = 1.1313708"), "{out}");
}

#[test]
fn json_echoes_the_parsed_parameters() {
    let (code, out, _) = call(&["norm", "--variant", "xcp", "--p", "1.3", "--theta", "0.1", "--inline", "t1+0.5*t2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theta"].as_f64(), Some(0.1));
    assert_eq!(v["p"].as_f64(), Some(1.3));
    assert_eq!(v["support"], serde_json::json!([1, 2]));
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn enumerate_lists_the_partitions() {
    let (code, out, _) = call(&["enumerate", "--support", "1,2,3", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("k=1")).count(), 5);
    let (_, out, _) = call(&["enumerate", "--support", "1,2,3", "--k", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 5);
}

#[test]
fn sweep_writes_the_fixed_header() {
    let (code, out, _) = call(&["sweep", "--variant", "toh,xoh", "--theta", "0.5,0.9", "--inline", "t1+t2+t3"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 4);
    let (_, single, _) = call(&["norm", "--variant", "toh", "--theta", "0.8", "--inline", "t2", "--format", "csv"]);
    assert!(single.starts_with("variant,p,theta,support,level,lower,upper,exact,stabilized_at\n"));
}

#[test]
fn trace_reads_a_file_and_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.json");
    std::fs::write(&input, r#"{"coeffs": {"1": [[[1,0],[0,0]],[[0,0],[1,0]]], "2": [[[0,0],[1,0]],[[0,0],[0,0]]]}}"#).unwrap();
    let out = dir.path().join("r.json");
    let (code, stdout, _) = call(&[
        "trace", "--variant", "xoh", "--theta", "0.9", "--input", input.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["shape"], serde_json::json!([2, 2]));
    assert_eq!(v["level"], "s2");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let cases: [&[&str]; 9] = [
        &["norm", "--variant", "xcp", "--theta", "0.5", "--inline", "t1"],
        &["norm", "--variant", "toh", "--theta", "1.5", "--inline", "t1"],
        &["norm", "--variant", "xcp", "--p", "2", "--theta", "0.5", "--inline", "t1"],
        &["norm", "--variant", "toh", "--theta", "0.5"],
        &["norm", "--variant", "toh", "--theta", "0.5", "--inline", "t1", "--input", "x.json"],
        &["norm", "--variant", "toh", "--theta", "0.5", "--input", "/nonexistent/x.json"],
        &["norm", "--variant", "xcp", "--p", "1", "--theta", "0.5", "--inline", "t1", "--level", "s2"],
        &["enumerate", "--support", "0,1"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, _, err) = call(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn c0_demo_passes() {
    let (code, out, _) = call(&["demo-c0", "--m", "4", "--p", "1.5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS c0_sequence"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tsirelson");
    let ok = Command::new(bin).args(["norm", "--variant", "toh", "--theta", "0.8", "--inline", "t1+t2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("1.1313708"));
    let bad = Command::new(bin).args(["norm", "--variant", "toh"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
