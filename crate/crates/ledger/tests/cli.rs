use std::io::Write;
use std::process::{Command, Output};

fn ivl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivl")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn script(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".ivl").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn ledger_section_passes() {
    let o = ivl(&["ledger", "--section", "theorems"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8 claims: 8 passed"));
}

#[test]
fn ledger_fast_mode() {
    let o = ivl(&["ledger", "--section", "appendix", "--mode", "fast"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn ledger_json_is_valid() {
    let o = ivl(&["ledger", "--section", "s4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    assert_eq!(v["summary"]["total"], 47);
    assert!(v["claims"].as_array().unwrap().iter().any(|c| c["claim_id"] == "rel-4.7"));
}

#[test]
fn bad_section_is_usage_error() {
    assert_eq!(ivl(&["ledger", "--section", "s9"]).status.code(), Some(2));
}

#[test]
fn verify_passing_file() {
    let f = script("field Q; vars x; assert identity((x + 1)^2 - 1, x*(x + 2));");
    let o = ivl(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_failing_file() {
    let f = script("field Q; vars x; assert \"wrong\" identity((x + 1)^2, x^2 + 1);");
    let o = ivl(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_parse_error() {
    let f = script("field Q; vars x;\nassert identity(x +, x);");
    let o = ivl(&["verify", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn verify_missing_file() {
    assert_eq!(ivl(&["verify", "/nonexistent/x.ivl"]).status.code(), Some(2));
}

#[test]
fn group_order() {
    let o = ivl(&["group", "4.33.11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 144"));
}

#[test]
fn unknown_group() {
    assert_eq!(ivl(&["group", "nope"]).status.code(), Some(2));
}

#[test]
fn eval_at_point() {
    let o = ivl(&["eval", "(x^2 - 1)/(x + y)", "--at", "x=3, y=1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "16/7");
}

#[test]
fn eval_with_radical() {
    let o = ivl(&["eval", "sqrt(-1)^2 + x", "--at", "x=5"]);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn eval_pole() {
    assert_eq!(ivl(&["eval", "1/(x - 1)", "--at", "x=1"]).status.code(), Some(2));
}
