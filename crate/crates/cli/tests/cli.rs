use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperftc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Checks one record against the fixed schema, with no extra keys.
fn assert_schema(r: &Value) {
    let obj = r.as_object().expect("record is an object");
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["closed_form", "discrepancy", "input", "jet", "oracle", "trace", "value"]);
    assert!(r["input"].is_string());
    assert!(r["value"]["re"].is_f64() && r["value"]["im"].is_f64());
    assert!(r["jet"].as_array().unwrap().iter().all(|c| c["re"].is_f64() && c["im"].is_f64()));
    assert!(r["closed_form"].is_null() || r["closed_form"].is_string());
    assert!(r["oracle"].is_null() || r["oracle"].is_f64());
    assert!(r["discrepancy"].is_null() || r["discrepancy"].is_f64());
    assert!(r["trace"].as_array().unwrap().iter().all(Value::is_string));
}

#[test]
fn integrate_cubic_halfline_with_oracle() {
    let r = json(&["integrate", "1/(1+x^3)", "--from", "0", "--to", "inf", "--oracle"]);
    assert_schema(&r);
    let v = r["value"]["re"].as_f64().unwrap();
    assert!((v - 1.2091995761561452).abs() < 1e-13, "{v}");
    assert_eq!(r["closed_form"], "2π/(3√3)");
    assert!(r["discrepancy"].as_f64().unwrap() < 1e-10);
}

#[test]
fn eval_3f2_matches_closed_form() {
    let r = json(&["eval", "3F2(2,3/4,5/4;7/4,9/4;-1/3)"]);
    assert_schema(&r);
    let v = r["value"]["re"].as_f64().unwrap();
    // Frozen from an independent high-precision evaluation.
    assert!((v - 0.8693393167883676).abs() < 1e-12, "{v}");
}

#[test]
fn eval_with_jet_reports_coefficients() {
    let r = json(&["eval", "2F1(1+eps,1/2;3/2;-x^2)", "--at", "1/2", "--jet", "2"]);
    assert_schema(&r);
    assert_eq!(r["jet"].as_array().unwrap().len(), 3);
    let v0 = r["jet"][0]["re"].as_f64().unwrap();
    assert!((v0 - 0.5f64.atan() / 0.5).abs() < 1e-13);
}

#[test]
fn leading_minus_is_an_expression() {
    let out = run(&["integrate", "-3/2 * [eps^2] 2F1(1+eps,1/2;3/2;-x^2)", "--to", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_reference_suite_passes_and_is_deterministic() {
    let a = run(&["verify", "--suite", "paper"]);
    let b = run(&["verify", "--suite", "paper"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("PASS") && !text.contains("FAIL"));
}

#[test]
fn verify_json_rows_follow_schema() {
    let rows = json(&["verify", "--suite", "identities"]);
    let rows = rows.as_array().expect("array of records");
    assert!(!rows.is_empty());
    rows.iter().for_each(assert_schema);
    let again = run(&["--json", "verify", "--suite", "identities"]);
    assert_eq!(serde_json::to_string(&rows).unwrap(), serde_json::to_string(&serde_json::from_slice::<Value>(&again.stdout).unwrap()).unwrap());
}

#[test]
fn catalog_lists_and_shows_entries() {
    let list = json(&["catalog"]);
    assert!(list["functions"].as_array().unwrap().len() > 3);
    let zeta = json(&["catalog", "zeta(2)"]);
    assert_schema(&zeta);
}

#[test]
fn parse_error_exits_2() {
    let out = run(&["eval", "2F1(1,2;3;x", "--at", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_identifier_exits_2() {
    assert_eq!(run(&["eval", "foo(x)", "--at", "1"]).status.code(), Some(2));
}

#[test]
fn bad_bounds_exit_2() {
    assert_eq!(run(&["integrate", "x", "--from", "1", "--to", "2"]).status.code(), Some(2));
    assert_eq!(run(&["integrate", "x", "--to", "5"]).status.code(), Some(2));
}

#[test]
fn missing_point_exits_2() {
    assert_eq!(run(&["eval", "sqrt(1+x)"]).status.code(), Some(2));
}

#[test]
fn divergent_integral_exits_1_and_names_the_clause() {
    let out = run(&["integrate", "1/(1+x)", "--to", "inf"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.starts_with("rejected:"), "{msg}");
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
