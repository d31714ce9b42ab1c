use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = bzquilt_cli::run(
        std::iter::once("bzquilt").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

const FOUR: &str = "((1,2),(3,4))";

#[test]
fn generators_on_four_leaves() {
    let (code, v) = json(&["generators", "--tree", FOUR]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 22);
    assert_eq!(v["expected"], 22);
    assert_eq!(v["generators"].as_array().unwrap().len(), 22);
}

#[test]
fn multiplicity_examples() {
    for (weights, count) in [("1,0;1,0;1,0", 1), ("1,0;0,1;1,0", 0), ("1,1;1,1;1,1", 2)] {
        let (code, v) = json(&["multiplicity", "--tree", "(1,2,3)", "--weights", weights]);
        assert_eq!(code, 0, "{weights}");
        assert_eq!(v["count"], count, "{weights}");
        assert_eq!(v["agree"], true, "{weights}");
    }
}

#[test]
fn hilbert_matches_generators() {
    let (code, v) = json(&["hilbert", "--tree", FOUR]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 22);
    assert_eq!(v["complete"], true);
}

#[test]
fn verify_exit_codes() {
    let (code, v) = json(&["verify-presentation", "--tree", "(1,2,3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let (code, v) = json(&["verify-presentation", "--tree", "(1,2,3)", "--swaps-only"]);
    assert_eq!(code, 1);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn pface_and_gt_compare() {
    let (code, v) = json(&["pface", "--tree", FOUR]);
    assert_eq!(code, 0);
    assert_eq!(v["criteria_agree"], true);
    let (code, v) = json(&["gt-compare", "--n", "5", "--degree-bound", "2", "--ideal-bound", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn counterexample_for_sl4() {
    let (code, v) = json(&["counterexample", "--m", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], true);
    assert!(v["entries"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["generators"][..],
        &["generators", "--tree", "(1,2"],
        &["multiplicity", "--tree", "(1,2,3)", "--weights", "1,0;1,0"],
        &["frobnicate"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn output_is_deterministic_across_threads() {
    let base = run(&["generators", "--tree", FOUR, "--threads", "1"]).1;
    for threads in ["1", "2", "4"] {
        assert_eq!(run(&["generators", "--tree", FOUR, "--threads", threads]).1, base);
    }
    let a = run(&["verify-presentation", "--tree", FOUR, "--degree-bound", "2", "--threads", "1"]).1;
    let b = run(&["verify-presentation", "--tree", FOUR, "--degree-bound", "2", "--threads", "3"]).1;
    assert_eq!(a, b);
}

#[test]
fn json_indent_is_valid_json() {
    let compact = run(&["generators", "--tree", FOUR]).1;
    let pretty = run(&["generators", "--tree", FOUR, "--json-indent"]).1;
    let four = run(&["generators", "--tree", FOUR, "--json-indent", "4"]).1;
    assert!(pretty.contains("\n  \""));
    assert!(four.contains("\n    \""));
    let c: Value = serde_json::from_str(&compact).unwrap();
    assert_eq!(c, serde_json::from_str::<Value>(&pretty).unwrap());
    assert_eq!(c, serde_json::from_str::<Value>(&four).unwrap());
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bzquilt");
    let ok = Command::new(bin).args(["generators", "--tree", "(1,2,3)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["count"], 8);
    let bad = Command::new(bin).args(["hilbert"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
