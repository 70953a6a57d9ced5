use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopsmith"))
        .args(args)
        .env_remove("LOOPSMITH_BUDGET")
        .output()
        .expect("run loopsmith")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loopsmith-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn text_keys(s: &str) -> Vec<String> {
    s.split_whitespace()
        .filter_map(|tok| tok.split_once('=').map(|(k, _)| k.to_string()))
        .collect()
}

#[test]
fn validate_fixture_and_garbage() {
    let o = run(&["validate", "fixture:ex12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid=true order=12"));

    let dir = scratch("validate");
    let bad = dir.join("bad.tbl");
    std::fs::write(&bad, "0 1\n1 1\n").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("valid=false"));
}

#[test]
fn unknown_fixture_is_an_error() {
    let o = run(&["classify", "fixture:nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn classify_reports_flags() {
    let s = stdout(&run(&["classify", "fixture:ex12"]));
    assert!(s.contains("C=yes"));
    assert!(s.contains("group=no"));
    let s = stdout(&run(&["classify", "std:octonion16"]));
    assert!(s.contains("moufang=yes"));
    assert!(s.contains("extra=yes"));
}

#[test]
fn analyze_text_and_json_share_keys() {
    for src in [
        "fixture:ex10",
        "fixture:ex14a",
        "fixture:ex16",
        "std:cyclic:1",
    ] {
        let text = stdout(&run(&["analyze", src]));
        let json: serde_json::Value =
            serde_json::from_str(&stdout(&run(&["--json", "analyze", src]))).unwrap();
        let obj = json.as_object().unwrap();
        for k in text_keys(&text) {
            assert!(obj.contains_key(&k), "{src}: json lacks {k}");
        }
    }
    let s = stdout(&run(&["analyze", "fixture:ex10"]));
    assert!(s.contains("lagrange.cauchy=false(p=5)"));
    let s = stdout(&run(&["analyze", "fixture:ex14a"]));
    assert!(s.contains("nucleus.full=[0]"));
    assert!(s.contains("lagrange.weak=false"));
}

#[test]
fn check_exit_codes() {
    let c = "x*(y*(y*z)) = ((x*y)*y)*z";
    let o = run(&["check", "fixture:ex12", "--identity", c]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holds=true"));
    let o = run(&["check", "fixture:ipnuc12", "--identity", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample="));
    let o = run(&["check", "fixture:ex10", "--property", "steiner"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "fixture:ex10", "--identity", "x*(y*"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn associator_values() {
    let s = stdout(&run(&["associator", "fixture:ex12", "11", "8", "9"]));
    assert!(s.contains("associator=2"));
    let s = stdout(&run(&["associator", "fixture:ex14a", "13", "12", "1"]));
    assert!(s.contains("associator=10"));
    assert_eq!(
        run(&["associator", "fixture:ex12", "12", "0", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn iso_exit_codes() {
    assert_eq!(
        run(&["iso", "fixture:ex14a", "fixture:ex14b"])
            .status
            .code(),
        Some(1)
    );
    let dir = scratch("iso");
    let f = dir.join("fam.tbl");
    let o = run(&[
        "construct",
        "family",
        "--a",
        "std:cyclic:3",
        "--alpha",
        "2",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["iso", f.to_str().unwrap(), "fixture:ex12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphic=true"));
}

#[test]
fn quotient_and_decompose() {
    let o = run(&["quotient", "fixture:ex12", "--by", "0,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&run(&["decompose", "std:cyclic:6"]));
    assert!(s.contains("u=[0,3]"));
    assert!(s.contains("v=[0,2,4]"));
    assert_eq!(
        run(&["decompose", "std:cyclic:6", "--prime", "4"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn construct_steiner_from_sts_file() {
    let dir = scratch("sts");
    let sts = dir.join("nine.sts");
    let o = run(&["construct", "sts", "9", "--out", sts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let tbl = dir.join("nine.tbl");
    let o = run(&[
        "construct",
        "steiner",
        sts.to_str().unwrap(),
        "--out",
        tbl.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["iso", tbl.to_str().unwrap(), "fixture:ex10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["construct", "sts", "8"]).status.code(), Some(2));
}

#[test]
fn search_writes_models() {
    let dir = scratch("search");
    let o = run(&[
        "search",
        "--order",
        "10",
        "--variety",
        "C",
        "--nonassoc",
        "--up-to-iso",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order=10 constraint=C+nonassoc classes=1 exhausted=true"));
    let f = dir.join("10_C_1.tbl");
    assert_eq!(
        run(&["iso", f.to_str().unwrap(), "fixture:ex10"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn search_budget_exhaustion_exits_three() {
    let o = run(&["search", "--order", "8", "--up-to-iso", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("exhausted=false"));
    let o = Command::new(env!("CARGO_BIN_EXE_loopsmith"))
        .args(["search", "--order", "8", "--up-to-iso"])
        .env("LOOPSMITH_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn search_json_is_valid() {
    let o = run(&["--json", "search", "--order", "5", "--up-to-iso"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"], 6);
    assert_eq!(v["exhausted"], true);
}
