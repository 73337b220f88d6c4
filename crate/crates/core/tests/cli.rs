use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn recaft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recaft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn lfp_example1() {
    let out = recaft(&["lfp", &fixture("ex1.kb")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out)
        .lines()
        .last()
        .unwrap()
        .contains("T={a'} P={a'}"));
}

#[test]
fn enumerate_flags_two_models() {
    let out = recaft(&["enumerate", &fixture("ex1_rule4.kb")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("3 stable fixpoints, 2 models"), "{text}");
    assert_eq!(text.matches("model=yes").count(), 2);
}

#[test]
fn check_accepts_a_model() {
    let out = recaft(&["check", &fixture("ex1_rule4.kb"), "--T=a,b", "--P=a,b"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("model: yes"));
}

#[test]
fn json_reports_parse() {
    let out = recaft(&["--format", "json", "trace", &fixture("ex1.kb")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fixpoint"]["p"], serde_json::json!(["a'"]));
    assert_eq!(v["iterations"].as_array().unwrap().len(), 6);
    assert_eq!(v["inner"].as_array().unwrap().len(), 6);
    let out = recaft(&["--format", "json", "enumerate", &fixture("ex1_rule4.kb")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fixpoints"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("recaft-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.kb");
    std::fs::write(&bad, "%rules\na :- X.\n").unwrap();
    let out = recaft(&["lfp", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ground rules only"));

    let out = recaft(&["check", &fixture("ex1.kb"), "--T=nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = recaft(&["lfp", dir.join("missing.kb").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn enumeration_cap_exits_with_one() {
    let out = recaft(&["enumerate", "--cap", "3", &fixture("ex1.kb")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capped at 3"));
}

#[test]
fn selftest_passes() {
    let out = recaft(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));
}
