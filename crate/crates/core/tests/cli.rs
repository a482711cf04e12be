use std::process::{Command, Output};

use serde_json::Value;

fn nker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nker")).args(args).output().expect("spawn nker")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn analyze_text_and_json() {
    let o = nker(&["analyze", "Dic(3)"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("NKer_Q"));
    assert!(text.starts_with("Dic(3)  order 12"));

    let o = nker(&["analyze", "--json", "Q8 x C7"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 56);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn analyze_input_errors() {
    let o = nker(&["analyze", "Dic("]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("col 5"));
    assert_eq!(code(&nker(&["analyze", "C600"])), 1);
    assert_eq!(code(&nker(&["analyze", "Q8", "--fields", "Q_4"])), 1);
    assert_eq!(code(&nker(&["frobnicate"])), 1);
    assert_eq!(code(&nker(&["--help"])), 0);
}

#[test]
fn analyze_mismatch_exits_2() {
    // definitional and structural routes disagree on this group
    assert_eq!(code(&nker(&["analyze", "PQ(2,5,1,2)"])), 2);
}

#[test]
fn seed_does_not_change_results() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_nker"))
            .args(["analyze", "--json", "S4"])
            .env("NKER_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("0x5EED"));
}

#[test]
fn catalog_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    let o = nker(&["catalog", "--max-order", "24", "--jobs", "2", "--out", path.to_str().unwrap()]);
    let body = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = body.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 20);
    let mut mismatched = false;
    for l in &lines {
        assert_eq!(l["v"], 1);
        assert!(l["fingerprint"]["order"].as_u64().unwrap() <= 24);
        mismatched |= l["status"] != "ok";
    }
    assert_eq!(code(&o), if mismatched { 2 } else { 0 });
    let orders: Vec<u64> = lines.iter().map(|l| l["fingerprint"]["order"].as_u64().unwrap()).collect();
    assert!(orders.windows(2).all(|w| w[0] <= w[1]));
    assert!(String::from_utf8_lossy(&o.stderr).contains("entries"));
}

#[test]
fn catalog_unwritable_path() {
    let o = nker(&["catalog", "--max-order", "4", "--out", "/nonexistent-dir/cat.jsonl"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_tap() {
    let o = nker(&["verify", "--suite", "en-pairing", "--jobs", "1"]);
    let out = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(out.starts_with("TAP version 13\n"));
    let plan = out.lines().find(|l| l.starts_with("1..")).unwrap();
    let n: usize = plan[3..].parse().unwrap();
    let results = out.lines().filter(|l| l.starts_with("ok ") || l.starts_with("not ok ")).count();
    assert_eq!(n, results);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&nker(&["verify", "--suite", "nope"])), 1);
}
