use std::path::Path;
use std::process::{Command, Output};

fn cartan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert_2_5.json");
    let out = cartan(&["construct", "--g", "2", "--p", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = cartan(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("PASS"));
}

fn tamper(path: &Path, from: &str, to: &str) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains(from), "pattern {from} not found");
    std::fs::write(path, text.replacen(from, to, 1)).unwrap();
}

#[test]
fn tampered_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = cartan(&["construct", "--g", "2", "--p", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    tamper(&path, "\"l\": \"", "\"l\": \"1");
    let v = cartan(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).starts_with("FAIL"));
}

#[test]
fn exceptional_exit_code() {
    let out = cartan(&["construct", "--g", "2", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"kind\": \"exceptional\""));
    assert_eq!(cartan(&["witness", "--g", "3", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn search_cap_exit_code() {
    let out = cartan(&["construct", "--g", "2", "--p", "11", "--cap", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn query_subcommands() {
    let kg = cartan(&["kg", "--g", "2"]);
    assert!(stdout(&kg).contains("\"11520\""));
    let w = cartan(&["witness", "--g", "7", "--p", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&w)).unwrap();
    assert_eq!((v["d"].as_u64(), v["q"].as_u64()), (Some(4), Some(17)));
    let s = cartan(&["selmer", "--m", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(v["order"].as_u64(), Some(2));
    let s = cartan(&["selmer", "--m", "8", "--with-2-condition"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(v["order"].as_u64(), Some(1));
    let scan = cartan(&["scan", "--gmax", "3", "--pmax", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&scan)).unwrap();
    assert_eq!(v, serde_json::json!([[2, 2], [2, 3], [3, 2], [3, 3]]));
}

#[test]
fn missing_file_is_an_error() {
    assert_eq!(cartan(&["verify", "/nonexistent/cert.json"]).status.code(), Some(1));
}
