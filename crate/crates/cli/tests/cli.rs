//! The binary end to end: exit codes, report files, determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const DEFAULT: &str = include_str!("../configs/default.toml");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-padic"))
        .arg("--out")
        .arg(dir.join("reports"))
        .args(args)
        .output()
        .expect("spawn hecke-padic")
}

fn report(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join("reports").join(name)).expect("report written");
    serde_json::from_str(&text).expect("report is JSON")
}

#[test]
fn c_above_p_is_rejected_with_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    // 2 + i divides 5
    std::fs::write(&cfg, DEFAULT.replace("c = [7, 0]", "c = [2, 1]")).unwrap();
    let out = run(dir.path(), &["--config", cfg.to_str().unwrap(), "local-factor"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    let diag: Value = serde_json::from_str(err.trim()).expect("JSON diagnostic on stderr");
    assert!(diag.to_string().contains("coprimality"), "{err}");
    assert!(!dir.path().join("reports/local-factor.json").exists());
}

/// Drop wall-clock fields.
fn strip_clock(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timestamp");
            m.remove("seconds");
            m.values_mut().for_each(strip_clock);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_clock),
        _ => {}
    }
}

#[test]
fn reports_repeat_up_to_the_clock() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for _ in 0..2 {
        let out = run(dir.path(), &["fourier"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let mut doc = report(dir.path(), "fourier.json");
        strip_clock(&mut doc);
        docs.push(doc);
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0]["schema_version"], 1);
}

#[test]
fn inert_prime_interpolation_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/inert.toml");
    let out = run(dir.path(), &["--config", cfg, "verify-interpolation"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = report(dir.path(), "verify-interpolation.json");
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["command"], "verify-interpolation");
}
