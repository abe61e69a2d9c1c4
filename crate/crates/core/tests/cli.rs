use std::process::Command;

use twisted_yangian::cli::{body_bytes, parse_report, CACHE_ENV};

fn verify() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_verify"));
    c.env_remove(CACHE_ENV);
    c
}

#[test]
fn text_report_ends_with_summary() {
    let out = verify().args(["run", "--suite", "fundrep"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("10/10 checks passed"), "{last}");
}

#[test]
fn unknown_suite_is_a_config_error() {
    let out = verify().args(["run", "--suite", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_mode_order_is_rejected() {
    let out = verify().args(["run", "--suite", "fields", "--mode-order", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_report_round_trips_and_caches_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let cache = dir.path().join("cache");
    let status = verify()
        .args(["run", "--suite", "cybe", "fundrep", "--format", "structured", "--seed", "3", "--out"])
        .arg(&path)
        .env(CACHE_ENV, &cache)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let bytes = std::fs::read(&path).unwrap();
    let report = parse_report(&bytes).unwrap();
    assert_eq!(report.body.config.seed, 3);
    assert_eq!(report.body.summary.fail, 0);
    assert!(report.header.cache_warnings.is_empty());
    let again = verify().args(["run", "--suite", "fundrep", "cybe", "--format", "structured", "--seed", "3"]).output().unwrap();
    assert_eq!(body_bytes(&again.stdout), body_bytes(&bytes));
}

#[test]
fn failing_suite_exits_one() {
    let out = verify().args(["run", "--suite", "hopf-axioms", "--xi-order", "1", "--degree-bound", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
