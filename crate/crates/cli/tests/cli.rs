//! End-to-end checks of the binary: exact-rational JSON output,
//! byte-identical reruns, config-file defaults, exit codes, and the cache
//! directory plumbing.

use std::process::{Command, Output};

fn anharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anharm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = anharm(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn width_series_emits_exact_rationals() {
    let v = stdout_json(&["width-series", "--degree", "3", "--level", "1", "--order", "1"]);
    assert_eq!(v["coefficients"][1]["rational"], "-853/16");
    assert_eq!(v["provenance"]["kind"], "exact");
}

#[test]
fn reruns_are_byte_identical() {
    let a = anharm(&["action", "--degree", "3"]);
    let b = anharm(&["action", "--degree", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn action_reports_closed_form_and_agreement() {
    let v = stdout_json(&["action", "--degree", "3"]);
    assert!(v["closed_form"]["value"]
        .as_str()
        .unwrap()
        .starts_with("0.13333333333333"));
    assert!(v["agreement_digits"].as_f64().unwrap() >= 12.0);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "degree = 3\nlevel = 1\norder = 1\n").unwrap();
    let v = stdout_json(&["width-series", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["coefficients"][1]["rational"], "-853/16");
    // an explicit flag overrides the config value
    let v = stdout_json(&["width-series", "--config", cfg.to_str().unwrap(), "--level", "0"]);
    assert_eq!(v["coefficients"][1]["rational"], "-169/16");
}

#[test]
fn unknown_flag_exits_2_and_computation_failure_exits_1() {
    let usage = anharm(&["rspt", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));
    // odd-degree oscillators are sqrt(g)-coupled: negative g is rejected
    let fail = anharm(&["resonance", "--degree", "3", "--level", "0", "-g", "-0.01"]);
    assert_eq!(fail.status.code(), Some(1));
    let diag: serde_json::Value = serde_json::from_slice(&fail.stderr).expect("diagnostic JSON");
    assert!(diag["error"].as_str().unwrap().contains("regime"));
}

#[test]
fn cache_dir_flag_persists_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = anharm(&[
        "rspt",
        "--degree",
        "4",
        "--level",
        "0",
        "--kmax",
        "6",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
}
