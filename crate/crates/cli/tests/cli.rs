//! End-to-end checks of the binary: exit codes, JSON shape, and byte-level
//! determinism of repeated runs.

use std::process::{Command, Output};

fn rotorlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotorlie"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn spectrum_defaults_match_textbook_levels() {
    let out = rotorlie(&["spectrum", "--j-max", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    let energies: Vec<f64> = levels.iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    let expected = [0.0, 0.8, 1.2, 1.6];
    for (e, x) in energies.iter().zip(expected) {
        assert!((e - x).abs() < 1e-9, "{e} vs {x}");
    }
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn closure_exit_codes_follow_full_rank() {
    let ok = rotorlie(&["closure", "--j", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["generated_dimension"], 168);
    assert_eq!(doc["full_rank"], true);

    let bad = rotorlie(&["closure", "--j", "1", "--polarizations", "x,y,x,y"]);
    assert_eq!(bad.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(doc["full_rank"], false);
}

#[test]
fn prove_emits_report_and_dots() {
    let dir = std::env::temp_dir().join("rotorlie-cli-dots");
    let _ = std::fs::remove_dir_all(&dir);
    let out = rotorlie(&["prove", "--j", "1", "--dot-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["target_dim"], 168);
    for step in ["step1", "step2", "step3", "step4", "step5", "step6"] {
        assert!(dir.join(format!("graph_j1_{step}.dot")).exists(), "{step} dot missing");
    }
}

#[test]
fn prove_j0_fails_with_diagnosis() {
    let out = rotorlie(&["prove", "--j", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["pass"], false);
    let failures = doc["failures"].as_array().unwrap();
    assert!(failures[0].as_str().unwrap().contains("disconnected"));
}

#[test]
fn malformed_config_gives_nonzero_exit_and_json() {
    let dir = std::env::temp_dir().join("rotorlie-cli-badconf");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.conf");
    std::fs::write(&path, "a=not-a-number\n").unwrap();
    let out = rotorlie(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["error"].as_str().unwrap().contains("invalid value"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["spectrum", "--j-max", "2"],
        vec!["drives", "--j", "1"],
        vec!["closure", "--j", "1"],
        vec!["closure", "--j", "0", "--polarizations", "x,x,y,z"],
        vec!["prove", "--j", "2"],
        vec!["graph", "--j", "1", "--stage", "step2"],
    ] {
        let first = rotorlie(&args);
        let second = rotorlie(&args);
        assert_eq!(first.stdout, second.stdout, "nondeterministic output for {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn threads_flag_does_not_change_results() {
    let seq = rotorlie(&["closure", "--j", "1"]);
    let par = rotorlie(&["closure", "--j", "1", "--threads", "4"]);
    assert_eq!(seq.stdout, par.stdout);
}
