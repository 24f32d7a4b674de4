//! End-to-end checks of the `psidiff` binary: exit codes, report
//! emission, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn psidiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psidiff"))
        .args(args)
        .env_remove("PSIDIFF_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("psidiff-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn eval_prints_the_wallis_sharp_value() {
    let out = psidiff(&["eval", "z", "-s", "0.5", "-t", "1", "-x", "1"]);
    assert!(out.status.success(), "{out:?}");
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - (4.0 / std::f64::consts::PI - 1.0)).abs() < 1e-14);
}

#[test]
fn eval_honours_precision_flag_and_env() {
    let flag = psidiff(&["eval", "digamma", "-x", "2", "--precision", "extended:40"]);
    assert!(flag.status.success(), "{flag:?}");
    let text = stdout(&flag);
    assert!(text.trim().len() > 30, "extended output carries digits: {text}");

    let out = Command::new(env!("CARGO_BIN_EXE_psidiff"))
        .args(["eval", "digamma", "-x", "2"])
        .env("PSIDIFF_PRECISION", "extended:40")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), text, "env default must match the flag");
}

#[test]
fn eval_rejects_bad_precision_with_usage_exit() {
    let out = psidiff(&["eval", "digamma", "-x", "2", "--precision", "quad"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision"));
}

#[test]
fn eval_surfaces_domain_errors() {
    let out = psidiff(&["eval", "digamma", "-x", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_anchored_family_needs_an_anchor() {
    let out = psidiff(&["eval", "f", "-s", "0", "-t", "0.5", "-x", "2", "-c", "1.5"]);
    assert!(out.status.success(), "{out:?}");
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!(value.is_finite() && value > 0.0);

    // g vanishes at the anchor itself.
    let at_anchor = psidiff(&["eval", "g", "-s", "0", "-t", "0.5", "-x", "1.5", "-c", "1.5"]);
    let g: f64 = stdout(&at_anchor).trim().parse().unwrap();
    assert_eq!(g, 0.0);

    let missing = psidiff(&["eval", "f", "-s", "0", "-t", "0.5", "-x", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--anchor"));
}

#[test]
fn verify_quick_suites_pass() {
    let out = psidiff(&[
        "verify", "wallis", "erf", "--n-max", "5", "--grid", "8", "--k-max", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("verdict: pass"), "{text}");
    // Two Wallis families per index plus one erf record per index.
    assert!(text.contains("claims: 15 total"), "{text}");
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = psidiff(&["verify", "wallace"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn verify_rejects_bad_configuration() {
    let out = psidiff(&["verify", "wallis", "--n-max", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_emits_deterministic_json_and_csv() {
    let json_a = tmp_path("a.json");
    let json_b = tmp_path("b.json");
    let csv_path = tmp_path("report.csv");
    let args = |json: &PathBuf| {
        vec![
            "verify".to_string(),
            "ball".to_string(),
            "identities".to_string(),
            "--n-max".to_string(),
            "4".to_string(),
            "--json".to_string(),
            json.display().to_string(),
            "--csv".to_string(),
            csv_path.display().to_string(),
        ]
    };
    let run_a = psidiff(&args(&json_a).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(run_a.status.code(), Some(0), "{run_a:?}");
    let run_b = psidiff(&args(&json_b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(run_b.status.code(), Some(0));

    let bytes_a = std::fs::read(&json_a).unwrap();
    let bytes_b = std::fs::read(&json_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same config must give identical reports");

    let parsed: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    let suite = parsed["suite"].as_array().unwrap();
    assert_eq!(parsed["summary"]["total"].as_u64().unwrap() as usize, suite.len());
    assert!(suite.iter().all(|e| e["verdict"] == "pass"));
    assert!(parsed["precision_mode"] == "double");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), suite.len() + 1);

    for p in [json_a, json_b, csv_path] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn verify_all_smoke_run_passes() {
    let out = psidiff(&[
        "verify", "all", "--n-max", "10", "--grid", "10", "--k-max", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("verdict: pass"), "{text}");
    // The critical showcase pair stays indeterminate, never a failure.
    assert!(text.contains("indeterminate"), "{text}");
}
