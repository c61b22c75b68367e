//! End-to-end runs of the `aprime` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn aprime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aprime"))
        .args(args)
        .env_remove("APRIME_PRECISION")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

#[test]
fn count_four_squares_of_eight() {
    let out = aprime(&["count", "--form", "1,1,1,1", "--m", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = records(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["count"], 24);
}

#[test]
fn density_as_rational_string() {
    let out = aprime(&["density", "--form", "1,1,1,1", "--p", "3", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["value"], "8/9");
}

#[test]
fn restricted_count() {
    // 8 = 4 + 4 only: coordinates 2 lie in P_1
    let out = aprime(&["count", "--form", "1,1,1,1", "--m", "8", "--r", "0"]);
    assert_eq!(records(&out)[0]["restricted_count"], 0);
    let out = aprime(&["count", "--form", "1,1,1,1", "--m", "8", "--r", "1"]);
    assert_eq!(records(&out)[0]["restricted_count"], 24);
}

#[test]
fn selftest_quick_passes() {
    let out = aprime(&["selftest", "--quick"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(records(&out).iter().all(|r| r["verdict"] == "holds"));
}

#[test]
fn violated_verdict_exits_one() {
    let out = aprime(&[
        "universality",
        "--check",
        "corollary",
        "--n-max",
        "300",
        "--r",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["first_failure"], 211);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        aprime(&["count", "--form", "x", "--m", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(aprime(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        aprime(&["count", "--form", "1,1,1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        aprime(&["bounds", "--kind", "x-lower", "--form", "1,1,1,9", "--m", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_file_and_overrides() {
    let dir = std::env::temp_dir().join(format!("aprime-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "colour = red\n").unwrap();
    assert_eq!(
        aprime(&["--config", bad.to_str().unwrap(), "certify", "--m", "1"])
            .status
            .code(),
        Some(2)
    );
    let good = dir.join("good.cfg");
    std::fs::write(&good, "precision = 30\n").unwrap();
    let out = aprime(&["--config", good.to_str().unwrap(), "certify", "--m", "1"]);
    assert_eq!(records(&out)[0]["bits"], 116);
    let out = aprime(&[
        "--config",
        good.to_str().unwrap(),
        "--precision",
        "60",
        "certify",
        "--m",
        "1",
    ]);
    assert_eq!(records(&out)[0]["bits"], 216);
    let env = Command::new(env!("CARGO_BIN_EXE_aprime"))
        .args(["certify", "--m", "1"])
        .env("APRIME_PRECISION", "30")
        .output()
        .unwrap();
    assert_eq!(records(&env)[0]["bits"], 116);
    let file = dir.join("out.jsonl");
    let out = aprime(&[
        "--output",
        file.to_str().unwrap(),
        "count",
        "--form",
        "1,1,1,1",
        "--m",
        "1",
    ]);
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&file)
        .unwrap()
        .contains("\"count\":8"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--jobs",
        "2",
        "eisenstein",
        "--form",
        "1,2,3,5",
        "--m-max",
        "20",
    ];
    let a = aprime(&args);
    let b = aprime(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let ms: Vec<u64> = records(&a)
        .iter()
        .map(|r| r["m"].as_u64().unwrap())
        .collect();
    assert_eq!(ms, (1..=20).collect::<Vec<_>>());
}
