//! Exit-code contract, report shape and determinism of the command-line driver.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_floerveer"))
        .args(args)
        .output()
        .expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_f8_passes() {
    let f8 = fixtures().join("f8.json");
    let (code, report) = run(&["--mode", "verify", "--input", path(&f8)]);
    assert_eq!(code, 0);
    assert_eq!(report["schema_version"], 1);
    let r = &report["results"][0];
    assert_eq!(r["status"], "ok");
    for (name, v) in r["report"]["verdicts"].as_object().unwrap() {
        assert!(
            v["status"] == "pass" || v["status"] == "not_applicable",
            "{name}: {v}"
        );
    }
    assert_eq!(r["report"]["states"]["count"], 10);
    assert!(r["report"].get("timings_ms").is_none());
}

#[test]
fn malformed_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"triple_points\": [ }").unwrap();
    let (code, report) = run(&["--mode", "validate", "--input", path(&bad)]);
    assert_eq!(code, 2);
    let err = &report["results"][0]["error"];
    assert_eq!(err["kind"], "SyntaxError");
    assert_eq!(err["line"], 1);
}

#[test]
fn batch_with_one_failing_fixture_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("f8.json"), dir.path().join("a_f8.json")).unwrap();
    std::fs::copy(fixtures().join("c2.json"), dir.path().join("b_c2.json")).unwrap();
    let mut broken: Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("f8.json")).unwrap())
            .unwrap();
    broken["sectors"][0]["path_a"]
        .as_array_mut()
        .unwrap()
        .truncate(1);
    std::fs::write(dir.path().join("c_broken.json"), broken.to_string()).unwrap();
    let (code, report) = run(&["--mode", "batch", "--input", path(dir.path())]);
    assert_eq!(code, 1);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert_eq!(results[0]["status"], "ok");
    assert_eq!(results[1]["status"], "ok");
    assert_eq!(results[2]["status"], "input_error");
    assert_eq!(results[2]["error"]["kind"], "ValidationError");
    assert_eq!(report["summary"]["ok"], 2);
}

#[test]
fn reports_are_byte_deterministic() {
    let c2 = fixtures().join("c2.json");
    let a = Command::new(env!("CARGO_BIN_EXE_floerveer"))
        .args(["--mode", "report", "--input", path(&c2)])
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_floerveer"))
        .args(["--mode", "report", "--input", path(&c2)])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let f8 = fixtures().join("f8.json");
    let (code, stdout) = run(&[
        "--mode",
        "validate",
        "--input",
        path(&f8),
        "--out",
        path(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, Value::Null);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["results"][0]["validation"]["n"], 2);
}

#[test]
fn zeta_mode_on_rank_two() {
    let c2 = fixtures().join("c2.json");
    let (code, report) = run(&[
        "--mode",
        "zeta",
        "--input",
        path(&c2),
        "--trunc-degree",
        "6",
    ]);
    assert_eq!(code, 0);
    let z = &report["results"][0]["zeta"];
    assert_eq!(z["zeta"]["max_degree"], 6);
    assert_eq!(z["zeta"]["product_is_one"], true);
    assert_eq!(z["verdicts"]["zeta_nonnegative"]["status"], "pass");
    for row in z["zeta"]["coefficients"].as_array().unwrap() {
        assert!(!row[2].as_str().unwrap().starts_with('-'));
    }
}

#[test]
fn invalid_config_exits_two() {
    let f8 = fixtures().join("f8.json");
    let (code, report) = run(&[
        "--mode",
        "verify",
        "--input",
        path(&f8),
        "--budget-domains",
        "0",
    ]);
    assert_eq!(code, 2);
    assert!(report["config_error"].as_str().unwrap().contains("budget"));
}

#[test]
fn strict_mode_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("f8.json")).unwrap())
            .unwrap();
    v["comment"] = Value::from("hand-built");
    let p = dir.path().join("extra.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let (code, report) = run(&["--mode", "validate", "--input", path(&p)]);
    assert_eq!(code, 0);
    assert_eq!(
        report["results"][0]["warnings"].as_array().unwrap().len(),
        1
    );
    let (code, report) = run(&["--mode", "validate", "--strict", "--input", path(&p)]);
    assert_eq!(code, 2);
    assert_eq!(report["results"][0]["error"]["kind"], "UnknownKey");
}

#[test]
fn census_signatures_are_decoded_on_request() {
    let census = fixtures().join("census_small.txt");
    let (code, report) = run(&["--mode", "validate", "--census", "--input", path(&census)]);
    assert_eq!(code, 0);
    assert_eq!(report["summary"]["inputs"], 19);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "x\n").unwrap();
    let (code, report) = run(&["--mode", "validate", "--census", "--input", path(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(report["results"][0]["error"]["kind"], "MalformedSignature");
}

#[test]
fn fibered_class_flag() {
    let f8 = fixtures().join("f8.json");
    let (code, report) = run(&[
        "--mode",
        "verify",
        "--input",
        path(&f8),
        "--fibered-class",
        "1",
    ]);
    assert_eq!(code, 0);
    let profile = &report["results"][0]["report"]["fibered_profile"];
    assert_eq!(profile["histogram"]["0"], 1);
    // The reversed functional puts the bottom state at the top of the profile.
    let (code, report) = run(&[
        "--mode",
        "verify",
        "--input",
        path(&f8),
        "--fibered-class",
        "-1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(
        report["results"][0]["report"]["verdicts"]["fibered_profile"]["status"],
        "fail"
    );
}

#[test]
fn timings_only_on_request() {
    let f8 = fixtures().join("f8.json");
    let (_, report) = run(&["--mode", "report", "--timings", "--input", path(&f8)]);
    assert!(report["results"][0]["report"]["timings_ms"].is_object());
}
