use std::process::Command;

use serde_json::Value;

fn fscalc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fscalc")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = fscalc(&["check", "F", "6-eps", "2", "2", "--n", "12", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["inDomain"], Value::Bool(true));

    let (code, out, _) = fscalc(&["check", "F", "9/2", "2", "2", "--n", "12", "--r", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["bindingCondition"], "III");

    let (code, out, err) = fscalc(&["check", "F", "x", "2", "2", "--n", "12", "--r", "1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("malformed"));
}

#[test]
fn check_report_round_trips_space() {
    let (_, out, _) = fscalc(&["check", "B", "3/2", "inf", "1", "--n", "3"]);
    let doc = json(&out);
    let space: fscalc::SpaceParams = serde_json::from_value(doc["space"].clone()).unwrap();
    assert_eq!(space.u, fscalc::numeric::int(0));
    assert_eq!(space.v, fscalc::numeric::int(1));
    assert!(doc["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("p = inf")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fscalc(&["frobnicate"]).0, 2);
    assert_eq!(fscalc(&["check", "F", "1", "2"]).0, 2);
    assert_eq!(fscalc(&["check", "F", "1", "0", "2", "--n", "2"]).0, 2);
    assert_eq!(fscalc(&["check", "F", "3", "2", "2", "--n", "2", "--r", "3"]).0, 2);
    assert_eq!(fscalc(&["--help"]).0, 0);
}

#[test]
fn sigma_values() {
    let (code, out, _) = fscalc(&["sigma", "3/2", "12/7", "--n", "12"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["sigma"]["base"], serde_json::json!([14, 13]));
    assert_eq!(doc["delta"]["base"], serde_json::json!([41, 26]));
    assert_eq!(doc["lossD"], "11/26");
}

#[test]
fn embed_and_lebesgue() {
    let (code, out, _) = fscalc(&["embed", "F", "2", "2", "2", "B", "1", "4", "2", "--n", "2"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    let proof: fscalc::embedding::EmbeddingProof = serde_json::from_value(doc["proof"].clone()).unwrap();
    assert!(fscalc::embedding::validate_proof(&proof));

    let (code, _, _) = fscalc(&["embed", "F", "1", "4", "2", "F", "2", "4", "2", "--n", "2"]);
    assert_eq!(code, 1);

    let (code, out, _) = fscalc(&["embed", "F", "2", "2", "2", "--n", "2", "--lebesgue", "inf"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["holds"], Value::Bool(true));

    assert_eq!(fscalc(&["embed", "F", "2", "2", "2", "--n", "2"]).0, 2);
}

#[test]
fn trace_target_command() {
    let (code, out, _) = fscalc(&["trace-target", "F", "3", "2", "2", "--n", "2", "--r", "1"]);
    assert_eq!(code, 0);
    let trace: fscalc::SpaceParams = serde_json::from_value(json(&out)["trace"].clone()).unwrap();
    assert_eq!(trace.s, fscalc::ExtReal::exact(fscalc::numeric::ratio(5, 2)));
    assert_eq!(trace.base, fscalc::Base::Boundary);

    assert_eq!(fscalc(&["trace-target", "F", "1/2", "2", "2", "--n", "2", "--r", "1"]).0, 2);
}

#[test]
fn plan_command() {
    let (code, out, _) = fscalc(&["plan", "F", "3/2", "12/7", "inf", "F", "11/2-eps", "2", "inf", "--n", "12", "--r", "1"]);
    assert_eq!(code, 0);
    let cert: fscalc::bootstrap::BootstrapCertificate = serde_json::from_str(&out).unwrap();
    assert!(cert.moves.len() >= 2);
    let op = fscalc::OperatorSpec::with_class(1).unwrap();
    assert!(fscalc::bootstrap::validate_certificate(&cert, &op));

    let (code, out, _) = fscalc(&["plan", "F", "3", "2", "2", "F", "3", "2", "2", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["moves"].as_array().unwrap().len(), 0);

    let (code, out, _) = fscalc(&["plan", "F", "3/2", "12/7", "inf", "F", "9/2", "2", "2", "--n", "12", "--r", "1"]);
    assert_eq!(code, 1);
    assert!(json(&out)["detail"].as_str().unwrap().contains("III"));
}

#[test]
fn pretty_and_output_file() {
    let dir = std::env::temp_dir().join(format!("fscalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let path_str = path.to_str().unwrap();
    let (code, out, _) = fscalc(&["check", "F", "3", "2", "2", "--n", "2", "--pretty", "-o", path_str]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\n  \"inDomain\": true"));
    let (_, compact, _) = fscalc(&["check", "F", "3", "2", "2", "--n", "2", "--json"]);
    assert_eq!(json(&compact), json(&written));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn plot_command() {
    let (code, out, _) = fscalc(&["plot", "--n", "1", "--r", "1", "--samples", "16"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<?xml"));
    assert!(!out.contains("hyperbola"));
    assert_eq!(fscalc(&["plot", "--n", "3", "--samples", "4"]).0, 2);
    assert_eq!(fscalc(&["plot", "--n", "3", "-o", "/nonexistent-dir/x.svg"]).0, 2);
}

#[test]
fn verify_remarks_command() {
    let (code, out, _) = fscalc(&["verify-remarks", "--n-max", "50"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], Value::Bool(true));
    assert_eq!(fscalc(&["verify-remarks", "--n-max", "3"]).0, 2);
}
