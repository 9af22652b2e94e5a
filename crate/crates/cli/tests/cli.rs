use std::process::Command;

use proptest::prelude::*;
use qcoord_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcoord")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = bin(&a);
    assert_eq!(code, EXIT_PASS, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn hopf_exits_zero() {
    let (code, out, _) = bin(&["check", "hopf", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS hopf"));
}

#[test]
fn frobenius_lists_three_identities() {
    let v = json(&["frobenius", "--n", "2", "--m", "3"]);
    let names: Vec<&str> = v["reports"][0]["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["name"].as_str().unwrap())
        .collect();
    for tag in ["(a)", "(b)", "(c)"] {
        assert!(names.iter().any(|n| n.starts_with(tag)), "{tag} missing from {names:?}");
    }
    assert_eq!(v["passed"], true);
}

#[test]
fn constants_json_has_exact_values() {
    let v = json(&["constants", "--n", "4"]);
    assert_eq!(v["passed"], true);
    let c = v["result"]["c"].as_array().unwrap();
    assert_eq!(c.len(), 4);
    // c_4 = v^3 at n = 4
    assert_eq!(c[3], serde_json::json!({ "terms": [[3, "1/1"]] }));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(bin(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(bin(&["check", "nothing", "--n", "2"]).0, EXIT_USAGE);
    assert_eq!(run(["qcoord"]).code, EXIT_USAGE);
}

#[test]
fn bad_input_is_reported() {
    let (code, _, err) = bin(&["normalize", "u[3,1]", "--n", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("position 2"), "{err}");
    let (code, _, err) = bin(&["frobenius", "--n", "2", "--m", "4"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("gcd"), "{err}");
    assert_eq!(bin(&["normalize", "1", "--n", "2", "--ring", "cyclotomic:x"]).0, EXIT_USAGE);
}

#[test]
fn bad_web_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("qcoord-web-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"generators": ["a"], "arcs": [{"word": "b", "i": 1, "j": 1}]}"#).unwrap();
    let (code, _, err) = bin(&["check", "classical", "--n", "2", "--trials", "2", "--web", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE, "{err}");
    assert!(err.contains("unknown generator"), "{err}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn failed_report_exits_one() {
    let out = qcoord_cli::Output {
        command: "demo".into(),
        passed: false,
        reports: vec![],
        result: None,
        timings_ms: None,
    };
    assert_eq!(out.exit_code(), EXIT_FAIL);
}

#[test]
fn normalize_examples() {
    let v = json(&["normalize", "u[1,1]*u[2,2] - q*u[1,2]*u[2,1]", "--n", "2", "--algebra", "sln"]);
    assert_eq!(v["result"]["text"], "(1)");
    let v = json(&["normalize", "u[1,2]*u[1,1]", "--n", "2"]);
    assert_eq!(v["result"]["text"], "(v^-4)*u[1,1]*u[1,2]");
    let v = json(&["normalize", "x[2,1]*x[1,2] + q", "--n", "2", "--algebra", "classical"]);
    assert_eq!(v["result"]["text"], "(1/1)*x[1,2]*x[2,1] + (1/1)");
    let v = json(&["normalize", "u[1,1]^3 - 1", "--n", "2", "--ring", "cyclotomic:3", "--algebra", "sln"]);
    assert_eq!(v["result"]["ring"], "cyclotomic:3");
}

#[test]
fn every_subcommand_matches_schema() {
    let validator = schema();
    let web = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/webs/groupoid_path.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["normalize", "u[2,1]*u[1,1]", "--n", "2"],
        vec!["normalize", "u[2,2]*u[1,1]", "--n", "2", "--algebra", "sln", "--ring", "cyclotomic:5"],
        vec!["normalize", "x[1,2]^2", "--n", "3", "--algebra", "classical"],
        vec!["check", "hopf", "--n", "2"],
        vec!["check", "constants", "--n", "3"],
        vec!["check", "permsum", "--n", "2", "--k", "4"],
        vec!["check", "frobenius", "--n", "2", "--m", "3", "--degree", "2"],
        vec!["check", "classical", "--n", "2", "--trials", "10", "--web", web],
        vec!["check", "detexp", "--n", "2", "--trials", "10"],
        vec!["check", "cap", "--n", "2", "--trials", "10"],
        vec!["check", "frt", "--n", "2", "--degree", "3"],
        vec!["check", "det", "--n", "2"],
        vec!["check", "height", "--n", "2"],
        vec!["frobenius", "--n", "2", "--m", "3"],
        vec!["constants", "--n", "2"],
        vec!["basis", "--n", "2", "--degree", "2"],
        vec!["count", "--n", "2", "--m", "3"],
        vec!["report", "--trials", "5", "--timings"],
    ];
    for args in cases {
        let v = json(&args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema();
    assert!(!validator.is_valid(&serde_json::json!({ "command": "x", "passed": true })));
    assert!(!validator.is_valid(&serde_json::json!({
        "command": "x", "passed": true, "reports": [{ "check": "c", "params": {}, "passed": true, "outcomes": [{ "name": 1, "passed": true }] }]
    })));
}

#[test]
fn timings_only_on_request() {
    let v = json(&["check", "cap", "--n", "2", "--trials", "3"]);
    assert!(v.get("timings_ms").is_none());
    let v = json(&["check", "cap", "--n", "2", "--trials", "3", "--timings"]);
    assert!(v["timings_ms"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn help_exits_zero() {
    let r = run(["qcoord", "--help"]);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.stdout.contains("normalize"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn numeric_output_depends_only_on_seed(seed in any::<u64>(), n in 2usize..=3) {
        let (seed, n) = (seed.to_string(), n.to_string());
        let args = ["qcoord", "--json", "check", "classical", "--n", &n, "--seed", &seed, "--trials", "4"];
        let a = run(args);
        let b = run(args);
        prop_assert_eq!(a.code, EXIT_PASS);
        prop_assert_eq!(a.stdout, b.stdout);
    }
}
