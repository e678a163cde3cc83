use std::path::{Path, PathBuf};
use std::process::Command;

use qfock_cli::REPORT_SCHEMA;
use serde_json::{json, Value};

fn qfock() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qfock"))
}

fn demo_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/demo.json")
}

fn write_config(dir: &tempfile::TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn single_fixed(eigenvalues: Option<&[&str]>) -> Value {
    let mut v = json!({
        "schema": "qfock/config-v1",
        "components": ["a"],
        "blocks": [{ "kind": "fixed", "component": "a" }],
        "q": [["1/4"]],
        "run": { "truncation": 3, "terms": 2 }
    });
    if let Some(e) = eigenvalues {
        v["eigenvalues"] = json!(e);
    }
    v
}

fn run(cmd: &mut Command) -> (i32, Value) {
    let out = cmd.output().unwrap();
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

#[test]
fn validate_demo() {
    let (code, r) = run(qfock().arg("--config").arg(demo_config()).arg("validate"));
    assert_eq!(code, 0);
    assert_eq!(r["schema"], REPORT_SCHEMA);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["model"]["eigenvalues"], json!(["4", "1/4", "1"]));
    let n = r["checks"].as_array().unwrap().len() as u64;
    assert_eq!(r["totals"]["passed"].as_u64().unwrap() + r["totals"]["failed"].as_u64().unwrap(), n);
}

#[test]
fn classify_trivial_spectrum_is_ii1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "one.json", &single_fixed(Some(&["1"])));
    let (code, r) = run(qfock().arg("--config").arg(&cfg).arg("classify"));
    assert_eq!(code, 0);
    assert_eq!(r["data"]["type"], "II_1");
    assert_eq!(r["data"]["source"], "config");
}

#[test]
fn classify_demo_model_spectrum() {
    let (code, r) = run(qfock().arg("--config").arg(demo_config()).arg("classify"));
    assert_eq!(code, 0);
    assert_eq!(r["data"]["type"], "III_lambda");
    assert_eq!(r["data"]["lambda"], "1/4");
}

#[test]
fn missing_config_exits_2() {
    let out = qfock().args(["--config", "/nonexistent/qfock.json", "validate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut wrong_schema = single_fixed(None);
    wrong_schema["schema"] = json!("qfock/config-v0");
    let mut unknown_field = single_fixed(None);
    unknown_field["colour"] = json!("blue");
    let mut bad_number = single_fixed(None);
    bad_number["q"] = json!([["one third"]]);
    let mut both_params = single_fixed(None);
    both_params["blocks"] = json!([{ "kind": "pair", "component": "a", "mu": "2", "lambda": "4" }]);
    let mut big_q = single_fixed(None);
    big_q["q"] = json!([["1"]]);
    for (i, v) in [wrong_schema, unknown_field, bad_number, both_params, big_q].iter().enumerate() {
        let cfg = write_config(&dir, &format!("bad{i}.json"), v);
        let out = qfock().arg("--config").arg(&cfg).arg("validate").output().unwrap();
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn non_positive_eigenvalue_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "neg.json", &single_fixed(Some(&["1", "-2"])));
    let (code, r) = run(qfock().arg("--config").arg(&cfg).arg("classify"));
    assert_eq!(code, 1);
    assert_eq!(r["checks"][0]["status"], "fail");
}

#[test]
fn gram_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gram.json");
    let status = qfock().arg("--config").arg(demo_config()).args(["gram", "--level", "2", "--out"]).arg(&out).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["data"]["dim"], 9);
    // Word [0,0] pairs with itself through one transposition: 1 + q_aa.
    assert_eq!(r["data"]["matrix"][0][0], "4/3");
}

#[test]
fn conjugate_emits_series() {
    let (code, r) = run(qfock().arg("--config").arg(demo_config()).args(["--omit-timings", "conjugate", "--alpha", "2", "--terms", "2"]));
    assert_eq!(code, 0);
    let series = r["data"]["series"].as_array().unwrap();
    assert_eq!(series.len(), 2);
    // The first term of a fixed generator is itself.
    assert_eq!(series[0]["coefficients"], json!([{ "word": [2], "coeff": "1" }]));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["elapsed_ms"] == 0));
}

#[test]
fn conjugate_rejects_bad_alpha() {
    let out = qfock().arg("--config").arg(demo_config()).args(["conjugate", "--alpha", "7", "--terms", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_gram_reports_timings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "small.json", &single_fixed(None));
    let (code, r) = run(qfock().arg("--config").arg(&cfg).args(["bench", "--suite", "gram"]));
    assert_eq!(code, 0);
    let rows = r["data"]["timings"].as_array().unwrap();
    assert!(rows.iter().any(|x| x["strategy"] == "oracle" && x["threads"] == 1));
    assert!(rows.iter().any(|x| x["strategy"] == "recursion" && x["threads"] == 2));
}

#[test]
fn float_mode_verify_fock() {
    let (code, r) = run(qfock().arg("--config").arg(demo_config().with_file_name("demo-float.json")).args(["verify", "--suite", "fock"]));
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["model"]["mode"], "float");
}
