use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validates against one shipped schema, with the shared erratum schema registered.
fn check(schema: &str, doc: &Value) {
    let registry = jsonschema::Registry::new()
        .add(
            "https://shehu.invalid/schemas/v1/erratum.schema.json",
            jsonschema::Resource::from_contents(load("erratum.schema.json")),
        )
        .unwrap()
        .prepare()
        .unwrap();
    let v = jsonschema::options().with_registry(&registry).build(&load(schema)).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}\n{doc:#}");
}

fn shehu() -> Command {
    let mut c = Command::cargo_bin("shehu").unwrap();
    c.env_remove("SHEHU_TABLE_PATH");
    c
}

/// Runs with `--json`, validates the envelope, returns it with the exit code.
fn json_run(args: &[&str]) -> (Value, i32) {
    let out = shehu().arg("--json").args(args).output().unwrap();
    let env: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    check("command-result.schema.json", &env);
    let code = out.status.code().unwrap();
    assert_eq!(code == 0, env["status"] == "ok", "exit code must track status");
    (env, code)
}

fn text_run(args: &[&str]) -> String {
    let out = shehu().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn transform_prints_image_and_roc() {
    assert_eq!(text_run(&["transform", "exp(3*t)"]).trim(), "u/(s - 3*u), valid for s/u > 3");
    assert_eq!(text_run(&["transform", "1", "--as", "sumudu"]).trim(), "1, valid for s/u > 0");
    assert_eq!(text_run(&["transform", "exp(-t)", "--homogenized"]).trim(), "1/(r + 1), r = s/u, valid for s/u > -1");

    let (env, code) = json_run(&["transform", "exp(3*t)"]);
    assert_eq!(code, 0);
    assert_eq!(env["payload"]["image"], "u/(s - 3*u)");
    assert_eq!(env["payload"]["roc"], "3");
}

#[test]
fn transform_rejects_non_atoms() {
    let out = shehu().args(["transform", "sin(t^2)"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("NonTransformable"));
    let (env, code) = json_run(&["transform", "sin(t^2)"]);
    assert_eq!(code, 1);
    assert_eq!(env["payload"]["error"], "NonTransformable");
}

#[test]
fn transform_reports_known_table_conflicts() {
    let (env, _) = json_run(&["transform", "delta(t - 1)"]);
    assert_eq!(env["payload"]["image"], "exp(-s/u)");
    let errata = env["payload"]["errata"].as_array().unwrap();
    assert_eq!(errata.len(), 1);
    assert_eq!(errata[0]["printed"], "u*exp(-a*s/u)");
    assert_eq!(errata[0]["confirmed"], true);
}

#[test]
fn invert_accepts_transform_output() {
    for v in ["t*exp(-t)*sin(2*t)", "3 - 2*t^2*cosh(t)", "exp(2*t) - exp(t)"] {
        let img = text_run(&["transform", v]);
        let back = text_run(&["invert", img.trim()]);
        let a = shehu::canonicalize(&shehu::parse(v).unwrap()).unwrap();
        let b = shehu::canonicalize(&shehu::parse(back.trim()).unwrap()).unwrap();
        assert_eq!(a, b, "{v} -> {img} -> {back}");
    }
    let (env, _) = json_run(&["invert", "u^2/((s+u)*(s+2*u))"]);
    assert_eq!(env["payload"]["derivation"].as_array().unwrap().len(), 2);
    let (env, code) = json_run(&["invert", "u*exp(-s/u)"]);
    assert_eq!(code, 1);
    assert_eq!(env["status"], "error");
}

#[test]
fn convert_between_conventions() {
    assert_eq!(text_run(&["convert", "u/(s - 3*u)", "--from", "shehu", "--to", "laplace"]).trim(), "1/(s - 3)");
    assert_eq!(text_run(&["convert", "1/(s - 3)", "--from", "laplace", "--to", "sumudu"]).trim(), "1/(1 - 3*u)");
    json_run(&["convert", "u/(s+u)", "--from", "shehu", "--to", "natural"]);
}

#[test]
fn solve_ode_example() {
    let (env, code) = json_run(&["solve-ode", "--eq", "v'' - 3*v' + 2*v = exp(3*t)", "--init", "v(0)=1, v'(0)=0"]);
    assert_eq!(code, 0);
    let got = shehu::canonicalize(&shehu::parse(env["payload"]["solution"].as_str().unwrap()).unwrap()).unwrap();
    let want = shehu::canonicalize(&shehu::parse("(5/2)*exp(t) - 2*exp(2*t) + (1/2)*exp(3*t)").unwrap()).unwrap();
    assert_eq!(got, want);
    assert!(env["payload"]["residual_max"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn solve_pde_examples() {
    let (env, _) = json_run(&["solve-pde", "--kind", "heat", "--kappa", "1", "--length", "1", "--initial", "3*sin(2*pi*x)"]);
    assert_eq!(env["payload"]["solution"], "3*exp(-4*pi^2*t)*sin(2*pi*x)");
    let (env, _) = json_run(&["solve-pde", "--kind", "wave", "--c", "1", "--forcing", "sin(pi*x)"]);
    assert!(env["payload"]["residual_max"].as_f64().unwrap() <= 1e-9);
    let (env, code) = json_run(&["solve-pde", "--kind", "heat", "--initial", "x*(1 - x)"]);
    assert_eq!(code, 1);
    assert_eq!(env["payload"]["error"], "NonSineData");
}

#[test]
fn sample_emits_csv() {
    let csv = text_run(&[
        "sample", "--kind", "heat", "--initial", "3*sin(2*pi*x)", "--grid", "3,1", "--x-range", "-1,1", "--t-range", "1,1",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,t,v");
    assert_eq!(lines.len(), 4);
    let decay = 3.0 * (-4.0 * std::f64::consts::PI.powi(2)).exp();
    for (line, x) in lines[1..].iter().zip([-1.0f64, 0.0, 1.0]) {
        let v: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - decay * (2.0 * std::f64::consts::PI * x).sin()).abs() < 1e-30);
    }

    let csv = text_run(&["sample", "--kind", "wave", "--forcing", "sin(pi*x)", "--grid", "1,1", "--x-range", "0.5,0.5", "--t-range", "1,1"]);
    let v: f64 = csv.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((v - 2.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);

    let csv = text_run(&["sample", "--expr", "0", "--grid", "2,2"]);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));

    let (env, _) = json_run(&["sample", "--expr", "exp(-t)*sin(x)", "--grid", "2,3"]);
    assert_eq!(env["payload"]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_table_reports_errata_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (env, code) = json_run(&["verify-table", "--grid", "default", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(env["status"], "error");
    assert!(env["payload"]["numeric_passes"].as_u64().unwrap() >= 28);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    check("verify-report.schema.json", &report);
    let rows: Vec<i64> = report["rows"].as_array().unwrap().iter().map(|r| r["row"].as_i64().unwrap()).collect();
    assert_eq!(rows, (1..=35).collect::<Vec<_>>());
}

#[test]
fn verify_table_honours_fixture_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.json");
    std::fs::write(
        &clean,
        r#"[{"row_id": 3, "time_expr": "exp(a*t)", "shehu": "u/(s - a*u)", "natural": "1/(s - a*u)",
            "sumudu": "1/(1 - a*u)", "laplace": "1/(s - a)", "printed_form_suspect": false, "verification_mode": "numeric"}]"#,
    )
    .unwrap();
    let out = shehu().env("SHEHU_TABLE_PATH", &clean).args(["--json", "verify-table"]).output().unwrap();
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    // Property errata still surface, so the run flags them.
    assert_eq!(env["payload"]["rows"], 1);
    assert_eq!(env["payload"]["statuses"][0]["status"], "pass");
    assert!(env["payload"]["errata"].as_array().unwrap().iter().all(|e| e["location"] != "row 3"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"[{"row_id": 7, "time_expr": "t^n/n!"}]"#).unwrap();
    let (env, code) = json_run(&["verify-table", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(env["payload"]["error"], "SchemaViolation");
    assert!(env["payload"]["message"].as_str().unwrap().contains("row 7"));
}

#[test]
fn bad_grid_is_a_usage_error() {
    let (env, code) = json_run(&["verify-table", "--grid", "2,0"]);
    assert_eq!(code, 1);
    assert_eq!(env["payload"]["error"], "UsageError");
}
