use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn grunlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grunlab"))
        .args(args)
        .env_remove("GRUNLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() <= tol
}

#[test]
fn bound_classic_rows() {
    let out = grunlab(&["bound", "--n", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let want = [("grunbaum", 27.0 / 64.0), ("minkowski_radon", 0.25), ("makai_fradelizi", 9.0 / 16.0)];
    for (row, (name, value)) in rows.as_array().unwrap().iter().zip(want) {
        assert_eq!(row["name"], name);
        assert!(close(&row["value"], value, 1e-15));
    }
}

#[test]
fn bound_functional_and_midpoint() {
    let v = json(&grunlab(&["bound", "--alpha", "1", "--beta", "2", "--format", "json"]));
    assert!(close(&v["value"], 8.0 / 27.0, 1e-15));
    let v = json(&grunlab(&["bound", "--p", "1", "--r", "0", "--format", "json"]));
    assert!(close(&v["value"], 0.25, 1e-15));
    assert_eq!(v["regime"], "midpoint");
}

#[test]
fn bound_without_parameters_is_usage_error() {
    assert_eq!(grunlab(&["bound"]).status.code(), Some(1));
    assert_eq!(grunlab(&["bound", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(grunlab(&[]).status.code(), Some(1));
    assert_eq!(grunlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(grunlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_fn_fixtures() {
    let out = grunlab(&["verify-fn", &fixture("affine.json"), "--alpha", "1", "--beta", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(close(&v["slack"], 0.0, 1e-12));
    assert_eq!(v["command"], "verify-fn");

    let v = json(&grunlab(&["verify-fn", &fixture("constant.json"), "--alpha", "1", "--beta", "1", "--format", "json"]));
    assert!(close(&v["slack"], 0.5 - 4.0 / 9.0, 1e-12));
}

#[test]
fn verify_fn_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"breakpoints\": [[0, 1], [1]]").unwrap();
    let out = grunlab(&["verify-fn", bad.to_str().unwrap(), "--alpha", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = grunlab(&["verify-fn", &fixture("nonconcave.json"), "--alpha", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not concave"));

    let out = grunlab(&["verify-fn", "/nonexistent/profile.json", "--alpha", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_body_fixtures() {
    let v = json(&grunlab(&[
        "verify-body",
        &fixture("cone.json"),
        "--theorem",
        "grunbaum-r",
        "--p",
        "0.5",
        "--r",
        "1",
        "--format",
        "json",
    ]));
    assert_eq!(v["pass"], true);
    assert!(close(&v["slack"], 0.0, 1e-12));

    let v = json(&grunlab(&["verify-body", &fixture("simplex.json"), "--theorem", "minkowski-radon", "--format", "json"]));
    assert_eq!(v["pass"], true);
    assert!(close(&v["slack"], 0.0, 1e-12));

    let v = json(&grunlab(&["verify-body", &fixture("ball.json"), "--theorem", "makai-fradelizi", "--format", "json"]));
    assert!(close(&v["ratio"], 1.0, 1e-12));

    let v = json(&grunlab(&[
        "verify-body",
        &fixture("box.json"),
        "--theorem",
        "grunbaum-r",
        "--p",
        "1",
        "--r",
        "1",
        "--u",
        "1,-1,0",
        "--format",
        "json",
    ]));
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_body_monte_carlo_needs_seed() {
    let dir = tempfile::tempdir().unwrap();
    let body = dir.path().join("s4.json");
    std::fs::write(
        &body,
        r#"{"variant":"simplex","vertices":[[0,0,0,0],[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    )
    .unwrap();
    let b = body.to_str().unwrap();
    let args = ["verify-body", b, "--theorem", "grunbaum-r", "--p", "0.25", "--r", "1", "--u", "1,2,0,0"];
    // no exact profile along this direction and no samples
    assert_eq!(grunlab(&args).status.code(), Some(1));
    let mut with_samples = args.to_vec();
    with_samples.extend(["--samples", "200000"]);
    assert_eq!(grunlab(&with_samples).status.code(), Some(1));
    with_samples.extend(["--seed", "11", "--format", "json"]);
    let out = grunlab(&with_samples);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["provenance"]["kind"], "monte_carlo");
    assert_eq!(v["provenance"]["seed"], 11);
    assert_eq!(json(&grunlab(&with_samples)), v);
}

#[test]
fn search_needs_seed_and_is_reproducible() {
    assert_eq!(grunlab(&["search", "--alpha", "1", "--beta", "1"]).status.code(), Some(1));
    let args = ["search", "--alpha", "1", "--beta", "1", "--seed", "7", "--format", "json"];
    let out = grunlab(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["gap"].as_f64().unwrap() <= 1e-3);
    assert_eq!(v["violation"], false);
    assert_eq!(v["seed"], 7);
    assert_eq!(json(&grunlab(&args)), v);

    let out = Command::new(env!("CARGO_BIN_EXE_grunlab"))
        .args(["search", "--alpha", "1", "--beta", "2", "--format", "json"])
        .env("GRUNLAB_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["gap"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn sweep_default_grid_csv() {
    let out = grunlab(&["sweep", "--grid", "default", "--seed", "7", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,trials,min_slack,argmin_profile_hash,seed"));
    assert_eq!(lines.count(), 16);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 violations"));
}

#[test]
fn sweep_empty_grid() {
    let out = grunlab(&["sweep", "--grid", "", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn revolve_roundtrip_fixtures() {
    let v = json(&grunlab(&["revolve-roundtrip", &fixture("cone_profile.json"), "--n", "3", "--format", "json"]));
    assert!(v["discrepancy"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["pass"], true);

    let v = json(&grunlab(&["revolve-roundtrip", &fixture("constant.json"), "--n", "2", "--format", "json"]));
    assert!(close(&v["functional"], 0.5, 1e-12) && close(&v["geometric"], 0.5, 1e-12));

    let out = grunlab(&["revolve-roundtrip", &fixture("nonconcave.json"), "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn table_and_csv_formats() {
    let out = grunlab(&["bound", "--n", "2", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("grunbaum") && text.contains("0.444"));
    let out = grunlab(&["bound", "--n", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,params.n,regime,value\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}
