use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperlap"));
    c.env_remove("HYPERLAP_TOL");
    c
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), parse(&out))
}

fn parse(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let validator = jsonschema::validator_for(&s).unwrap();
    let errs: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errs.is_empty(), "{name}: {errs:?}");
}

/// Output schema for the command, plus the config and any literals.
fn assert_output_valid(v: &Value) {
    let cmd = v["command"].as_str().unwrap();
    assert_valid(cmd, v);
    assert_valid("config", &v["config"]);
    if v.get("u").map_or(false, |u| u.is_object()) {
        assert_valid("hyperfunction", &v["u"]);
    }
}

fn cx(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

/// Density of a pairing row, evaluated at x.
fn density(row: &Value, x: f64) -> f64 {
    let c = row["center"][0].as_f64().unwrap();
    let w = row["width"][0].as_f64().unwrap();
    let poly = row["poly"][0].as_array().unwrap();
    let p: f64 = poly.iter().enumerate().map(|(k, a)| a[0].as_f64().unwrap() * (x - c).powi(k as i32)).sum();
    p * (-w * (x - c).powi(2)).exp()
}

/// Composite Simpson rule on [a, b].
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for j in 1..n {
        s += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn check_pairings(v: &Value, kernel: impl Fn(f64) -> f64, lo: f64, tol: f64) {
    let rows = v["pairings"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        let want = simpson(|x| kernel(x) * density(row, x), lo, 40.0, 40_000);
        let (re, im) = cx(&row["value"]);
        assert!((re - want).abs() < tol && im.abs() < tol, "density {}: {re}+{im}i vs {want}", row["density"]);
    }
}

#[test]
fn transform_examples() {
    let (code, v) = run(&["transform", "--u", "delta(1)", "--zeta", "2"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    let (re, im) = cx(&v["values"][0]["value"]);
    assert!((re - (-2f64).exp()).abs() < 1e-10 && im.abs() < 1e-10);
    assert_eq!(v["growth"]["passed"], true);

    let (code, v) = run(&["transform", "--u", "0", "--zeta", "2"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    assert_eq!(cx(&v["values"][0]["value"]), (0.0, 0.0));

    // ∫₀^∞ e^{x} e^{-3x} dx = 1/2
    let (code, v) = run(&["transform", "--u", "heaviside_exp(1,0)", "--zeta", "3"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    let (re, im) = cx(&v["values"][0]["value"]);
    assert!((re - 0.5).abs() < 1e-10 && im.abs() < 1e-10);
}

#[test]
fn transform_two_variables_and_effective_config() {
    let (code, v) = run(&["transform", "--u", "delta(1,2)", "--zeta", "1+i,0.5"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    // e^{-(1+i) - 1} = e^{-2}(cos 1 - i sin 1)
    let (re, im) = cx(&v["values"][0]["value"]);
    assert!((re - (-2f64).exp() * 1f64.cos()).abs() < 1e-10);
    assert!((im + (-2f64).exp() * 1f64.sin()).abs() < 1e-10);
    assert_eq!(v["config"]["growth"], false);
    assert_eq!(v["config"]["eps"], 0.3);
    assert_eq!(v["config"]["tol_source"], "default");
}

#[test]
fn inverse_of_reciprocal_is_heaviside() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.json");
    let csv = dir.path().join("u.csv");
    let status = bin()
        .args(["inverse", "--f", "1/zeta1", "--K", "[0,inf)", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_output_valid(&v);
    check_pairings(&v, |_| 1.0, 0.0, 1e-7);
    assert_eq!(v["support"]["entries"][0][1], 0.0);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("density,center,width,re,im"));
    assert_eq!(lines.count(), 20);
    // Only the two requested files, no temporaries left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);

    // The literal reads back through --u.
    let (code, p) = run(&["pair", "--u", &format!("@{}", out.display()), "--density", "1,1"]);
    assert_eq!(code, 0);
    let lit: PathBuf = dir.path().join("lit.json");
    std::fs::write(&lit, serde_json::to_string(&v["u"]).unwrap()).unwrap();
    let (code, q) = run(&["pair", "--u", &format!("@{}", lit.display()), "--density", "1,1"]);
    assert_eq!(code, 0);
    let want = simpson(|x| (-(x - 1.0) * (x - 1.0)).exp(), 0.0, 40.0, 40_000);
    assert!((cx(&q["pairings"][0]["value"]).0 - want).abs() < 1e-7);
    assert!(p["pairings"].is_array());
}

#[test]
fn inverse_of_exponential_is_delta() {
    let (code, v) = run(&["inverse", "--f", "exp(-zeta1)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    for row in v["pairings"].as_array().unwrap() {
        let (re, im) = cx(&row["value"]);
        assert!((re - density(row, 1.0)).abs() < 1e-8 && im.abs() < 1e-8);
    }
}

#[test]
fn inverse_of_zero_is_zero_literal() {
    let (code, v) = run(&["inverse", "--f", "0"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    assert_eq!(v["u"]["terms"].as_array().unwrap().len(), 0);
    assert!(v["pairings"].as_array().unwrap().iter().all(|r| cx(&r["value"]) == (0.0, 0.0)));
}

#[test]
fn solve_examples() {
    let (code, v) = run(&["solve", "--P", "D1 - 1", "--f", "delta(0)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-6);
    check_pairings(&v, f64::exp, 0.0, 1e-7);

    let (code, v) = run(&["solve", "--P", "1", "--f", "delta(0)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    for row in v["pairings"].as_array().unwrap() {
        assert!((cx(&row["value"]).0 - density(row, 0.0)).abs() < 1e-10);
    }

    let (code, v) = run(&["solve", "--P", "D1^2 - 1", "--f", "delta(0)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    check_pairings(&v, f64::sinh, 0.0, 1e-7);
}

#[test]
fn roundtrip_both_directions() {
    let (code, v) = run(&["roundtrip", "--f", "exp(-zeta)/zeta", "--K", "[1,inf)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    assert_eq!(v["passed"], true);
    let (code, v) = run(&["roundtrip", "--u", "heaviside_exp(0.5,0)"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    assert!(v["max_delta"].as_f64().unwrap() < 1e-6);
    let (code, _) = run_err(&["roundtrip", "--u", "delta(0)", "--f", "1/zeta"]);
    assert_eq!(code, 2);
}

#[test]
fn char_and_solvability() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let (code, v) = run(&["char", "--P", "D1^2 + D2^2", "--mesh", "0.1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    // σ = ζ₁² + ζ₂² vanishes on the isotropic lines.
    assert!(v["flagged_count"].as_u64().unwrap() > 0);
    let head = std::fs::read_to_string(&csv).unwrap().lines().next().unwrap().to_string();
    assert_eq!(head, "zeta1_re,zeta1_im,zeta2_re,zeta2_im,sigma_rel,flagged");

    let orthant = r#"{"vertex":[0,0],"generators":[[1,0],[0,1]]}"#;
    let out = bin().args(["char", "--P", "D1^2 + D2^2", "--K", orthant]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(parse(&out)["solvability"]["solvable"], false);
    let (code, v) = run(&["char", "--P", "D1*D2 + 1", "--K", orthant]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
}

#[test]
fn pair_with_explicit_densities() {
    let (code, v) = run(&["pair", "--u", "delta(0.5)", "--density", "0,1", "--density", "1,2"]);
    assert_eq!(code, 0);
    assert_output_valid(&v);
    for row in v["pairings"].as_array().unwrap() {
        assert!((cx(&row["value"]).0 - density(row, 0.5)).abs() < 1e-12);
    }
    let (code, _) = run_err(&["pair", "--u", "delta(0.5)", "--density", "0,1;0,1"]);
    assert_eq!(code, 2);
}

fn run_err(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn exit_codes() {
    assert_eq!(run_err(&["transform", "--u", "delta(", "--zeta", "1"]).0, 2);
    assert_eq!(run_err(&["transform", "--u", "nosuch(1)", "--zeta", "1"]).0, 2);
    assert_eq!(run_err(&["transform", "--u", "delta(1)"]).0, 2);
    assert_eq!(run_err(&["transform", "--u", "delta(1)", "--zeta", "1,2"]).0, 2);
    let (code, msg) = run_err(&["inverse", "--f", "exp(zeta1)", "--K", "[0,inf)"]);
    assert_eq!(code, 3, "{msg}");
    assert!(msg.contains("growth certificate"));
    assert_eq!(run_err(&["solve", "--P", "D1 - 1", "--f", "delta(0)", "--K", "[0,1]"]).0, 2);
    // The whole line has no half-plane of convergence.
    assert_eq!(run_err(&["solve", "--P", "D1 - 1", "--f", "delta(0)", "--K", "(-inf,inf)"]).0, 4);
    assert_eq!(run_err(&["verify", "nosuch"]).0, 2);
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"command":"transform","u":"delta(1)","zeta":["2"],"growth":false,"tol":1e-8}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = bin().args(["--config", cfg]).env("HYPERLAP_TOL", "1e-3").output().unwrap();
    let v = parse(&out);
    assert_output_valid(&v);
    assert_eq!(v["config"]["tol"], 1e-8);
    assert_eq!(v["config"]["tol_source"], "config");

    let out = bin().args(["transform", "--config", cfg, "--tol", "1e-4"]).output().unwrap();
    let v = parse(&out);
    assert_eq!(v["config"]["tol"], 1e-4);
    assert_eq!(v["config"]["tol_source"], "flag");

    let out = bin().args(["transform", "--u", "0", "--zeta", "1"]).env("HYPERLAP_TOL", "1e-3").output().unwrap();
    let v = parse(&out);
    assert_eq!(v["config"]["tol"], 1e-3);
    assert_eq!(v["config"]["tol_source"], "env");

    // Flags override config fields.
    let out = bin().args(["transform", "--config", cfg, "--zeta", "3"]).output().unwrap();
    let (re, _) = cx(&parse(&out)["values"][0]["value"]);
    assert!((re - (-3f64).exp()).abs() < 1e-10);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"command":"transform","bogus":1}"#).unwrap();
    assert_eq!(bin().args(["--config", bad.to_str().unwrap()]).status().unwrap().code(), Some(2));
    assert_eq!(bin().args(["solve", "--config", cfg]).status().unwrap().code(), Some(2));
    assert_eq!(bin().args(["transform", "--u", "0", "--zeta", "1"]).env("HYPERLAP_TOL", "x").status().unwrap().code(), Some(2));
}

#[test]
fn verify_list_and_suites() {
    let out = bin().args(["verify", "--list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert!(names.contains(&"roundtrip".to_string()) && names.contains(&"stokes".to_string()));

    for suite in ["stokes", "roundtrip"] {
        let (code, v) = run(&["verify", suite]);
        assert_eq!(code, 0, "{v}");
        assert_output_valid(&v);
        assert_eq!(v["suites"][0]["passed"], true);
    }
}
