use std::path::PathBuf;
use std::process::{Command, Output};

use catsolve_core::catser::TruncTSeries;
use catsolve_core::exactpoly::{parse_poly, VarTable};
use catsolve_core::guessprove::verify_annihilation;
use serde_json::Value;

const CUBIC: &str = "64*t^3*z0^3 + (48*t^3-72*t^2+2*t)*z0^2 - (15*t^3-9*t^2-19*t+1)*z0 + t^3+27*t^2-19*t+1";

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn catsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catsolve")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Parses `c0 + c1*t + ... + O(t^n)` back into a series.
fn series_from_text(s: &str) -> TruncTSeries {
    let (body, tail) = s.rsplit_once(" + O(t^").expect("order term");
    let n: usize = tail.trim_end_matches(')').parse().unwrap();
    let vars = VarTable::new(&["t"]).unwrap();
    let p = parse_poly(body, &vars).unwrap();
    let mut c = vec![catsolve_core::exactpoly::rat_int(0); n];
    for (m, v) in p.terms() {
        c[m.exp(0) as usize] = v.clone();
    }
    TruncTSeries::from_slice(n, &c)
}

#[test]
fn geometric_series() {
    let out = catsolve(&["series", &fixture("geometric.dde"), "--order", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F = 1 + t + t^2 + t^3 + t^4 + O(t^5)"), "{text}");
}

#[test]
fn unbound_parameter_is_an_input_error() {
    let out = catsolve(&["series", &fixture("hard.dde"), "--order", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unbound parameter s"), "{}", stderr(&out));
    let out = catsolve(&["series", &fixture("hard.dde"), "--order", "6", "--param", "s=2"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn missing_file_and_bad_order() {
    let out = catsolve(&["solve", "/nonexistent/system.dde"]);
    assert_eq!(out.status.code(), Some(1));
    let out = catsolve(&["series", &fixture("geometric.dde"), "--order", "3"]);
    assert!(!out.status.success());
}

#[test]
fn series_at_point_is_annihilated_by_the_cubic() {
    let out = catsolve(&["series", &fixture("ex11.dde"), "--order", "8", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let s = series_from_text(v["unknowns"][0]["at_point"][0].as_str().unwrap());
    let cubic = parse_poly(CUBIC, &VarTable::new(&["t", "z0"]).unwrap()).unwrap();
    assert!(verify_annihilation(&cubic, &s, 8).unwrap());
}

#[test]
fn scalar_solve_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..2).map(|i| dir.path().join(format!("r{i}.json")).to_string_lossy().into_owned()).collect();
    for p in &paths {
        let out = catsolve(&["solve", &fixture("scalar.dde"), "--json", p]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["certificate"]["kind"], "both");
    assert!(v.get("timings").is_none());
}

#[test]
fn non_generic_without_deformation_exits_3() {
    let out = catsolve(&["solve", &fixture("hard.dde"), "--param", "s=2", "--deform", "off"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not zero-dimensional"), "{}", stderr(&out));
}

#[test]
fn exhausted_budget_exits_2() {
    let out = catsolve(&["solve", &fixture("ex11.dde"), "--budget-pairs", "5"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn analyze_two_colors() {
    let out = catsolve(&["analyze", &fixture("ex11.dde"), "--order", "10", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let vars = VarTable::new(&["t", "u", "x1", "x2", "z0", "z1"]).unwrap();
    let det = parse_poly(v["det"].as_str().unwrap(), &vars).unwrap();
    let want = parse_poly("(4*t*u^2*x1 - 4*t*u*x1 + t*u - u + 1)*(2*t*u^2*x1 - 2*t*u*x1 + t*u - u + 1)", &vars).unwrap();
    assert_eq!(det, want);
    assert_eq!(v["det_roots"]["total_distinct"], 2);
    assert_eq!(v["det_roots"]["certified"], true);
    assert_eq!(v["genericity"]["zero_dimensional"], true);
    assert!(v["deformation"].is_null());
}

#[test]
fn analyze_deformation_parameters() {
    let out = catsolve(&["analyze", &fixture("hard.dde"), "--param", "s=2", "--deform", "on", "--order", "8", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let d = &json(&out)["deformation"];
    assert_eq!((d["alpha"].as_u64(), d["beta"].as_u64()), (Some(24), Some(4)));
    assert_eq!(d["gamma"], serde_json::json!([["1", "t^4"], ["t^4", "2"]]));
}

#[test]
fn analyze_scalar_prints_the_derivative() {
    let out = catsolve(&["analyze", &fixture("scalar.dde"), "--order", "8", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let vars = VarTable::new(&["t", "u", "x1", "z0"]).unwrap();
    let e = parse_poly(v["numerators"][0].as_str().unwrap(), &vars).unwrap();
    let det = parse_poly(v["det"].as_str().unwrap(), &vars).unwrap();
    let p = parse_poly(v["p"].as_str().unwrap(), &vars).unwrap();
    assert_eq!(det, e.derivative(2));
    assert_eq!(p, e.derivative(1));
}

#[test]
fn two_colors_solve_reports_the_cubic() {
    let out = catsolve(&["solve", &fixture("ex11.dde"), "--target", "z0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let vars = VarTable::new(&["t", "z0"]).unwrap();
    let minimal = parse_poly(v["minimal"].as_str().unwrap(), &vars).unwrap();
    assert_eq!(minimal, parse_poly(CUBIC, &vars).unwrap());
    assert_eq!(v["certificate"]["kind"], "both");
    assert_eq!(v["eliminant_degrees"], serde_json::json!([13, 14]));
}
