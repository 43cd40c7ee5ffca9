use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn dflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dflow")).args(args).output().expect("binary runs")
}

fn with(cmd: &str, complex: &str, field: Option<&str>, extra: &[&str]) -> Output {
    let cx = fixture(complex);
    let mut args = vec![cmd.to_string(), "--input".into(), cx.display().to_string()];
    if let Some(f) = field {
        args.push("--field".into());
        args.push(fixture(f).display().to_string());
    }
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    dflow(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn last_line(o: &Output) -> String {
    stdout(o).lines().last().unwrap_or_default().to_string()
}

#[test]
fn validate_reports_critical_cells() {
    let o = with("validate", "d3.json", Some("d3_field.json"), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3 critical cells: f, t, x"));
}

#[test]
fn overlapping_pairs_are_a_validation_error() {
    let field = temp(r#"{"pairs": [["y", "w"], ["x", "w"]]}"#);
    let cx = fixture("d3.json");
    let o = dflow(&["validate", "--input", cx.to_str().unwrap(), "--field", field.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("more than one pair"), "{}", stderr(&o));
}

#[test]
fn cyclic_field_prints_the_closed_path() {
    let field = temp(r#"{"pairs": [["a", "x"], ["b", "y"], ["c", "z"]]}"#);
    let cx = fixture("circle.json");
    let o = dflow(&["validate", "--input", cx.to_str().unwrap(), "--field", field.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("closed V-path"), "{err}");
    for id in ["a", "x", "b", "y", "c", "z"] {
        assert!(err.contains(id));
    }
}

#[test]
fn hom_text_and_counts() {
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "f", "--target", "x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Hom(f,x): 21 morphisms, rank profile 7/10/4"));
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "t", "--target", "x"]);
    assert!(stdout(&o).starts_with("Hom(t,x): 8 morphisms, rank profile 4/4, 8 covering relations"));
}

#[test]
fn hom_json_and_dot() {
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "t", "--target", "x", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["morphisms"].as_array().unwrap().len(), 8);
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "f", "--target", "x", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"f>z<b>x\""));
    assert!(dot.contains("cluster"));
}

#[test]
fn empty_hom_is_not_an_error() {
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "x", "--target", "f"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Hom(x,f): 0 morphisms"));
}

#[test]
fn non_critical_endpoint_is_rejected() {
    let o = with("hom", "d3.json", Some("d3_field.json"), &["--source", "b", "--target", "x"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not a critical cell"));
}

#[test]
fn spectral_homology_lines() {
    let o = with("spectral", "d3.json", Some("d3_field.json"), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_line(&o), "H: Z, 0, 0, 0");
    let o = with("spectral", "sphere.json", Some("d3_field.json"), &[]);
    assert_eq!(last_line(&o), "H: Z, 0, Z");
    let o = with("spectral", "torus.json", Some("torus_field.json"), &["--coeff", "q"]);
    assert_eq!(last_line(&o), "H: Q, Q^2, Q");
    assert!(stdout(&o).contains("Q^44"));
}

#[test]
fn spectral_json() {
    let o = with("spectral", "d3.json", Some("d3_field.json"), &["--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pages"][1]["entries"]["(1,1)"]["free"], 52);
    assert_eq!(v["homology"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_passes_on_fixtures() {
    let o = with("verify", "d3.json", Some("d3_field.json"), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("simplices by dimension 3/22"));
    assert_eq!(last_line(&o), "all checks: pass");
    let o = with("verify", "torus.json", Some("torus_field.json"), &["--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn face_poset_of_a_triangle_has_two_factorizations() {
    let o = with("verify", "simplex2.json", None, &["--face-poset"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("unique factorization: FAIL"));
    assert!(out.contains("0<0_1_2 factors as 0<0_1 ; 0_1<0_1_2 and as 0<0_2 ; 0_2<0_1_2"), "{out}");
}

#[test]
fn subdivide_torus() {
    let o = with("subdivide", "torus.json", None, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_line(&o), "H: Z, Z^2, Z");
}

#[test]
fn parse_failures_exit_with_two() {
    let bad = temp("{ not json");
    assert_eq!(dflow(&["validate", "--input", bad.path().to_str().unwrap()]).status.code(), Some(2));
    let other = temp(r#"{"vertices": []}"#);
    assert_eq!(dflow(&["validate", "--input", other.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dflow(&["validate", "--input", "/nonexistent/complex.json"]).status.code(), Some(2));
    assert_eq!(dflow(&["validate"]).status.code(), Some(2));
    assert_eq!(dflow(&["validate", "--bogus"]).status.code(), Some(2));
    let o = with("spectral", "d3.json", Some("d3_field.json"), &["--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_complex_exits_with_three() {
    let cx = temp(r#"{"cells": [{"id": "v", "dim": 0}, {"id": "e", "dim": 2}], "covering": [["e", "v"]]}"#);
    assert_eq!(dflow(&["validate", "--input", cx.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn seeded_runs_are_reproducible() {
    let a = dflow(&["spectral", "--seed", "11", "--format", "json"]);
    let b = dflow(&["spectral", "--seed", "11", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = dflow(&["verify", "--seed", "11", "--format", "json"]);
    let d = dflow(&["verify", "--seed", "11", "--format", "json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn help_documents_exit_codes() {
    let o = dflow(&["--help"]);
    let help = stdout(&o);
    for line in ["0  success", "2  unreadable", "3  invalid", "4  a structural check failed"] {
        assert!(help.contains(line), "{help}");
    }
}
