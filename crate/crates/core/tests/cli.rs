mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::fixture_path;
use tempfile::TempDir;

fn holocurve(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holocurve"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn path_arg(name: &str) -> String {
    fixture_path(name).display().to_string()
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn verify_bound_on_exp_passes() {
    let dir = TempDir::new().unwrap();
    let input = path_arg("exp");
    let out = holocurve(&["verify-bound", "--input", &input], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bound.json")).unwrap()).unwrap();
    for (name, v) in report["verdicts"].as_object().unwrap() {
        assert_eq!(v, &serde_json::Value::Bool(true), "{name}");
    }
    assert_eq!(first_line(&dir.path().join("prop2.csv")), "r,gap,bound");
    assert_eq!(
        first_line(&dir.path().join("characteristic_bound.csv")),
        "r,T,bound,T_reduced,prop4_bound"
    );
}

#[test]
fn malformed_spec_is_reported_with_nonzero_exit() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("bad.toml");
    fs::write(
        &spec,
        "n = 1\nsigma = 0.0\n\n[[components]]\ntype = \"exppoly\"\ncoeffs = [[0.0, 0.0], [1.0, 0.0]]\n\n[[components]]\ntype = \"poly\"\ncoeffs = [[1.0, 0.0]]\n",
    )
    .unwrap();
    let out = holocurve(&["analyze", "--input", spec.to_str().unwrap()], &dir.path().join("out"));
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("component 1 must be nonvanishing"), "{err}");
}

#[test]
fn missing_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = holocurve(&["analyze"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("needs --input"));
}

#[test]
fn lemmas_seed_7() {
    let dir = TempDir::new().unwrap();
    let out = holocurve(&["lemmas", "--seed", "7", "--count", "1000"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["lemma1_margins"].as_array().unwrap().len(), 1000);
    let g = report["green_minimum"]["value"].as_f64().unwrap();
    assert!((g - 1.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = holocurve(&["lemmas", "--seed", "11", "--count", "100"], dir.path());
        assert!(out.status.success());
        let input = path_arg("zexp_plane");
        let out = holocurve(&["analyze", "--input", &input, "--rmax", "10"], dir.path());
        assert!(out.status.success());
    }
    for name in ["lemmas.json", "analyze.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn characteristic_and_locus_artifacts() {
    let dir = TempDir::new().unwrap();
    let input = path_arg("zexp_plane");
    let out = holocurve(&["characteristic", "--input", &input, "--rmax", "10"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = fs::read_to_string(dir.path().join("characteristic.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0], "r,T_area,T_jensen,n_t");

    let out = holocurve(&["locus", "--input", &input, "--rmax", "40"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let locus: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("locus.json")).unwrap()).unwrap();
    let branches = locus["branches"].as_array().unwrap();
    assert!(!branches.is_empty());
    let csvs: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("branch_"))
        .collect();
    assert_eq!(csvs.len(), branches.len());
    for e in csvs {
        assert_eq!(first_line(&e.path()), "re,im,arclen,density", "{:?}", e.path());
    }
}
