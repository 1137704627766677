use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bsq_core::report::{BothReport, CompareReport, Count, ModuleReport, ValidationReport};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn bundled(name: &str) -> PathBuf {
    root().join("../../manifests").join(name)
}

fn fixture(name: &str) -> PathBuf {
    root().join("tests/fixtures").join(name)
}

fn bsq(args: &[&str], file: &Path) -> Output {
    bsq_env(args, file, None)
}

fn bsq_env(args: &[&str], file: &Path, tolerance: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bsq"));
    cmd.arg(args[0]).arg(file).args(&args[1..]);
    cmd.env_remove("BSQ_TOLERANCE");
    if let Some(t) = tolerance {
        cmd.env("BSQ_TOLERANCE", t);
    }
    cmd.output().expect("bsq runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_simplex_is_smooth() {
    let out = bsq(&["validate"], &bundled("simplex.json"));
    assert_eq!(code(&out), 0);
    let report: ValidationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.valid);
    assert!(report.delzant.unwrap().smooth);
}

#[test]
fn validate_tall_triangle_reports_vertex() {
    let out = bsq(&["validate"], &fixture("tall_triangle.json"));
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["valid"], false);
    let violations = v["delzant"]["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["vertex"], serde_json::json!(["1/1", "0/1"]));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let out = bsq(&["validate"], &fixture("malformed.json"));
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let missing = bsq(&["validate"], &fixture("does_not_exist.json"));
    assert_eq!(code(&missing), 1);
}

#[test]
fn signed_canonical_sphere_has_dimension_zero() {
    let out = bsq(&["quantize", "--signed"], &bundled("canonical_sphere.json"));
    assert_eq!(code(&out), 0);
    let report: ModuleReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.stabilized_dimension, Some(0));
    assert_eq!(report.dimension, 0);
    assert_eq!(report.window, Count::Finite(5));
}

#[test]
fn unsigned_canonical_sphere_window_five() {
    let out = bsq(&["quantize", "--window", "5"], &bundled("canonical_sphere.json"));
    assert_eq!(code(&out), 0);
    let report: ModuleReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.dimension, 12);
    assert!(!report.signed);
    assert!(report.weights.iter().all(|e| e.mult == 2));
}

#[test]
fn both_methods_on_twice_simplex() {
    let out = bsq(&["quantize", "--method", "both"], &bundled("simplex_2.json"));
    assert_eq!(code(&out), 0);
    let report: BothReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.equal);
    assert_eq!(report.dimension, Count::Finite(6));
    assert_eq!(report.bs.dimension, 6);
    assert_eq!(report.fgq.weights, report.bs.weights);
}

#[test]
fn every_bundled_manifest_compares_equal() {
    let mut names: Vec<PathBuf> = std::fs::read_dir(root().join("../../manifests"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    assert!(names.len() >= 5);
    for path in names {
        let out = bsq(&["compare"], &path);
        assert_eq!(code(&out), 0, "{}", path.display());
        let report: CompareReport = serde_json::from_slice(&out.stdout).unwrap();
        assert!(report.equal);
        assert_eq!(report.holonomy_failures, 0);
    }
}

#[test]
fn compare_product_with_oracle() {
    let out = bsq(&["compare", "--use-oracle"], &bundled("sphere_times_interval.json"));
    assert_eq!(code(&out), 0);
    let report: CompareReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.dimension, Count::Finite(2));
    assert!(report.weights.iter().all(|w| w.oracle == Some(w.bs)));
}

#[test]
fn corrupted_oracle_signals_inequality() {
    let path = fixture("corrupted_oracle.json");
    let out = bsq(&["compare", "--use-oracle"], &path);
    assert_eq!(code(&out), 4);
    let report: CompareReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.equal);
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle failed"));
    assert_eq!(code(&bsq(&["compare"], &path)), 0);
}

#[test]
fn plot_data_canonical_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sphere.csv");
    let out = bsq(&["plot-data", "--out", csv.to_str().unwrap()], &bundled("canonical_sphere.json"));
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,mu,component,sign,is_leaf,weight"));
    let leaves: Vec<(f64, i64)> = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[4] == "1")
        .map(|f| (f[0].parse().unwrap(), f[5].parse().unwrap()))
        .collect();
    assert_eq!(leaves.len(), 12);
    for (h, m) in leaves {
        assert!((h.abs() - (-(m as f64)).exp()).abs() < 1e-11, "{h} at level {m}");
    }
}

#[test]
fn plot_data_five_circles_alternates_sign() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("five.csv");
    let out = bsq(&["plot-data", "--out", csv.to_str().unwrap()], &bundled("five_circle_sphere.json"));
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut signs = std::collections::BTreeMap::new();
    for l in text.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        let comp: usize = f[2].parse().unwrap();
        let sign: i64 = f[3].parse().unwrap();
        assert_eq!(*signs.entry(comp).or_insert(sign), sign);
    }
    let signs: Vec<i64> = signs.into_values().collect();
    assert_eq!(signs, vec![1, -1, 1, -1, 1, -1]);
}

#[test]
fn plot_data_rejects_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("none.csv");
    let out = bsq(&["plot-data", "--out", csv.to_str().unwrap()], &bundled("simplex.json"));
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a surface"));
    assert!(!csv.exists());
}

#[test]
fn output_is_byte_deterministic() {
    for (args, name) in [
        (vec!["compare"], "five_circle_sphere.json"),
        (vec!["quantize", "--method", "both", "--signed"], "two_circle_torus.json"),
        (vec!["validate"], "five_circle_sphere.json"),
    ] {
        let a = bsq(&args, &bundled(name));
        let b = bsq(&args, &bundled(name));
        assert_eq!(a.stdout, b.stdout);
    }
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    for p in [&x, &y] {
        bsq(&["plot-data", "--out", p.to_str().unwrap()], &bundled("five_circle_sphere.json"));
    }
    assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
}

#[test]
fn tolerance_variable() {
    let path = bundled("canonical_sphere.json");
    assert_eq!(code(&bsq_env(&["quantize"], &path, Some("abc"))), 1);
    assert_eq!(code(&bsq_env(&["quantize"], &path, Some("-1"))), 1);
    let loose = bsq_env(&["quantize", "--signed"], &path, Some("1e-6"));
    assert_eq!(code(&loose), 0);
    assert_eq!(json(&loose)["stabilized_dimension"], 0);
}

#[test]
fn torus_signed_dimension() {
    let out = bsq(&["quantize", "--signed", "--method", "both"], &bundled("two_circle_torus.json"));
    assert_eq!(code(&out), 0);
    let report: BothReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.equal);
    assert_eq!(report.dimension, Count::Finite(1));
}
