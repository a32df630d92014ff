use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polyperiod::data::REPORT_SCHEMA;
use polyperiod::obj::write_obj;
use polyperiod_core::mesh::EmbeddedMesh;
use serde_json::Value;

fn polyperiod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyperiod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn assert_schema(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn entry(m: &Value, part: &str, i: usize, j: usize) -> f64 {
    m[part][i][j].as_f64().unwrap()
}

fn write_mesh(dir: &Path, name: &str, mesh: &EmbeddedMesh) -> String {
    let path = dir.join(name);
    let mut buf = Vec::new();
    write_obj(mesh, &mut buf).unwrap();
    fs::write(&path, buf).unwrap();
    path.display().to_string()
}

fn write_text(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const TETRAHEDRON: &str = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 2 3 4\nf 1 4 3\n";

#[test]
fn square_flat_torus_has_modulus_i() {
    let report = json(&polyperiod(&["compute", "--generate", "flat-torus:4x4", "--scheme", "unit"]));
    assert_schema(&report);
    assert_eq!(report["genus"], 1);
    assert_eq!(report["scheme"], "unit");
    assert!((entry(&report["pi"], "re", 0, 0)).abs() <= 1e-10);
    assert!((entry(&report["pi"], "im", 0, 0) - 1.0).abs() <= 1e-10);
    assert_eq!(report["valid"], true);
    assert_eq!(report["mesh"]["vertices"], 16);
    assert_eq!(report["source"]["kind"], "generator");
}

#[test]
fn compute_is_deterministic_and_schema_valid() {
    let args = ["compute", "--generate", "omega2", "--refine", "2", "--root", "3"];
    let a = polyperiod(&args);
    let b = polyperiod(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_schema(&report);
    assert_eq!(report["genus"], 2);
    assert_eq!(report["source"]["root"], 3);
    assert_eq!(report["reduced"]["canonical"], true);
}

#[test]
fn mesh_reports_carry_angles() {
    let dir = tempfile::tempdir().unwrap();
    let torus = EmbeddedMesh::torus_of_revolution(24, 10, 3.0, 1.0).unwrap();
    let path = write_mesh(dir.path(), "torus.obj", &torus);
    for scheme in ["intrinsic", "extrinsic"] {
        let report = json(&polyperiod(&["compute", "--mesh", &path, "--scheme", scheme]));
        assert_schema(&report);
        assert_eq!(report["scheme"], scheme);
        assert_eq!(report["source"]["kind"], "mesh");
        assert!(report["mesh"]["min_angle_deg"].as_f64().unwrap() > 30.0);
    }
    let text = polyperiod(&["compute", "--mesh", &path, "--out", "text"]);
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("reduced Pi"));
}

#[test]
fn user_gluing_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_text(
        dir.path(),
        "torus.json",
        r#"{"squares": 1, "glue": [
            {"from": [0, "N"], "to": [0, "S"], "kind": "translation"},
            {"from": [0, "E"], "to": [0, "W"], "kind": "translation"}]}"#,
    );
    let report = json(&polyperiod(&["compute", "--spec", &spec, "--refine", "3"]));
    assert!((entry(&report["pi"], "im", 0, 0) - 1.0).abs() <= 1e-10);
    assert_eq!(report["source"]["kind"], "spec");

    let broken = write_text(dir.path(), "broken.json", r#"{"squares": 1, "glue": []}"#);
    let o = polyperiod(&["compute", "--spec", &broken]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn genus_zero_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_text(dir.path(), "tet.obj", TETRAHEDRON);
    let v = polyperiod(&["validate", "--mesh", &path]);
    assert_eq!(code(&v), 0, "{}", stderr(&v));
    assert!(stdout(&v).contains("genus 0"));
    assert!(stdout(&v).trim_end().ends_with("valid"));
    let c = polyperiod(&["compute", "--mesh", &path]);
    assert_eq!(code(&c), 3);
    assert!(stderr(&c).contains("genus"));
}

#[test]
fn delaunay_violations_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let torus = EmbeddedMesh::torus_of_revolution(12, 8, 2.0, 0.7).unwrap();
    let path = write_mesh(dir.path(), "fat.obj", &torus);
    let v = polyperiod(&["validate", "--mesh", &path, "--out", "json"]);
    assert_eq!(code(&v), 2);
    let report: Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(report["valid"], false);
    let intrinsic = report["delaunay"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["scheme"] == "intrinsic")
        .unwrap();
    let violations = intrinsic["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    for v in violations {
        assert!(v[3].as_f64().unwrap() <= 0.0);
    }
    assert!(stderr(&v).contains("Delaunay"));
    assert_eq!(code(&polyperiod(&["compute", "--mesh", &path])), 2);

    let fine = EmbeddedMesh::torus_of_revolution(24, 10, 3.0, 1.0).unwrap();
    let path = write_mesh(dir.path(), "fine.obj", &fine);
    assert_eq!(code(&polyperiod(&["validate", "--mesh", &path])), 0);
}

#[test]
fn malformed_meshes_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bad_number = write_text(dir.path(), "a.obj", "v 0 0 0\nv 1 x 0\n");
    let o = polyperiod(&["validate", "--mesh", &bad_number]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let open = write_text(dir.path(), "b.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    assert_eq!(code(&polyperiod(&["validate", "--mesh", &open])), 2);

    let missing = dir.path().join("missing.obj").display().to_string();
    assert_eq!(code(&polyperiod(&["validate", "--mesh", &missing])), 1);
}

#[test]
fn usage_errors() {
    for args in [
        vec!["compute"],
        vec!["compute", "--generate", "omega1", "--mesh", "x.obj"],
        vec!["compute", "--generate", "omega1", "--refine", "0"],
        vec!["compute", "--generate", "omega1", "--scheme", "intrinsic"],
        vec!["compute", "--generate", "omega1", "--root", "100000"],
        vec!["compute", "--generate", "omega9"],
        vec!["compute", "--generate", "omega1", "--tol", "-1"],
        vec!["frobnicate"],
    ] {
        let o = polyperiod(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(code(&polyperiod(&["--help"])), 0);
}

#[test]
fn compare_against_references() {
    let o = polyperiod(&["compare", "--generate", "omega1", "--reference", "omega1", "--out", "json"]);
    let report = json(&o);
    assert!(report["distance"].as_f64().unwrap() <= 1e-6);
    assert_eq!(report["within_tolerance"], true);

    let o = polyperiod(&["compare", "--matrix", "omega1", "--reference", "omega2", "--out", "json"]);
    let report = json(&o);
    assert!(report["distance"].as_f64().unwrap() > 0.1);
    assert_eq!(report["within_tolerance"], false);

    let text = polyperiod(&["compare", "--matrix", "omega3", "--reference", "omega3"]);
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("reduced omega3"));
    assert!(stdout(&text).contains("distance"));

    let o = polyperiod(&["compare", "--matrix", "omega1", "--reference", "wente"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn compare_reads_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = polyperiod(&["compute", "--generate", "flat-torus:3x3:0.5,0.75"]);
    assert_eq!(code(&o), 0);
    let path = write_text(dir.path(), "report.json", &stdout(&o));
    let bare = write_text(dir.path(), "bare.json", r#"{"re": [[0.5]], "im": [[0.75]]}"#);
    let o = polyperiod(&["compare", "--matrix", &path, "--reference", &bare, "--out", "json"]);
    let report = json(&o);
    assert!(report["distance"].as_f64().unwrap() <= 1e-9);

    let junk = write_text(dir.path(), "junk.json", r#"{"re": [[1, 2]], "im": [[1]]}"#);
    assert_eq!(code(&polyperiod(&["compare", "--matrix", &junk, "--reference", "wente"])), 2);
}

#[test]
fn diagnose_energies() {
    let dir = tempfile::tempdir().unwrap();
    // 4 × 4 flat torus: 16 vertices and 16 faces
    let constant = write_text(dir.path(), "c.txt", &"2.5 -1\n".repeat(32));
    let o = polyperiod(&["diagnose", "--generate", "flat-torus:4x4", "--function", &constant, "--out", "json"]);
    let e = json(&o);
    for key in ["dirichlet", "conformal", "area", "identity_residual"] {
        assert_eq!(e[key].as_f64().unwrap(), 0.0, "{key}");
    }

    let o = polyperiod(&["diagnose", "--generate", "omega2", "--refine", "2", "--random", "7", "--out", "json"]);
    let e = json(&o);
    assert!(e["relative_residual"].as_f64().unwrap() <= 1e-10);
    assert!(e["dirichlet"].as_f64().unwrap() > 0.0);

    let o = polyperiod(&["diagnose", "--generate", "omega1", "--flat-form", "--out", "json"]);
    let e = json(&o);
    assert!(e["conformal"].as_f64().unwrap().abs() <= 1e-12);
    assert!(e["area"].as_f64().unwrap() > 0.0);

    let short = write_text(dir.path(), "s.txt", "1\n2\n");
    let o = polyperiod(&["diagnose", "--generate", "flat-torus:4x4", "--function", &short]);
    assert_eq!(code(&o), 2);
    for args in [
        vec!["diagnose", "--generate", "omega1"],
        vec!["diagnose", "--generate", "omega1", "--flat-form", "--random", "1"],
        vec!["diagnose", "--generate", "omega2", "--flat-form"],
    ] {
        assert_eq!(code(&polyperiod(&args)), 2, "{args:?}");
    }
}
