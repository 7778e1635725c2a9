use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn qsheaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsheaf"))
        .args(args)
        .env_remove("QSHEAF_TOL_PROFILE")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const M3: &str = r#"{"elements":["0","a","b","c","1"],
  "leq":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#;
const DIAG12: &str = r#"{"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[2,0]]}"#;

#[test]
fn m3_has_three_quasipoints_and_no_points() {
    let dir = TempDir::new().unwrap();
    let m3 = write(&dir, "m3.json", M3);
    let out = qsheaf(&["lattice", "quasipoints", s(&m3)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let atoms: Vec<&str> = r["results"].as_array().unwrap().iter().map(|q| q["atom"].as_str().unwrap()).collect();
    assert_eq!(atoms, ["a", "b", "c"]);
    assert_eq!(r["schema_version"], 1);

    let out = qsheaf(&["lattice", "points", s(&m3)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["results"].as_array().unwrap().is_empty());
}

#[test]
fn stonean_basis_laws_hold_on_m3() {
    let dir = TempDir::new().unwrap();
    let m3 = write(&dir, "m3.json", M3);
    let r = report(&qsheaf(&["lattice", "stonean", s(&m3)]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["results"][4]["basis"], serde_json::json!(["a", "b", "c"]));
}

#[test]
fn invalid_lattices_exit_2_with_a_report() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.json", r#"{"elements":["0","a","b"],"leq":[["0","a"],["0","b"]]}"#);
    let out = qsheaf(&["lattice", "check", s(&v)]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert!(r["error"].as_str().unwrap().contains("not a lattice"));

    let broken = write(&dir, "broken.json", "{\"elements\": [\"0\",\n  ]}");
    let out = qsheaf(&["lattice", "check", s(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(report(&out)["error"].as_str().unwrap().contains("line 2"));
}

#[test]
fn spectrum_and_observable_of_diag() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", DIAG12);
    let r = report(&qsheaf(&["quantum", "spectrum", s(&a)]));
    let eig: Vec<f64> = r["results"].as_array().unwrap().iter().map(|e| e["eigenvalue"].as_f64().unwrap()).collect();
    assert_eq!(eig, [1.0, 2.0]);

    let r = report(&qsheaf(&["quantum", "observable", s(&a), "--line", "1,1", "--line", "1,0"]));
    assert_eq!(r["results"][0]["value"], 2.0);
    assert_eq!(r["results"][1]["value"], 1.0);

    let out = qsheaf(&["quantum", "observable", s(&a), "--line", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn restrict_to_the_first_axis() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", DIAG12);
    let u = write(&dir, "u.json", r#"{"ambient_dim":2,"frame":{"rows":2,"cols":1,"entries":[[1,0],[0,0]]}}"#);
    let out = qsheaf(&["quantum", "restrict", s(&a), "--subspace", s(&u)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let rows = r["results"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["lambda"], 1.0);
    assert_eq!(rows[0]["dimension"], 1);
}

#[test]
fn sector_tables_in_the_standard_basis() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "diag.json", DIAG12);
    let r = report(&qsheaf(&["sector", "gelfand", "--basis", "I", "--op", s(&a)]));
    assert_eq!(r["results"][1]["quasipoint"], "β2");
    assert_eq!(r["results"][1]["re"], 2.0);

    let pure = write(&dir, "pure.json", r#"{"rows":2,"cols":2,"entries":[[0,0],[0,0],[0,0],[1,0]]}"#);
    let r = report(&qsheaf(&["sector", "pointmeasure", "--rho", s(&pure), "--basis", "I"]));
    assert_eq!(r["details"]["point"], "β2");

    let mixed = write(&dir, "mixed.json", r#"{"rows":2,"cols":2,"entries":[[0.25,0],[0.1,0.1],[0.1,-0.1],[0.75,0]]}"#);
    let r = report(&qsheaf(&["sector", "measure", "--rho", s(&mixed), "--basis", "I"]));
    let total = r["details"]["total"].as_f64().unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(r["results"][0]["weight"], 0.25);
    let r = report(&qsheaf(&["sector", "pointmeasure", "--rho", s(&mixed), "--basis", "I"]));
    assert_eq!(r["details"]["point"], Value::Null);
}

#[test]
fn bridge_reconstructs_the_operator() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", r#"{"rows":2,"cols":2,"entries":[[1,0],[1,0],[1,0],[1,0]]}"#);
    let out = qsheaf(&["sector", "bridge", "--op", s(&h)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["details"]["continuous"], true);
    assert!(r["details"]["reconstruction_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn operators_off_the_sector_are_rejected() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", r#"{"rows":2,"cols":2,"entries":[[1,0],[1,0],[1,0],[1,0]]}"#);
    let out = qsheaf(&["sector", "gelfand", "--basis", "I", "--op", s(&h)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_classical_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first.json");
    let out = qsheaf(&["verify", "--suite", "classical", "--seed", "7", "--out", s(&first)]);
    assert_eq!(out.status.code(), Some(0));
    let second = qsheaf(&["verify", "--suite", "classical", "--seed", "7"]);
    assert_eq!(std::fs::read(&first).unwrap(), second.stdout);
    let r = report(&second);
    assert!(r["properties"].as_array().unwrap().iter().all(|p| p["passed"] == true));
}

#[test]
fn unknown_suite_and_profile_are_validation_errors() {
    assert_eq!(qsheaf(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qsheaf(&["verify", "--suite", "classical", "--tol-profile", "nope"]).status.code(), Some(2));
}

#[test]
fn csv_output_has_a_header_row() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", DIAG12);
    let out = qsheaf(&["quantum", "spectrum", s(&a), "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "eigenvalue,multiplicity\n1.0,1\n2.0,1\n");
}
