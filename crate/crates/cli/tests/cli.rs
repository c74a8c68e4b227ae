use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SQUARE_WELL: &str = r#"{"kind":"square_well","V0":2,"R":1}"#;

fn gpbog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpbog")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = gpbog(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn write_potential(dir: &Path) -> String {
    let path = dir.join("sw.json");
    std::fs::write(&path, SQUARE_WELL).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn scatter_square_well() {
    let dir = tempfile::tempdir().unwrap();
    let pot = write_potential(dir.path());
    let v = json(&["scatter", "--potential", &pot]);
    let a0 = v["result"]["a0"].as_f64().unwrap();
    assert!((a0 / (1.0 - 1f64.tanh()) - 1.0).abs() < 1e-8);
    assert!((a0 - 0.238406).abs() < 1e-6);
    assert_eq!(v["config"]["potential_spec"]["kind"], "square_well");
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn scatter_profile_csv() {
    let out = gpbog(&["scatter", "--potential", SQUARE_WELL, "--format", "csv", "--points", "11"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["r", "f"]);
    assert_eq!(rows.len(), 11);
    let a0 = 1.0 - 1f64.tanh();
    let last = rows.last().unwrap();
    assert!((last[1] - (1.0 - a0 / last[0])).abs() < 1e-10);
}

#[test]
fn elambda_first_cube() {
    let v = json(&["elambda", "--max-level", "1", "--method", "raw"]);
    let expect = 6.0 * 1f64.cos() + 6.0 * 2f64.sqrt().cos() + 8.0 / 3.0 * 3f64.sqrt().cos();
    assert!((v["result"]["partial_sum"].as_f64().unwrap() - expect).abs() < 1e-14);
    assert!((v["result"]["e_lambda"]["value"].as_f64().unwrap() - (2.0 - expect)).abs() < 1e-14);
}

#[test]
fn coefficient_table_csv() {
    let out = gpbog(&["coeffs", "--potential", SQUARE_WELL, "--N", "1000", "--mu", "1", "--pmax", "13"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["p", "gamma", "sigma", "F", "G", "tau", "sqrt(F^2-G^2)", "dispersion"]);
    // Shells |n|^2 = 1, 2, 3, 4 lie below |p| = 13.
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert!((row[1] * row[1] - row[2] * row[2] - 1.0).abs() < 1e-12);
        assert!((row[6] - (row[3] * row[3] - row[4] * row[4]).sqrt()).abs() < 1e-9 * row[3]);
    }
    assert!((rows[0][0] - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["bogsum", "--a0", "0.01"][..],
        &["coeffs", "--potential", SQUARE_WELL, "--N", "500", "--mu", "1"][..],
        &["simulate", "--N", "3", "--axial", "2", "--kappa", "5", "--potential", SQUARE_WELL][..],
    ] {
        assert_eq!(gpbog(args).stdout, gpbog(args).stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let one = json(&["--threads", "1", "bogsum", "--a0", "0.02"]);
    let many = json(&["--threads", "4", "bogsum", "--a0", "0.02"]);
    assert_eq!(one["result"], many["result"]);
    assert_eq!(one["threads"], 1);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lhy.json");
    let out = gpbog(&["lhy", "--rho", "1", "--a0", "0.01", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let lhy = v["result"]["lhy"]["value"].as_f64().unwrap();
    let expect = 4.0 * PI * 0.01 * (1.0 + 128.0 / (15.0 * PI.sqrt()) * 1e-3);
    assert!((lhy - expect).abs() < 1e-12);
    assert_eq!(v["config"]["rho"], 1.0);
}

#[test]
fn spectrum_and_depletion() {
    let v = json(&["spectrum", "--a0", "0.1", "--occ", "1/0/0:2"]);
    let p = 2.0 * PI;
    let expect = 2.0 * (p.powi(4) + 16.0 * PI * 0.1 * p * p).sqrt();
    assert!((v["result"]["energy"].as_f64().unwrap() - expect).abs() < 1e-10);
    let d = json(&["depletion", "--rho", "1", "--a0", "0.01"]);
    assert!(d["result"]["relative_difference"].as_f64().unwrap() < 1e-6);
}

#[test]
fn simulate_report() {
    let v = json(&["simulate", "--N", "4", "--axial", "3", "--kappa", "5", "--potential", r#"{"kind":"square_well","V0":1,"R":1}"#, "--cascade"]);
    let r = &v["result"];
    for key in ["dimension", "E_exact", "E_bogoliubov_prediction", "vacuum_expectations", "overlaps", "dropped_terms"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    assert_eq!(r["vacuum_expectations"].as_array().unwrap().len(), 4);
    assert_eq!(v["config"]["N"], 4);
}

#[test]
fn exit_codes() {
    assert_eq!(gpbog(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(gpbog(&["--help"]).status.code(), Some(0));
    assert_eq!(gpbog(&["--version"]).status.code(), Some(0));
    assert_eq!(gpbog(&["bogsum"]).status.code(), Some(1));
    assert_eq!(gpbog(&["bogsum", "--a0=-1"]).status.code(), Some(2));
    assert_eq!(gpbog(&["energy", "--potential", SQUARE_WELL, "--N", "1"]).status.code(), Some(2));
    assert_eq!(gpbog(&["scatter", "--potential", "/nonexistent/v.json"]).status.code(), Some(2));
    assert_eq!(gpbog(&["scatter", "--potential", r#"{"kind":"square_well","R":1}"#]).status.code(), Some(2));
    assert_eq!(gpbog(&["check", "--suite", "99"]).status.code(), Some(1));
    assert_eq!(gpbog(&["simulate", "--N", "40", "--pmax", "20", "--potential", SQUARE_WELL]).status.code(), Some(2));
}

#[test]
fn check_subset() {
    let out = gpbog(&["check", "--suite", "1,5,12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}
