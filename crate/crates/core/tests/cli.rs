use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux-crum")).args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {header:?}"));
    rows.iter().map(|r| r[i]).collect()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn morse_both_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let out = bin(&["transform", "--family", "morse", "--order", "2", "--method", "both", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = read_csv(&csv);
    assert_eq!(h, ["x", "u0", "u_2_crum", "u_2_darboux", "psi_3_crum", "psi_3_darboux"]);
    assert_eq!(rows.len(), 121);
    let (c, d) = (column(&h, &rows, "u_2_crum"), column(&h, &rows, "u_2_darboux"));
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    assert!(c.iter().zip(&d).all(|(a, b)| (a - b).abs() <= 1e-8 * scale));

    let side: Value = serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["method"], "both");
    assert_eq!(side["family"]["name"], "morse");
    assert_eq!(side["eigenvalues"][1][0], 2);
    assert!((side["eigenvalues"][1][1].as_f64().unwrap() - 7.0).abs() < 1e-12);
}

#[test]
fn order_zero_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = bin(&["transform", "--family", "morse", "--order", "0", "--method", "crum", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[1], f[2]);
    }
}

#[test]
fn csv_goes_to_stdout_without_out_path() {
    let out = bin(&["transform", "--family", "ginocchio", "--order", "1", "--method", "darboux", "--grid", "-2,2,21"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,u0,u_1,psi_1,psi_2,psi_3\n"));
    // band |y| < 0.05 removes the origin
    assert!(text.lines().skip(1).all(|l| !l.starts_with("0.0000000000000000e0,")));
    // 17 significant digits
    let first = text.lines().nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(first, "-2.0000000000000000e0");
}

#[test]
fn si_method_matches_crum() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("si.csv"), dir.path().join("c.csv"));
    for (m, p) in [("si", &a), ("crum", &b)] {
        let out = bin(&["transform", "--family", "morse", "--order", "2", "--method", m, "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ha, ra) = read_csv(&a);
    let (hb, rb) = read_csv(&b);
    let (u, v) = (column(&ha, &ra, "u_2"), column(&hb, &rb, "u_2"));
    assert!(u.iter().zip(&v).all(|(x, y)| (x - y).abs() <= 1e-9 * 20.0));
    assert!(ha.contains(&"psi_3".to_string()));
}

#[test]
fn ginocchio_inside_band_only_is_singular() {
    let out = bin(&["transform", "--family", "ginocchio", "--grid", "-0.02,0.02,5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn node_scan_off_on_regular_seeds() {
    // the ground-state-first Morse seeds have nodeless Wronskians
    let out = bin(&["transform", "--family", "morse", "--no-node-scan", "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn crum_darboux_suite_passes_for_morse() {
    let out = bin(&["verify", "--suite", "crum-darboux", "--family", "morse", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    for rec in r["records"].as_array().unwrap() {
        assert!(rec["max_gap"].as_f64().unwrap() <= 1e-8, "{rec}");
        assert!(rec["anchor"].as_str().unwrap().len() > 3);
    }
}

#[test]
fn polynomial_wronskian_fixtures_are_exact() {
    let out = bin(&["verify", "--suite", "wronskian-identities", "--family", "morse"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let exact: Vec<&Value> = r["records"].as_array().unwrap().iter().filter(|x| x["tolerance"] == 0.0).collect();
    assert!(exact.len() >= 4);
    assert!(exact.iter().all(|x| x["max_gap"] == 0.0 && x["pass"] == true));
}

#[test]
fn shape_invariance_needs_a_flow() {
    let out = bin(&["verify", "--suite", "shape-invariance", "--family", "ginocchio"]);
    assert_eq!(out.status.code(), Some(4));
    let all = bin(&["verify", "--suite", "all", "--family", "ginocchio"]);
    let r = report(&all);
    assert_eq!(r["skipped"][0], "shape-invariance");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"family":{"name":"morse"},"unknown":true}"#).unwrap();
    assert_eq!(bin(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--family", "morse", "--param", "beta=1"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--family", "morse", "--tol", "morse=-1"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--family", "morse", "--levels", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["verify"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    let csv = dir.path().join("run.csv");
    let doc = serde_json::json!({
        "family": {"name": "morse", "params": {"A": 4.0, "alpha": 1.0}, "levels": 3},
        "order": 3,
        "method": "darboux",
        "grid": {"min": -2.0, "max": 2.0, "count": 41},
        "output": {"csv": csv},
        "tolerances": {"morse": 1e-8}
    });
    std::fs::write(&cfg, doc.to_string()).unwrap();
    let out = bin(&["transform", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = read_csv(&csv);
    assert_eq!(h, ["x", "u0", "u_3"]);
    assert_eq!(rows.len(), 41);
    assert!(csv.with_extension("json").exists());

    let v = bin(&["verify", "--config", cfg.to_str().unwrap(), "--suite", "shape-invariance"]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
}

#[test]
fn tolerance_override_can_force_failure() {
    let out = bin(&["verify", "--suite", "residuals", "--family", "morse", "--tol", "residual=1e-18"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let failing = r["records"].as_array().unwrap().iter().find(|x| x["pass"] == false).unwrap();
    assert!(!failing["offending_points"].as_array().unwrap().is_empty());
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["morse", "ginocchio"] {
        let a = bin(&["verify", "--suite", "all", "--family", family]);
        let b = bin(&["verify", "--suite", "all", "--family", family]);
        assert_eq!(a.stdout, b.stdout);
        let (p, q) = (dir.path().join(format!("{family}1.csv")), dir.path().join(format!("{family}2.csv")));
        for path in [&p, &q] {
            bin(&["transform", "--family", family, "--out", path.to_str().unwrap()]);
        }
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
    }
}
