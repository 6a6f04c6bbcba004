//! End-to-end checks of the binary: exit-code taxonomy, reproducibility of
//! CSV artifacts, and the documented output formats.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirichlet-zeros"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dirichlet-zeros-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn expected_emits_value_and_exit_zero() {
    let out = bin()
        .args(["expected", "--T", "0.6", "--U", "inf", "--tol", "1e-8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = json["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1.0, "E N(0.6, inf) = {value}");
    assert_eq!(json["method"], "quadrature");
    assert!(json["manifest"]["repro_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn exit_code_taxonomy() {
    // usage error: unknown flag
    let usage = bin().args(["expected", "--bogus"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    // domain error: T <= 1/2
    let domain = bin()
        .args(["expected", "--T", "0.4", "--U", "inf"])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(2));
    // precision error: absurd tolerance exhausts the subdivision budget
    let precision = bin()
        .args(["expected", "--T", "0.6", "--U", "1.0", "--tol", "1e-25"])
        .output()
        .unwrap();
    assert_eq!(precision.status.code(), Some(3));
    // help exits 0
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn simulate_csv_is_byte_identical_across_runs_and_thread_counts() {
    let path_a = tmp("sim-a.csv");
    let path_b = tmp("sim-b.csv");
    let common = [
        "simulate", "--T", "0.6", "--U", "1.0", "--trials", "100", "--seed", "7",
        "--truncation", "5000", "--grid", "800",
    ];
    let run_a = bin()
        .args(common)
        .args(["--out", path_a.to_str().unwrap()])
        .env("DIRICHLET_ZEROS_THREADS", "1")
        .output()
        .unwrap();
    assert!(run_a.status.success(), "{}", String::from_utf8_lossy(&run_a.stderr));
    let run_b = bin()
        .args(common)
        .args(["--out", path_b.to_str().unwrap()])
        .env("DIRICHLET_ZEROS_THREADS", "4")
        .output()
        .unwrap();
    assert!(run_b.status.success());
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "CSV bytes must not depend on run or worker count");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# manifest: {"));
    assert!(text.contains("trial,count,refined_count,suspect"));
    assert!(!text.contains("timestamp"), "CSV must not embed timestamps");
    std::fs::remove_file(path_a).ok();
    std::fs::remove_file(path_b).ok();
}

#[test]
fn coeffs_prints_c2_symbolic_form() {
    let out = bin().args(["coeffs", "--order", "6"]).output().unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c2 = &json["coefficients"][0];
    assert_eq!(c2["n"], 2);
    assert_eq!(c2["symbolic"], "(2*g1 + g0^2)/(2*pi)");
    let numeric = c2["numeric"].as_f64().unwrap();
    assert!((numeric - 0.0298489).abs() < 1e-6);
}

#[test]
fn sweep_empty_range_yields_header_only_csv() {
    let path = tmp("sweep-empty.csv");
    let out = bin()
        .args([
            "sweep", "--from", "1e-8", "--to", "1e-2", "--factor", "10",
            "--out", path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let data_lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .collect();
    assert_eq!(data_lines.len(), 1, "header only: {data_lines:?}");
    assert!(data_lines[0].starts_with("t_minus_half,"));
    std::fs::remove_file(path).ok();
}

#[test]
fn sweep_ratio_column_trends_to_inverse_two_pi() {
    let out = bin()
        .args(["sweep", "--from", "1e-3", "--to", "1e-7", "--factor", "100", "--tol", "1e-9"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let target = 1.0 / (2.0 * std::f64::consts::PI);
    let mut prev_gap = f64::INFINITY;
    for row in rows {
        let gap = (row["ratio_to_log"].as_f64().unwrap() - target).abs();
        assert!(gap < prev_gap, "ratio must approach 1/(2pi)");
        prev_gap = gap;
        let diff = row["expansion_minus_quadrature"].as_f64().unwrap().abs();
        assert!(diff < 1e-6);
    }
}

#[test]
fn alpha_subcommand_reports_regime() {
    let out = bin()
        .args(["alpha", "--set", "primes", "--T", "0.51", "--U", "inf", "--tol", "1e-4"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["regime"], "critical");
    assert_eq!(json["alpha"], -1.0);
    assert!(json["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn alpha_reads_explicit_list_files() {
    let path = tmp("set.txt");
    let mut body = String::from("# synthetic list\n");
    for n in 1..=4000 {
        body.push_str(&format!("{n}\n"));
    }
    std::fs::write(&path, body).unwrap();
    let out = bin()
        .args([
            "alpha",
            "--set",
            &format!("file:{}", path.display()),
            "--alpha",
            "0",
            "--T",
            "0.8",
            "--U",
            "2.0",
            "--tol",
            "1e-6",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // an integer list with declared α = 0 should track the exact integers kernel
    let listed = json["value"].as_f64().unwrap();
    let exact = bin()
        .args(["alpha", "--set", "integers", "--T", "0.8", "--U", "2.0", "--tol", "1e-8"])
        .output()
        .unwrap();
    let exact_json: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    let fit = &json["counting_fit"];
    assert!((fit[0].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert!(
        (listed - exact_json["value"].as_f64().unwrap()).abs() < 5e-3,
        "explicit integer list vs exact kernel: {listed} vs {}",
        exact_json["value"]
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn correlation_subcommand_covers_all_modes() {
    let out = bin()
        .args([
            "correlation", "--sigma-k", "0.75", "--sigma-l", "1.0", "--rho", "0.5",
            "--dyadic", "10", "--trials", "20000", "--seed", "3", "--truncation", "20000",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let closed = json["series"]["closed_form"].as_f64().unwrap();
    let (mc, se) = (
        json["series"]["mc"][0].as_f64().unwrap(),
        json["series"]["mc"][1].as_f64().unwrap(),
    );
    assert!((mc - closed).abs() <= 4.0 * se + 5e-3);
    assert_eq!(json["dyadic"]["within_bound"], true);
    let orthant_closed = json["orthant"]["closed_form"].as_f64().unwrap();
    assert!((orthant_closed - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn sign_stats_mean_ratio_near_half() {
    let out = bin()
        .args(["sign-stats", "--R", "12", "--trials", "400", "--seed", "9"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mean = json["mean_plus_ratio"].as_f64().unwrap();
    let se = json["se_plus_ratio"].as_f64().unwrap();
    assert!((mean - 0.5).abs() <= 4.0 * se, "mean {mean} se {se}");
}
