//! The `wl1` binary: output format, manifests, exit codes, reproducibility.

use std::process::{Command, Output};

fn wl1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wl1")).args(args).env_remove("WL1_JOBS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV, skipping the `#` header block and the column line.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn threshold_prints_a_headed_csv() {
    let o = wl1(&["threshold", "--gamma", "1", "--p", "0.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("# wl1 "));
    assert!(out.contains("# params-sha256: "));
    let delta: f64 = rows(&out)[0][1].parse().unwrap();
    assert!((delta - 0.32879).abs() < 1e-3, "{delta}");
    let manifest: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(manifest["command"], "threshold");
    assert!(manifest["summary"]["delta_c"].is_f64());
}

#[test]
fn exponents_reports_all_four_terms() {
    let o = wl1(&["exponents", "--gamma", "0.5,0.5", "--p", "0.4,0.05", "--omega", "1,2.5", "--tau", "0.05,0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("psi_com,psi_int,psi_ext,psi_tot"));
    let r = &rows(&out)[0];
    let v: Vec<f64> = r.iter().map(|s| s.parse().unwrap()).collect();
    assert!((v[0] - v[1] - v[2] - v[3]).abs() < 1e-12);
}

#[test]
fn invalid_model_exits_with_2() {
    let o = wl1(&["threshold", "--gamma", "0.5,0.6", "--p", "0.1,0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("class fractions must sum to 1"));
}

#[test]
fn unknown_flag_and_missing_seed_exit_with_2() {
    assert_eq!(wl1(&["threshold", "--gamma", "1", "--p", "0.1", "--bogus"]).status.code(), Some(2));
    assert_eq!(wl1(&["simulate", "--gamma", "1", "--p", "0.1", "--omegas", "1", "--deltas", "0.5"]).status.code(), Some(2));
}

#[test]
fn infeasible_threshold_exits_with_1() {
    let o = wl1(&["threshold", "--gamma", "1", "--p", "0.3", "--kind", "strong"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max ψ_tot"));
}

#[test]
fn out_flag_writes_csv_and_manifest_with_matching_digest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let p = path.to_str().unwrap();
    let o = wl1(&["--out", p, "simulate", "--gamma", "0.5,0.5", "--p", "0.2,0.05", "--omegas", "1,2", "--deltas", "0.4,0.6", "--n", "40", "--trials", "4", "--seed", "9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read(&path).unwrap();
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(format!("{p}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"][0]["sha256"], wl1::report::sha256_hex(&csv));
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["params_sha256"], wl1::report::params_digest(&manifest["params"]));
    assert!(String::from_utf8(csv).unwrap().contains(&format!("# params-sha256: {}", manifest["params_sha256"].as_str().unwrap())));
}

#[test]
fn seeded_runs_are_byte_identical_across_worker_counts() {
    let args = ["p1-sweep", "--p1", "0.2,0.3", "--omegas", "2", "--n", "40", "--m", "20", "--trials", "6", "--seed", "5"];
    let one = wl1(&[&["--jobs", "1"][..], &args[..]].concat());
    let two = wl1(&[&["--jobs", "3"][..], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    let other = wl1(&[&args[..12], &["6"][..]].concat());
    assert_ne!(one.stdout, other.stdout);
}

#[test]
fn bound_lists_its_terms() {
    let o = wl1(&["bound", "--n", "20", "--n1", "10", "--k1", "2", "--k2", "1", "--m", "12", "--w", "1,2", "--samples", "2000", "--seed", "1", "--rule", "parity"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = rows(&stdout(&o));
    assert!(!rows.is_empty());
    // Parity rule: t1 + t2 + k1 + k2 − m is even.
    for r in rows {
        let l: usize = r[0].parse::<usize>().unwrap() + r[1].parse::<usize>().unwrap() + 3;
        assert_eq!((l - 12) % 2, 0, "{r:?}");
    }
}

#[test]
fn reweighted_and_noisy_run_at_small_scale() {
    let o = wl1(&["reweighted", "--n", "40", "--m", "24", "--k-min", "4", "--k-max", "10", "--k-step", "3", "--trials", "3", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(rows(&stdout(&o)).len(), 3);
    let o = wl1(&["noisy", "--gamma", "0.5,0.5", "--p", "0.2,0.05", "--omegas", "1,2", "--snr", "20,inf", "--n", "40", "--m", "25", "--trials", "2", "--seed", "3"]);
    assert!(o.status.success());
    assert_eq!(rows(&stdout(&o)).len(), 2 * 2 * 2);
}

#[test]
fn angles_and_optimal_weight_run() {
    let o = wl1(&["angles", "--k", "3,1", "--t", "2,2", "--n", "10,10", "--w", "1,2", "--seed", "4"]);
    assert!(o.status.success());
    let r = &rows(&stdout(&o))[0];
    let ext: f64 = r[0].parse().unwrap();
    let int: f64 = r[2].parse().unwrap();
    assert!(ext > 0.0 && ext <= 1.0 && int > 0.0 && int <= 1.0);
    let o = wl1(&["optimal-weight", "--gamma", "0.5,0.5", "--p", "0.3,0.3", "--omega-min", "0.5", "--omega-max", "2", "--scan-points", "5", "--search-tol", "0.05"]);
    assert!(o.status.success());
    let m: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    let w = m["summary"]["omega_star"].as_f64().unwrap();
    assert!(w.ln().abs() < 0.1, "{w}");
}
