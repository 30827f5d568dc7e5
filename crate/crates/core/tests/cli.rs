//! End-to-end runs of the `hulthen` binary: output formats, exit codes,
//! config files and determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn hulthen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hulthen"))
        .args(args)
        .env_remove("HULTHEN_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn spectrum_anchor_row() {
    let o = hulthen(&["spectrum", "--alpha", "0.2", "--D", "3", "--lmax", "0", "--nmax", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], ["n", "l", "D", "alpha", "c0", "energy", "eps_tilde", "bound", "validity"]);
    let e: f64 = rows[1][5].parse().unwrap();
    assert!((e + 0.16).abs() < 1e-12);
    // 17 significant digits in scientific notation
    let mantissa = rows[1][5].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
}

#[test]
fn spectrum_without_bound_states_warns() {
    let o = hulthen(&["spectrum", "--alpha", "2", "--D", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&o)).len(), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no bound states"));
}

#[test]
fn c0_changes_only_nonzero_l_rows() {
    let a = stdout(&hulthen(&["spectrum", "--alpha", "0.1", "--D", "3", "--c0", "0"]));
    let b = stdout(&hulthen(&["spectrum", "--alpha", "0.1", "--D", "3", "--c0", "0.0833333333333333"]));
    let (ra, rb) = (csv_rows(&a), csv_rows(&b));
    assert_eq!(ra.len(), rb.len());
    assert!(ra.len() > 2);
    for (x, y) in ra.iter().zip(&rb).skip(1) {
        if x[1] == "0" {
            assert_eq!(x[5], y[5]);
        } else {
            assert_ne!(x[5], y[5]);
        }
    }
}

#[test]
fn json_schema() {
    let o = hulthen(&["spectrum", "--format", "json", "--alpha", "0.1,0.05", "--D", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["schema"], 1);
    assert_eq!(v["meta"]["command"], "spectrum");
    assert!(v["meta"]["version"].is_string());
    assert_eq!(v["meta"]["config"]["alpha"].as_array().unwrap().len(), 2);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    // sorted by (n, l, D, alpha)
    let key = |r: &Value| {
        (
            r["n"].as_u64().unwrap(),
            r["l"].as_u64().unwrap(),
            r["D"].as_u64().unwrap(),
            r["alpha"].as_f64().unwrap(),
        )
    };
    for w in rows.windows(2) {
        assert!(key(&w[0]) < key(&w[1]));
    }
}

#[test]
fn verify_default_passes_and_is_deterministic() {
    let a = hulthen(&["verify"]);
    let b = hulthen(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["meta"]["passed"], true);
    let suites: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    for s in ["vieta", "riccati", "jacobi", "quantum_correction", "momentum_integral", "quantization", "appendix", "normalization"] {
        assert!(suites.contains(&s), "{s} missing");
    }
}

#[test]
fn verify_single_suite() {
    let o = hulthen(&["verify", "--suite", "appendix", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "appendix");
}

#[test]
fn verify_perturbation_fails() {
    let o = hulthen(&["verify", "--perturb-c0", "1.01"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["passed"], false);
}

#[test]
fn wavefunction_output() {
    let o = hulthen(&["wavefunction", "--alpha", "0.2", "--n", "0", "--l", "0", "--points", "500", "--r-end", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["r", "R", "R2"]);
    assert_eq!(rows.len(), 501);
    let r: Vec<f64> = rows[1..].iter().map(|x| x[0].parse().unwrap()).collect();
    assert!(r[0] > 0.0);
    assert!(r.windows(2).all(|w| w[1] > w[0]));
    // n = 0: √12 e^{-2r}(1 − e^{-0.2 r}) in paper units
    for row in &rows[1..] {
        let (r, big_r): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let want = 12f64.sqrt() * (-0.4 * r).exp() * -(-0.2 * r).exp_m1();
        assert!((big_r - want).abs() <= 1e-12 * want.abs().max(1e-300) + 1e-15, "{r}");
    }
    let j = hulthen(&["wavefunction", "--format", "json", "--n", "1", "--alpha", "0.05"]);
    let v: Value = serde_json::from_str(&stdout(&j)).unwrap();
    let norm = &v["meta"]["normalization"];
    assert_eq!(norm["method"], "closed");
    assert!(norm["relative_difference"].as_f64().unwrap() < 1e-8);
    assert!((norm["sample_integral"].as_f64().unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn wavefunction_unbound_exits_3() {
    let o = hulthen(&["wavefunction", "--alpha", "0.2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not bound"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--alpha", "zero"][..],
        &["spectrum", "--alpha", "-0.1"],
        &["spectrum", "--D", "1"],
        &["spectrum", "--format", "xml"],
        &["spectrum", "--units", "paper", "--mu", "1"],
        &["compare", "--modes", "closed_c1"],
        &["frobnicate"],
        &[],
    ] {
        assert_eq!(hulthen(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(hulthen(&["--help"]).status.code(), Some(0));
    assert_eq!(hulthen(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("sweep.conf");
    std::fs::write(&conf, "# sweep\nalpha = 0.2\nD = 3\nlmax = 0\nnmax = 1\n").unwrap();
    let conf = conf.to_str().unwrap();
    let rows = csv_rows(&stdout(&hulthen(&["spectrum", "--config", conf])));
    assert_eq!(rows.len(), 3);
    let rows = csv_rows(&stdout(&hulthen(&["spectrum", "--config", conf, "--nmax", "0"])));
    assert_eq!(rows.len(), 2);

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "alpha = 0.2\nwibble = 3\n").unwrap();
    let o = hulthen(&["spectrum", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wibble"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let o = hulthen(&["spectrum", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,l,D,alpha"));
}

#[test]
fn tolerance_environment_variable() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_hulthen"))
            .args(["verify", "--suite", "appendix", "--format", "json"])
            .env("HULTHEN_TOL", tol)
            .output()
            .unwrap()
    };
    let o = run("1e-10");
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["config"]["tol"].as_f64(), Some(1e-10));
    assert_eq!(run("banana").status.code(), Some(2));
}

#[test]
fn compare_reports_improvement() {
    let o = hulthen(&["compare", "--alpha", "0.025", "--lmax", "1", "--nmax", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let p = rows.iter().find(|r| r["l"] == 1).unwrap();
    assert_eq!(p["improved"], true);
    assert!(p["closed_c0_abs_dev"].as_f64().unwrap() <= p["closed_c0zero_abs_dev"].as_f64().unwrap());
    // s-wave: closed forms coincide and match the oracle to grid error
    let s = rows.iter().find(|r| r["l"] == 0).unwrap();
    assert_eq!(s["closed_c0"], s["closed_c0zero"]);
    assert!(s["closed_c0_rel_dev"].as_f64().unwrap() < 1e-6);
}

#[test]
fn degeneracy_table() {
    let o = hulthen(&["degeneracy", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["energy"], r["partner_energy"]);
        assert_eq!(r["difference"].as_f64(), Some(0.0));
    }
    assert!(v["meta"]["notes"][0].as_str().unwrap().contains("D - 2 < 2"));
}

#[test]
fn pretty_output() {
    let o = hulthen(&["spectrum", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with('-'));
}
