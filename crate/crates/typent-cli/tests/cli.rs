//! End-to-end checks of the CLI surface: closed-form values, determinism of
//! seeded output, curve symmetry, and exit codes.

use std::process::Command;

fn typent(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_typent"))
        .args(args)
        .output()
        .expect("run typent");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn exact_page_value() {
    let (stdout, _, code) = typent(&["exact", "--ensemble", "page", "--dA", "2", "--dB", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("3.33333333333333"), "{stdout}");
}

#[test]
fn exact_gaussian_fixed_n_value() {
    let (stdout, _, code) = typent(&[
        "exact", "--ensemble", "gaussian-fixed-n", "--V", "2", "--VA", "1", "--N", "1",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("4.99999999999999"), "{stdout}");
}

#[test]
fn exact_deterministic_without_seed() {
    // deterministic commands accept no seed at all
    let a = typent(&["exact", "--ensemble", "fixed-n", "--V", "12", "--VA", "5", "--N", "6"]);
    let b = typent(&["exact", "--ensemble", "fixed-n", "--V", "12", "--VA", "5", "--N", "6"]);
    assert_eq!(a.2, 0);
    assert_eq!(a.0, b.0);
}

#[test]
fn curve_page_symmetric_and_reproducible() {
    let (stdout, _, code) = typent(&["curve", "--ensemble", "page", "--V", "40"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 39);
    // symmetric about f = 1/2
    let value = |row: &str| row.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    for i in 0..rows.len() {
        let j = rows.len() - 1 - i;
        assert!(
            (value(rows[i]) - value(rows[j])).abs() < 1e-9,
            "asymmetry at row {i}"
        );
    }
    let again = typent(&["curve", "--ensemble", "page", "--V", "40"]);
    assert_eq!(stdout, again.0, "curve output must be byte-identical");
}

#[test]
fn sample_reports_z_score_and_is_seed_deterministic() {
    let args = [
        "sample", "--ensemble", "page", "--V", "8", "--VA", "4", "--n", "500", "--seed", "11",
    ];
    let a = typent(&args);
    let b = typent(&args);
    assert_eq!(a.2, 0);
    assert_eq!(a.0, b.0, "same seed must give identical JSON");
    let json: serde_json::Value = serde_json::from_str(&a.0).unwrap();
    assert!(json["z_score"].as_f64().unwrap().abs() < 4.0);
    assert_eq!(json["n_samples"].as_u64().unwrap(), 500);
}

#[test]
fn sample_requires_seed() {
    let (_, _, code) =
        typent(&["sample", "--ensemble", "page", "--V", "8", "--VA", "4", "--n", "100"]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_model_name_is_usage_error() {
    let (_, _, code) = typent(&["hamiltonian", "--model", "bogus", "--VA", "2", "--seed", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn hamiltonian_free_fermion_row() {
    let (stdout, _, code) = typent(&[
        "hamiltonian", "--model", "free-fermion", "--V", "10", "--VA", "5", "--states", "200",
        "--seed", "3",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.lines().count() == 2, "{stdout}");
    assert!(stdout.starts_with("model,realization,V,VA,mean,stderr,n_samples,reference"));
}

#[test]
fn validate_single_cheap_criterion() {
    let (stdout, _, code) = typent(&["validate", "--suite", "quick", "--criteria", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("criterion  1 PASS"), "{stdout}");
}

#[test]
fn spectrum_direct_sum_report() {
    let (stdout, _, code) = typent(&[
        "spectrum", "--experiment", "direct-sum-gue", "--d", "40", "--M", "2", "--draws", "150",
        "--seed", "5",
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["n_samples"].as_u64().unwrap(), 150);
    assert!(json["ks_poisson"].is_number());
}
