//! Acceptance suite: one test per validation criterion, run at full scale.
//! Each test prints its pass/fail summary line.

use std::sync::Once;
use typent_core::validate::{run_criterion, Suite};

const SEED: u64 = 20260810;

static INIT: Once = Once::new();

fn setup() {
    // the criteria parallelize across samples with rayon; nested BLAS
    // threading only oversubscribes
    INIT.call_once(|| typent_core::set_blas_threads(1));
}

fn run(id: u32) {
    setup();
    let report = run_criterion(id, Suite::Full, SEED);
    println!("{}", report.summary_line());
    for check in &report.checks {
        println!(
            "    [{}] {}: measured {:.6e} ({})",
            if check.passed { "ok" } else { "FAIL" },
            check.check,
            check.measured,
            check.requirement
        );
    }
    assert!(report.passed, "{}", report.summary_line());
}

#[test]
fn criterion_01_closed_form_battery() {
    run(1);
}

#[test]
fn criterion_02_mc_vs_exact_general() {
    run(2);
}

#[test]
fn criterion_03_mc_vs_exact_gaussian() {
    run(3);
}

#[test]
fn criterion_04_variance_closed_forms() {
    run(4);
}

#[test]
fn criterion_05_asymptotic_order_fits() {
    run(5);
}

#[test]
fn criterion_06_symmetry_suite() {
    run(6);
}

#[test]
fn criterion_07_syk2_eigenstate_average() {
    run(7);
}

#[test]
fn criterion_08_free_fermions() {
    run(8);
}

#[test]
fn criterion_09_hard_core_bosons() {
    run(9);
}

#[test]
fn criterion_10_spectral_statistics() {
    run(10);
}

#[test]
fn criterion_11_cross_representation_oracle() {
    run(11);
}

#[test]
fn criterion_12_anderson_qualitative() {
    run(12);
}

#[test]
fn criterion_13_bosonic_extension() {
    run(13);
}
