//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p specdyn-core --test acceptance -- --nocapture`.

use specdyn_core::verify::{run_check, CheckReport, VerifyOptions};

fn run(name: &str) -> Vec<CheckReport> {
    let reports = run_check(name, &VerifyOptions::default()).expect("check runs");
    for r in &reports {
        println!("{}", r.line());
    }
    reports
}

fn assert_all(name: &str) {
    let reports = run(name);
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}

#[test]
fn criterion_01_semiconjugacy() {
    assert_all("semiconjugacy");
}

#[test]
fn criterion_02_spectrum_invariance() {
    assert_all("spectrum-invariance");
}

#[test]
fn criterion_03_julia_grid() {
    assert_all("julia-grid");
}

#[test]
fn criterion_04_non_normality() {
    assert_all("non-normality");
}

#[test]
fn criterion_05_limit_function() {
    assert_all("limit-function");
}

#[test]
fn criterion_06_hecke_spectrum() {
    assert_all("hecke");
}

#[test]
fn criterion_07_dihedral_levels() {
    assert_all("dihedral-levels");
}

#[test]
fn criterion_08_fixed_points() {
    assert_all("fixedpoints");
}

#[test]
fn criterion_09_g_semiconjugacy() {
    assert_all("g-semiconjugacy");
}

#[test]
fn criterion_10_norm_bounds() {
    assert_all("norm-bounds");
}

#[test]
fn criterion_11_identities() {
    assert_all("identities");
}

#[test]
fn criterion_12_indeterminacy() {
    assert_all("indeterminacy");
}
