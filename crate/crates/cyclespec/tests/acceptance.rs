//! Acceptance suite: every headline identity at full scale, one line per
//! criterion, with the tolerances pinned in the library checks.
//!
//! Runtime budgets are asserted where the criteria state them.

use cyclespec::verify::*;
use std::time::Instant;

fn report(outcome: &CheckOutcome) {
    println!(
        "criterion [{}] {} — {} (max |Δ| = {}, {} ms)",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.name,
        outcome.detail,
        outcome.max_delta.as_deref().unwrap_or("n/a"),
        outcome.elapsed_ms
    );
}

#[test]
fn criterion_01_half_shift_square_sums() {
    let start = Instant::now();
    let outcome = check_half_shift_square(50, 128).expect("criterion 1 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
    assert!(
        start.elapsed().as_secs() < 1,
        "criterion 1 exceeded its 1 s budget: {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_02_csc_fourth_identity() {
    let outcome = check_csc_fourth_identity(10, 128).expect("criterion 2 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_03_third_root_half_shift() {
    let outcome = check_third_root_half_shift(6, 128).expect("criterion 3 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_04_secant_double_values() {
    let outcome = check_secant_double_values(9, 128).expect("criterion 4 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_05_constant_coefficient_closed_form() {
    let outcome = check_constant_coefficients(20, 128).expect("criterion 5 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_06_heat_kernel_methods() {
    let start = Instant::now();
    let outcome = check_heat_methods(30, 128).expect("criterion 6 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
    assert!(
        start.elapsed().as_secs() < 30,
        "criterion 6 exceeded its 30 s budget: {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_07_resolvent_three_way() {
    let outcome = check_resolvent_three_way(200, 128).expect("criterion 7 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_08_chebyshev_cross_checks() {
    let outcome = check_chebyshev_exact(128).expect("criterion 8 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_09_l_value_routes() {
    let outcome = check_l_values(30, 4, 128).expect("criterion 9 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_10_l_tilde_routes() {
    let outcome = check_l_tilde(15, 2, 128).expect("criterion 10 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}

#[test]
fn criterion_11_chu_marini_generating_functions() {
    let outcome = check_chu_marini(8, 4, 128).expect("criterion 11 run");
    report(&outcome);
    assert!(outcome.passed, "{}", outcome.detail);
}
