//! Acceptance criteria, one test per criterion at the quick profile.
//! Run with `--nocapture` to see the per-criterion pass/fail lines.

use std::time::Duration;

use prufer::verify::{self, CriterionFn, Profile};

fn run(criterion: CriterionFn, budget: Duration) {
    let result = criterion(Profile::Quick);
    println!("{}", verify::format_line(&result));
    assert!(result.passed, "{}", verify::format_line(&result));
    // Budgets apply to optimized builds; debug builds only report timing.
    if !cfg!(debug_assertions) {
        assert!(
            result.elapsed_ms <= budget.as_millis(),
            "criterion {} took {} ms, budget {} ms",
            result.id,
            result.elapsed_ms,
            budget.as_millis()
        );
    }
}

#[test]
fn criterion_1_canonical_form_soundness() {
    run(verify::canonical_soundness, Duration::from_secs(10));
}

#[test]
fn criterion_2_lambda_bound() {
    run(verify::lambda_bound, Duration::from_secs(30));
}

#[test]
fn criterion_3_f_weight_laws() {
    run(verify::f_laws, Duration::from_secs(1));
}

#[test]
fn criterion_4_order_bound_lemmas() {
    run(verify::order_bounds, Duration::from_secs(30));
}

#[test]
fn criterion_5_b_order_law() {
    run(verify::b_order_law, Duration::from_secs(5));
}

#[test]
fn criterion_6_window_certificates() {
    run(verify::window_certificates, Duration::from_secs(60));
}

#[test]
fn criterion_7_dual_classification() {
    run(verify::dual_classification, Duration::from_secs(10));
}

#[test]
fn criterion_8_radical_identity() {
    run(verify::radical_identity, Duration::from_secs(10));
}

#[test]
fn criterion_9_limit_bound() {
    run(verify::limit_bound, Duration::from_secs(5));
}
