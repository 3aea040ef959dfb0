use chabauty_core::acceptance::{self, CriterionResult};

fn report(r: CriterionResult) {
    let mark = if r.passed { "PASS" } else { "FAIL" };
    println!("[{mark}] {}. {} ({} ms): {}", r.id, r.title, r.elapsed_ms, r.detail);
    assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
}

#[test]
fn c1_classification_table() {
    report(acceptance::classification_table());
}

#[test]
fn c2_numeral_implies_integral() {
    report(acceptance::numeral_implies_integral());
}

#[test]
fn c3_dual_involution() {
    report(acceptance::dual_involution());
}

#[test]
fn c4_finite_duality() {
    report(acceptance::finite_duality());
}

#[test]
fn c5_convergence_thresholds() {
    report(acceptance::convergence_thresholds());
}

#[test]
fn c6_slope_graphs() {
    report(acceptance::slope_graphs());
}

#[test]
fn c7_probe_cross_validation() {
    report(acceptance::probe_cross_validation());
}

#[test]
fn c8_diagonal_demo() {
    report(acceptance::diagonal_demo());
}

#[test]
fn c9_witness_recipes() {
    report(acceptance::witness_recipes());
}
