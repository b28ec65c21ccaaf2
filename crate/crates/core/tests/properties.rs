mod common;

fn check(result: common::Check) {
    if let Err(e) = result {
        panic!("{e}");
    }
}

#[test]
fn factorization_round_trip() {
    check(common::factorization_round_trip());
}

#[test]
fn kronecker_multiplicativity() {
    check(common::kronecker_multiplicativity());
}

#[test]
fn validity_agrees_with_float_roots() {
    check(common::validity_vs_float_oracle());
}

#[test]
fn relative_splitting_depends_on_square_class_only() {
    check(common::square_class_invariance());
}

#[test]
fn delta_is_totally_negative() {
    check(common::delta_totally_negative());
}

#[test]
fn cm_outputs_ignore_choice_of_beta() {
    check(common::beta_conjugate_invariance());
}

#[test]
fn mixed_classes_are_characterized_by_divisibility() {
    check(common::mixed_iff_divisibility());
}

#[test]
fn trace_zero_criterion_matches_main_criterion() {
    check(common::trace_zero_consistency());
}
