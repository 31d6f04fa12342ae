mod common;

#[test]
fn boundary_squares_to_zero_and_euler_poincare() {
    common::boundary_squares_to_zero_and_euler_poincare();
}

#[test]
fn flips_are_reversible_and_preserve_homology() {
    common::flips_are_reversible_and_preserve_homology();
}

#[test]
fn intersection_form_is_invariant_under_reordering() {
    common::intersection_form_is_invariant_under_reordering();
}

#[test]
fn classification_sees_through_relabeling() {
    common::classification_sees_through_relabeling();
}
