mod common;

use common::poly_oracle::{mismatches, A_VALUES};

#[test]
fn poly_ops_matrices_match_symbolic_oracle() {
    for n in 1..=4 {
        let failures = mismatches(n, &A_VALUES);
        assert!(failures.is_empty(), "n = {n}: {failures:#?}");
    }
}

#[test]
fn oracle_rejects_a_perturbed_entry() {
    use common::{x, y, RatPoly};
    use gjl_core::poly_ops::{boost, PolyBasis};
    let n = 2;
    let mut m = boost(n).unwrap().matrix().clone();
    m[(1, 0)] *= 1.0 + 1e-12;
    let mut failures = Vec::new();
    common::poly_oracle::check_matrix(
        "B",
        PolyBasis::full(n).unwrap(),
        &m,
        |p: &RatPoly| x().mul(&p.dy()).add(&y().mul(&p.dx())),
        &mut failures,
    );
    assert_eq!(failures.len(), 1, "{failures:?}");
}
