//! Fixtures shared by the benchmarks.

use gjl_core::counterexample::{build_h, jets_at_origin, TorusPotential};
use gjl_core::jet_propagation::JetTable;
use gjl_core::pde_crosscheck::GridShape;
use gjl_core::second_jet::SecondJetBoundary;

/// One boundary per causal class the solver handles by a different route.
pub fn boundaries() -> Vec<(&'static str, SecondJetBoundary)> {
    [
        ("space_like", (0.0, 0.0, 0.25, -0.25)),
        ("space_like_generic", (0.1, -0.05, 0.3, -0.2)),
        ("time_like", (0.0, 0.0, 0.3, 0.3)),
    ]
    .into_iter()
    .map(|(name, (a0, b0, a1, b1))| (name, SecondJetBoundary::new(a0, b0, a1, b1).unwrap()))
    .collect()
}

pub fn h_jets(n: usize, order: usize) -> JetTable {
    jets_at_origin(&build_h(n).unwrap(), order).unwrap()
}

pub fn h(n: usize) -> TorusPotential {
    build_h(n).unwrap()
}

pub fn small_grid() -> GridShape {
    GridShape::new(17, 24, 24).unwrap()
}
