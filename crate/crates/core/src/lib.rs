// `!(x > 0.0)` is used on purpose so NaN fails validation; index loops
// mirror the matrix formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod counterexample;
pub mod error;
pub mod jet_propagation;
pub mod numeric;
pub mod pde_crosscheck;
pub mod poly_ops;
pub mod second_jet;
pub mod timegrid;

pub use error::{Error, Result};
pub use timegrid::{CoefficientSeries, TimeGrid};
