//! Two-phase compressible flow with a thermodynamic interface.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod mixture;
pub mod model;
pub mod solver1d;
pub mod thermo;

pub use error::{Error, Result};
