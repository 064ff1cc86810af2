//! Desk-scale workbench for geometry-controlled 1D quantum thermodynamics:
//! solve confined spectra under size-invariant shape transformations,
//! evaluate canonical-ensemble state functions, and classify the
//! spontaneity of the resulting transitions along parameter sweeps and
//! over (ground-state energy, gap) maps.

// `!(x > 0.0)` is the NaN-rejecting form of the precondition checks here;
// `x <= 0.0` would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod eigensolver;
pub mod potentials;
pub mod presets;
pub mod spontaneity;
pub mod sweep;
pub mod thermo;

mod error;
mod util;

pub use error::{Error, Result};
