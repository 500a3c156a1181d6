//! Operatopes, operanoids, noncommutative and free zonoids.
//!
//! Convex bodies whose support functions are (expected) trace norms of real
//! linear combinations of Hermitian matrices, together with the samplers,
//! free-probability limits and diagnostics needed to approximate them.

// `!(x > 0.0)` is the NaN-rejecting form used throughout input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod faces;
pub mod freeprob;
pub mod hypersurface;
pub mod io;
pub mod lift;
pub mod montecarlo;
pub mod parallel;
pub mod quadrature;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
