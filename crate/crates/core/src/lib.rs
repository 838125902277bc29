//! Numerical laboratory for high-dimensional random walks and the convex
//! hulls they sweep out.
//!
//! The crate is organised bottom-up:
//!
//! - [`numkit`]: dense vectors and matrices, minimum-norm-point hull
//!   membership, nonnegative least squares, condition numbers.
//! - [`randwalk`]: reproducible random streams, time grids and the three walk
//!   models (Brownian motion, the lattice walk on ℤⁿ, the fixed-angle walk on
//!   the sphere).
//! - [`conelab`]: prefix matrices mapping increments to positions, escape
//!   events and the negative-spread property of row distributions.
//! - [`widthlab`]: cone projections, Moreau decomposition and Gaussian widths.
//! - [`witness`]: the block-statistics construction of a direction that stays
//!   positive along a Brownian path.
//! - [`harness`]: Monte Carlo drivers and report types.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conelab;
pub mod error;
pub mod harness;
pub mod numkit;
pub mod randwalk;
pub mod widthlab;
pub mod witness;

#[cfg(feature = "oracles")]
pub mod oracles;

pub use error::{Error, Result};
