//! Dense linear-algebra primitives and exact hull-membership certificates.
//!
//! Everything here is a pure function of its inputs. Matrices are small
//! (a few hundred rows at most) and stored dense, row-major.

mod condition;
mod hull;
mod linalg;
mod matrix;
mod nnls;
mod vector;

pub use condition::{condition_number, operator_norm, CONDITION_TOL};
pub(crate) use condition::splitmix64;
pub use hull::{
    contains_origin, contains_origin_normalized, contains_origin_with, min_norm_point, min_norm_point_from, HullOptions,
    HullVerdict, IncrementalHull, MinNormPoint, CERTIFICATE_TOL,
};
pub use linalg::{cholesky_solve, least_squares};
pub use matrix::DenseMatrix;
pub use nnls::{nnls, NnlsSolution, NNLS_TOL};
pub use vector::{dot, negative_part, norm, positive_part, RealVector};
