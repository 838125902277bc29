//! Prefix matrices, escape events and marginal-spread estimates.
//!
//! A walk sampled at `t₁ < … < t_N` can be written as `F·A`, where the rows
//! of `A` are independent normalised increments and `F` is lower triangular.
//! Deciding whether the origin lies in the hull of the rows of `F·A` is the
//! same as deciding whether some direction `y` has `F A y ≥ 0`.

mod escape;
mod prefix;

pub use escape::{
    escape_event, estimate_property_p, gordon_escape_bound, zn_moment_check, EscapeOutcome,
    MomentEstimate, PropertyPEstimate,
};
pub use prefix::{
    build_ftilde_sphere, build_prefix_matrix_bm, build_prefix_matrix_zn, scaled_increments,
    PrefixKind, PrefixMatrix,
};
