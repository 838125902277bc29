//! Cones `C = F⁻¹(ℝ₊ᴺ)`, their polars, and Monte Carlo Gaussian widths.
//!
//! For a closed convex cone the supremum of `⟨Y, x⟩` over `C ∩ B₂ᴺ` equals
//! `‖P_C Y‖`, attained at `P_C Y/‖P_C Y‖`, so widths are estimated as mean
//! projection norms.

mod cone;
mod width;

pub use cone::{moreau_decompose, project_onto_cone, project_onto_polar, ConeSpec, Moreau, PROJECTION_TOL};
pub use width::{
    ball_volume, gaussian_width_cone, gaussian_width_polar, polar_volume_ratio,
    urysohn_check, volume_ratio_width_bound, width_budget_check, BudgetCheck, UrysohnCheck,
    VolumeRatio, WidthEstimate,
};
