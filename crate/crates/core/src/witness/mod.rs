//! Constructive search for a direction `v̄` with `⟨v̄, BM(t)⟩ > 0` along a
//! whole dyadic grid of times.
//!
//! The time axis is cut into blocks `[aᵢ, aᵢ₊₁]` with `a₀ = 0` and
//! `aᵢ = 2^{i−1}`. A first direction is fitted to the block increments;
//! then, level by level, the grid inside each block is refined and the
//! direction is nudged on fresh coordinates wherever a block statistic
//! reports a violation.

mod checks;
mod grid;
mod pipeline;
mod schedule;
mod ubar;

pub use checks::{series_bound_check, truncated_norm_check, SeriesCheck, TruncatedNormCheck};
pub use grid::BlockGrid;
pub use pipeline::{
    block_statistic, build_perturbation, initial_direction, run_witness_on_path,
    run_witness_pipeline, verify_positivity, BlockStatistics, LevelAction, LevelTrace,
    Perturbation, Positivity, WitnessRun,
};
pub use schedule::{Partition, Schedule};
pub use ubar::{bridge_split, build_ubar, refine_direction, BridgeSplit, Ubar};
