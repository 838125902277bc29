//! Monte Carlo drivers. Every driver takes a root [`RngStream`] and gives
//! trial `i` the child stream `i`, so results do not depend on the thread
//! count.
//!
//! [`RngStream`]: crate::randwalk::RngStream

mod absorb;
mod cover;
mod minimax;
mod report;
mod stats;

pub use absorb::{
    absorption_probability, absorption_threshold, AbsorptionEstimate, GridKind, Model, Probe,
    ProbeClass, ThresholdResult,
};
pub use cover::{covering_time, CoveringSummary};
pub use minimax::{
    bridge_max_check, bridge_max_sweep, minimax_negative_check, minimax_negative_sweep,
    MinimaxConfig, MinimaxEstimate,
};
pub use report::{canonical_json, ExperimentReport, VERSION};
pub use stats::{clopper_pearson, BernoulliEstimate, DEFAULT_CONFIDENCE};
