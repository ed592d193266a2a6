//! Pipeline orchestration, Monte-Carlo sweeps and fading-based verification.

pub mod pipeline;
pub mod plot;
pub mod sweep;
pub mod verify;

pub use pipeline::{run_4sa, run_ra_baseline, Algorithm, AllocationResult};
pub use sweep::{budget_table, monte_carlo_sweep, SweepAxis, SweepPoint, SweepReport};
pub use verify::{empirical_outage, monte_carlo_rate};
