//! Resource allocation for a D2D-underlay cellular uplink received by a
//! multi-antenna BS with mixed-resolution ADCs.
//!
//! The four-step allocation runs at the BS using slow-fading knowledge only:
//!
//! 1. [`adc_search`] picks how many antennas get each ADC resolution so the
//!    BS energy stays within budget;
//! 2. [`clustering`] groups DUE pairs so that DUEs sharing a spectrum block
//!    interfere little with each other;
//! 3. [`power`] finds, for every CUE/cluster pair, the powers that meet the
//!    DUE outage targets with equality while maximizing the CUE rate;
//! 4. [`matching`] assigns clusters to CUEs to maximize the CUE sum rate
//!    given by [`rate`].
//!
//! [`scenario`] generates freeway drops, and [`harness`] ties the steps
//! together, runs the random-allocation baseline and the Monte-Carlo sweeps.
//!
//! ```
//! use d2d_adc::{config::SystemConfig, harness, scenario};
//!
//! let config = SystemConfig::default();
//! let drop = scenario::generate_drop(&config, 7).unwrap();
//! let result = harness::run_4sa(&drop, &config).unwrap();
//! assert!(result.energy <= config.budget);
//! assert!(result.sum_rate > 0.0);
//! ```

pub mod adc_search;
pub mod channel;
pub mod clustering;
pub mod config;
pub mod error;
pub mod harness;
pub mod matching;
pub mod power;
pub mod quantization;
pub mod rate;
pub mod scenario;
pub mod seed;

pub use error::{Error, Result};

// The README and book chapters are compiled as doc-tests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scenario.md")]
    mod scenario {}
    #[doc = include_str!("../../../book/src/quantization.md")]
    mod quantization {}
    #[doc = include_str!("../../../book/src/adc_search.md")]
    mod adc_search {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/power_control.md")]
    mod power_control {}
    #[doc = include_str!("../../../book/src/rate_matching.md")]
    mod rate_matching {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
