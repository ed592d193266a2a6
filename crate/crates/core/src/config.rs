//! Scenario, constraint and model constants.
//!
//! A configuration file is a flat list of `key = value` lines (SI units,
//! linear scale unless the key says otherwise, `#` starts a comment):
//!
//! ```text
//! cues = 10
//! due_pairs = 30
//! clusters = 10
//! antennas = 32
//! max_bits = 6
//! budget = 0.5
//! outage_prob = 0.01
//! speed_kmh = 80
//! ```
//!
//! Missing keys take the values of [`SystemConfig::default`]. When `c0` is
//! absent it is normalised so that a budget of 1 exactly admits the profile
//! with every antenna at `max_bits`, for the `antennas` value of the file.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

/// -114 dBm.
pub const DEFAULT_NOISE_POWER_W: f64 = 3.981_071_705_534_969e-15;
/// 23 dBm.
pub const DEFAULT_MAX_POWER_W: f64 = 0.199_526_231_496_887_96;
/// 5 dB.
pub const DEFAULT_SINR_THRESHOLD: f64 = 3.162_277_660_168_379_5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of CUEs (M).
    pub cues: usize,
    /// Number of DUE pairs (K).
    pub due_pairs: usize,
    /// Number of DUE clusters (N).
    pub clusters: usize,
    /// BS receive antennas (N_R).
    pub antennas: usize,
    /// Highest ADC resolution in bits (B_max).
    pub max_bits: u32,
    /// Per-antenna ADC energy coefficient.
    pub c0: f64,
    /// Resolution-independent BS energy.
    pub c1: f64,
    /// BS energy budget (J).
    pub budget: f64,
    pub noise_power_w: f64,
    pub max_cue_power_w: f64,
    pub max_due_power_w: f64,
    /// DUE SINR threshold, linear.
    pub sinr_threshold: f64,
    /// Maximum tolerated DUE outage probability.
    pub outage_prob: f64,
    pub speed_kmh: f64,
    /// In-lane headway in seconds; mean vehicle spacing is `headway_s * speed`.
    pub headway_s: f64,
    pub lanes: usize,
    pub lane_width_m: f64,
    pub road_length_m: f64,
    /// Perpendicular distance from the road to the BS, which sits at the road midpoint.
    pub bs_offset_m: f64,
    pub carrier_ghz: f64,
    /// Path-loss exponent of the V2V log-distance law (referenced to 1 m free space).
    pub v2v_exponent: f64,
    pub v2v_shadow_db: f64,
    pub v2i_shadow_db: f64,
    /// Monte-Carlo drops per sweep point.
    pub trials: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let antennas = 32;
        let max_bits = 6;
        SystemConfig {
            cues: 10,
            due_pairs: 30,
            clusters: 10,
            antennas,
            max_bits,
            c0: normalized_c0(antennas, max_bits),
            c1: 0.0,
            budget: 0.5,
            noise_power_w: DEFAULT_NOISE_POWER_W,
            max_cue_power_w: DEFAULT_MAX_POWER_W,
            max_due_power_w: DEFAULT_MAX_POWER_W,
            sinr_threshold: DEFAULT_SINR_THRESHOLD,
            outage_prob: 0.01,
            speed_kmh: 80.0,
            headway_s: 2.5,
            lanes: 6,
            lane_width_m: 4.0,
            road_length_m: 2000.0,
            bs_offset_m: 35.0,
            carrier_ghz: 2.0,
            v2v_exponent: 3.68,
            v2v_shadow_db: 3.0,
            v2i_shadow_db: 8.0,
            trials: 200,
            seed: 1,
        }
    }
}

/// `c0` such that `budget = 1` is exactly the all-`max_bits` energy (with `c1 = 0`).
pub fn normalized_c0(antennas: usize, max_bits: u32) -> f64 {
    1.0 / (antennas as f64 * 2f64.powi(max_bits as i32))
}

impl SystemConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let has_c0 = table.contains_key("c0");
        let mut config: SystemConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        if !has_c0 {
            config.c0 = normalized_c0(config.antennas, config.max_bits);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.cues < 1 {
            return fail("cues must be at least 1");
        }
        if self.clusters < 1 || self.due_pairs < self.clusters {
            return fail("need due_pairs >= clusters >= 1");
        }
        if self.antennas < 1 {
            return fail("antennas must be at least 1");
        }
        if !(1..=12).contains(&self.max_bits) {
            return fail("max_bits must lie in 1..=12");
        }
        if !(self.outage_prob > 0.0 && self.outage_prob < 1.0) {
            return fail("outage_prob must lie in (0, 1)");
        }
        let positive = [
            ("sinr_threshold", self.sinr_threshold),
            ("noise_power_w", self.noise_power_w),
            ("max_cue_power_w", self.max_cue_power_w),
            ("max_due_power_w", self.max_due_power_w),
            ("c0", self.c0),
            ("speed_kmh", self.speed_kmh),
            ("headway_s", self.headway_s),
            ("road_length_m", self.road_length_m),
            ("carrier_ghz", self.carrier_ghz),
            ("v2v_exponent", self.v2v_exponent),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite")));
            }
        }
        let non_negative = [
            ("c1", self.c1),
            ("lane_width_m", self.lane_width_m),
            ("bs_offset_m", self.bs_offset_m),
            ("v2v_shadow_db", self.v2v_shadow_db),
            ("v2i_shadow_db", self.v2i_shadow_db),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative and finite"
                )));
            }
        }
        if !self.budget.is_finite() {
            return fail("budget must be finite");
        }
        if self.lanes < 1 {
            return fail("lanes must be at least 1");
        }
        if self.trials < 1 {
            return fail("trials must be at least 1");
        }
        // TOML integers are signed 64-bit
        if i64::try_from(self.seed).is_err() {
            return fail("seed must be below 2^63");
        }
        Ok(())
    }

    /// Per-lane vehicle density in vehicles per meter.
    pub fn vehicle_density(&self) -> f64 {
        1.0 / (self.headway_s * self.speed_kmh / 3.6)
    }

    /// Vehicles a drop must contain: every CUE plus both ends of every DUE pair.
    pub fn vehicles_needed(&self) -> usize {
        self.cues + 2 * self.due_pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SystemConfig::default().validate().unwrap();
    }

    #[test]
    fn c0_normalised_to_file_antennas_when_absent() {
        let cfg = SystemConfig::from_toml_str("antennas = 16\nmax_bits = 4\n").unwrap();
        assert_eq!(cfg.c0, 1.0 / (16.0 * 16.0));
        let cfg = SystemConfig::from_toml_str("antennas = 16\nc0 = 0.25\n").unwrap();
        assert_eq!(cfg.c0, 0.25);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(
            SystemConfig::from_toml_str("antenas = 4"),
            Err(Error::Config(_))
        ));
        assert!(SystemConfig::from_toml_str("outage_prob = 1.0").is_err());
        assert!(SystemConfig::from_toml_str("due_pairs = 3\nclusters = 4").is_err());
        assert!(SystemConfig::from_toml_str("max_bits = 13").is_err());
        assert!(SystemConfig::from_toml_str("noise_power_w = 0").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = SystemConfig {
            speed_kmh: 120.0,
            ..SystemConfig::default()
        };
        let back = SystemConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn density_follows_headway() {
        let cfg = SystemConfig {
            speed_kmh: 90.0,
            ..SystemConfig::default()
        };
        // 25 m/s * 2.5 s = 62.5 m
        assert!((cfg.vehicle_density() - 1.0 / 62.5).abs() < 1e-15);
    }
}
