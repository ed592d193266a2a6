//! Large-scale (slow) fading: distance path loss plus log-normal shadowing.

use crate::config::SystemConfig;
use crate::error::{Error, Result};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// Vehicle to BS.
    V2I,
    /// Vehicle to vehicle.
    V2V,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::V2I => "v2i",
            LinkKind::V2V => "v2v",
        }
    }
}

/// Path-loss laws for both link kinds.
///
/// V2I: `128.1 + 37.6 log10(d / 1 km)`.
/// V2V: free-space loss at 1 m for the carrier, then `10 n log10(d / 1 m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub v2v_exponent: f64,
    pub v2v_intercept_db: f64,
    pub v2i_shadow_db: f64,
    pub v2v_shadow_db: f64,
}

impl PathLossModel {
    pub fn from_config(config: &SystemConfig) -> Self {
        let wavelength = SPEED_OF_LIGHT / (config.carrier_ghz * 1e9);
        PathLossModel {
            v2v_exponent: config.v2v_exponent,
            v2v_intercept_db: 20.0 * (4.0 * std::f64::consts::PI / wavelength).log10(),
            v2i_shadow_db: config.v2i_shadow_db,
            v2v_shadow_db: config.v2v_shadow_db,
        }
    }

    /// Shadowing standard deviation in dB for a link kind.
    pub fn shadow_std_db(&self, kind: LinkKind) -> f64 {
        match kind {
            LinkKind::V2I => self.v2i_shadow_db,
            LinkKind::V2V => self.v2v_shadow_db,
        }
    }

    pub fn path_loss_db(&self, distance_m: f64, kind: LinkKind) -> Result<f64> {
        if !(distance_m > 0.0 && distance_m.is_finite()) {
            return Err(Error::Domain(format!(
                "link distance must be positive, got {distance_m}"
            )));
        }
        Ok(match kind {
            LinkKind::V2I => 128.1 + 37.6 * (distance_m / 1000.0).log10(),
            LinkKind::V2V => self.v2v_intercept_db + 10.0 * self.v2v_exponent * distance_m.log10(),
        })
    }

    /// Linear power gain `10^(-(PL(d) + shadow)/10)`.
    pub fn slow_fading_gain(&self, distance_m: f64, kind: LinkKind, shadow_db: f64) -> Result<f64> {
        let loss = self.path_loss_db(distance_m, kind)?;
        Ok(10f64.powf(-(loss + shadow_db) / 10.0))
    }
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self::from_config(&SystemConfig::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_loss_distance_gives_unit_gain() {
        let model = PathLossModel::default();
        // 128.1 + 37.6 log10(d_km) = 0
        let d = 1000.0 * 10f64.powf(-128.1 / 37.6);
        let g = model.slow_fading_gain(d, LinkKind::V2I, 0.0).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        let d = 10f64.powf(-model.v2v_intercept_db / (10.0 * model.v2v_exponent));
        let g = model.slow_fading_gain(d, LinkKind::V2V, 0.0).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_distance_scales_by_power_law() {
        let model = PathLossModel::default();
        for d in [3.0, 47.0, 800.0] {
            let g1 = model.slow_fading_gain(d, LinkKind::V2V, 0.0).unwrap();
            let g2 = model.slow_fading_gain(2.0 * d, LinkKind::V2V, 0.0).unwrap();
            let expected = 2f64.powf(-model.v2v_exponent);
            assert!((g2 / g1 / expected - 1.0).abs() < 1e-12);
            let g1 = model.slow_fading_gain(d, LinkKind::V2I, 0.0).unwrap();
            let g2 = model.slow_fading_gain(2.0 * d, LinkKind::V2I, 0.0).unwrap();
            assert!((g2 / g1 / 2f64.powf(-3.76) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ten_db_shadow_is_ten_times_weaker() {
        let model = PathLossModel::default();
        let base = model.slow_fading_gain(120.0, LinkKind::V2V, 0.0).unwrap();
        let shadowed = model.slow_fading_gain(120.0, LinkKind::V2V, 10.0).unwrap();
        assert!((base / shadowed - 10.0).abs() < 1e-9);
    }

    #[test]
    fn non_positive_distance_is_rejected() {
        let model = PathLossModel::default();
        assert!(matches!(
            model.slow_fading_gain(0.0, LinkKind::V2V, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(model.slow_fading_gain(-1.0, LinkKind::V2I, 0.0).is_err());
    }

    #[test]
    fn v2v_intercept_is_free_space_at_one_meter() {
        // 20 log10(4 pi / 0.1499 m) = 38.468 dB at 2 GHz
        let model = PathLossModel::default();
        assert!((model.v2v_intercept_db - 38.4684).abs() < 1e-3);
    }
}
