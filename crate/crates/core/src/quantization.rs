//! Additive quantization noise model (AQNM) coefficients and BS energy.
//!
//! An ADC with `b` bits is modelled as a linear gain `a_b` plus uncorrelated
//! noise, where `1 - a_b` is the normalised mean-squared error of the optimal
//! (Lloyd-Max) quantizer for a unit Gaussian input. Up to 5 bits the
//! coefficient is tabulated; above that the high-resolution approximation
//! `1 - (pi sqrt(3) / 2) 2^(-2b)` is used.

use std::fmt;

use crate::error::{Error, Result};

/// Highest resolution supported anywhere in the crate.
pub const MAX_SUPPORTED_BITS: u32 = 12;

/// `a_b` for b = 1..=5 bits. The 1-bit entry is the tabulated value, close to `2/pi`.
#[allow(clippy::approx_constant)]
pub const TABULATED_COEFFS: [f64; 5] = [0.6366, 0.8825, 0.96546, 0.990503, 0.997501];

/// Linear gain `a_b` of a `bits`-bit ADC.
pub fn quant_coeff(bits: u32) -> Result<f64> {
    match bits {
        1..=5 => Ok(TABULATED_COEFFS[bits as usize - 1]),
        6..=MAX_SUPPORTED_BITS => Ok(high_resolution_coeff(bits)),
        _ => Err(Error::Domain(format!(
            "ADC resolution must lie in 1..={MAX_SUPPORTED_BITS} bits, got {bits}"
        ))),
    }
}

/// `1 - (pi sqrt(3) / 2) 2^(-2b)`.
pub fn high_resolution_coeff(bits: u32) -> f64 {
    1.0 - std::f64::consts::PI * 3f64.sqrt() / 2.0 * 2f64.powi(-2 * bits as i32)
}

/// Antenna count per ADC resolution: `counts[n - 1]` antennas use `n` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolutionProfile {
    counts: Vec<usize>,
}

/// `psi1 = sum a_b` and `psi2 = sum a_b^2` over all antennas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiStats {
    pub psi1: f64,
    pub psi2: f64,
}

impl PsiStats {
    /// Statistics of ideal (unquantized) receivers: every coefficient is 1.
    pub fn ideal(antennas: usize) -> Self {
        PsiStats {
            psi1: antennas as f64,
            psi2: antennas as f64,
        }
    }
}

impl ResolutionProfile {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() || counts.len() > MAX_SUPPORTED_BITS as usize {
            return Err(Error::Domain(format!(
                "profile needs 1..={MAX_SUPPORTED_BITS} resolution levels, got {}",
                counts.len()
            )));
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::Domain("profile has no antennas".into()));
        }
        Ok(ResolutionProfile { counts })
    }

    /// Every one of `antennas` antennas at `bits` resolution.
    pub fn uniform(antennas: usize, max_bits: u32, bits: u32) -> Result<Self> {
        if bits < 1 || bits > max_bits {
            return Err(Error::Domain(format!("{bits} bits outside 1..={max_bits}")));
        }
        let mut counts = vec![0; max_bits as usize];
        counts[bits as usize - 1] = antennas;
        Self::new(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn antennas(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn max_bits(&self) -> u32 {
        self.counts.len() as u32
    }

    /// `(bits, antenna count)` for every level.
    pub fn levels(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as u32 + 1, l))
    }

    pub fn psi_stats(&self) -> PsiStats {
        let (mut psi1, mut psi2) = (0.0, 0.0);
        for (bits, count) in self.levels() {
            let a = quant_coeff(bits).expect("level count bounded at construction");
            psi1 += count as f64 * a;
            psi2 += count as f64 * a * a;
        }
        PsiStats { psi1, psi2 }
    }

    /// `c0 * sum 2^b + c1`.
    pub fn bs_energy(&self, c0: f64, c1: f64) -> f64 {
        let weighted: f64 = self
            .levels()
            .map(|(bits, count)| count as f64 * 2f64.powi(bits as i32))
            .sum();
        c0 * weighted + c1
    }

    /// Per-antenna resolutions in ascending order.
    pub fn bits_per_antenna(&self) -> Vec<u32> {
        self.levels()
            .flat_map(|(bits, count)| std::iter::repeat_n(bits, count))
            .collect()
    }

    pub fn to_csv_row(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ResolutionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_csv_row())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bit_is_two_over_pi() {
        assert!((quant_coeff(1).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-4);
    }

    #[test]
    fn six_bits_uses_closed_form() {
        let a6 = quant_coeff(6).unwrap();
        assert!((a6 - 0.999_335_8).abs() < 1e-7);
        assert_eq!(a6, 1.0 - std::f64::consts::PI * 3f64.sqrt() / 2.0 / 4096.0);
    }

    #[test]
    fn strictly_increasing_toward_one() {
        let coeffs: Vec<f64> = (1..=12).map(|b| quant_coeff(b).unwrap()).collect();
        assert!(coeffs.windows(2).all(|w| w[0] < w[1]));
        assert!(coeffs[11] < 1.0 && 1.0 - coeffs[11] < 1e-6);
    }

    #[test]
    fn table_meets_closed_form_at_five_bits() {
        assert!((quant_coeff(5).unwrap() - high_resolution_coeff(5)).abs() < 2e-3);
    }

    #[test]
    fn out_of_range_bits() {
        assert!(matches!(quant_coeff(0), Err(Error::Domain(_))));
        assert!(quant_coeff(13).is_err());
    }

    #[test]
    fn psi_of_single_one_bit_antenna() {
        let p = ResolutionProfile::new(vec![1, 0, 0]).unwrap().psi_stats();
        let a1 = TABULATED_COEFFS[0];
        assert!((p.psi1 - a1).abs() < 1e-12);
        assert!((p.psi2 - a1 * a1).abs() < 1e-12);
        assert!((p.psi2 - 0.4053).abs() < 1e-4);
    }

    #[test]
    fn psi_of_split_profile() {
        let p = ResolutionProfile::new(vec![2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2])
            .unwrap()
            .psi_stats();
        assert!((p.psi1 - 3.2732).abs() < 1e-4);
        assert!((p.psi2 - 2.8105).abs() < 1e-4);
    }

    #[test]
    fn ideal_stats() {
        assert_eq!(
            PsiStats::ideal(4),
            PsiStats {
                psi1: 4.0,
                psi2: 4.0
            }
        );
    }

    #[test]
    fn energy_examples() {
        let two_one_bit = ResolutionProfile::new(vec![2]).unwrap();
        assert_eq!(two_one_bit.bs_energy(1.0, 0.0), 4.0);
        let full = ResolutionProfile::uniform(5, 4, 4).unwrap();
        assert_eq!(full.bs_energy(1.0, 0.0), 5.0 * 16.0);
        let mixed = ResolutionProfile::new(vec![1, 1]).unwrap();
        assert!((mixed.bs_energy(0.01, 0.2) - 0.26).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_profiles() {
        assert!(ResolutionProfile::new(vec![]).is_err());
        assert!(ResolutionProfile::new(vec![0, 0]).is_err());
        assert!(ResolutionProfile::uniform(3, 2, 3).is_err());
    }

    #[test]
    fn csv_and_expansion() {
        let p = ResolutionProfile::new(vec![1, 0, 2]).unwrap();
        assert_eq!(p.to_csv_row(), "1,0,2");
        assert_eq!(p.bits_per_antenna(), vec![1, 3, 3]);
    }
}
