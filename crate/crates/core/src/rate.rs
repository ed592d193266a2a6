//! CUE ergodic rate at a mixed-resolution MRC receiver, and the CUE x cluster
//! rate table fed to the matching step.
//!
//! With `psi1 = sum a_i`, `psi2 = sum a_i^2` over antennas and
//!
//! ```text
//! nu = sigma^2 a_mB + sum_{k in cluster} P_k a_mB a_kB + 2 P_c a_mB^2
//! R  = log2(1 + P_c a_mB^2 (psi1^2 + psi2) / (nu psi1 - 2 P_c a_mB^2 psi2))
//! ```
//!
//! which is `log2(1 + E[signal] / E[interference + noise + quantization])`.

use crate::clustering::ClusterAssignment;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::power::{allocate_powers, PowerAllocation};
use crate::quantization::PsiStats;
use crate::scenario::ScenarioDrop;

/// Rate from scalar inputs; `due_interference = sum_k P_k a_kB` over the cluster.
pub fn ergodic_rate(
    p_c: f64,
    cue_bs_gain: f64,
    due_interference: f64,
    psi: PsiStats,
    noise_power: f64,
) -> Result<f64> {
    if p_c == 0.0 {
        return Ok(0.0);
    }
    let a = cue_bs_gain;
    let signal_scale = p_c * a * a;
    // nu psi1 - 2 P_c a^2 psi2, regrouped so the quantization term
    // 2 P_c a^2 (psi1 - psi2) does not cancel against nu when ADCs are ideal
    let denominator = (noise_power + due_interference) * a * psi.psi1
        + 2.0 * signal_scale * (psi.psi1 - psi.psi2);
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(Error::Domain(format!(
            "non-positive rate denominator {denominator:e}"
        )));
    }
    let numerator = signal_scale * (psi.psi1 * psi.psi1 + psi.psi2);
    Ok((numerator / denominator).ln_1p() / std::f64::consts::LN_2)
}

/// Rate of CUE `cue` sharing spectrum with `members` under `powers`.
pub fn cue_ergodic_rate(
    cue: usize,
    members: &[usize],
    powers: &PowerAllocation,
    psi: PsiStats,
    drop: &ScenarioDrop,
    noise_power: f64,
) -> Result<f64> {
    let interference: f64 = members
        .iter()
        .zip(&powers.p_d)
        .map(|(&k, &p)| p * drop.due_bs_gain[k])
        .sum();
    ergodic_rate(
        powers.p_c,
        drop.cue_bs_gain[cue],
        interference,
        psi,
        noise_power,
    )
}

/// Rates and power allocations of every CUE x cluster pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    /// `rates[m][n]`; `-inf` where the pair has no feasible allocation.
    pub rates: Vec<Vec<f64>>,
    /// `None` where `Phi` was singular.
    pub allocations: Vec<Vec<Option<PowerAllocation>>>,
}

impl PairTable {
    pub fn infeasible_pairs(&self) -> usize {
        self.rates
            .iter()
            .flatten()
            .filter(|r| !r.is_finite())
            .count()
    }
}

pub fn evaluate_pairs(
    drop: &ScenarioDrop,
    clusters: &ClusterAssignment,
    psi: PsiStats,
    config: &SystemConfig,
) -> Result<PairTable> {
    let mut rates = Vec::with_capacity(drop.cues());
    let mut allocations = Vec::with_capacity(drop.cues());
    for cue in 0..drop.cues() {
        let mut rate_row = Vec::with_capacity(clusters.clusters());
        let mut alloc_row = Vec::with_capacity(clusters.clusters());
        for members in &clusters.members {
            match allocate_powers(cue, members, drop, config) {
                Ok(alloc) => {
                    let rate = if alloc.feasible {
                        cue_ergodic_rate(cue, members, &alloc, psi, drop, config.noise_power_w)?
                    } else {
                        f64::NEG_INFINITY
                    };
                    rate_row.push(rate);
                    alloc_row.push(Some(alloc));
                }
                Err(Error::SingularSystem { .. }) => {
                    rate_row.push(f64::NEG_INFINITY);
                    alloc_row.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        rates.push(rate_row);
        allocations.push(alloc_row);
    }
    Ok(PairTable { rates, allocations })
}

/// `M x N` rate matrix, `-inf` for infeasible pairs.
pub fn build_rate_matrix(
    drop: &ScenarioDrop,
    clusters: &ClusterAssignment,
    psi: PsiStats,
    config: &SystemConfig,
) -> Result<Vec<Vec<f64>>> {
    Ok(evaluate_pairs(drop, clusters, psi, config)?.rates)
}

/// Rate matrix as CSV, one row per CUE; infeasible entries are written as `-inf`.
pub fn rate_matrix_csv(rates: &[Vec<f64>]) -> String {
    let cols = rates.first().map_or(0, Vec::len);
    let header: Vec<String> = std::iter::once("cue".to_string())
        .chain((0..cols).map(|n| format!("cluster{n}")))
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for (m, row) in rates.iter().enumerate() {
        out.push_str(&m.to_string());
        for r in row {
            if r.is_finite() {
                out.push_str(&format!(",{r}"));
            } else {
                out.push_str(",-inf");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cue_power_gives_zero_rate() {
        let psi = PsiStats {
            psi1: 3.0,
            psi2: 2.0,
        };
        assert_eq!(ergodic_rate(0.0, 1.0, 5.0, psi, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn two_ideal_antennas_by_hand() {
        // nu = 3, ratio 6 / (6 - 4) = 3
        let r = ergodic_rate(1.0, 1.0, 0.0, PsiStats::ideal(2), 1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_collapse_matches_mrc() {
        let (p, a, i, s2) = (0.7, 3e-12, 4e-13, 2e-14);
        for n in [1usize, 4, 32, 128] {
            let r = ergodic_rate(p, a, i, PsiStats::ideal(n), s2).unwrap();
            let mrc = (1.0 + p * a * (n as f64 + 1.0) / (s2 + i)).log2();
            assert!((r / mrc - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_denominator() {
        // noiseless, no interference, ideal: nu psi1 = 2 p a^2 psi2
        assert!(matches!(
            ergodic_rate(1.0, 1.0, 0.0, PsiStats::ideal(3), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn csv_writes_infinite_entries() {
        let csv = rate_matrix_csv(&[vec![1.5, f64::NEG_INFINITY]]);
        assert_eq!(csv, "cue,cluster0,cluster1\n0,1.5,-inf\n");
    }
}
