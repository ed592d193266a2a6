//! Closed-form power control for one (CUE, DUE cluster) pair.
//!
//! With unit-mean Rayleigh fading the outage constraint of each DUE is
//! replaced by a linear one on slow-fading gains,
//!
//! ```text
//! P_k a_k - gb * sum_{j != k} P_j a_{j,k} >= gb (P_c a_{m,k} + sigma^2),
//! gb = gamma0 / (-ln(1 - p0)),
//! ```
//!
//! i.e. `Phi p_d >= gb (p_c alpha_m + sigma^2 1)`. The CUE rate falls with
//! every DUE power, so the optimum meets all constraints with equality and
//! the CUE power is the largest value that keeps every DUE under its cap.

use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::scenario::ScenarioDrop;

/// Below this reciprocal condition number `Phi` is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

/// Relative slack allowed when comparing DUE powers against their cap.
const CAP_TOLERANCE: f64 = 1e-9;

/// Outage-transformed SINR threshold `gamma0 / (-ln(1 - p0))`.
pub fn gamma_bar(sinr_threshold: f64, outage_prob: f64) -> Result<f64> {
    if !(outage_prob > 0.0 && outage_prob < 1.0) {
        return Err(Error::Domain(format!(
            "outage probability must lie in (0, 1), got {outage_prob}"
        )));
    }
    if sinr_threshold.is_nan() || sinr_threshold < 0.0 {
        return Err(Error::Domain(format!(
            "SINR threshold must be non-negative, got {sinr_threshold}"
        )));
    }
    Ok(sinr_threshold / -(-outage_prob).ln_1p())
}

/// Constraint matrix of one cluster together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSystem {
    pub gamma_bar: f64,
    /// `phi[(i, i)] = a_i`, `phi[(i, j)] = -gb * a_{j,i}`.
    pub phi: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    /// `1 / (|Phi|_1 |Phi^-1|_1)`.
    pub rcond: f64,
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl PhiSystem {
    /// `own_gain[i]` is DUE i's direct gain; `cross_gain[j][i]` is DUE j's
    /// transmitter to DUE i's receiver, both in cluster-local indices.
    pub fn new(own_gain: &[f64], cross_gain: &[Vec<f64>], gamma_bar: f64) -> Result<Self> {
        let n = own_gain.len();
        if n == 0 {
            return Err(Error::Domain("cluster has no DUEs".into()));
        }
        let phi = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                own_gain[i]
            } else {
                -gamma_bar * cross_gain[j][i]
            }
        });
        let inverse = phi
            .clone()
            .try_inverse()
            .ok_or(Error::SingularSystem { rcond: 0.0 })?;
        let rcond = 1.0 / (one_norm(&phi) * one_norm(&inverse));
        if rcond.is_nan() || rcond < SINGULAR_RCOND {
            return Err(Error::SingularSystem { rcond });
        }
        Ok(PhiSystem {
            gamma_bar,
            phi,
            inverse,
            rcond,
        })
    }

    pub fn size(&self) -> usize {
        self.phi.nrows()
    }
}

/// Builds `Phi` for the given cluster members of a drop.
pub fn build_phi(members: &[usize], drop: &ScenarioDrop, gamma_bar: f64) -> Result<PhiSystem> {
    let own: Vec<f64> = members.iter().map(|&k| drop.due_gain[k]).collect();
    let cross: Vec<Vec<f64>> = members
        .iter()
        .map(|&j| members.iter().map(|&i| drop.due_cross_gain[j][i]).collect())
        .collect();
    PhiSystem::new(&own, &cross, gamma_bar)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// CUE transmit power (W).
    pub p_c: f64,
    /// DUE powers (W) in cluster member order.
    pub p_d: Vec<f64>,
    pub feasible: bool,
}

impl PowerAllocation {
    /// `cue,cluster,p_c,p_d_1,...`
    pub fn to_csv_row(&self, cue: usize, cluster: usize) -> String {
        let mut row = format!("{cue},{cluster},{:e}", self.p_c);
        for p in &self.p_d {
            let _ = write!(row, ",{p:e}");
        }
        row
    }
}

/// Optimal powers for one pair given the cluster's `Phi` and the CUE-to-DUE gains.
pub fn allocate_with_phi(
    system: &PhiSystem,
    alpha_m: &[f64],
    noise_power: f64,
    max_cue_power: f64,
    max_due_power: f64,
) -> PowerAllocation {
    let gb = system.gamma_bar;
    let alpha = DVector::from_column_slice(alpha_m);
    let mut p_c = max_cue_power;
    for row in system.inverse.row_iter() {
        let through_cue = gb * row.dot(&alpha.transpose());
        if through_cue > 0.0 {
            let noise_share = gb * noise_power * row.sum();
            p_c = p_c.min((max_due_power - noise_share) / through_cue);
        }
    }
    let rhs = (&alpha * p_c).add_scalar(noise_power) * gb;
    let p_d = &system.inverse * rhs;
    let cap = max_due_power * (1.0 + CAP_TOLERANCE);
    let feasible = p_c >= 0.0 && p_d.iter().all(|&p| p >= 0.0 && p <= cap);
    PowerAllocation {
        p_c,
        p_d: p_d.iter().copied().collect(),
        feasible,
    }
}

/// Optimal powers for CUE `cue` sharing spectrum with `members`.
pub fn allocate_powers(
    cue: usize,
    members: &[usize],
    drop: &ScenarioDrop,
    config: &SystemConfig,
) -> Result<PowerAllocation> {
    let gb = gamma_bar(config.sinr_threshold, config.outage_prob)?;
    let system = build_phi(members, drop, gb)?;
    let alpha_m: Vec<f64> = members.iter().map(|&k| drop.cue_due_gain[cue][k]).collect();
    Ok(allocate_with_phi(
        &system,
        &alpha_m,
        config.noise_power_w,
        config.max_cue_power_w,
        config.max_due_power_w,
    ))
}

/// `|Phi p_d - gb (p_c alpha_m + sigma^2)| / |gb (p_c alpha_m + sigma^2)|`.
pub fn equality_residual(
    system: &PhiSystem,
    allocation: &PowerAllocation,
    alpha_m: &[f64],
    noise_power: f64,
) -> f64 {
    let alpha = DVector::from_column_slice(alpha_m);
    let rhs = (&alpha * allocation.p_c).add_scalar(noise_power) * system.gamma_bar;
    let lhs = &system.phi * DVector::from_column_slice(&allocation.p_d);
    (lhs - &rhs).norm() / rhs.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_bar_examples() {
        assert_eq!(gamma_bar(0.0, 0.3).unwrap(), 0.0);
        let p0 = 1.0 - (-1f64).exp();
        assert!((gamma_bar(2.0, p0).unwrap() - 2.0).abs() < 1e-12);
        // -ln(0.99) = 0.01005034
        assert!((gamma_bar(1.0, 0.01).unwrap() - 99.499_16).abs() < 1e-3);
        assert!(matches!(gamma_bar(1.0, 0.0), Err(Error::Domain(_))));
        assert!(gamma_bar(1.0, 1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        let s = PhiSystem::new(&[1.0], &[vec![0.0]], 5.0).unwrap();
        assert_eq!(s.phi[(0, 0)], 1.0);
        assert_eq!(s.inverse[(0, 0)], 1.0);

        let cross = vec![vec![0.0, 0.1], vec![0.1, 0.0]];
        let s = PhiSystem::new(&[1.0, 1.0], &cross, 2.0).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, -0.2, -0.2, 1.0]);
        assert!((s.phi - expected).norm() < 1e-15);

        let s = PhiSystem::new(&[2.0, 3.0], &cross, 0.0).unwrap();
        assert_eq!(
            s.phi,
            DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]))
        );
    }

    #[test]
    fn phi_uses_transmitter_to_receiver_orientation() {
        // DUE 1 transmitter hits DUE 0 receiver with 0.3
        let cross = vec![vec![0.0, 0.05], vec![0.3, 0.0]];
        let s = PhiSystem::new(&[1.0, 1.0], &cross, 1.0).unwrap();
        assert_eq!(s.phi[(0, 1)], -0.3);
        assert_eq!(s.phi[(1, 0)], -0.05);
    }

    #[test]
    fn singular_phi_is_rejected() {
        let cross = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(matches!(
            PhiSystem::new(&[1.0, 1.0], &cross, 1.0),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn single_due_by_hand() {
        let s = PhiSystem::new(&[1.0], &[vec![0.0]], 2.0).unwrap();
        let a = allocate_with_phi(&s, &[0.5], 0.1, 4.0, 10.0);
        // (10 - 2 * 0.1) / (2 * 0.5) = 9.8 > 4
        assert_eq!(a.p_c, 4.0);
        assert!((a.p_d[0] - 4.2).abs() < 1e-12);
        assert!(a.feasible);
        assert!(equality_residual(&s, &a, &[0.5], 0.1) < 1e-12);
    }

    #[test]
    fn noise_alone_exceeds_cap() {
        let s = PhiSystem::new(&[1.0], &[vec![0.0]], 1000.0).unwrap();
        let a = allocate_with_phi(&s, &[0.5], 0.1, 4.0, 10.0);
        assert!(a.p_c < 0.0);
        assert!(!a.feasible);
    }

    #[test]
    fn noise_free_single_due() {
        let gb = 3.0;
        let s = PhiSystem::new(&[0.8], &[vec![0.0]], gb).unwrap();
        let a = allocate_with_phi(&s, &[0.2], 0.0, 1.0, 100.0);
        assert_eq!(a.p_c, 1.0);
        assert!((a.p_d[0] - gb * 1.0 * 0.2 / 0.8).abs() < 1e-15);
        assert!(equality_residual(&s, &a, &[0.2], 0.0) < 1e-15);
    }

    #[test]
    fn cap_binds_on_one_row() {
        let cross = vec![vec![0.0, 0.01], vec![0.02, 0.0]];
        let s = PhiSystem::new(&[1.0, 0.5], &cross, 2.0).unwrap();
        let a = allocate_with_phi(&s, &[0.3, 0.4], 0.05, 100.0, 1.0);
        assert!(a.feasible);
        let top = a.p_d.iter().copied().fold(0.0, f64::max);
        assert!((top - 1.0).abs() < 1e-12);
        assert!(equality_residual(&s, &a, &[0.3, 0.4], 0.05) < 1e-12);
    }

    #[test]
    fn csv_row() {
        let a = PowerAllocation {
            p_c: 0.5,
            p_d: vec![0.25, 1.0],
            feasible: true,
        };
        assert_eq!(a.to_csv_row(1, 2), "1,2,5e-1,2.5e-1,1e0");
    }
}
