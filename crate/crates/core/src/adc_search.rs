//! Resolution-profile selection under a BS energy budget.
//!
//! [`decremental_search`] starts from every antenna at the highest resolution
//! and walks antennas down one level at a time until the budget is met. At
//! each step one antenna leaves level `x` and the lower levels `x-1, ..., 1`
//! are tried in that order as its destination; the first destination that
//! meets the budget ends the search. If none does, the antenna is committed
//! to level `x-1` and the step repeats, moving to `x-1` once level `x` is
//! empty.

use crate::error::{Error, Result};
use crate::quantization::{ResolutionProfile, MAX_SUPPORTED_BITS};

fn check_dimensions(antennas: usize, max_bits: u32) -> Result<()> {
    if antennas == 0 {
        return Err(Error::Domain("antenna count must be positive".into()));
    }
    if max_bits == 0 || max_bits > MAX_SUPPORTED_BITS {
        return Err(Error::Domain(format!(
            "max_bits must lie in 1..={MAX_SUPPORTED_BITS}, got {max_bits}"
        )));
    }
    Ok(())
}

fn energy(counts: &[usize], c0: f64, c1: f64) -> f64 {
    let weighted: f64 = counts
        .iter()
        .enumerate()
        .map(|(i, &l)| l as f64 * 2f64.powi(i as i32 + 1))
        .sum();
    c0 * weighted + c1
}

/// Greedy downward search for a profile with `bs_energy <= budget`.
///
/// Returns `Error::Infeasible` when even the all-1-bit profile exceeds the budget.
pub fn decremental_search(
    antennas: usize,
    max_bits: u32,
    c0: f64,
    c1: f64,
    budget: f64,
) -> Result<ResolutionProfile> {
    check_dimensions(antennas, max_bits)?;
    let levels = max_bits as usize;
    let floor = energy(&[antennas], c0, c1);
    if floor > budget {
        return Err(Error::Infeasible(format!(
            "all-1-bit energy {floor} exceeds budget {budget}"
        )));
    }
    let fits = |counts: &[usize]| energy(counts, c0, c1) <= budget;

    let mut counts = vec![0; levels];
    counts[levels - 1] = antennas;
    if fits(&counts) {
        return ResolutionProfile::new(counts);
    }

    // `x` is a 0-based level index; level x holds antennas at x + 1 bits
    let mut x = levels - 1;
    while x > 0 {
        counts[x] -= 1;
        for target in (0..x).rev() {
            counts[target] += 1;
            if fits(&counts) {
                return ResolutionProfile::new(counts);
            }
            counts[target] -= 1;
        }
        counts[x - 1] += 1;
        while x > 0 && counts[x] == 0 {
            x -= 1;
        }
    }
    ResolutionProfile::new(counts)
}

/// All ways to split `antennas` over `levels` resolution levels, in lexicographic order.
pub fn compositions(antennas: usize, levels: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, slot: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slot + 1 == current.len() {
            current[slot] = rest;
            out.push(current.clone());
            return;
        }
        for take in 0..=rest {
            current[slot] = take;
            fill(rest - take, slot + 1, current, out);
        }
    }
    let mut out = Vec::new();
    if levels > 0 {
        fill(antennas, 0, &mut vec![0; levels], &mut out);
    }
    out
}

/// Exhaustive search over every profile, maximizing `rate_eval` within budget.
///
/// Test-scale only: at most 10 antennas and 4 resolution levels. Ties keep
/// the first profile in [`compositions`] order.
pub fn exhaustive_profile_oracle<F>(
    antennas: usize,
    max_bits: u32,
    c0: f64,
    c1: f64,
    budget: f64,
    rate_eval: F,
) -> Result<ResolutionProfile>
where
    F: Fn(&ResolutionProfile) -> f64,
{
    check_dimensions(antennas, max_bits)?;
    if antennas > 10 || max_bits > 4 {
        return Err(Error::Scale(format!(
            "{antennas} antennas x {max_bits} levels exceeds 10 x 4"
        )));
    }
    let mut best: Option<(f64, ResolutionProfile)> = None;
    for counts in compositions(antennas, max_bits as usize) {
        if energy(&counts, c0, c1) > budget {
            continue;
        }
        let profile = ResolutionProfile::new(counts)?;
        let rate = rate_eval(&profile);
        if best.as_ref().is_none_or(|(r, _)| rate > *r) {
            best = Some((rate, profile));
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::Infeasible(format!("no profile fits budget {budget}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi1(p: &ResolutionProfile) -> f64 {
        p.psi_stats().psi1
    }

    #[test]
    fn hand_traced_two_by_two() {
        let p = decremental_search(2, 2, 1.0, 0.0, 5.0).unwrap();
        assert_eq!(p.counts(), &[2, 0]);
        assert_eq!(p.bs_energy(1.0, 0.0), 4.0);
        // only feasible profile
        let o = exhaustive_profile_oracle(2, 2, 1.0, 0.0, 5.0, psi1).unwrap();
        assert_eq!(o, p);
    }

    #[test]
    fn rich_budget_keeps_all_max() {
        let p = decremental_search(2, 2, 1.0, 0.0, 8.0).unwrap();
        assert_eq!(p.counts(), &[0, 2]);
    }

    #[test]
    fn budget_below_floor_is_infeasible() {
        assert!(matches!(
            decremental_search(2, 2, 1.0, 0.0, 3.0),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            exhaustive_profile_oracle(2, 2, 1.0, 0.0, 3.0, psi1),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn degenerate_dimensions() {
        assert!(matches!(
            decremental_search(0, 2, 1.0, 0.0, 10.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            decremental_search(2, 0, 1.0, 0.0, 10.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            exhaustive_profile_oracle(11, 2, 1.0, 0.0, 1e9, psi1),
            Err(Error::Scale(_))
        ));
    }

    #[test]
    fn single_level_profile() {
        let p = decremental_search(3, 1, 1.0, 0.0, 6.0).unwrap();
        assert_eq!(p.counts(), &[3]);
    }

    #[test]
    fn oracle_extremes() {
        // floor budget: 3 one-bit antennas cost exactly 6
        let p = exhaustive_profile_oracle(3, 3, 1.0, 0.0, 6.0, psi1).unwrap();
        assert_eq!(p.counts(), &[3, 0, 0]);
        let p = exhaustive_profile_oracle(3, 3, 1.0, 0.0, f64::INFINITY, psi1).unwrap();
        assert_eq!(p.counts(), &[0, 0, 3]);
    }

    #[test]
    fn three_by_three_budget_fourteen() {
        assert_eq!(compositions(3, 3).len(), 10);
        // enumeration by hand: feasible {300, 210, 120, 030, 201, 111}; 030 has the largest psi1
        let o = exhaustive_profile_oracle(3, 3, 1.0, 0.0, 14.0, psi1).unwrap();
        assert_eq!(o.counts(), &[0, 3, 0]);
        // the greedy walk stops at the first feasible move, 111, with energy exactly 14
        let d = decremental_search(3, 3, 1.0, 0.0, 14.0).unwrap();
        assert_eq!(d.counts(), &[1, 1, 1]);
        assert!(psi1(&d) < psi1(&o));
    }

    #[test]
    fn compositions_cover_simplex() {
        let all = compositions(4, 3);
        assert_eq!(all.len(), 15);
        assert!(all.iter().all(|c| c.iter().sum::<usize>() == 4));
        assert_eq!(all[0], vec![0, 0, 4]);
    }
}
