//! Monte-Carlo sweeps over one scenario parameter, comparing the four-step
//! algorithm with the random baseline on identical drops.

use rayon::prelude::*;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::pipeline::{
    baseline_profile, run_4sa_with_profile, run_ra_baseline, select_profile, Algorithm,
};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::scenario::generate_drop;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// Vehicle speed in km/h.
    Speed,
    /// BS energy budget J.
    Budget,
    /// BS antenna count.
    Antennas,
    /// DUE outage probability p0.
    OutageProb,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Speed => "speed",
            SweepAxis::Budget => "J",
            SweepAxis::Antennas => "N_R",
            SweepAxis::OutageProb => "p0",
        }
    }

    /// Copy of `config` with this axis set to `value`.
    pub fn apply(self, config: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut cfg = config.clone();
        match self {
            SweepAxis::Speed => cfg.speed_kmh = value,
            SweepAxis::Budget => cfg.budget = value,
            SweepAxis::Antennas => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "antenna count {value} is not a positive integer"
                    )));
                }
                cfg.antennas = value as usize;
            }
            SweepAxis::OutageProb => cfg.outage_prob = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "speed" | "v" => Ok(SweepAxis::Speed),
            "j" | "budget" => Ok(SweepAxis::Budget),
            "n_r" | "nr" | "antennas" => Ok(SweepAxis::Antennas),
            "p0" | "outage" => Ok(SweepAxis::OutageProb),
            other => Err(Error::Config(format!("unknown sweep axis '{other}'"))),
        }
    }
}

/// Aggregate of one algorithm at one sweep value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub algorithm: Algorithm,
    /// Mean over included trials; 0 when every trial was excluded.
    pub mean_sum_rate: f64,
    pub stderr: f64,
    /// Trials attempted.
    pub trials: usize,
    /// Trials with no result (budget infeasible or drop could not be placed).
    pub excluded_trials: usize,
    /// NaN when every trial was excluded.
    pub mean_energy: f64,
}

impl SweepPoint {
    pub fn included(&self) -> usize {
        self.trials - self.excluded_trials
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// For each value, the 4SA point followed by the RA point.
    pub points: Vec<SweepPoint>,
}

pub const CSV_HEADER: &str =
    "axis_value,algorithm,mean_sum_rate,stderr,trials,excluded_trials,mean_energy";

impl SweepReport {
    pub fn point(&self, algorithm: Algorithm, index: usize) -> &SweepPoint {
        let offset = match algorithm {
            Algorithm::FourStep => 0,
            Algorithm::RandomAllocation => 1,
        };
        &self.points[2 * index + offset]
    }

    pub fn series(&self, algorithm: Algorithm) -> Vec<&SweepPoint> {
        (0..self.values.len())
            .map(|i| self.point(algorithm, i))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                p.axis_value,
                p.algorithm,
                p.mean_sum_rate,
                p.stderr,
                p.trials,
                p.excluded_trials,
                p.mean_energy
            );
        }
        out
    }
}

#[derive(Default)]
struct Accumulator {
    count: usize,
    sum: f64,
    sum_sq: f64,
    energy: f64,
}

impl Accumulator {
    fn push(&mut self, rate: f64, energy: f64) {
        self.count += 1;
        self.sum += rate;
        self.sum_sq += rate * rate;
        self.energy += energy;
    }

    fn point(&self, axis_value: f64, algorithm: Algorithm, trials: usize) -> SweepPoint {
        let n = self.count as f64;
        let (mean, stderr, energy) = if self.count == 0 {
            (0.0, 0.0, f64::NAN)
        } else {
            let mean = self.sum / n;
            let var = if self.count > 1 {
                ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            (mean, (var / n).sqrt(), self.energy / n)
        };
        SweepPoint {
            axis_value,
            algorithm,
            mean_sum_rate: mean,
            stderr,
            trials,
            excluded_trials: trials - self.count,
            mean_energy: energy,
        }
    }
}

/// Per-trial sum rates and energies of both algorithms at one configuration.
type TrialOutcome = (Option<(f64, f64)>, Option<(f64, f64)>);

fn run_point(config: &SystemConfig, point_index: u64) -> Result<Vec<TrialOutcome>> {
    let profile = match select_profile(config) {
        Ok(p) => Some(p),
        Err(Error::Infeasible(_)) => None,
        Err(e) => return Err(e),
    };
    let baseline_ok = match baseline_profile(config) {
        Ok(_) => true,
        Err(Error::Infeasible(_)) => false,
        Err(e) => return Err(e),
    };
    (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            if profile.is_none() && !baseline_ok {
                return Ok((None, None));
            }
            let seed = derive_seed(&[config.seed, point_index, trial]);
            let drop = match generate_drop(config, seed) {
                Ok(d) => d,
                Err(Error::Config(_)) => return Ok((None, None)),
                Err(e) => return Err(e),
            };
            let four_step = match &profile {
                Some(p) => {
                    let r = run_4sa_with_profile(&drop, config, p)?;
                    Some((r.sum_rate, r.energy))
                }
                None => None,
            };
            let random = if baseline_ok {
                let r = run_ra_baseline(&drop, config)?;
                Some((r.sum_rate, r.energy))
            } else {
                None
            };
            Ok((four_step, random))
        })
        .collect()
}

/// Runs `config.trials` independent drops at every value of `axis`.
///
/// Trial `t` at point `i` uses the drop seeded by `(config.seed, i, t)`, so
/// the report does not depend on thread scheduling.
pub fn monte_carlo_sweep(
    config: &SystemConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<SweepReport> {
    let mut points = Vec::with_capacity(2 * values.len());
    for (i, &value) in values.iter().enumerate() {
        let cfg = axis.apply(config, value)?;
        let outcomes = run_point(&cfg, i as u64)?;
        let mut four_step = Accumulator::default();
        let mut random = Accumulator::default();
        for (a, b) in outcomes {
            if let Some((rate, energy)) = a {
                four_step.push(rate, energy);
            }
            if let Some((rate, energy)) = b {
                random.push(rate, energy);
            }
        }
        points.push(four_step.point(value, Algorithm::FourStep, cfg.trials));
        points.push(random.point(value, Algorithm::RandomAllocation, cfg.trials));
    }
    Ok(SweepReport {
        axis,
        values: values.to_vec(),
        points,
    })
}

/// Budget sweeps for several antenna counts. `c0` stays at its configured
/// value, so the same budget buys fewer bits per antenna on larger arrays.
pub fn budget_table(
    config: &SystemConfig,
    antenna_counts: &[usize],
    budgets: &[f64],
) -> Result<Vec<(usize, SweepReport)>> {
    antenna_counts
        .iter()
        .map(|&nr| {
            let cfg = SweepAxis::Antennas.apply(config, nr as f64)?;
            Ok((nr, monte_carlo_sweep(&cfg, SweepAxis::Budget, budgets)?))
        })
        .collect()
}

/// Plain-text grid of 4SA mean sum-rates: one row per budget, one column per antenna count.
pub fn budget_table_text(table: &[(usize, SweepReport)]) -> String {
    let mut out = String::from("J");
    for (nr, _) in table {
        let _ = write!(out, "\tN_R={nr}");
    }
    out.push('\n');
    let Some((_, first)) = table.first() else {
        return out;
    };
    for (i, j) in first.values.iter().enumerate() {
        let _ = write!(out, "{j}");
        for (_, report) in table {
            let p = report.point(Algorithm::FourStep, i);
            if p.included() == 0 {
                out.push_str("\tinfeasible");
            } else {
                let _ = write!(out, "\t{:.2}", p.mean_sum_rate);
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
    fn axis_parsing() {
        assert_eq!("speed".parse::<SweepAxis>().unwrap(), SweepAxis::Speed);
        assert_eq!("J".parse::<SweepAxis>().unwrap(), SweepAxis::Budget);
        assert_eq!("N_R".parse::<SweepAxis>().unwrap(), SweepAxis::Antennas);
        assert_eq!("p0".parse::<SweepAxis>().unwrap(), SweepAxis::OutageProb);
        assert!("width".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn apply_validates() {
        let cfg = SystemConfig::default();
        assert!(SweepAxis::OutageProb.apply(&cfg, 1.5).is_err());
        assert!(SweepAxis::Antennas.apply(&cfg, 2.5).is_err());
        let c = SweepAxis::Antennas.apply(&cfg, 16.0).unwrap();
        assert_eq!(c.antennas, 16);
        assert_eq!(c.c0, cfg.c0);
    }

    #[test]
    fn accumulator_statistics() {
        let mut acc = Accumulator::default();
        for r in [1.0, 2.0, 3.0, 4.0] {
            acc.push(r, 0.5);
        }
        let p = acc.point(7.0, Algorithm::FourStep, 5);
        assert_eq!(p.mean_sum_rate, 2.5);
        // sample variance 5/3
        assert!((p.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
        assert_eq!(p.excluded_trials, 1);
        assert_eq!(p.mean_energy, 0.5);
        let empty = Accumulator::default().point(1.0, Algorithm::RandomAllocation, 3);
        assert_eq!(empty.mean_sum_rate, 0.0);
        assert!(empty.mean_energy.is_nan());
    }
}
