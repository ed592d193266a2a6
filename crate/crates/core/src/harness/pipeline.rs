//! End-to-end allocation for one drop: the four-step algorithm and the
//! random-allocation baseline.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::adc_search::decremental_search;
use crate::clustering::{build_interference_graph, cluster_dues, ClusterAssignment};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::matching::{hungarian_match, Matching};
use crate::power::PowerAllocation;
use crate::quantization::ResolutionProfile;
use crate::rate::{evaluate_pairs, PairTable};
use crate::scenario::ScenarioDrop;
use crate::seed::derive_seed;

/// Stream tag mixed into a drop seed for the baseline's random mapping.
const RANDOM_MAPPING_STREAM: u64 = 0x5241;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    FourStep,
    RandomAllocation,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::FourStep => "4SA",
            Algorithm::RandomAllocation => "RA",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub algorithm: Algorithm,
    pub profile: ResolutionProfile,
    pub clusters: ClusterAssignment,
    /// Only pairs with a finite rate are kept; other CUEs are unmatched.
    pub matching: Matching,
    /// Powers of each CUE's matched pair.
    pub powers: Vec<Option<PowerAllocation>>,
    /// Per-CUE rate in bits/s/Hz; 0 for unmatched CUEs.
    pub cue_rates: Vec<f64>,
    pub sum_rate: f64,
    pub energy: f64,
    /// CUE x cluster pairs without a feasible power allocation.
    pub infeasible_pairs: usize,
}

impl AllocationResult {
    pub fn unmatched_cues(&self) -> Vec<usize> {
        self.matching
            .cluster_of_cue
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(m, _)| m)
            .collect()
    }
}

/// Step 1 for a configuration: the profile used by every drop.
pub fn select_profile(config: &SystemConfig) -> Result<ResolutionProfile> {
    decremental_search(
        config.antennas,
        config.max_bits,
        config.c0,
        config.c1,
        config.budget,
    )
}

/// All-1-bit profile, rejected when even it exceeds the budget.
pub fn baseline_profile(config: &SystemConfig) -> Result<ResolutionProfile> {
    let profile = ResolutionProfile::uniform(config.antennas, config.max_bits, 1)?;
    let energy = profile.bs_energy(config.c0, config.c1);
    if energy > config.budget {
        return Err(Error::Infeasible(format!(
            "all-1-bit energy {energy} exceeds budget {}",
            config.budget
        )));
    }
    Ok(profile)
}

/// Step 2.
pub fn cluster_drop(drop: &ScenarioDrop, config: &SystemConfig) -> Result<ClusterAssignment> {
    cluster_dues(&build_interference_graph(drop), config.clusters)
}

fn compose(
    algorithm: Algorithm,
    profile: ResolutionProfile,
    clusters: ClusterAssignment,
    table: PairTable,
    matching: Matching,
    config: &SystemConfig,
) -> AllocationResult {
    let cues = table.rates.len();
    let mut cue_rates = vec![0.0; cues];
    let mut powers = vec![None; cues];
    for (m, n) in matching.matched_pairs() {
        cue_rates[m] = table.rates[m][n];
        powers[m] = table.allocations[m][n].clone();
    }
    AllocationResult {
        algorithm,
        energy: profile.bs_energy(config.c0, config.c1),
        sum_rate: cue_rates.iter().sum(),
        infeasible_pairs: table.infeasible_pairs(),
        profile,
        clusters,
        matching,
        powers,
        cue_rates,
    }
}

/// Steps 2-4 with a profile already chosen.
pub fn run_4sa_with_profile(
    drop: &ScenarioDrop,
    config: &SystemConfig,
    profile: &ResolutionProfile,
) -> Result<AllocationResult> {
    let clusters = cluster_drop(drop, config)?;
    let table = evaluate_pairs(drop, &clusters, profile.psi_stats(), config)?;
    let matching = hungarian_match(&table.rates)?;
    Ok(compose(
        Algorithm::FourStep,
        profile.clone(),
        clusters,
        table,
        matching,
        config,
    ))
}

/// Four-step allocation: profile search, clustering, per-pair power control,
/// then maximum-weight matching.
pub fn run_4sa(drop: &ScenarioDrop, config: &SystemConfig) -> Result<AllocationResult> {
    let profile = select_profile(config)?;
    run_4sa_with_profile(drop, config, &profile)
}

/// Uniformly random one-to-one CUE-to-cluster mapping seeded by the drop.
pub fn random_mapping(drop_seed: u64, cues: usize, clusters: usize) -> Vec<Option<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[drop_seed, RANDOM_MAPPING_STREAM]));
    let mut slots: Vec<usize> = (0..cues.max(clusters)).collect();
    slots.shuffle(&mut rng);
    slots[..cues]
        .iter()
        .map(|&n| (n < clusters).then_some(n))
        .collect()
}

/// Baseline: all antennas at 1 bit, the same clustering and power control,
/// and a random CUE-to-cluster mapping. A mapped pair without a feasible
/// allocation leaves its CUE unmatched.
pub fn run_ra_baseline(drop: &ScenarioDrop, config: &SystemConfig) -> Result<AllocationResult> {
    let profile = baseline_profile(config)?;
    let clusters = cluster_drop(drop, config)?;
    let table = evaluate_pairs(drop, &clusters, profile.psi_stats(), config)?;
    let cluster_of_cue: Vec<Option<usize>> =
        random_mapping(drop.seed, drop.cues(), clusters.clusters())
            .into_iter()
            .enumerate()
            .map(|(m, n)| n.filter(|&n| table.rates[m][n].is_finite()))
            .collect();
    let total = cluster_of_cue
        .iter()
        .enumerate()
        .filter_map(|(m, n)| n.map(|n| table.rates[m][n]))
        .sum();
    let matching = Matching {
        cluster_of_cue,
        total,
    };
    Ok(compose(
        Algorithm::RandomAllocation,
        profile,
        clusters,
        table,
        matching,
        config,
    ))
}
