//! DUE clustering: partition the DUE interference graph so that DUEs sharing
//! a cluster (and therefore a CUE's spectrum) interfere with each other as
//! little as possible. Minimizing intra-cluster weight is the complement of
//! maximizing the weight cut between clusters (MAX N-CUT).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scenario::ScenarioDrop;

/// Dense directed weight matrix; `w[j][k]` is the weight of edge j -> k.
pub type WeightMatrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    /// 0-based cluster index of each DUE.
    pub cluster_of: Vec<usize>,
    /// DUE indices of each cluster, ascending.
    pub members: Vec<Vec<usize>>,
}

impl ClusterAssignment {
    pub fn from_labels(cluster_of: Vec<usize>, clusters: usize) -> Self {
        let mut members = vec![Vec::new(); clusters];
        for (due, &c) in cluster_of.iter().enumerate() {
            members[c].push(due);
        }
        ClusterAssignment {
            cluster_of,
            members,
        }
    }

    pub fn clusters(&self) -> usize {
        self.members.len()
    }

    /// `due_index,cluster_index` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("due_index,cluster_index\n");
        for (due, c) in self.cluster_of.iter().enumerate() {
            let _ = writeln!(out, "{due},{c}");
        }
        out
    }
}

/// Edge weights are the DUE-to-DUE slow-fading gains; the diagonal is zero.
pub fn build_interference_graph(drop: &ScenarioDrop) -> WeightMatrix {
    let k = drop.due_pairs();
    (0..k)
        .map(|j| {
            (0..k)
                .map(|i| {
                    if i == j {
                        0.0
                    } else {
                        drop.due_cross_gain[j][i]
                    }
                })
                .collect()
        })
        .collect()
}

/// Sum over clusters of `w[j][k]` for every ordered pair `j != k` sharing a cluster.
pub fn intra_cluster_weight(w: &WeightMatrix, assignment: &ClusterAssignment) -> f64 {
    assignment
        .members
        .iter()
        .map(|members| {
            members
                .iter()
                .flat_map(|&j| members.iter().map(move |&k| (j, k)))
                .filter(|(j, k)| j != k)
                .map(|(j, k)| w[j][k])
                .sum::<f64>()
        })
        .sum()
}

fn check_square(w: &WeightMatrix) -> Result<usize> {
    let k = w.len();
    if w.iter().any(|row| row.len() != k) {
        return Err(Error::Domain("weight matrix must be square".into()));
    }
    Ok(k)
}

/// Greedy clustering: DUE `i < clusters` seeds cluster `i`; each remaining DUE
/// in index order joins the cluster whose members it adds the least symmetric
/// weight to, ties going to the lowest cluster index.
pub fn cluster_dues(w: &WeightMatrix, clusters: usize) -> Result<ClusterAssignment> {
    let k = check_square(w)?;
    if clusters == 0 || k < clusters {
        return Err(Error::Domain(format!(
            "cannot split {k} DUEs into {clusters} nonempty clusters"
        )));
    }
    let mut members: Vec<Vec<usize>> = (0..clusters).map(|c| vec![c]).collect();
    let mut cluster_of: Vec<usize> = (0..clusters).collect();
    for (due, row) in w.iter().enumerate().skip(clusters) {
        let mut best = (f64::INFINITY, 0);
        for (c, group) in members.iter().enumerate() {
            let added: f64 = group.iter().map(|&o| row[o] + w[o][due]).sum();
            if added < best.0 {
                best = (added, c);
            }
        }
        members[best.1].push(due);
        cluster_of.push(best.1);
    }
    Ok(ClusterAssignment {
        cluster_of,
        members,
    })
}

/// Exact minimum intra-cluster weight over all partitions into nonempty clusters.
///
/// Test-scale only: at most 10 DUEs and 3 clusters.
pub fn brute_force_partition_oracle(
    w: &WeightMatrix,
    clusters: usize,
) -> Result<(ClusterAssignment, f64)> {
    let k = check_square(w)?;
    if k > 10 || clusters > 3 {
        return Err(Error::Scale(format!(
            "{k} DUEs into {clusters} clusters exceeds 10 / 3"
        )));
    }
    if clusters == 0 || k < clusters {
        return Err(Error::Domain(format!(
            "cannot split {k} DUEs into {clusters} nonempty clusters"
        )));
    }
    let total = clusters.pow(k as u32);
    let mut labels = vec![0usize; k];
    let mut best: Option<(ClusterAssignment, f64)> = None;
    for code in 0..total {
        let mut rest = code;
        for label in labels.iter_mut() {
            *label = rest % clusters;
            rest /= clusters;
        }
        let mut used = vec![false; clusters];
        labels.iter().for_each(|&l| used[l] = true);
        if used.contains(&false) {
            continue;
        }
        let candidate = ClusterAssignment::from_labels(labels.clone(), clusters);
        let weight = intra_cluster_weight(w, &candidate);
        if best.as_ref().is_none_or(|(_, b)| weight < *b) {
            best = Some((candidate, weight));
        }
    }
    Ok(best.expect("k >= clusters admits a partition"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(k: usize, pairs: &[(usize, usize, f64)]) -> WeightMatrix {
        let mut w = vec![vec![0.0; k]; k];
        for &(a, b, v) in pairs {
            w[a][b] = v;
            w[b][a] = v;
        }
        w
    }

    #[test]
    fn two_singletons() {
        let w = sym(2, &[(0, 1, 3.0)]);
        let a = cluster_dues(&w, 2).unwrap();
        assert_eq!(a.members, vec![vec![0], vec![1]]);
        assert_eq!(intra_cluster_weight(&w, &a), 0.0);
    }

    #[test]
    fn third_due_breaks_tie_to_first_cluster() {
        let w = sym(3, &[(0, 1, 5.0)]);
        let a = cluster_dues(&w, 2).unwrap();
        assert_eq!(a.cluster_of, vec![0, 1, 0]);
        assert_eq!(intra_cluster_weight(&w, &a), 0.0);
        let (_, best) = brute_force_partition_oracle(&w, 2).unwrap();
        assert_eq!(best, 0.0);
    }

    #[test]
    fn strong_pairs_are_separated() {
        let w = sym(4, &[(0, 1, 10.0), (2, 3, 10.0)]);
        let a = cluster_dues(&w, 2).unwrap();
        assert_eq!(a.members, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(intra_cluster_weight(&w, &a), 0.0);
        assert_eq!(brute_force_partition_oracle(&w, 2).unwrap().1, 0.0);
    }

    #[test]
    fn uniform_weights_split_evenly() {
        let g = 0.7;
        let w: WeightMatrix = (0..4)
            .map(|j| (0..4).map(|k| if j == k { 0.0 } else { g }).collect())
            .collect();
        let (a, best) = brute_force_partition_oracle(&w, 2).unwrap();
        assert!((best - 4.0 * g).abs() < 1e-12);
        assert!(a.members.iter().all(|m| m.len() == 2));
    }

    #[test]
    fn singletons_when_clusters_equal_dues() {
        let w = sym(3, &[(0, 1, 1.0), (1, 2, 2.0)]);
        let (a, best) = brute_force_partition_oracle(&w, 3).unwrap();
        assert_eq!(best, 0.0);
        assert!(a.members.iter().all(|m| m.len() == 1));
    }

    #[test]
    fn too_few_dues() {
        let w = sym(2, &[]);
        assert!(matches!(cluster_dues(&w, 3), Err(Error::Domain(_))));
        assert!(matches!(cluster_dues(&w, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn oracle_guard() {
        let w = vec![vec![0.0; 11]; 11];
        assert!(matches!(
            brute_force_partition_oracle(&w, 2),
            Err(Error::Scale(_))
        ));
    }

    #[test]
    fn asymmetric_weights_kept() {
        let w = vec![vec![0.0, 0.3], vec![0.4, 0.0]];
        let a = ClusterAssignment::from_labels(vec![0, 0], 1);
        assert!((intra_cluster_weight(&w, &a) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn csv_rows() {
        let a = ClusterAssignment::from_labels(vec![1, 0, 1], 2);
        assert_eq!(a.to_csv(), "due_index,cluster_index\n0,1\n1,0\n2,1\n");
    }
}
