//! One-to-one CUE-to-cluster spectrum matching.
//!
//! Weights are CUE rates; `-inf` marks a pair that cannot share spectrum.
//! Both solvers first maximize the number of finite pairs and then the sum
//! of their rates, so an infeasible pair is only used when no complete
//! finite matching exists, and it is then reported as unmatched.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// Cluster assigned to each CUE (row); `None` when the CUE is left out.
    pub cluster_of_cue: Vec<Option<usize>>,
    /// Sum of the selected finite weights.
    pub total: f64,
}

impl Matching {
    pub fn matched_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cluster_of_cue
            .iter()
            .enumerate()
            .filter_map(|(m, c)| c.map(|c| (m, c)))
    }

    /// `cue,cluster` rows; unmatched CUEs have an empty cluster field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cue,cluster\n");
        for (m, c) in self.cluster_of_cue.iter().enumerate() {
            match c {
                Some(c) => writeln!(out, "{m},{c}"),
                None => writeln!(out, "{m},"),
            }
            .expect("writing to a String");
        }
        out
    }
}

fn shape(weights: &[Vec<f64>]) -> Result<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if weights.iter().any(|r| r.len() != cols) {
        return Err(Error::Domain("weight matrix rows differ in length".into()));
    }
    if weights
        .iter()
        .flatten()
        .any(|w| w.is_nan() || *w == f64::INFINITY)
    {
        return Err(Error::Domain("weights must be finite or -inf".into()));
    }
    Ok((rows, cols))
}

fn finish(weights: &[Vec<f64>], rows: usize, cols: usize, column_of_row: &[usize]) -> Matching {
    let cluster_of_cue: Vec<Option<usize>> = (0..rows)
        .map(|r| {
            let c = column_of_row[r];
            (c < cols && weights[r][c].is_finite()).then_some(c)
        })
        .collect();
    let total = cluster_of_cue
        .iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| weights[r][c]))
        .sum();
    Matching {
        cluster_of_cue,
        total,
    }
}

/// Maximum-weight matching by the Hungarian method (shortest augmenting
/// paths with potentials), O(n^3) for `n = max(rows, cols)`.
pub fn hungarian_match(weights: &[Vec<f64>]) -> Result<Matching> {
    let (rows, cols) = shape(weights)?;
    let n = rows.max(cols);
    if n == 0 || rows == 0 || cols == 0 {
        return Ok(Matching {
            cluster_of_cue: vec![None; rows],
            total: 0.0,
        });
    }

    // Costs are shifted into [0, span]; missing pairs cost more than any
    // n finite pairs together so they are avoided first.
    let finite = weights.iter().flatten().copied().filter(|w| w.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| {
        (lo.min(w), hi.max(w))
    });
    let span = if hi >= lo { hi - lo } else { 0.0 };
    let penalty = (n as f64 + 1.0) * (span + 1.0);
    let cost = |r: usize, c: usize| -> f64 {
        if r < rows && c < cols && weights[r][c].is_finite() {
            hi - weights[r][c]
        } else {
            penalty
        }
    };

    // 1-based arrays; index 0 is the virtual root of each augmenting tree.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for r in 1..=n {
        row_of_col[0] = r;
        let mut col = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col] = true;
            let row = row_of_col[col];
            let mut delta = f64::INFINITY;
            let mut next = 0;
            for c in 1..=n {
                if used[c] {
                    continue;
                }
                let reduced = cost(row - 1, c - 1) - u[row] - v[c];
                if reduced < min_to[c] {
                    min_to[c] = reduced;
                    way[c] = col;
                }
                if min_to[c] < delta {
                    delta = min_to[c];
                    next = c;
                }
            }
            for c in 0..=n {
                if used[c] {
                    u[row_of_col[c]] += delta;
                    v[c] -= delta;
                } else {
                    min_to[c] -= delta;
                }
            }
            col = next;
            if row_of_col[col] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col];
            row_of_col[col] = row_of_col[prev];
            col = prev;
            if col == 0 {
                break;
            }
        }
    }

    let mut column_of_row = vec![0; n];
    for c in 1..=n {
        column_of_row[row_of_col[c] - 1] = c - 1;
    }
    Ok(finish(weights, rows, cols, &column_of_row))
}

/// Exact matching by enumerating every permutation; at most 8 rows and columns.
///
/// Among optima the lexicographically first permutation is kept.
pub fn brute_force_match_oracle(weights: &[Vec<f64>]) -> Result<Matching> {
    let (rows, cols) = shape(weights)?;
    let n = rows.max(cols);
    if n > 8 {
        return Err(Error::Scale(format!("{rows}x{cols} exceeds 8x8")));
    }
    let score = |perm: &[usize]| -> (usize, f64) {
        let mut count = 0;
        let mut sum = 0.0;
        for (r, &c) in perm.iter().enumerate().take(rows) {
            if c < cols && weights[r][c].is_finite() {
                count += 1;
                sum += weights[r][c];
            }
        }
        (count, sum)
    };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (perm.clone(), score(&perm));
    // lexicographic successor permutation
    while let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) {
        let j = (i..n)
            .rev()
            .find(|&j| perm[j] > perm[i - 1])
            .expect("pivot exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
        let s = score(&perm);
        if s.0 > best.1 .0 || (s.0 == best.1 .0 && s.1 > best.1 .1) {
            best = (perm.clone(), s);
        }
    }
    Ok(finish(weights, rows, cols, &best.0))
}
