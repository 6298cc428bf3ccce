//! The averaging approximation for thresholds and the comparison with
//! generic Max-Cut lower bounds.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cutmodel::{
    edge_exponent, log_geometric_run, num_edges, validate_r, WeightValue, DIRECT_LOG_LIMIT,
};
use crate::enumerate::{best_isolated, max_cut_exhaustive, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::poly::threshold_polynomial;
use crate::rootfind::find_threshold;

/// Largest `n` for the subset dynamic program in [`max_weight_matching`].
pub const MATCHING_CAP: usize = 20;

/// `(n, k)` pairs of the standard scaling comparison.
pub const SCALING_SAMPLE: [(usize, usize); 12] = [
    (10, 1),
    (10, 2),
    (10, 3),
    (15, 1),
    (15, 2),
    (15, 3),
    (20, 1),
    (20, 2),
    (20, 3),
    (30, 2),
    (30, 3),
    (30, 4),
];

fn check_delta_args(n: usize, k: usize) -> Result<()> {
    if k == 0 || k + 2 > n {
        return Err(Error::KOutOfRange {
            k,
            n,
            min: 1,
            max: n.saturating_sub(2),
        });
    }
    Ok(())
}

/// `Δ(n,k) = (k+2)(n−k)/2 − (k+1)(4−k)/6`, for `1 <= k <= n − 2`.
pub fn delta_gap(n: usize, k: usize) -> Result<Ratio<i64>> {
    check_delta_args(n, k)?;
    let (n, k) = (n as i64, k as i64);
    Ok(Ratio::new((k + 2) * (n - k), 2) - Ratio::new((k + 1) * (4 - k), 6))
}

/// Means `(ā, b̄)` of the positive and negative exponents of `P^{n,k}`.
pub fn exponent_means(n: usize, k: usize) -> Result<(Ratio<i64>, Ratio<i64>)> {
    check_delta_args(n, k)?;
    let p = threshold_polynomial(n, k)?;
    let mean = |xs: &[u32]| {
        Ratio::new(
            xs.iter().map(|&x| x as i64).sum::<i64>(),
            xs.len() as i64,
        )
    };
    Ok((mean(p.pos()), mean(p.neg())))
}

/// `ā − b̄` computed from the exponents themselves.
pub fn delta_gap_direct(n: usize, k: usize) -> Result<Ratio<i64>> {
    let (a, b) = exponent_means(n, k)?;
    Ok(a - b)
}

fn ratio_to_f64(x: Ratio<i64>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Predicted `r_k(n) − 1 ≈ ln((n−k−1)/k) / Δ(n,k)`.
pub fn scaling_prediction(n: usize, k: usize) -> Result<f64> {
    let delta = delta_gap(n, k)?;
    Ok(((n - k - 1) as f64 / k as f64).ln() / ratio_to_f64(delta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub k: usize,
    /// `r_k(n) − 1`.
    pub actual: f64,
    pub predicted: f64,
    /// `100 (predicted − actual) / actual`.
    pub error_percent: f64,
}

/// Actual against predicted thresholds for each `(n, k)`.
pub fn scaling_error_table(pairs: &[(usize, usize)]) -> Result<Vec<ScalingRow>> {
    pairs
        .par_iter()
        .map(|&(n, k)| {
            let actual = find_threshold(n, k)? - 1.0;
            let predicted = scaling_prediction(n, k)?;
            Ok(ScalingRow {
                n,
                k,
                actual,
                predicted,
                error_percent: 100.0 * (predicted - actual) / actual,
            })
        })
        .collect()
}

/// `w(K_n) = Σ_{e=0}^{N−1} r^e = (r^N − 1)/(r − 1)`.
pub fn total_weight(n: usize, r: f64) -> Result<WeightValue> {
    validate_r(r)?;
    let big_n = num_edges(n) as u32;
    if big_n == 0 {
        return Ok(WeightValue::from_exponents(Vec::new(), r, 0));
    }
    let ln_r = r.ln();
    let direct = if (big_n - 1) as f64 * ln_r <= DIRECT_LOG_LIMIT {
        Some(if r == 1.0 {
            big_n as f64
        } else if (r - 1.0).abs() < 0.5 {
            (big_n as f64 * ln_r).exp_m1() / (r - 1.0)
        } else {
            (r.powi(big_n as i32) - 1.0) / (r - 1.0)
        })
    } else {
        None
    };
    Ok(WeightValue {
        direct,
        log: Some(log_geometric_run(big_n - 1, big_n, ln_r)),
        exponents: (0..big_n).rev().collect(),
    })
}

/// A set of edges `(i, j)`, `i < j`, with their total weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeSet {
    pub edges: Vec<(usize, usize)>,
    pub weight: WeightValue,
}

fn edge_set(n: usize, r: f64, mut edges: Vec<(usize, usize)>) -> EdgeSet {
    edges.sort_unstable();
    let mut exps: Vec<u32> = edges.iter().map(|&(i, j)| edge_exponent(i, j, n)).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    let guard = num_edges(n).saturating_sub(1) as u32;
    EdgeSet {
        edges,
        weight: WeightValue::from_exponents(exps, r, guard),
    }
}

/// `r^(e − s)` for every edge, with `s` chosen so the largest weight is 1.
fn scaled_edge_weights(n: usize, r: f64) -> Vec<f64> {
    let big_n = num_edges(n) as i32;
    let shift = if r >= 1.0 { big_n - 1 } else { 0 };
    let mut w = vec![0.0; n * n];
    for i in 1..=n {
        for j in i + 1..=n {
            let v = r.powi(edge_exponent(i, j, n) as i32 - shift);
            w[(i - 1) * n + (j - 1)] = v;
            w[(j - 1) * n + (i - 1)] = v;
        }
    }
    w
}

/// Exact maximum-weight matching by dynamic programming over vertex
/// subsets: the lowest unmatched vertex is left single or paired with each
/// remaining vertex.
pub fn max_weight_matching(n: usize, r: f64) -> Result<EdgeSet> {
    validate_r(r)?;
    if n > MATCHING_CAP {
        return Err(Error::SizeOutOfRange {
            n,
            min: 0,
            max: MATCHING_CAP,
            what: "maximum-weight matching",
        });
    }
    let w = scaled_edge_weights(n, r);
    let full = 1usize << n;
    let mut best = vec![0.0f64; full];
    // partner of the lowest vertex in the optimum for each subset; 0 = single
    let mut choice = vec![0u8; full];
    for mask in 1..full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut value = best[rest];
        let mut pick = 0u8;
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let cand = w[i * n + j] + best[rest & !(1 << j)];
            if cand > value {
                value = cand;
                pick = (j + 1) as u8;
            }
        }
        best[mask] = value;
        choice[mask] = pick;
    }
    let mut edges = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        if choice[mask | 1 << i] != 0 {
            let j = choice[mask | 1 << i] as usize - 1;
            edges.push((i + 1, j + 1));
            mask &= !(1 << j);
        }
    }
    Ok(edge_set(n, r, edges))
}

/// Greedy matching: repeatedly take the heaviest edge between unmatched
/// vertices. For `r > 1` this is `{(1,2), (3,4), …}`, which is optimal for
/// `r >= 2` but not in general.
pub fn greedy_matching(n: usize, r: f64) -> Result<EdgeSet> {
    validate_r(r)?;
    let mut order = all_edges(n);
    sort_by_weight(&mut order, n, r, true);
    let mut used = vec![false; n + 1];
    let mut edges = Vec::new();
    for (i, j) in order {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            edges.push((i, j));
        }
    }
    Ok(edge_set(n, r, edges))
}

fn all_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect()
}

fn sort_by_weight(edges: &mut [(usize, usize)], n: usize, r: f64, heaviest_first: bool) {
    let increasing = (r >= 1.0) != heaviest_first;
    edges.sort_by_key(|&(i, j)| edge_exponent(i, j, n));
    if !increasing {
        edges.reverse();
    }
}

/// Minimum spanning tree of `K_n` by Kruskal's algorithm.
pub fn min_spanning_tree(n: usize, r: f64) -> Result<EdgeSet> {
    validate_r(r)?;
    let mut order = all_edges(n);
    sort_by_weight(&mut order, n, r, false);
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, j) in order {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            edges.push((i, j));
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    Ok(edge_set(n, r, edges))
}

pub fn min_spanning_tree_weight(n: usize, r: f64) -> Result<WeightValue> {
    Ok(min_spanning_tree(n, r)?.weight)
}

/// `(w(G) + w(M)) / 2` with `M` a maximum-weight matching.
pub fn gutin_yeo_bound(n: usize, r: f64) -> Result<f64> {
    Ok((total_weight(n, r)?.value() + max_weight_matching(n, r)?.weight.value()) / 2.0)
}

/// `w(G)/2 + w(T_min)/4`.
pub fn poljak_turzik_bound(n: usize, r: f64) -> Result<f64> {
    Ok(total_weight(n, r)?.value() / 2.0 + min_spanning_tree_weight(n, r)?.value() / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundComparison {
    pub n: usize,
    pub r: f64,
    /// `k` of the heaviest isolated cut.
    pub optimal_k: usize,
    pub optimum: f64,
    pub gy_bound: f64,
    pub pt_bound: f64,
    /// `100 (optimum − gy_bound) / optimum`.
    pub gap_gy: f64,
    /// Maximum cut weight over all cuts, when `n` is small enough to enumerate.
    pub enumerated_optimum: Option<f64>,
}

/// Compares both generic bounds with the heaviest isolated cut.
pub fn bound_comparison(n: usize, r: f64) -> Result<BoundComparison> {
    let (optimal_k, w) = best_isolated(n, r)?;
    let optimum = w.value();
    let gy_bound = gutin_yeo_bound(n, r)?;
    let pt_bound = poljak_turzik_bound(n, r)?;
    let enumerated_optimum = if n <= ENUMERATION_CAP {
        Some(max_cut_exhaustive(n, r)?.best_weight.value())
    } else {
        None
    };
    Ok(BoundComparison {
        n,
        r,
        optimal_k,
        optimum,
        gy_bound,
        pt_bound,
        gap_gy: 100.0 * (optimum - gy_bound) / optimum,
        enumerated_optimum,
    })
}
