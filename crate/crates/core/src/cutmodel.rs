//! Edge indexing of `K_n`, cut representations and weight evaluation.
//!
//! Edges are ordered lexicographically, `(1,2), (1,3), …, (n-1,n)`, and the
//! edge with 1-based index `i` carries the weight `r^(N-i)` with
//! `N = n(n-1)/2`. A cut is stored as the vertex set containing vertex 1;
//! its edge string ([`CutVector`]) is derived on demand.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `(N-1) ln r` for which weights are also evaluated directly in f64.
pub const DIRECT_LOG_LIMIT: f64 = 700.0;

/// Largest vertex count a [`CutSpec`] can hold.
pub const MAX_VERTICES: usize = 128;

/// Number of edges of `K_n`.
pub fn num_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic 1-based index of edge `(i, j)` in `K_n`.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidEdge { i, j, n });
    }
    Ok(edge_index_unchecked(i, j, n))
}

#[inline]
pub(crate) fn edge_index_unchecked(i: usize, j: usize, n: usize) -> usize {
    (i - 1) * n - i * (i - 1) / 2 + (j - i)
}

/// Exponent `N - idx(i, j)` carried by edge `(i, j)`; `i < j` is assumed.
#[inline]
pub(crate) fn edge_exponent(i: usize, j: usize, n: usize) -> u32 {
    (num_edges(n) - edge_index_unchecked(i, j, n)) as u32
}

pub(crate) fn validate_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidR(r))
    }
}

/// A cut of `K_n`, stored as the side that contains vertex 1.
///
/// Bit `v - 1` of the mask is set when vertex `v` is a member. The full
/// vertex set is allowed and represents the empty cut.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutSpec {
    n: usize,
    members: u128,
}

impl CutSpec {
    /// Builds a cut from a membership mask (bit `v-1` for vertex `v`).
    /// A mask without vertex 1 is replaced by its complement.
    pub fn from_mask(n: usize, mask: u128) -> Result<Self> {
        if !(2..=MAX_VERTICES).contains(&n) {
            return Err(Error::SizeOutOfRange {
                n,
                min: 2,
                max: MAX_VERTICES,
                what: "cut specifications",
            });
        }
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::InvalidCut {
                n,
                reason: "mask has bits beyond vertex n",
            });
        }
        let members = if mask & 1 == 1 { mask } else { full & !mask };
        Ok(CutSpec { n, members })
    }

    /// Builds a cut from 1-based vertex labels.
    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut mask = 0u128;
        for v in members {
            if v == 0 || v > n || v > MAX_VERTICES {
                return Err(Error::InvalidCut {
                    n,
                    reason: "vertex label outside 1..=n",
                });
            }
            mask |= 1u128 << (v - 1);
        }
        Self::from_mask(n, mask)
    }

    /// Parses an indicator string such as `"1100"` (`x_1 … x_n`).
    pub fn from_indicator(x: &str) -> Result<Self> {
        let n = x.len();
        let mut mask = 0u128;
        for (v, c) in x.chars().enumerate() {
            match c {
                '1' => mask |= 1u128 << v,
                '0' => {}
                _ => {
                    return Err(Error::InvalidCut {
                        n,
                        reason: "indicator strings contain only 0 and 1",
                    })
                }
            }
        }
        Self::from_mask(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u128 {
        self.members
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.n && self.members >> (v - 1) & 1 == 1
    }

    /// Member labels in increasing order.
    pub fn members(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.contains(v)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    /// True for the degenerate all-ones indicator, which cuts no edge.
    pub fn is_empty_cut(&self) -> bool {
        self.members == full_mask(self.n)
    }

    /// Indicator string `x_1 … x_n`.
    pub fn indicator(&self) -> String {
        (1..=self.n)
            .map(|v| if self.contains(v) { '1' } else { '0' })
            .collect()
    }

    /// Number of crossing edges, `|S| (n - |S|)`.
    pub fn cut_size(&self) -> usize {
        self.len() * (self.n - self.len())
    }

    /// Exponents `N - idx(i,j)` of the crossing edges, strictly decreasing.
    pub fn crossing_exponents(&self) -> Vec<u32> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.cut_size());
        for i in 1..n {
            let xi = self.contains(i);
            for j in i + 1..=n {
                if xi != self.contains(j) {
                    out.push(edge_exponent(i, j, n));
                }
            }
        }
        out
    }

    /// Crossing edges grouped into runs of consecutive exponents.
    pub fn exponent_runs(&self) -> Vec<ExponentRun> {
        let n = self.n;
        let mut runs = Vec::new();
        for i in 1..n {
            let xi = self.contains(i);
            let mut j = i + 1;
            while j <= n {
                if xi == self.contains(j) {
                    j += 1;
                    continue;
                }
                let start = j;
                while j <= n && xi != self.contains(j) {
                    j += 1;
                }
                runs.push(ExponentRun {
                    top: edge_exponent(i, start, n),
                    len: (j - start) as u32,
                });
            }
        }
        runs
    }
}

fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl fmt::Debug for CutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CutSpec(n={}, {})", self.n, self)
    }
}

impl fmt::Display for CutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.members().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for CutSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CutSpec", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("members", &self.members())?;
        s.end()
    }
}

/// A maximal block of crossing edges `(i, j..j+len)` sharing row `i`;
/// their exponents are `top, top-1, …, top-len+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentRun {
    pub top: u32,
    pub len: u32,
}

/// The length-`N` edge indicator string of a cut.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CutVector {
    n: usize,
    bits: Vec<bool>,
}

impl CutVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bit for the edge with 1-based lexicographic index `idx`.
    pub fn get(&self, idx: usize) -> Option<bool> {
        idx.checked_sub(1).and_then(|i| self.bits.get(i).copied())
    }
}

impl fmt::Display for CutVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CutVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CutVector({self})")
    }
}

/// `δ(x)`: one bit per edge in lexicographic order, set when the edge crosses.
pub fn cut_vector(spec: &CutSpec) -> CutVector {
    let n = spec.n();
    let mut bits = Vec::with_capacity(num_edges(n));
    for i in 1..n {
        for j in i + 1..=n {
            bits.push(spec.contains(i) != spec.contains(j));
        }
    }
    CutVector { n, bits }
}

/// `C_k = {1, …, k}`.
pub fn isolated_cut(k: usize, n: usize) -> Result<CutSpec> {
    if k == 0 || k + 1 > n {
        return Err(Error::KOutOfRange {
            k,
            n,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    CutSpec::from_members(n, 1..=k)
}

/// `S*_k = {1, …, k, n}`.
pub fn near_isolated_cut(k: usize, n: usize) -> Result<CutSpec> {
    if k == 0 || k + 2 > n {
        return Err(Error::KOutOfRange {
            k,
            n,
            min: 1,
            max: n.saturating_sub(2),
        });
    }
    CutSpec::from_members(n, (1..=k).chain(std::iter::once(n)))
}

/// 1-based position of `C_k` when the `2^(n-1)` indicators with `x_1 = 1`
/// are listed in lexicographic order (`1000…` first).
pub fn lex_position(k: usize, n: usize) -> Result<u128> {
    if k == 0 || k + 1 > n {
        return Err(Error::KOutOfRange {
            k,
            n,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    if n > MAX_VERTICES {
        return Err(Error::SizeOutOfRange {
            n,
            min: 2,
            max: MAX_VERTICES,
            what: "lexicographic positions",
        });
    }
    Ok(1 + (0..k - 1).map(|j| 1u128 << (n - 2 - j)).sum::<u128>())
}

/// A cut weight in direct and logarithmic form, with the exponents it sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightValue {
    /// `Σ r^e`, absent when `(N-1) ln r` exceeds [`DIRECT_LOG_LIMIT`].
    pub direct: Option<f64>,
    /// Natural log of the weight; `None` for the empty cut.
    pub log: Option<f64>,
    /// Exponents with a crossing edge, strictly decreasing.
    #[serde(skip)]
    pub exponents: Vec<u32>,
}

impl WeightValue {
    /// Sums `r^e` over `exponents`. `guard_exponent` is the largest exponent
    /// the instance can carry (`N - 1` for a cut of `K_n`).
    pub fn from_exponents(exponents: Vec<u32>, r: f64, guard_exponent: u32) -> Self {
        let ln_r = r.ln();
        let direct = if guard_exponent as f64 * ln_r <= DIRECT_LOG_LIMIT {
            Some(exponents.iter().fold(0.0, |acc, &e| acc + r.powi(e as i32)))
        } else {
            None
        };
        let log = log_sum_exp(exponents.iter().map(|&e| e as f64 * ln_r));
        WeightValue {
            direct,
            log,
            exponents,
        }
    }

    /// True for the weight of the empty cut.
    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// The weight as f64, falling back to `exp(log)` (which may be infinite).
    pub fn value(&self) -> f64 {
        match (self.direct, self.log) {
            (Some(d), _) => d,
            (None, Some(l)) => l.exp(),
            (None, None) => 0.0,
        }
    }
}

/// `W^n(δ(spec); r)`.
pub fn cut_weight(spec: &CutSpec, r: f64) -> Result<WeightValue> {
    validate_r(r)?;
    let guard = num_edges(spec.n()).saturating_sub(1) as u32;
    Ok(WeightValue::from_exponents(spec.crossing_exponents(), r, guard))
}

/// `log Σ exp(t_i)` with the maximum factored out; `None` for no terms.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> Option<f64> {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if terms.is_empty() || max == f64::NEG_INFINITY {
        return None;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    Some(max + sum.ln())
}

/// `ln Σ_{t=0}^{len-1} r^(top - t)` without forming any power of `r`.
pub fn log_geometric_run(top: u32, len: u32, ln_r: f64) -> f64 {
    debug_assert!(len >= 1 && len <= top + 1);
    if ln_r == 0.0 {
        return (len as f64).ln();
    }
    let s = ln_r.abs();
    // the largest term sits at the top for r > 1 and at the bottom for r < 1
    let lead = if ln_r > 0.0 { top } else { top + 1 - len };
    let ratio = (-(len as f64) * s).exp_m1() / (-s).exp_m1();
    lead as f64 * ln_r + ratio.ln()
}

/// Log-weight from a run decomposition; `None` when there are no runs.
pub fn log_weight_runs(runs: &[ExponentRun], ln_r: f64) -> Option<f64> {
    log_sum_exp(runs.iter().map(|run| log_geometric_run(run.top, run.len, ln_r)))
}

/// Log-weight of a cut in `O(number of runs)` transcendental evaluations.
pub fn log_weight(spec: &CutSpec, r: f64) -> Result<Option<f64>> {
    validate_r(r)?;
    Ok(log_weight_runs(&spec.exponent_runs(), r.ln()))
}
