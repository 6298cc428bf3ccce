//! Thresholds `r_k(n)`: the unique root of `P^{n,k}` in `(1, 2)`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{max_regime_k, threshold_polynomial, Precision, SignedExponentPoly};

/// Lower end of the search bracket; thresholds can sit within `1e-4` of 1.
pub const BRACKET_LOW: f64 = 1.0 + 1e-9;
/// Upper end of the search bracket.
pub const BRACKET_HIGH: f64 = 2.0 - 1e-9;
/// Bisection stops once the bracket is at most this wide.
pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Bracketed bisection with a final secant step inside the last bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootFinder {
    pub low: f64,
    pub high: f64,
    pub tol: f64,
    pub max_iterations: usize,
    pub precision: Precision,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            low: BRACKET_LOW,
            high: BRACKET_HIGH,
            tol: ROOT_TOL,
            max_iterations: MAX_ITERATIONS,
            precision: Precision::Double,
        }
    }
}

impl RootFinder {
    pub fn with_precision(precision: Precision) -> Self {
        RootFinder {
            precision,
            ..Self::default()
        }
    }

    /// Root of `p` on the finder's own bracket.
    pub fn find(&self, p: &SignedExponentPoly) -> Result<f64> {
        self.find_in(p, self.low, self.high)
    }

    /// Root of `p` on `[low, high]`; the endpoint signs must differ.
    pub fn find_in(&self, p: &SignedExponentPoly, low: f64, high: f64) -> Result<f64> {
        let (mut lo, mut hi) = (low, high);
        let at_lo = p.eval_log(lo, self.precision);
        let at_hi = p.eval_log(hi, self.precision);
        match (at_lo.sign, at_hi.sign) {
            (Ordering::Equal, _) => return Ok(lo),
            (_, Ordering::Equal) => return Ok(hi),
            (a, b) if a == b => return Err(Error::NoSignChange { low, high }),
            _ => {}
        }
        let sign_lo = at_lo.sign;
        let mut iterations = 0;
        while hi - lo > self.tol {
            if iterations == self.max_iterations {
                return Err(Error::NoConvergence { iterations });
            }
            iterations += 1;
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            match p.sign_at(mid, self.precision) {
                Ordering::Equal => return Ok(mid),
                s if s == sign_lo => lo = mid,
                _ => hi = mid,
            }
        }
        Ok(secant_in_bracket(p, lo, hi, self.precision))
    }
}

/// One secant step between the bracket ends, kept only if strictly inside.
fn secant_in_bracket(p: &SignedExponentPoly, lo: f64, hi: f64, precision: Precision) -> f64 {
    let mid = lo + 0.5 * (hi - lo);
    let a = p.eval_log(lo, precision);
    let b = p.eval_log(hi, precision);
    let scale = match (a.log_pos, a.log_neg) {
        (Some(x), Some(y)) => x.max(y),
        _ => return mid,
    };
    let signed = |v: &crate::poly::SignedLog| match v.sign {
        Ordering::Greater => (v.log_abs - scale).exp(),
        Ordering::Less => -(v.log_abs - scale).exp(),
        Ordering::Equal => 0.0,
    };
    let (fa, fb) = (signed(&a), signed(&b));
    if !(fa.is_finite() && fb.is_finite()) || fa == fb {
        return mid;
    }
    let x = lo - fa * (hi - lo) / (fb - fa);
    if x > lo && x < hi {
        x
    } else {
        mid
    }
}

fn check_threshold_args(n: usize, k: usize) -> Result<()> {
    if n < 6 {
        return Err(Error::SizeOutOfRange {
            n,
            min: 6,
            max: usize::MAX,
            what: "threshold computation",
        });
    }
    let max = max_regime_k(n);
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, n, min: 1, max });
    }
    Ok(())
}

/// `r_k(n)` with the default finder.
pub fn find_threshold(n: usize, k: usize) -> Result<f64> {
    find_threshold_with(n, k, &RootFinder::default())
}

pub fn find_threshold_with(n: usize, k: usize, finder: &RootFinder) -> Result<f64> {
    check_threshold_args(n, k)?;
    finder.find(&threshold_polynomial(n, k)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdEntry {
    pub k: usize,
    pub r: f64,
    /// The `r_0 = 2` boundary, not a computed root.
    pub synthetic: bool,
}

/// The open interval `(low, high)` on which `C_k` is the best isolated cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdInterval {
    pub k: usize,
    pub low: f64,
    pub high: f64,
}

impl ThresholdInterval {
    /// `count` interior points `low + t (high − low)/(count + 1)`, `t = 1..=count`.
    pub fn interior_points(&self, count: usize) -> Vec<f64> {
        let step = (self.high - self.low) / (count + 1) as f64;
        (1..=count).map(|t| self.low + t as f64 * step).collect()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }
}

/// All thresholds of one `n`, led by the synthetic `r_0 = 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdTable {
    pub n: usize,
    pub entries: Vec<ThresholdEntry>,
    pub tolerance: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
}

impl ThresholdTable {
    /// `r_k(n)`, with `r_0 = 2`.
    pub fn r(&self, k: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.k == k).map(|e| e.r)
    }

    /// Computed thresholds `(k, r_k)`, `k = 1..=⌊n/2⌋−1`.
    pub fn thresholds(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().filter(|e| !e.synthetic).map(|e| (e.k, e.r))
    }

    pub fn max_k(&self) -> usize {
        max_regime_k(self.n)
    }

    /// Intervals `(r_k, r_{k−1})` for `k = 1..=⌊n/2⌋`, the last one
    /// reaching down to 1.
    pub fn intervals(&self) -> Vec<ThresholdInterval> {
        let top = self.n / 2;
        (1..=top)
            .map(|k| ThresholdInterval {
                k,
                low: self.r(k).unwrap_or(1.0),
                high: self.r(k - 1).expect("r_0 is always present"),
            })
            .collect()
    }

    /// The `k` whose interval contains `r` (the best isolated cut at `r`).
    pub fn best_isolated_k(&self, r: f64) -> usize {
        1 + self.thresholds().filter(|&(_, t)| t > r).count()
    }
}

/// Thresholds `r_1(n) > … > r_{⌊n/2⌋−1}(n)` with the default finder.
pub fn threshold_table(n: usize) -> Result<ThresholdTable> {
    threshold_table_with(n, &RootFinder::default())
}

pub fn threshold_table_with(n: usize, finder: &RootFinder) -> Result<ThresholdTable> {
    if n < 6 {
        return Err(Error::SizeOutOfRange {
            n,
            min: 6,
            max: usize::MAX,
            what: "threshold tables",
        });
    }
    let roots: Vec<f64> = (1..=max_regime_k(n))
        .into_par_iter()
        .map(|k| find_threshold_with(n, k, finder))
        .collect::<Result<_>>()?;
    let mut entries = vec![ThresholdEntry {
        k: 0,
        r: 2.0,
        synthetic: true,
    }];
    entries.extend(roots.into_iter().enumerate().map(|(i, r)| ThresholdEntry {
        k: i + 1,
        r,
        synthetic: false,
    }));
    let table = ThresholdTable {
        n,
        entries,
        tolerance: finder.tol,
        bracket_low: finder.low,
        bracket_high: finder.high,
    };
    if let Some(w) = table.entries.windows(2).find(|w| w[1].r >= w[0].r) {
        return Err(Error::Monotonicity(format!(
            "r_{}({n}) = {} is not below r_{}({n}) = {}",
            w[1].k, w[1].r, w[0].k, w[0].r
        )));
    }
    Ok(table)
}

/// Outcome of [`check_monotonicity`]. The asserted properties are hard
/// errors; the non-monotone-in-`n` instances are recorded only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub n_min: usize,
    pub n_max: usize,
    /// Every table is strictly decreasing in `k`.
    pub decreasing_in_k: bool,
    /// `r_1(n)` strictly decreases across the range.
    pub r1_decreasing_in_n: bool,
    /// `1 < r_1(n) < (n−2)^(1/(n−1))` for every table.
    pub r1_below_upper_bound: bool,
    /// `r_1(n)^(n−1) > 3` for every `n >= 7` in range.
    pub r1_power_exceeds_three: bool,
    /// `(k, n)` with `r_k(n+1) > r_k(n)`, `k >= 2`.
    pub increases_in_n: Vec<(usize, usize)>,
    /// `r_2(9) > r_2(8)`, when both tables are present.
    pub r2_9_exceeds_r2_8: Option<bool>,
}

pub fn check_monotonicity(tables: &[ThresholdTable]) -> Result<MonotonicityReport> {
    let fail = |msg: String| Err(Error::Monotonicity(msg));
    if tables.is_empty() {
        return fail("no tables".into());
    }
    let mut sorted: Vec<&ThresholdTable> = tables.iter().collect();
    sorted.sort_by_key(|t| t.n);
    if sorted.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return fail("tables must cover a contiguous range of n".into());
    }

    for t in &sorted {
        if let Some(w) = t.entries.windows(2).find(|w| w[1].r >= w[0].r) {
            return fail(format!("n = {}: r_{} >= r_{}", t.n, w[1].k, w[0].k));
        }
        let r1 = t.r(1).expect("n >= 6 has r_1");
        let bound = ((t.n - 2) as f64).powf(1.0 / (t.n - 1) as f64);
        if !(r1 > 1.0 && r1 < bound) {
            return fail(format!("n = {}: r_1 = {r1} outside (1, {bound})", t.n));
        }
        if t.n >= 7 && r1.powi(t.n as i32 - 1) <= 3.0 {
            return fail(format!("n = {}: r_1^(n-1) = {} <= 3", t.n, r1.powi(t.n as i32 - 1)));
        }
    }

    let mut increases_in_n = Vec::new();
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.r(1).unwrap() >= a.r(1).unwrap() {
            return fail(format!("r_1({}) >= r_1({})", b.n, a.n));
        }
        for (k, ra) in a.thresholds().filter(|&(k, _)| k >= 2) {
            if let Some(rb) = b.r(k) {
                if rb > ra {
                    increases_in_n.push((k, a.n));
                }
            }
        }
    }

    let get = |n: usize, k: usize| sorted.iter().find(|t| t.n == n).and_then(|t| t.r(k));
    let r2_9_exceeds_r2_8 = match (get(9, 2), get(8, 2)) {
        (Some(r9), Some(r8)) => Some(r9 > r8),
        _ => None,
    };
    if r2_9_exceeds_r2_8 == Some(false) {
        return fail("expected r_2(9) > r_2(8)".into());
    }

    Ok(MonotonicityReport {
        n_min: sorted[0].n,
        n_max: sorted[sorted.len() - 1].n,
        decreasing_in_k: true,
        r1_decreasing_in_n: true,
        r1_below_upper_bound: true,
        r1_power_exceeds_three: true,
        increases_in_n,
        r2_9_exceeds_r2_8,
    })
}
