//! Threshold polynomials `P^{n,k}(r) = W(C_k; r) − W(C_{k+1}; r)`.
//!
//! All coefficients are ±1, so a polynomial is two disjoint, strictly
//! decreasing exponent lists. Three independent constructions are provided:
//! the cut-vector difference ([`poly_from_cuts`]), the base case plus the
//! one-step recursion ([`threshold_polynomial_recursive`]) and the closed
//! expansion ([`threshold_polynomial`]).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::cutmodel::{isolated_cut, log_sum_exp, num_edges, CutSpec};
use crate::error::{Error, Result};
use crate::exact::eval_exact;

/// Relative gap between the positive and negative sums below which the
/// floating-point sign is not trusted and the exact evaluator decides.
pub const SIGN_MARGIN: f64 = 1e-12;

/// How signs are determined during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Log-space f64 with an exact fallback near cancellation.
    #[default]
    Double,
    /// Exact dyadic evaluation for every sign query.
    Extended,
}

/// Whether the root theorems cover `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `1 <= k <= ⌊n/2⌋ − 1`: a unique root in `(1, 2)` is guaranteed.
    Theorem,
    /// `⌊n/2⌋ − 1 < k <= n − 2`: the construction is valid, nothing more.
    Extended,
}

pub fn regime(n: usize, k: usize) -> Regime {
    if k >= 1 && k + 1 <= n / 2 {
        Regime::Theorem
    } else {
        Regime::Extended
    }
}

/// Largest `k` in the theorem regime, `⌊n/2⌋ − 1`.
pub fn max_regime_k(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// A sparse polynomial whose nonzero coefficients are all +1 or −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SignedExponentPoly {
    n: usize,
    k: Option<usize>,
    pos: Vec<u32>,
    neg: Vec<u32>,
}

/// Signed log-magnitude of a polynomial value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: Ordering,
    /// `ln |P(r)|`; `-inf` when the value is exactly zero.
    pub log_abs: f64,
    /// `ln Σ_{pos} r^e`, `None` without positive terms.
    pub log_pos: Option<f64>,
    /// `ln Σ_{neg} r^e`, `None` without negative terms.
    pub log_neg: Option<f64>,
    /// Set when the exact evaluator produced the sign and magnitude.
    pub exact: bool,
}

impl SignedLog {
    /// `|P(r)|` relative to the larger of the two sums.
    pub fn relative_magnitude(&self) -> f64 {
        let scale = match (self.log_pos, self.log_neg) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return 0.0,
        };
        (self.log_abs - scale).exp()
    }

    /// `P(r)` divided by the larger of the two sums.
    pub fn relative_value(&self) -> f64 {
        let m = self.relative_magnitude();
        match self.sign {
            Ordering::Greater => m,
            Ordering::Less => -m,
            Ordering::Equal => 0.0,
        }
    }
}

fn sort_desc(v: &mut Vec<u32>) {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.dedup();
}

impl SignedExponentPoly {
    /// Builds `Σ r^plus − Σ r^minus`, cancelling exponents present in both
    /// lists by a sorted merge. Duplicates within one list are not allowed.
    pub fn from_difference(n: usize, k: Option<usize>, plus: &[u32], minus: &[u32]) -> Self {
        let mut a = plus.to_vec();
        let mut b = minus.to_vec();
        sort_desc(&mut a);
        sort_desc(&mut b);
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x > y => {
                    pos.push(x);
                    i += 1;
                }
                (Some(_), Some(&y)) => {
                    neg.push(y);
                    j += 1;
                }
                (Some(&x), None) => {
                    pos.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    neg.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SignedExponentPoly { n, k, pos, neg }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    /// Exponents with coefficient +1, strictly decreasing.
    pub fn pos(&self) -> &[u32] {
        &self.pos
    }

    /// Exponents with coefficient −1, strictly decreasing.
    pub fn neg(&self) -> &[u32] {
        &self.neg
    }

    pub fn regime(&self) -> Option<Regime> {
        self.k.map(|k| regime(self.n, k))
    }

    /// Adds `r^e`; `e` must not already be present.
    fn with_monomial(mut self, e: u32) -> Self {
        debug_assert!(!self.pos.contains(&e) && !self.neg.contains(&e));
        self.pos.push(e);
        sort_desc(&mut self.pos);
        self
    }

    /// `P(1)`, i.e. the number of positive minus negative terms.
    pub fn value_at_one(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }

    /// Sign changes of the coefficient sequence read by decreasing exponent.
    pub fn sign_changes(&self) -> usize {
        let mut terms: Vec<(u32, bool)> = self
            .pos
            .iter()
            .map(|&e| (e, true))
            .chain(self.neg.iter().map(|&e| (e, false)))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        terms.windows(2).filter(|w| w[0].1 != w[1].1).count()
    }

    /// Direct f64 evaluation; overflows to ±inf for large exponents.
    pub fn eval(&self, r: f64) -> f64 {
        let p: f64 = self.pos.iter().map(|&e| r.powi(e as i32)).sum();
        let q: f64 = self.neg.iter().map(|&e| r.powi(e as i32)).sum();
        p - q
    }

    /// Overflow-free evaluation in log space with a sign that is exact
    /// whenever the two sums differ by more than [`SIGN_MARGIN`] relative.
    pub fn eval_log(&self, r: f64, precision: Precision) -> SignedLog {
        let ln_r = r.ln();
        let log_pos = log_sum_exp(self.pos.iter().map(|&e| e as f64 * ln_r));
        let log_neg = log_sum_exp(self.neg.iter().map(|&e| e as f64 * ln_r));
        let float = match (log_pos, log_neg) {
            (None, None) => Some((Ordering::Equal, f64::NEG_INFINITY)),
            (Some(p), None) => Some((Ordering::Greater, p)),
            (None, Some(q)) => Some((Ordering::Less, q)),
            (Some(p), Some(q)) => {
                let gap = (p - q).abs();
                // relative difference with respect to the larger sum
                let rel = -(-gap).exp_m1();
                if rel <= SIGN_MARGIN {
                    None
                } else if p > q {
                    Some((Ordering::Greater, p + rel.ln()))
                } else {
                    Some((Ordering::Less, q + rel.ln()))
                }
            }
        };
        match (float, precision) {
            (Some((sign, log_abs)), Precision::Double) => SignedLog {
                sign,
                log_abs,
                log_pos,
                log_neg,
                exact: false,
            },
            _ => {
                let v = eval_exact(&self.pos, &self.neg, r);
                SignedLog {
                    sign: v.sign,
                    log_abs: v.log_abs,
                    log_pos,
                    log_neg,
                    exact: true,
                }
            }
        }
    }

    /// Sign of `P(r)`.
    pub fn sign_at(&self, r: f64, precision: Precision) -> Ordering {
        self.eval_log(r, precision).sign
    }
}

impl fmt::Display for SignedExponentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(u32, char)> = self
            .pos
            .iter()
            .map(|&e| (e, '+'))
            .chain(self.neg.iter().map(|&e| (e, '-')))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, s)) in terms.iter().enumerate() {
            let mono = match e {
                0 => "1".to_string(),
                1 => "r".to_string(),
                _ => format!("r^{e}"),
            };
            match (idx, s) {
                (0, '+') => write!(f, "{mono}")?,
                (0, _) => write!(f, "-{mono}")?,
                (_, s) => write!(f, " {s} {mono}")?,
            }
        }
        Ok(())
    }
}

fn check_k(n: usize, k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, n, min: 1, max });
    }
    Ok(())
}

/// `W(a; r) − W(b; r)` for two cuts of the same `K_n`.
pub fn poly_between(a: &CutSpec, b: &CutSpec) -> Result<SignedExponentPoly> {
    if a.n() != b.n() {
        return Err(Error::InvalidCut {
            n: b.n(),
            reason: "cuts of different vertex counts",
        });
    }
    Ok(SignedExponentPoly::from_difference(
        a.n(),
        None,
        &a.crossing_exponents(),
        &b.crossing_exponents(),
    ))
}

/// `P^{n,k}` as the exponent-set difference of `C_k` and `C_{k+1}`.
pub fn poly_from_cuts(n: usize, k: usize) -> Result<SignedExponentPoly> {
    check_k(n, k, n.saturating_sub(2))?;
    let mut p = poly_between(&isolated_cut(k, n)?, &isolated_cut(k + 1, n)?)?;
    p.k = Some(k);
    Ok(p)
}

fn base_exponents(n: usize) -> (Vec<u32>, Vec<u32>) {
    let big_n = num_edges(n) as u32;
    let n32 = n as u32;
    let pos = vec![big_n - 1];
    let neg = ((big_n + 3 - 2 * n32)..=(big_n - n32)).rev().collect();
    (pos, neg)
}

/// `P^{n,1}(r) = r^(N−1) − (r^(N−n) + … + r^(N−2n+3))`.
pub fn base_polynomial(n: usize) -> Result<SignedExponentPoly> {
    if n < 4 {
        return Err(Error::SizeOutOfRange {
            n,
            min: 4,
            max: usize::MAX,
            what: "the base threshold polynomial",
        });
    }
    let (pos, neg) = base_exponents(n);
    Ok(SignedExponentPoly {
        n,
        k: Some(1),
        pos,
        neg,
    })
}

/// `P^{n,k}` from the closed expansion with `m = n − k + 1`: positive
/// exponents `C(n−i+1, 2) − (k−i+1)` for `i = 1..k`, negative exponents
/// `C(m, 2) − m − i` for `i = 0..m−3`. Valid for `1 <= k <= n − 2`; see
/// [`regime`] for where the root theorems apply.
pub fn threshold_polynomial(n: usize, k: usize) -> Result<SignedExponentPoly> {
    check_k(n, k, n.saturating_sub(2))?;
    let m = n - k + 1;
    let pos = (1..=k)
        .map(|i| (num_edges(n - i + 1) - (k - i + 1)) as u32)
        .collect();
    let top = num_edges(m) - m;
    let neg = (0..=m - 3).map(|i| (top - i) as u32).collect();
    Ok(SignedExponentPoly {
        n,
        k: Some(k),
        pos,
        neg,
    })
}

/// `P^{n,k}` via `P^{n,k} = r^(N−k) + P^{n−1,k−1}` down to the base case.
pub fn threshold_polynomial_recursive(n: usize, k: usize) -> Result<SignedExponentPoly> {
    check_k(n, k, n.saturating_sub(2))?;
    if k == 1 {
        let (pos, neg) = base_exponents(n);
        return Ok(SignedExponentPoly {
            n,
            k: Some(1),
            pos,
            neg,
        });
    }
    let inner = threshold_polynomial_recursive(n - 1, k - 1)?;
    let mut p = inner.with_monomial((num_edges(n) - k) as u32);
    p.n = n;
    p.k = Some(k);
    Ok(p)
}

/// Extreme exponents of `P^{n,k}` and the gap between the two signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparationGap {
    /// Smallest positive exponent `a_k`.
    pub a_k: u32,
    /// Largest negative exponent `b_1`.
    pub b_1: u32,
    /// `a_k − b_1`.
    pub gap: u32,
}

/// Gap between the smallest positive and the largest negative exponent of
/// `P^{n,k}`, read off the constructed polynomial.
pub fn separation_gap(n: usize, k: usize) -> Result<SeparationGap> {
    let p = threshold_polynomial(n, k)?;
    let a_k = *p.pos.last().expect("k >= 1 positive terms");
    let b_1 = *p.neg.first().expect("n - k - 1 >= 1 negative terms");
    Ok(SeparationGap {
        a_k,
        b_1,
        gap: a_k - b_1,
    })
}

/// Closed forms `a_k = N − 1 − (k−1)(2n−k)/2` and `b_1 = N − 1 − k(2n−k−1)/2`.
pub fn separation_closed_form(n: usize, k: usize) -> (u32, u32) {
    let big_n = num_edges(n);
    let a_k = big_n - 1 - (k - 1) * (2 * n - k) / 2;
    let b_1 = big_n - 1 - k * (2 * n - k - 1) / 2;
    (a_k as u32, b_1 as u32)
}

/// `f_n(x) = x^(2n−3) − x^(2n−4) − x^(n−2) + 1`, with
/// `P^{n,1}(x) (x − 1) = x^(N−2n+3) f_n(x)`.
pub fn reduced_base(n: usize) -> Result<SignedExponentPoly> {
    if n < 5 {
        return Err(Error::SizeOutOfRange {
            n,
            min: 5,
            max: usize::MAX,
            what: "the reduced base polynomial",
        });
    }
    let n32 = n as u32;
    Ok(SignedExponentPoly::from_difference(
        n,
        None,
        &[2 * n32 - 3, 0],
        &[2 * n32 - 4, n32 - 2],
    ))
}
