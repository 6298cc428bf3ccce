//! Exact evaluation of ±1-coefficient sparse polynomials at an f64 argument.
//!
//! Every finite f64 is a dyadic rational `m / 2^d`, so
//! `P(r) · 2^(d · e_max)` is an integer that can be accumulated exactly with
//! a Horner recurrence over the exponent gaps.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Result of an exact evaluation: the sign and `ln |P(r)|` (`-inf` at a root).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactValue {
    pub sign: Ordering,
    pub log_abs: f64,
}

/// Splits a positive finite f64 into `(m, d)` with `r = m / 2^d`, `m` odd
/// when `d > 0`, and `d >= 0`.
fn dyadic(r: f64) -> (BigInt, u64) {
    debug_assert!(r.is_finite() && r > 0.0);
    let bits = r.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if exp_field == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_field - 1075)
    };
    while exp < 0 && mant & 1 == 0 {
        mant >>= 1;
        exp += 1;
    }
    if exp >= 0 {
        (BigInt::from(mant) << (exp as usize), 0)
    } else {
        (BigInt::from(mant), (-exp) as u64)
    }
}

fn log_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top: BigInt = x.abs() >> (shift as usize);
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Evaluates `Σ_{e∈pos} r^e − Σ_{e∈neg} r^e` exactly.
///
/// `pos` and `neg` may be in any order and must not share exponents.
pub fn eval_exact(pos: &[u32], neg: &[u32], r: f64) -> ExactValue {
    let mut terms: Vec<(u32, i8)> = pos
        .iter()
        .map(|&e| (e, 1i8))
        .chain(neg.iter().map(|&e| (e, -1i8)))
        .collect();
    if terms.is_empty() {
        return ExactValue {
            sign: Ordering::Equal,
            log_abs: f64::NEG_INFINITY,
        };
    }
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));

    let (m, d) = dyadic(r);
    let top = terms[0].0;
    // acc / 2^(d (top - e_i)) equals Σ_{j<=i} c_j r^(e_j - e_i)
    let mut acc = BigInt::zero();
    let mut prev = top;
    for &(e, c) in &terms {
        let gap = prev - e;
        if gap > 0 && !acc.is_zero() {
            acc *= num_traits::pow::pow(m.clone(), gap as usize);
        }
        let unit = BigInt::one() << (d as usize * (top - e) as usize);
        if c > 0 {
            acc += unit;
        } else {
            acc -= unit;
        }
        prev = e;
    }
    let last = prev;
    let sign = match acc.sign() {
        Sign::Plus => Ordering::Greater,
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
    };
    let log_abs = log_abs_bigint(&acc) - (d as f64) * ((top - last) as f64) * std::f64::consts::LN_2
        + last as f64 * r.ln();
    ExactValue { sign, log_abs }
}
