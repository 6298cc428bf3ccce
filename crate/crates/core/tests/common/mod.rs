#![allow(dead_code)]

use std::collections::BTreeMap;

use geocut::poly::{threshold_polynomial, Precision, SignedExponentPoly};

/// Coefficients of `r·P^{n,k+1}(r) − P^{n,k}(r)` by exponent, zeros dropped.
pub fn reduction_coefficients(n: usize, k: usize) -> BTreeMap<u32, i32> {
    let upper = threshold_polynomial(n, k + 1).unwrap();
    let lower = threshold_polynomial(n, k).unwrap();
    let mut c: BTreeMap<u32, i32> = BTreeMap::new();
    for &e in upper.pos() {
        *c.entry(e + 1).or_default() += 1;
    }
    for &e in upper.neg() {
        *c.entry(e + 1).or_default() -= 1;
    }
    for &e in lower.pos() {
        *c.entry(e).or_default() -= 1;
    }
    for &e in lower.neg() {
        *c.entry(e).or_default() += 1;
    }
    c.retain(|_, v| *v != 0);
    c
}

/// Exact sign of `r·P^{n,k+1}(r) − P^{n,k}(r)`.
pub fn reduction_sign(n: usize, k: usize, r: f64) -> std::cmp::Ordering {
    let c = reduction_coefficients(n, k);
    assert!(c.values().all(|v| v.abs() == 1), "n={n} k={k}: {c:?}");
    let plus: Vec<u32> = c.iter().filter(|(_, v)| **v > 0).map(|(e, _)| *e).collect();
    let minus: Vec<u32> = c.iter().filter(|(_, v)| **v < 0).map(|(e, _)| *e).collect();
    SignedExponentPoly::from_difference(n, None, &plus, &minus)
        .eval_log(r, Precision::Extended)
        .sign
}
