use geocut::analysis::{max_weight_matching, min_spanning_tree_weight};
use geocut::cutmodel::{cut_vector, cut_weight, isolated_cut, log_weight, CutSpec};
use geocut::enumerate::sweep_cuts;
use geocut::poly::{
    poly_from_cuts, reduced_base, threshold_polynomial, threshold_polynomial_recursive,
};
use proptest::prelude::*;

mod common;

/// Edges of K_n in lexicographic order with their exponents N - idx.
fn edges(n: usize) -> Vec<(usize, usize, i32)> {
    let big_n = (n * (n - 1) / 2) as i32;
    let mut out = Vec::new();
    let mut idx = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            idx += 1;
            out.push((i, j, big_n - idx));
        }
    }
    out
}

/// Crossing indicator over lexicographic edges for a raw vertex mask.
fn crossing_bits(n: usize, mask: u32) -> String {
    edges(n)
        .iter()
        .map(|&(i, j, _)| {
            if (mask >> (i - 1) & 1) != (mask >> (j - 1) & 1) {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

fn raw_weight(n: usize, mask: u32, r: f64) -> f64 {
    edges(n)
        .iter()
        .filter(|&&(i, j, _)| (mask >> (i - 1) & 1) != (mask >> (j - 1) & 1))
        .map(|&(_, _, e)| r.powi(e))
        .sum()
}

proptest! {
    #[test]
    fn cut_vector_is_complement_invariant(n in 2usize..=12, raw in any::<u32>()) {
        let full = (1u32 << n) - 1;
        let mask = raw & full;
        let a = CutSpec::from_mask(n, mask as u128).unwrap();
        let b = CutSpec::from_mask(n, (!mask & full) as u128).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.contains(1));
        prop_assert_eq!(cut_vector(&a).to_string(), crossing_bits(n, mask));
    }

    #[test]
    fn popcount_is_cut_size(n in 2usize..=8, raw in any::<u32>()) {
        let mask = raw & ((1u32 << n) - 1);
        let s = CutSpec::from_mask(n, mask as u128).unwrap();
        let m = s.len();
        prop_assert_eq!(cut_vector(&s).popcount(), m * (n - m));
        prop_assert_eq!(s.cut_size(), m * (n - m));
    }

    #[test]
    fn weight_matches_raw_sum(n in 2usize..=12, raw in any::<u32>(), r in 0.5f64..2.5) {
        let mask = raw & ((1u32 << n) - 1);
        let s = CutSpec::from_mask(n, mask as u128).unwrap();
        let expected = raw_weight(n, mask, r);
        let w = cut_weight(&s, r).unwrap();
        if expected == 0.0 {
            prop_assert!(w.is_zero());
            prop_assert_eq!(w.log, None);
        } else {
            prop_assert!((w.value() - expected).abs() <= 1e-12 * expected);
            let lw = log_weight(&s, r).unwrap().unwrap();
            prop_assert!((lw - expected.ln()).abs() <= 1e-10);
        }
    }

    #[test]
    fn reduction_inequality(n in 6usize..=30, pick in any::<u32>(), r in 1.001f64..1.999) {
        let kmax = n / 2 - 1;
        prop_assume!(kmax >= 2);
        let k = 1 + pick as usize % (kmax - 1);
        prop_assert!(common::reduction_sign(n, k, r).is_gt());
    }
}

#[test]
fn lex_indicators_give_reverse_lex_cut_vectors() {
    for n in 2..=8 {
        let vectors: Vec<String> = (0..1u32 << (n - 1))
            .map(|t| {
                // indicator x_1 = 1 followed by the n-1 bits of t, most significant first
                let x: String = std::iter::once('1')
                    .chain((0..n - 1).rev().map(|b| if t >> b & 1 == 1 { '1' } else { '0' }))
                    .collect();
                cut_vector(&CutSpec::from_indicator(&x).unwrap()).to_string()
            })
            .collect();
        for w in vectors.windows(2) {
            assert!(w[0] > w[1], "n={n}: {} then {}", w[0], w[1]);
        }
    }
}

#[test]
fn concatenation_of_isolated_vectors() {
    for n in 3..=10 {
        for k in 2..n {
            let big = cut_vector(&isolated_cut(k, n).unwrap()).to_string();
            let small = cut_vector(&isolated_cut(k - 1, n - 1).unwrap()).to_string();
            let head = "0".repeat(k - 1) + &"1".repeat(n - k);
            assert_eq!(big, head + &small, "n={n} k={k}");
        }
    }
}

#[test]
fn log_and_direct_agree() {
    for n in 2..=12 {
        for mask in 0..1u32 << (n - 1) {
            let s = CutSpec::from_mask(n, mask as u128).unwrap();
            for r in [1.01, 1.1, 1.5, 1.99] {
                let w = cut_weight(&s, r).unwrap();
                if let (Some(d), Some(l)) = (w.direct, w.log) {
                    assert!((d - l.exp()).abs() / d <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn three_constructions_agree() {
    for n in 6..=30 {
        for k in 1..=n / 2 - 1 {
            let a = threshold_polynomial(n, k).unwrap();
            let b = threshold_polynomial_recursive(n, k).unwrap();
            let c = poly_from_cuts(n, k).unwrap();
            assert_eq!(a.pos(), b.pos());
            assert_eq!(a.neg(), b.neg());
            assert_eq!(a.pos(), c.pos());
            assert_eq!(a.neg(), c.neg());
            assert_eq!(a.pos().len(), k);
            assert_eq!(a.neg().len(), n - k - 1);
            assert_eq!(a.value_at_one(), 2 * k as i64 - n as i64 + 1);
            assert_eq!(a.sign_changes(), 1);
            assert!(a.eval_log(2.0, Default::default()).sign.is_gt());
        }
    }
}

#[test]
fn reduction_on_sample_grid() {
    for n in 6usize..=30 {
        for k in 1..=n / 2 - 2 {
            // the difference telescopes to the m = n - k + 1 case with k = 1
            let m = n - k + 1;
            assert_eq!(common::reduction_coefficients(n, k), common::reduction_coefficients(m, 1));
            for r in [1.001, 1.01, 1.1, 1.5, 1.9, 1.99] {
                assert!(common::reduction_sign(n, k, r).is_gt(), "n={n} k={k} r={r}");
            }
        }
    }
}

#[test]
fn reduced_base_identity() {
    // (x - 1) P^{n,1}(x) = x^(N - 2n + 3) f_n(x)
    for n in 5..=14 {
        let p = threshold_polynomial(n, 1).unwrap();
        let f = reduced_base(n).unwrap();
        let shift = (n * (n - 1) / 2 + 3 - 2 * n) as i32;
        for x in [1.05, 1.3, 1.7] {
            let lhs = (x - 1.0) * p.eval(x);
            let rhs = x.powi(shift) * f.eval(x);
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "n={n} x={x}");
        }
    }
}

#[test]
fn gray_sweep_does_not_drift() {
    // 2^17 cuts, so the running sum is resynchronised at least once
    let n = 18;
    for r in [1.001, 1.3, 1.999] {
        let big_n = (n * (n - 1) / 2) as f64;
        let scale = ((big_n - 1.0) * f64::ln(r)).exp();
        let mut count = 0u64;
        let mut worst: f64 = 0.0;
        sweep_cuts(n, r, |cut, w| {
            count += 1;
            if count % 509 == 0 || count > (1 << 17) - 4 {
                let exact = raw_weight(n, cut.mask() as u32, r) / scale;
                worst = worst.max((w - exact).abs() / exact);
            }
        })
        .unwrap();
        assert_eq!(count, 1 << 17);
        assert!(worst < 1e-11, "r={r} worst={worst}");
    }
}

fn brute_matching(n: usize, r: f64) -> f64 {
    fn go(free: u32, w: &[Vec<f64>]) -> f64 {
        if free == 0 {
            return 0.0;
        }
        let i = free.trailing_zeros() as usize;
        let rest = free & !(1 << i);
        let mut best = go(rest, w);
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            best = best.max(w[i][j] + go(rest & !(1 << j), w));
        }
        best
    }
    let mut w = vec![vec![0.0; n]; n];
    for (i, j, e) in edges(n) {
        w[i - 1][j - 1] = r.powi(e);
        w[j - 1][i - 1] = r.powi(e);
    }
    go((1 << n) - 1, &w)
}

#[test]
fn matching_dp_equals_brute_force() {
    for n in 2..=8 {
        for r in [1.05, 1.2, 1.5, 1.9] {
            let dp = max_weight_matching(n, r).unwrap();
            let bf = brute_matching(n, r);
            assert!((dp.weight.value() - bf).abs() <= 1e-12 * bf.max(1.0), "n={n} r={r}");
            let mut seen = std::collections::HashSet::new();
            for &(i, j) in &dp.edges {
                assert!(i < j && seen.insert(i) && seen.insert(j));
            }
        }
    }
}

fn brute_mst(n: usize, r: f64) -> f64 {
    let es = edges(n);
    let m = es.len();
    let mut best = f64::INFINITY;
    for subset in 0u32..1 << m {
        if subset.count_ones() as usize != n - 1 {
            continue;
        }
        let mut comp: Vec<usize> = (0..=n).collect();
        let mut total = 0.0;
        for (t, &(i, j, e)) in es.iter().enumerate() {
            if subset >> t & 1 == 1 {
                let (ci, cj) = (comp[i], comp[j]);
                for c in comp.iter_mut() {
                    if *c == cj {
                        *c = ci;
                    }
                }
                total += r.powi(e);
            }
        }
        if (1..=n).all(|v| comp[v] == comp[1]) {
            best = best.min(total);
        }
    }
    best
}

#[test]
fn mst_equals_brute_force() {
    for n in 2..=6 {
        for r in [1.05, 1.5, 2.0] {
            let k = min_spanning_tree_weight(n, r).unwrap().value();
            let b = brute_mst(n, r);
            assert!((k - b).abs() <= 1e-12 * b, "n={n} r={r}");
        }
    }
}
