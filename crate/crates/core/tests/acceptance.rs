//! End-to-end reproduction checks. Runs without the libtest harness so that
//! every check reports one PASS/FAIL line even when an earlier one fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use geocut::analysis::{
    bound_comparison, delta_gap, exponent_means, greedy_matching, gutin_yeo_bound,
    poljak_turzik_bound, scaling_error_table, total_weight, SCALING_SAMPLE,
};
use geocut::cutmodel::{cut_vector, isolated_cut, CutSpec};
use geocut::enumerate::{
    isolated_transition_sequence, max_cut_exhaustive, phase_diagram, CutClass, Grid,
};
use geocut::poly::{poly_between, poly_from_cuts, threshold_polynomial, threshold_polynomial_recursive};
use geocut::rootfind::{check_monotonicity, threshold_table, RootFinder};
use geocut::verify::{
    verify_exhaustive, verify_exhaustive_with, verify_near_isolated, ExhaustiveOptions,
    DEFAULT_POINTS_PER_INTERVAL,
};
use num_rational::Ratio;

mod common;

const THRESHOLDS_6_TO_20: [(usize, &[f64]); 15] = [
    (6, &[1.243347, 1.058812]),
    (7, &[1.229318, 1.078366]),
    (8, &[1.214506, 1.084615, 1.024141]),
    (9, &[1.200695, 1.085595, 1.035149]),
    (10, &[1.188280, 1.084320, 1.040361, 1.012226]),
    (11, &[1.177240, 1.082068, 1.042719, 1.018839]),
    (12, &[1.167434, 1.079426, 1.043572, 1.022554, 1.007037]),
    (13, &[1.158700, 1.076677, 1.043595, 1.024651, 1.011279]),
    (14, &[1.150889, 1.073959, 1.043150, 1.025794, 1.013920, 1.004417]),
    (15, &[1.143869, 1.071340, 1.042441, 1.026351, 1.015585, 1.007290]),
    (16, &[1.137530, 1.068850, 1.041587, 1.026538, 1.016632, 1.009206, 1.002953]),
    (17, &[1.131778, 1.066499, 1.040660, 1.026488, 1.017272, 1.010504, 1.004984]),
    (18, &[1.126535, 1.064288, 1.039702, 1.026284, 1.017638, 1.011386, 1.006409, 1.002071]),
    (19, &[1.121736, 1.062212, 1.038741, 1.025980, 1.017816, 1.011983, 1.007424, 1.003558]),
    (20, &[1.117326, 1.060264, 1.037794, 1.025612, 1.017863, 1.012377, 1.008152, 1.004643]),
];

const THRESHOLDS_50: [f64; 24] = [
    1.059214, 1.031923, 1.021270, 1.015563, 1.012020, 1.009616, 1.007883, 1.006577, 1.005558,
    1.004741, 1.004071, 1.003510, 1.003032, 1.002619, 1.002257, 1.001934, 1.001644, 1.001380,
    1.001136, 1.000908, 1.000694, 1.000488, 1.000290, 1.000096,
];

/// (n, k, actual r_k - 1, prediction, error %) as printed.
const SCALING_ROWS: [(usize, usize, f64, f64, f64); 12] = [
    (10, 1, 0.1883, 0.1664, -11.6),
    (10, 2, 0.0843, 0.0835, -1.0),
    (10, 3, 0.0404, 0.0412, 2.0),
    (15, 1, 0.1439, 0.1282, -10.9),
    (15, 2, 0.0713, 0.0717, 0.5),
    (15, 3, 0.0424, 0.0443, 4.4),
    (20, 1, 0.1173, 0.1051, -10.4),
    (20, 2, 0.0603, 0.0611, 1.5),
    (20, 3, 0.0378, 0.0400, 5.9),
    (30, 2, 0.0461, 0.0473, 2.7),
    (30, 3, 0.0300, 0.0323, 7.8),
    (30, 4, 0.0214, 0.0235, 10.0),
];

/// A printed figure with the size of one unit in its last digit.
#[derive(Clone, Copy)]
struct Printed {
    value: f64,
    unit: f64,
}

const fn printed(value: f64, unit: f64) -> Printed {
    Printed { value, unit }
}

impl Printed {
    fn matches(&self, x: f64) -> bool {
        (x - self.value).abs() <= 0.5 * self.unit * (1.0 + 1e-9)
    }
}

struct BoundRow {
    n: usize,
    r: f64,
    k: usize,
    optimum: Printed,
    gy: Printed,
    gap: Printed,
}

const BOUND_ROWS: [BoundRow; 4] = [
    BoundRow { n: 8, r: 1.05, k: 3, optimum: printed(35.88, 0.01), gy: printed(33.20, 0.01), gap: printed(7.5, 0.1) },
    BoundRow { n: 8, r: 1.10, k: 2, optimum: printed(89.33, 0.01), gy: printed(76.86, 0.01), gap: printed(14.0, 0.1) },
    BoundRow { n: 8, r: 1.50, k: 1, optimum: printed(1.60e5, 0.01e5), gy: printed(1.14e5, 0.01e5), gap: printed(29.1, 0.1) },
    BoundRow { n: 10, r: 1.20, k: 1, optimum: printed(1.47e4, 0.01e4), gy: printed(1.07e4, 0.01e4), gap: printed(27.1, 0.1) },
];

/// Winners in increasing r and printed boundaries with their decimals.
struct SmallN {
    n: usize,
    winners: &'static [CutClass],
    boundaries: &'static [(f64, i32)],
}

const SMALL_N: [SmallN; 3] = [
    SmallN {
        n: 4,
        winners: &[CutClass::NearIsolated(1), CutClass::Isolated(1)],
        boundaries: &[(1.324, 3)],
    },
    SmallN {
        n: 5,
        winners: &[CutClass::Isolated(2), CutClass::NearIsolated(1), CutClass::Isolated(1)],
        boundaries: &[(1.22, 2), (1.28, 2)],
    },
    SmallN {
        n: 6,
        winners: &[
            CutClass::Isolated(3),
            CutClass::NearIsolated(2),
            CutClass::Isolated(2),
            CutClass::Isolated(1),
        ],
        boundaries: &[(1.04, 2), (1.06, 2), (1.24, 2)],
    },
];

const K4_CUT_VECTORS: [(&str, &str); 8] = [
    ("1000", "111000"),
    ("1001", "110011"),
    ("1010", "101101"),
    ("1011", "100110"),
    ("1100", "011110"),
    ("1101", "010101"),
    ("1110", "001011"),
    ("1111", "000000"),
];

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn thresholds() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut check = |n: usize, expected: &[f64]| -> Result<(), String> {
        let t = threshold_table(n).map_err(|e| e.to_string())?;
        for (i, &want) in expected.iter().enumerate() {
            let got = t.r(i + 1).ok_or(format!("missing r_{}({n})", i + 1))?;
            let dev = (got - want).abs();
            worst = worst.max(dev);
            count += 1;
            ensure(dev <= 5e-7, || format!("r_{}({n}) = {got:.9}, printed {want}", i + 1))?;
        }
        Ok(())
    };
    for (n, row) in THRESHOLDS_6_TO_20 {
        check(n, row)?;
    }
    check(50, &THRESHOLDS_50)?;
    Ok(format!("{count} printed entries, max deviation {worst:.2e}"))
}

fn seven_two_example() -> Result<String, String> {
    let want_pos = [19u32, 14];
    let want_neg = [9u32, 8, 7, 6];
    for p in [
        threshold_polynomial(7, 2),
        threshold_polynomial_recursive(7, 2),
        poly_from_cuts(7, 2),
    ] {
        let p = p.map_err(|e| e.to_string())?;
        ensure(p.pos() == want_pos && p.neg() == want_neg, || format!("got {p}"))?;
    }
    let (a, b) = exponent_means(7, 2).map_err(|e| e.to_string())?;
    ensure(a == Ratio::new(33, 2), || format!("mean of positive exponents {a}"))?;
    ensure(b == Ratio::new(15, 2), || format!("mean of negative exponents {b}"))?;
    let d = delta_gap(7, 2).map_err(|e| e.to_string())?;
    ensure(d == Ratio::from_integer(9) && a - b == d, || format!("delta {d}"))?;
    Ok("P^{7,2} exponents, means 33/2 and 15/2, delta 9".into())
}

fn three_routes() -> Result<String, String> {
    let mut count = 0;
    for n in 6..=30usize {
        for k in 1..=n / 2 - 1 {
            let a = threshold_polynomial(n, k).map_err(|e| e.to_string())?;
            let b = threshold_polynomial_recursive(n, k).map_err(|e| e.to_string())?;
            let c = poly_from_cuts(n, k).map_err(|e| e.to_string())?;
            ensure(a == b && a.pos() == c.pos() && a.neg() == c.neg(), || {
                format!("routes differ at n={n} k={k}")
            })?;
            ensure(a.value_at_one() == 2 * k as i64 - n as i64 + 1, || {
                format!("P^{{{n},{k}}}(1) = {}", a.value_at_one())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, k) pairs"))
}

fn scaling_rows() -> Result<String, String> {
    let rows = scaling_error_table(&SCALING_SAMPLE).map_err(|e| e.to_string())?;
    for (row, &(n, k, actual, predicted, err)) in rows.iter().zip(SCALING_ROWS.iter()) {
        ensure(row.n == n && row.k == k, || "row order".into())?;
        ensure((row.actual - actual).abs() <= 5e-5, || {
            format!("({n},{k}) actual {:.6} vs {actual}", row.actual)
        })?;
        ensure((row.predicted - predicted).abs() <= 5e-5, || {
            format!("({n},{k}) prediction {:.6} vs {predicted}", row.predicted)
        })?;
        ensure((row.error_percent - err).abs() <= 0.2, || {
            format!("({n},{k}) error {:.3}% vs {err}%", row.error_percent)
        })?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn bound_rows() -> Result<String, String> {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for row in &BOUND_ROWS {
        let b = bound_comparison(row.n, row.r).map_err(|e| e.to_string())?;
        let label = format!("(n={}, r={:.2})", row.n, row.r);
        if b.optimal_k != row.k {
            failures.push(format!("{label} k = {} vs {}", b.optimal_k, row.k));
        }
        for (name, p, got) in [
            ("optimum", row.optimum, b.optimum),
            ("GY", row.gy, b.gy_bound),
            ("gap", row.gap, b.gap_gy),
        ] {
            if !p.matches(got) {
                failures.push(format!("{label} {name} {got:.4} vs printed {}", p.value));
            }
        }
        // the same bound with the greedy pairing {(1,2),(3,4),...} instead of a maximum matching
        let greedy = (total_weight(row.n, row.r).unwrap().value()
            + greedy_matching(row.n, row.r).unwrap().weight.value())
            / 2.0;
        let greedy_gap = 100.0 * (b.optimum - greedy) / b.optimum;
        notes.push(format!("{label} greedy-pairing GY {greedy:.4}, gap {greedy_gap:.2}%"));
    }
    if failures.is_empty() {
        Ok("4 rows".into())
    } else {
        Err(format!("{}; for reference: {}", failures.join("; "), notes.join("; ")))
    }
}

fn plastic_number() -> f64 {
    // real root of r^3 - r - 1 by Cardano
    let s = 69f64.sqrt();
    ((9.0 + s) / 18.0).cbrt() + ((9.0 - s) / 18.0).cbrt()
}

fn small_n_structure() -> Result<String, String> {
    let grid = Grid::standard();
    let finder = RootFinder::default();
    let mut exact = Vec::new();
    for case in &SMALL_N {
        let pd = phase_diagram(case.n, &grid).map_err(|e| e.to_string())?;
        let seq = pd.winner_sequence();
        ensure(seq == case.winners, || format!("n={}: winners {seq:?}", case.n))?;
        for (w, &(want, decimals)) in pd.segments.windows(2).zip(case.boundaries) {
            let on_grid = w[1].r_first;
            let tol = 0.5 * 10f64.powi(-decimals) + grid.mesh;
            ensure((on_grid - want).abs() <= tol * (1.0 + 1e-9), || {
                format!("n={}: grid boundary {on_grid} vs printed {want}", case.n)
            })?;
            let diff = poly_between(&w[0].winner, &w[1].winner).map_err(|e| e.to_string())?;
            let root = finder
                .find_in(&diff, w[0].r_last, w[1].r_first)
                .map_err(|e| e.to_string())?;
            ensure(root > w[0].r_last && root <= on_grid, || {
                format!("n={}: crossing {root} outside grid cell", case.n)
            })?;
            exact.push(root);
        }
    }
    let rho = plastic_number();
    ensure((exact[0] - rho).abs() <= 1e-9, || format!("n=4 crossing {} vs {rho}", exact[0]))?;
    ensure((exact[0] - 1.324).abs() <= grid.mesh, || "n=4 crossing vs 1.324".into())?;
    for (root, tick) in [(exact[3], 1.041), (exact[4], 1.062)] {
        ensure((root - tick).abs() <= grid.mesh, || format!("n=6 crossing {root} vs {tick}"))?;
    }

    // violation sets of the exhaustive check for n = 4 and n = 6
    let opts = ExhaustiveOptions {
        diagnostic: true,
        ..ExhaustiveOptions::new(grid)
    };
    for (n, lo, hi) in [(4, 1.0, exact[0]), (6, exact[3], exact[4])] {
        let rep = verify_exhaustive_with(n, n, &opts).map_err(|e| e.to_string())?;
        let expected: Vec<f64> = grid.points().into_iter().filter(|&r| r > lo && r < hi).collect();
        let got: Vec<f64> = rep.violations.iter().map(|v| v.r).collect();
        ensure(got == expected, || format!("n={n}: {} violations, expected {}", got.len(), expected.len()))?;
        ensure(rep.violations.iter().all(|v| matches!(v.winner_class, CutClass::NearIsolated(_))), || {
            format!("n={n}: non-near-isolated winner")
        })?;
    }
    Ok(format!(
        "boundaries {}",
        exact.iter().map(|r| format!("{r:.10}")).collect::<Vec<_>>().join(", ")
    ))
}

fn exhaustive() -> Result<String, String> {
    let fine = verify_exhaustive(7, 16, &Grid::standard()).map_err(|e| e.to_string())?;
    ensure(fine.upheld(), || format!("{} violations for n = 7..16", fine.violations.len()))?;
    let coarse = verify_exhaustive_with(
        17,
        21,
        &ExhaustiveOptions {
            interval_midpoints: true,
            ..ExhaustiveOptions::new(Grid::uniform(1.01, 1.99, 0.01).unwrap())
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(coarse.upheld(), || format!("{} violations for n = 17..21", coarse.violations.len()))?;
    Ok(format!(
        "{} + {} (n, r) points, 0 violations",
        fine.checked_count, coarse.checked_count
    ))
}

fn near_isolated() -> Result<String, String> {
    let rep = verify_near_isolated(7, 100, DEFAULT_POINTS_PER_INTERVAL).map_err(|e| e.to_string())?;
    ensure(rep.upheld(), || format!("{} violations", rep.violations.len()))?;
    ensure(rep.indeterminate.is_empty(), || format!("{} exact ties", rep.indeterminate.len()))?;
    Ok(format!(
        "{} comparisons ({} settled by exact evaluation), 0 violations",
        rep.checked_count, rep.resolved_exactly
    ))
}

fn properties() -> Result<String, String> {
    for (x, delta) in K4_CUT_VECTORS {
        let got = cut_vector(&CutSpec::from_indicator(x).unwrap()).to_string();
        ensure(got == delta, || format!("x = {x}: {got}"))?;
    }
    for (k, want) in [(2, "011111111110000000000"), (3, "001111011111111000000")] {
        let got = cut_vector(&isolated_cut(k, 7).unwrap()).to_string();
        ensure(got == want, || format!("C_{k} in K_7: {got}"))?;
    }
    for n in 3..=10 {
        for k in 2..n {
            let big = cut_vector(&isolated_cut(k, n).unwrap()).to_string();
            let small = cut_vector(&isolated_cut(k - 1, n - 1).unwrap()).to_string();
            let joined = "0".repeat(k - 1) + &"1".repeat(n - k) + &small;
            ensure(big == joined, || format!("concatenation n={n} k={k}"))?;
        }
    }
    for n in 6..=30usize {
        for k in 1..=n / 2 - 2 {
            for r in [1.001, 1.01, 1.1, 1.5, 1.9, 1.99] {
                ensure(common::reduction_sign(n, k, r).is_gt(), || {
                    format!("reduction n={n} k={k} r={r}")
                })?;
            }
        }
    }
    let tables: Vec<_> = (6..=50).map(|n| threshold_table(n).unwrap()).collect();
    let mono = check_monotonicity(&tables).map_err(|e| e.to_string())?;
    ensure(mono.r2_9_exceeds_r2_8 == Some(true), || "r_2(9) <= r_2(8)".into())?;
    let grid = Grid::standard();
    for n in 7..=12usize {
        let seq = isolated_transition_sequence(n, &grid).map_err(|e| e.to_string())?;
        let want: Vec<usize> = (1..=n / 2).rev().collect();
        ensure(seq == want, || format!("n={n}: isolated transitions {seq:?}"))?;
    }
    let mut instances = 0;
    for n in 4..=12 {
        for r in [1.01, 1.05, 1.1, 1.2, 1.5, 1.9] {
            let opt = max_cut_exhaustive(n, r).unwrap().best_weight.value();
            let gy = gutin_yeo_bound(n, r).unwrap();
            let pt = poljak_turzik_bound(n, r).unwrap();
            ensure(gy <= opt * (1.0 + 1e-12) && pt <= opt * (1.0 + 1e-12), || {
                format!("bound above optimum at n={n} r={r}")
            })?;
            instances += 1;
        }
    }
    Ok(format!(
        "r_2(9) > r_2(8) holds; {} non-monotone (k, n) steps for k >= 2; bounds sound on {instances} instances",
        mono.increases_in_n.len()
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("threshold values n = 6..20 and n = 50", thresholds),
        ("P^{7,2} and its exponent means", seven_two_example),
        ("three constructions of P^{n,k}, n = 6..30", three_routes),
        ("scaling approximation rows", scaling_rows),
        ("generic lower bounds against the optimum", bound_rows),
        ("phase structure for n = 4, 5, 6", small_n_structure),
        ("exhaustive verification n = 7..21", exhaustive),
        ("near-isolated verification n = 7..100", near_isolated),
        ("structural properties", properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("\n{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
