//! Exhaustive Max-Cut over the `2^(n-1)` canonical cuts of `K_n`.
//!
//! Cuts are visited in reflected Gray-code order over vertices `2..=n`
//! (vertex 1 never moves), so consecutive cuts differ by one vertex and the
//! weight changes by the `n − 1` edges incident to it.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cutmodel::{cut_weight, isolated_cut, num_edges, validate_r, CutSpec, WeightValue};
use crate::error::{Error, Result};

/// Largest `n` accepted by the exhaustive sweep (`2^23` cuts).
pub const ENUMERATION_CAP: usize = 24;

/// Relative tolerance under which two cut weights count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// The running weight is recomputed from scratch this often.
const RESYNC_INTERVAL: u64 = 1 << 16;

/// Shape of a canonical cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutClass {
    /// `C_k = {1, …, k}`.
    Isolated(usize),
    /// `S*_k = {1, …, k, n}`.
    NearIsolated(usize),
    Other,
}

impl CutClass {
    pub fn is_isolated(&self) -> bool {
        matches!(self, CutClass::Isolated(_))
    }
}

impl fmt::Display for CutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutClass::Isolated(k) => write!(f, "C_{k}"),
            CutClass::NearIsolated(k) => write!(f, "S*_{k}"),
            CutClass::Other => f.write_str("other"),
        }
    }
}

impl Serialize for CutClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Classifies a canonical cut as isolated, near-isolated or neither.
///
/// The stored side always contains vertex 1, so a complement of `C_k` or
/// `S*_k` is recognised through its canonical form.
pub fn classify_cut(spec: &CutSpec) -> CutClass {
    let n = spec.n();
    let mask = spec.mask();
    let k = mask.trailing_ones() as usize;
    if k < n && mask == (1u128 << k) - 1 {
        return CutClass::Isolated(k);
    }
    let top = 1u128 << (n - 1);
    if mask & top != 0 {
        let rest = mask & !top;
        let j = rest.trailing_ones() as usize;
        if j + 2 <= n && rest == (1u128 << j) - 1 {
            return CutClass::NearIsolated(j);
        }
    }
    CutClass::Other
}

/// Uniform grid `r_i = low + i · mesh`, generated from the integer index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub low: f64,
    pub high: f64,
    pub mesh: f64,
    count: usize,
    /// `1/mesh` when it is an integer; points are then `(offset + i)/denominator`.
    #[serde(skip)]
    denominator: Option<u64>,
    #[serde(skip)]
    offset: i64,
}

impl Grid {
    /// All points `low, low + mesh, …` up to and including `high`.
    pub fn uniform(low: f64, high: f64, mesh: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && mesh.is_finite()) {
            return Err(Error::InvalidGrid("bounds and mesh must be finite".into()));
        }
        if !(low < high) {
            return Err(Error::InvalidGrid(format!("need low < high, got {low} >= {high}")));
        }
        if !(mesh > 0.0) {
            return Err(Error::InvalidGrid(format!("mesh must be positive, got {mesh}")));
        }
        let steps = ((high - low) / mesh * (1.0 + 1e-12)).floor() as usize;
        let inv = 1.0 / mesh;
        let denominator = if (inv - inv.round()).abs() < 1e-9 * inv && inv.round() >= 1.0 {
            Some(inv.round() as u64)
        } else {
            None
        };
        let offset = denominator.map_or(0, |d| (low * d as f64).round() as i64);
        let denominator = denominator.filter(|&d| (offset as f64 / d as f64 - low).abs() < 1e-12);
        Ok(Grid {
            low,
            high,
            mesh,
            count: steps + 1,
            denominator,
            offset,
        })
    }

    /// `(1.001, 1.999)` at mesh `0.001`.
    pub fn standard() -> Self {
        Grid::uniform(1.001, 1.999, 0.001).expect("valid constant grid")
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.denominator {
            Some(d) => (self.offset + i as i64) as f64 / d as f64,
            None => self.low + i as f64 * self.mesh,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Edge weights `r^(e − s)` of `K_n`, scaled so the largest is 1 for
/// `r >= 1`; `log_scale = s ln r`.
struct ScaledWeights {
    n: usize,
    w: Vec<f64>,
    log_scale: f64,
}

impl ScaledWeights {
    fn new(n: usize, r: f64) -> Self {
        let big_n = num_edges(n) as i32;
        let shift = if r >= 1.0 { big_n - 1 } else { 0 };
        let mut w = vec![0.0; n * n];
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                idx += 1;
                let v = r.powi(big_n - idx - shift);
                w[i * n + j] = v;
                w[j * n + i] = v;
            }
        }
        ScaledWeights {
            n,
            w,
            log_scale: shift as f64 * r.ln(),
        }
    }

    fn weight(&self, mask: u32) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                if (mask >> i ^ mask >> j) & 1 == 1 {
                    total += self.w[i * n + j];
                }
            }
        }
        total
    }

    /// Weight change when vertex `v` switches sides in `mask`.
    #[inline]
    fn flip_delta(&self, mask: u32, v: usize) -> f64 {
        let row = &self.w[v * self.n..(v + 1) * self.n];
        // bit u of `differs` is set when u and v are on opposite sides
        let differs = mask ^ 0u32.wrapping_sub(mask >> v & 1);
        let mut delta = 0.0;
        for (u, &wu) in row.iter().enumerate() {
            let sign = 1.0 - 2.0 * (differs >> u & 1) as f64;
            delta += sign * wu;
        }
        delta
    }
}

/// Visits every canonical cut of `K_n` in Gray-code order with its scaled
/// weight (see [`sweep_cuts`]). Returns the incrementally maintained weight
/// of the last cut and its mask.
fn gray_sweep<F: FnMut(u32, f64)>(weights: &ScaledWeights, mut visit: F) -> (u32, f64) {
    let n = weights.n;
    let mut mask: u32 = 1;
    let mut current = weights.weight(mask);
    visit(mask, current);
    let total: u64 = 1 << (n - 1);
    for step in 1..total {
        let v = step.trailing_zeros() as usize + 1;
        current += weights.flip_delta(mask, v);
        mask ^= 1 << v;
        if step % RESYNC_INTERVAL == 0 {
            current = weights.weight(mask);
        }
        visit(mask, current);
    }
    (mask, current)
}

fn check_enumeration_size(n: usize) -> Result<()> {
    if !(2..=ENUMERATION_CAP).contains(&n) {
        return Err(Error::SizeOutOfRange {
            n,
            min: 2,
            max: ENUMERATION_CAP,
            what: "exhaustive enumeration",
        });
    }
    Ok(())
}

/// Calls `visit(cut, weight)` for all `2^(n-1)` canonical cuts in Gray-code
/// order. Weights are divided by `r^(N-1)` when `r >= 1`; the factor's log
/// is returned.
pub fn sweep_cuts<F: FnMut(CutSpec, f64)>(n: usize, r: f64, mut visit: F) -> Result<f64> {
    check_enumeration_size(n)?;
    validate_r(r)?;
    let weights = ScaledWeights::new(n, r);
    gray_sweep(&weights, |mask, w| {
        visit(CutSpec::from_mask(n, mask as u128).expect("mask within n"), w)
    });
    Ok(weights.log_scale)
}

/// Outcome of one exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationResult {
    pub n: usize,
    pub r: f64,
    pub best: CutSpec,
    pub best_weight: WeightValue,
    pub runner_up: CutSpec,
    /// `W(best) − W(runner_up) >= 0`.
    pub margin: f64,
    /// `margin / W(best)`.
    pub relative_margin: f64,
    /// Other cuts within [`TIE_TOLERANCE`] of the best, heaviest first.
    pub ties: Vec<CutSpec>,
}

impl EnumerationResult {
    /// The best cut, except that an isolated cut among the ties is
    /// preferred over a non-isolated best.
    pub fn preferred_winner(&self) -> CutSpec {
        if classify_cut(&self.best).is_isolated() {
            return self.best;
        }
        self.ties
            .iter()
            .copied()
            .find(|c| classify_cut(c).is_isolated())
            .unwrap_or(self.best)
    }
}

/// Maximum-weight cut of `K_n` at `r` by exhaustive Gray-code enumeration.
/// `r` outside `(1, 2)` is accepted.
pub fn max_cut_exhaustive(n: usize, r: f64) -> Result<EnumerationResult> {
    check_enumeration_size(n)?;
    validate_r(r)?;
    let weights = ScaledWeights::new(n, r);

    let mut best = (0u32, f64::NEG_INFINITY);
    let mut second = (0u32, f64::NEG_INFINITY);
    let mut near: Vec<(u32, f64)> = Vec::new();
    gray_sweep(&weights, |mask, w| {
        if w > best.1 {
            second = best;
            best = (mask, w);
            let floor = w * (1.0 - TIE_TOLERANCE);
            near.retain(|&(_, x)| x >= floor);
            near.push((mask, w));
        } else {
            if w > second.1 {
                second = (mask, w);
            }
            if w >= best.1 * (1.0 - TIE_TOLERANCE) {
                near.push((mask, w));
            }
        }
    });

    let spec = |m: u32| CutSpec::from_mask(n, m as u128).expect("mask within n");
    let best_cut = spec(best.0);
    let runner_up = spec(second.0);
    let best_weight = cut_weight(&best_cut, r)?;
    let runner_weight = cut_weight(&runner_up, r)?;
    let margin = match (best_weight.direct, runner_weight.direct) {
        (Some(a), Some(b)) => a - b,
        _ => (best.1 - second.1) * weights.log_scale.exp(),
    };
    near.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let ties = near
        .into_iter()
        .filter(|&(m, _)| m != best.0)
        .map(|(m, _)| spec(m))
        .collect();
    Ok(EnumerationResult {
        n,
        r,
        best: best_cut,
        relative_margin: margin / best_weight.value(),
        best_weight,
        runner_up,
        margin,
        ties,
    })
}

/// Heaviest cut among `C_1, …, C_⌊n/2⌋` at `r`, returned as `(k, weight)`.
pub fn best_isolated(n: usize, r: f64) -> Result<(usize, WeightValue)> {
    let mut best: Option<(usize, WeightValue)> = None;
    for k in 1..=n / 2 {
        let w = cut_weight(&isolated_cut(k, n)?, r)?;
        let better = match &best {
            None => true,
            Some((_, b)) => w.log > b.log,
        };
        if better {
            best = Some((k, w));
        }
    }
    best.ok_or(Error::SizeOutOfRange {
        n,
        min: 2,
        max: usize::MAX,
        what: "isolated cuts",
    })
}

/// The globally best cut at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub r: f64,
    pub winner: CutSpec,
    pub class: CutClass,
    pub weight_log: f64,
    pub margin: f64,
    /// Another cut was within the tie tolerance.
    pub tied: bool,
}

/// Consecutive grid points `start..end` won by the same cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSegment {
    pub winner: CutSpec,
    pub class: CutClass,
    pub start: usize,
    pub end: usize,
    /// First grid point of the segment.
    pub r_first: f64,
    /// Last grid point of the segment.
    pub r_last: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub n: usize,
    pub grid: Grid,
    pub points: Vec<PhasePoint>,
    pub segments: Vec<PhaseSegment>,
}

impl PhaseDiagram {
    /// Segment classes in increasing `r`.
    pub fn winner_sequence(&self) -> Vec<CutClass> {
        self.segments.iter().map(|s| s.class).collect()
    }
}

/// Runs [`max_cut_exhaustive`] at every grid point (in parallel) and merges
/// runs of identical winners into segments.
pub fn phase_diagram(n: usize, grid: &Grid) -> Result<PhaseDiagram> {
    check_enumeration_size(n)?;
    let points: Vec<PhasePoint> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let r = grid.point(i);
            let res = max_cut_exhaustive(n, r)?;
            let winner = res.preferred_winner();
            let weight_log = if winner == res.best {
                res.best_weight.log
            } else {
                cut_weight(&winner, r)?.log
            }
            .unwrap_or(f64::NEG_INFINITY);
            Ok(PhasePoint {
                r,
                winner,
                class: classify_cut(&winner),
                weight_log,
                margin: res.margin,
                tied: !res.ties.is_empty(),
            })
        })
        .collect::<Result<_>>()?;
    let segments = segments_of(&points);
    Ok(PhaseDiagram {
        n,
        grid: *grid,
        points,
        segments,
    })
}

fn segments_of(points: &[PhasePoint]) -> Vec<PhaseSegment> {
    let mut segments: Vec<PhaseSegment> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match segments.last_mut() {
            Some(s) if s.winner == p.winner => {
                s.end = i + 1;
                s.r_last = p.r;
            }
            _ => segments.push(PhaseSegment {
                winner: p.winner,
                class: p.class,
                start: i,
                end: i + 1,
                r_first: p.r,
                r_last: p.r,
            }),
        }
    }
    segments
}

/// Sequence of `k` for the best isolated cut along the grid, with
/// consecutive repeats collapsed.
pub fn isolated_transition_sequence(n: usize, grid: &Grid) -> Result<Vec<usize>> {
    let ks: Vec<usize> = (0..grid.len())
        .into_par_iter()
        .map(|i| best_isolated(n, grid.point(i)).map(|(k, _)| k))
        .collect::<Result<_>>()?;
    let mut seq = ks;
    seq.dedup();
    Ok(seq)
}
