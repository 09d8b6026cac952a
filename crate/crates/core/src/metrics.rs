//! Front quality metrics and performance profiles.
//!
//! Spread metrics follow the usual multiobjective benchmarking definitions.
//! For objective `j`, sort the front by `f_j` and let `δ_{i,j}` be the gaps
//! between consecutive values, with `δ_{0,j}` and `δ_{N,j}` the gaps to the
//! extreme values of a reference front when those are supplied (zero
//! otherwise). Then
//!
//! - `Γ = max_j max_i δ_{i,j}`
//! - `Δ = max_j (δ_{0,j} + δ_{N,j} + Σ_{i=1}^{N−1} |δ_{i,j} − δ̄_j|) / (δ_{0,j} + δ_{N,j} + (N−1) δ̄_j)`
//!
//! where `δ̄_j` is the mean of the inner gaps. A zero denominator gives `Δ = 0`.

use crate::error::{Error, Result};
use crate::math::{exp, ln};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Membership tolerance of [`purity`].
pub const PURITY_TOL: f64 = 1e-9;

/// Offset of the larger-is-better cost transform.
pub const INVERT_EPS: f64 = 1e-12;

/// Objective vectors produced by one solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub points: Vec<Vec<f64>>,
    pub source: String,
}

impl Front {
    pub fn new(source: impl Into<String>, points: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(&points)?;
        Ok(Self { points, source: source.into() })
    }

    /// The nondominated subset of `points`.
    pub fn filtered(source: impl Into<String>, points: &[Vec<f64>]) -> Result<Self> {
        Ok(Self { points: filter_nondominated(points)?, source: source.into() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Objective count, `None` for an empty front.
    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }
}

fn check_dims(points: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = points.first() else { return Ok(0) };
    let m = first.len();
    match points.iter().find(|p| p.len() != m) {
        Some(p) => Err(Error::DimensionMismatch { expected: m, found: p.len() }),
        None => Ok(m),
    }
}

/// `a ≤ b` componentwise with at least one strict inequality.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// The points no other point dominates, in input order. Duplicates are kept.
///
/// A point can only be dominated by one that precedes it lexicographically,
/// so the points are visited in lexicographic order and compared against the
/// survivors so far.
pub fn filter_nondominated(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    check_dims(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex(&points[a], &points[b]));
    let mut keep = vec![false; points.len()];
    let mut survivors: Vec<usize> = Vec::new();
    for &i in &order {
        if !survivors.iter().any(|&s| dominates(&points[s], &points[i])) {
            survivors.push(i);
            keep[i] = true;
        }
    }
    Ok(points.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| p.clone()).collect())
}

/// The filtered union of several fronts.
pub fn reference_front(fronts: &[Front]) -> Result<Front> {
    let all: Vec<Vec<f64>> = fronts.iter().flat_map(|f| f.points.iter().cloned()).collect();
    Front::filtered("reference", &all)
}

fn near(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= PURITY_TOL)
}

/// Share of `front` that lies on `reference`; `None` for an empty front.
pub fn purity(front: &Front, reference: &Front) -> Option<f64> {
    if front.is_empty() {
        return None;
    }
    let hits = front.points.iter().filter(|p| reference.points.iter().any(|r| near(p, r))).count();
    Some(hits as f64 / front.len() as f64)
}

/// Per-objective extremes `(min, max)` of a reference front.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Extremes {
    pub fn of(front: &Front) -> Option<Self> {
        let m = front.dim()?;
        let mut lower = vec![f64::INFINITY; m];
        let mut upper = vec![f64::NEG_INFINITY; m];
        for p in &front.points {
            for j in 0..m {
                lower[j] = lower[j].min(p[j]);
                upper[j] = upper[j].max(p[j]);
            }
        }
        Some(Self { lower, upper })
    }
}

/// `(δ_0, inner gaps, δ_N)` for objective `j`.
fn gaps(front: &Front, j: usize, extremes: Option<&Extremes>) -> (f64, Vec<f64>, f64) {
    let mut v: Vec<f64> = front.points.iter().map(|p| p[j]).collect();
    v.sort_by(f64::total_cmp);
    let inner = v.windows(2).map(|w| w[1] - w[0]).collect();
    let (d0, dn) = match extremes {
        Some(e) => ((v[0] - e.lower[j]).max(0.0), (e.upper[j] - v[v.len() - 1]).max(0.0)),
        None => (0.0, 0.0),
    };
    (d0, inner, dn)
}

/// `Γ`; `None` for fewer than two points.
pub fn spread_gamma(front: &Front, extremes: Option<&Extremes>) -> Option<f64> {
    let m = front.dim()?;
    if front.len() < 2 {
        return None;
    }
    let mut gamma: f64 = 0.0;
    for j in 0..m {
        let (d0, inner, dn) = gaps(front, j, extremes);
        gamma = inner.into_iter().fold(gamma.max(d0).max(dn), f64::max);
    }
    Some(gamma)
}

/// `Δ`; `None` for fewer than two points.
pub fn spread_delta(front: &Front, extremes: Option<&Extremes>) -> Option<f64> {
    let m = front.dim()?;
    if front.len() < 2 {
        return None;
    }
    let mut delta: f64 = 0.0;
    for j in 0..m {
        let (d0, inner, dn) = gaps(front, j, extremes);
        let count = inner.len() as f64;
        let mean = inner.iter().sum::<f64>() / count;
        let dev: f64 = inner.iter().map(|d| (d - mean).abs()).sum();
        let den = d0 + dn + count * mean;
        let value = if den > 0.0 { (d0 + dn + dev) / den } else { 0.0 };
        delta = delta.max(value);
    }
    Some(delta)
}

/// Componentwise max of the union plus 10% of its range per axis (0.1 when
/// the range is zero).
pub fn default_reference_point(fronts: &[Front]) -> Option<Vec<f64>> {
    let all: Vec<Vec<f64>> = fronts.iter().flat_map(|f| f.points.iter().cloned()).collect();
    let e = Extremes::of(&Front { points: all, source: String::new() })?;
    Some(
        e.lower
            .iter()
            .zip(&e.upper)
            .map(|(lo, hi)| {
                let r = hi - lo;
                hi + if r > 0.0 { 0.1 * r } else { 0.1 }
            })
            .collect(),
    )
}

/// Points not strictly better than `ref_point` in every objective; they add
/// no volume and are dropped by [`hypervolume`].
pub fn points_beyond(points: &[Vec<f64>], ref_point: &[f64]) -> usize {
    points.iter().filter(|p| !strictly_below(p, ref_point)).count()
}

fn strictly_below(p: &[f64], r: &[f64]) -> bool {
    p.iter().zip(r).all(|(a, b)| a < b)
}

/// Volume dominated by `points` and bounded by `ref_point`; exact for
/// `m ≤ 3`.
pub fn hypervolume(points: &[Vec<f64>], ref_point: &[f64]) -> Result<f64> {
    let m = ref_point.len();
    if m > 3 {
        return Err(Error::Unsupported(alloc::format!("hypervolume for {m} objectives")));
    }
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: p.len() });
    }
    let inside: Vec<Vec<f64>> = points.iter().filter(|p| strictly_below(p, ref_point)).cloned().collect();
    if inside.is_empty() {
        return Ok(0.0);
    }
    let front = filter_nondominated(&inside)?;
    Ok(match m {
        1 => ref_point[0] - front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            let pts: Vec<[f64; 2]> = front.iter().map(|p| [p[0], p[1]]).collect();
            hv2(pts, ref_point[0], ref_point[1])
        }
        _ => hv3(&front, ref_point),
        // m == 0 cannot reach here with points inside
    })
}

/// Sweep over the first objective.
fn hv2(mut pts: Vec<[f64; 2]>, r0: f64, r1: f64) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut best1 = r1;
    for (i, p) in pts.iter().enumerate() {
        best1 = best1.min(p[1]);
        let next0 = pts.get(i + 1).map_or(r0, |q| q[0]);
        area += (next0 - p[0]) * (r1 - best1);
    }
    area
}

/// Slices along the third objective, each slice a 2-D sweep.
fn hv3(front: &[Vec<f64>], r: &[f64]) -> f64 {
    let mut order: Vec<&Vec<f64>> = front.iter().collect();
    order.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut active: Vec<[f64; 2]> = Vec::new();
    for (i, p) in order.iter().enumerate() {
        active.push([p[0], p[1]]);
        let next = order.get(i + 1).map_or(r[2], |q| q[2]);
        if next > p[2] {
            volume += hv2(active.clone(), r[0], r[1]) * (next - p[2]);
        }
    }
    volume
}

/// `ρ_s(τ)` sampled at increasing `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Curves plus the indices of problems dropped because every solver failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub curves: Vec<ProfileCurve>,
    pub dropped: Vec<usize>,
}

/// `1/(v + 1e-12)`, turning a larger-is-better value into a cost.
pub fn inverted_cost(value: f64) -> f64 {
    1.0 / (value + INVERT_EPS)
}

/// Performance profiles over `costs[problem][solver]`.
///
/// `None`, infinite or NaN costs are failures and never count at finite `τ`.
/// The `τ` grid is `grid_points` log-spaced values on `[1, τ_max]` merged
/// with every finite ratio, so each curve is exact at its jumps.
pub fn performance_profile(labels: &[String], costs: &[Vec<Option<f64>>], grid_points: usize) -> Result<Profile> {
    let s = labels.len();
    if s == 0 {
        return Err(Error::Config(String::from("performance profile needs at least one solver")));
    }
    let mut ratios: Vec<Vec<f64>> = Vec::new();
    let mut dropped = Vec::new();
    for (p, row) in costs.iter().enumerate() {
        if row.len() != s {
            return Err(Error::DimensionMismatch { expected: s, found: row.len() });
        }
        let clean: Vec<Option<f64>> = row.iter().map(|c| c.filter(|v| v.is_finite())).collect();
        if let Some(v) = clean.iter().flatten().find(|v| !(**v > 0.0)) {
            return Err(Error::Domain(alloc::format!("cost {v} is not positive")));
        }
        let best = clean.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            dropped.push(p);
            continue;
        }
        ratios.push(clean.iter().map(|c| c.map_or(f64::INFINITY, |v| v / best)).collect());
    }
    let finite: Vec<f64> = ratios.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    let tau_max = finite.iter().copied().fold(1.0, f64::max);
    let mut grid: Vec<f64> = vec![1.0];
    let steps = grid_points.max(2);
    for i in 1..steps {
        grid.push(exp(ln(tau_max) * i as f64 / (steps - 1) as f64));
    }
    grid.extend(finite.iter().copied());
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let count = ratios.len() as f64;
    let curves = (0..s)
        .map(|j| ProfileCurve {
            label: labels[j].clone(),
            points: grid
                .iter()
                .map(|&t| {
                    let hit = ratios.iter().filter(|r| r[j] <= t).count() as f64;
                    (t, if count > 0.0 { hit / count } else { 0.0 })
                })
                .collect(),
        })
        .collect();
    Ok(Profile { curves, dropped })
}

impl ProfileCurve {
    /// `ρ(τ)` on the step function through the emitted points.
    pub fn at(&self, tau: f64) -> f64 {
        self.points.iter().take_while(|(t, _)| *t <= tau).last().map_or(0.0, |p| p.1)
    }
}
