//! The per-iteration subproblem
//!
//! ```text
//! min_z φ_ℓ(z) = max_i [⟨∇f̃_i(y,μ), z − y⟩ + g_i(z) + f̃_i(y,μ) − F̃_i(x,μ)] + (ℓ/2)‖z − y‖²
//! ```
//!
//! solved through its dual over the simplex,
//!
//! ```text
//! ω(λ) = ℓ·M_{(1/ℓ)Σλ_i g_i}(y − (1/ℓ)Σλ_i∇f̃_i) − (1/2ℓ)‖Σλ_i∇f̃_i‖² + Σλ_i offset_i,
//! ```
//!
//! with Frank–Wolfe. The primal solution is recovered as
//! `z* = prox_{(1/ℓ)Σλ_i g_i}(y − (1/ℓ)Σλ_i∇f̃_i)`.
//!
//! Each `g_i` is `c_i‖·‖₁` plus the indicator of a common box. Both terms are
//! separable, so the prox of `t·Σλ_i g_i` is a soft-threshold by `t·Σλ_i c_i`
//! followed by clamping into the box: for a convex function of one variable
//! the minimizer over an interval is the projection of the unconstrained
//! minimizer.

use crate::error::{domain, Error, Result};
use crate::math::{dist_sq, dot};
use alloc::vec;
use alloc::vec::Vec;

/// Weights on the unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    /// Validates `λ_i ≥ 0` and `|Σλ_i − 1| ≤ 1e-12`.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(domain("simplex weights must be nonempty"));
        }
        if lambda.iter().any(|&l| !(l >= 0.0)) {
            return Err(domain("simplex weights must be nonnegative"));
        }
        let s: f64 = lambda.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(domain("simplex weights must sum to one"));
        }
        Ok(Self(lambda))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    pub fn vertex(m: usize, j: usize) -> Self {
        let mut v = vec![0.0; m];
        v[j] = 1.0;
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Which family a [`ProxFriendlyG`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GKind {
    BoxIndicator,
    WeightedL1PlusBox,
}

/// `g_i(z) = c_i‖z‖₁ + ι_[lo,hi](z)` for each objective `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxFriendlyG {
    lo: Vec<f64>,
    hi: Vec<f64>,
    l1_weights: Vec<f64>,
}

impl ProxFriendlyG {
    /// `g_i = ι_[lo,hi]` for all `m` objectives.
    pub fn box_indicator(lo: Vec<f64>, hi: Vec<f64>, m: usize) -> Result<Self> {
        Self::weighted_l1_plus_box(lo, hi, vec![0.0; m])
    }

    /// `g_i = c_i‖·‖₁ + ι_[lo,hi]` with `c_i ≥ 0`.
    pub fn weighted_l1_plus_box(lo: Vec<f64>, hi: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(domain("box bounds must satisfy lo <= hi"));
        }
        if c.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(domain("l1 weights must be finite and nonnegative"));
        }
        Ok(Self { lo, hi, l1_weights: c })
    }

    pub fn kind(&self) -> GKind {
        if self.l1_weights.iter().all(|&c| c == 0.0) {
            GKind::BoxIndicator
        } else {
            GKind::WeightedL1PlusBox
        }
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn l1_weights(&self) -> &[f64] {
        &self.l1_weights
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.iter().zip(&self.lo).zip(&self.hi).all(|((v, l), h)| l <= v && v <= h)
    }

    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        z.iter().zip(&self.lo).zip(&self.hi).map(|((v, l), h)| v.clamp(*l, *h)).collect()
    }

    /// `g_i(z)`, `+∞` outside the box.
    pub fn value(&self, i: usize, z: &[f64]) -> f64 {
        if !self.contains(z) {
            return f64::INFINITY;
        }
        let c = self.l1_weights[i];
        if c == 0.0 {
            0.0
        } else {
            c * crate::math::l1(z)
        }
    }

    fn combined_weight(&self, lambda: &[f64]) -> f64 {
        dot(lambda, &self.l1_weights)
    }
}

/// Data of one subproblem: the points `x`, `y`, the smoothing level `μ`, the
/// quadratic weight `ℓ`, the gradients `∇f̃_i(y,μ)` and the offsets
/// `f̃_i(y,μ) − F̃_i(x,μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemInstance {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub mu: f64,
    pub ell: f64,
    pub gradients: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

impl SubproblemInstance {
    pub fn new(
        x: Vec<f64>,
        y: Vec<f64>,
        mu: f64,
        ell: f64,
        gradients: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    ) -> Result<Self> {
        if !(ell > 0.0) || !(mu > 0.0) {
            return Err(domain("subproblem needs ell > 0 and mu > 0"));
        }
        if gradients.is_empty() || gradients.len() != offsets.len() {
            return Err(Error::DimensionMismatch { expected: gradients.len(), found: offsets.len() });
        }
        let n = y.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        if let Some(g) = gradients.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.len() });
        }
        Ok(Self { x, y, mu, ell, gradients, offsets })
    }

    pub fn m(&self) -> usize {
        self.gradients.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// `Σ λ_i ∇f̃_i(y, μ)`
    fn weighted_gradient(&self, lambda: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.n()];
        for (l, g) in lambda.iter().zip(&self.gradients) {
            if *l != 0.0 {
                for (dj, gj) in d.iter_mut().zip(g) {
                    *dj += l * gj;
                }
            }
        }
        d
    }

    /// The linear pieces `⟨∇f̃_i, z − y⟩ + g_i(z) + offset_i` of `φ_ℓ`.
    fn pieces(&self, z: &[f64], g: &ProxFriendlyG) -> Vec<f64> {
        let step: Vec<f64> = z.iter().zip(&self.y).map(|(a, b)| a - b).collect();
        (0..self.m())
            .map(|i| dot(&self.gradients[i], &step) + g.value(i, z) + self.offsets[i])
            .collect()
    }

    /// The primal point attached to `λ`.
    pub fn recover_primal(&self, lambda: &SimplexWeights, g: &ProxFriendlyG) -> Vec<f64> {
        let t = 1.0 / self.ell;
        let d = self.weighted_gradient(lambda.as_slice());
        let v: Vec<f64> = self.y.iter().zip(&d).map(|(y, dj)| y - t * dj).collect();
        weighted_prox(lambda, t, &v, g)
    }
}

/// `φ_ℓ(z)`, `+∞` when `z` is outside the box.
pub fn phi_ell(z: &[f64], inst: &SubproblemInstance, g: &ProxFriendlyG) -> f64 {
    if !g.contains(z) {
        return f64::INFINITY;
    }
    let max = inst.pieces(z, g).into_iter().fold(f64::NEG_INFINITY, f64::max);
    max + 0.5 * inst.ell * dist_sq(z, &inst.y)
}

/// `argmin_u t·Σλ_i g_i(u) + ½‖u − v‖²`, computed exactly.
pub fn weighted_prox(lambda: &SimplexWeights, t: f64, v: &[f64], g: &ProxFriendlyG) -> Vec<f64> {
    let tau = t * g.combined_weight(lambda.as_slice());
    v.iter()
        .zip(g.lo())
        .zip(g.hi())
        .map(|((&vj, &l), &h)| soft_threshold(vj, tau).clamp(l, h))
        .collect()
}

#[inline]
fn soft_threshold(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}

/// Moreau envelope `min_u {h(u) + ½‖u − v‖²}` of `h = t·Σλ_i g_i`, evaluated
/// at the exact prox point.
pub fn moreau_envelope(lambda: &SimplexWeights, t: f64, v: &[f64], g: &ProxFriendlyG) -> f64 {
    let p = weighted_prox(lambda, t, v, g);
    let h: f64 = t * g.combined_weight(lambda.as_slice()) * crate::math::l1(&p);
    h + 0.5 * dist_sq(&p, v)
}

/// The dual objective `ω(λ)`.
pub fn dual_omega(lambda: &SimplexWeights, inst: &SubproblemInstance, g: &ProxFriendlyG) -> f64 {
    let l = lambda.as_slice();
    let t = 1.0 / inst.ell;
    let d = inst.weighted_gradient(l);
    let v: Vec<f64> = inst.y.iter().zip(&d).map(|(y, dj)| y - t * dj).collect();
    inst.ell * moreau_envelope(lambda, t, &v, g) - 0.5 * t * dot(&d, &d) + dot(l, &inst.offsets)
}

/// `∇ω(λ)`: component `i` is `g_i(p) + ⟨∇f̃_i(y,μ), p − y⟩ + offset_i` at the
/// recovered primal point `p`.
pub fn dual_omega_grad(lambda: &SimplexWeights, inst: &SubproblemInstance, g: &ProxFriendlyG) -> Vec<f64> {
    let p = inst.recover_primal(lambda, g);
    inst.pieces(&p, g)
}

/// Frank–Wolfe settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwOptions {
    /// Iteration budget `K`.
    pub max_iters: usize,
    /// Early exit once the Frank–Wolfe gap `⟨∇ω(λ), s − λ⟩` drops to this value.
    pub tol: f64,
    /// Keep `ω(λ^k)` for every iterate.
    pub record_history: bool,
}

impl Default for FwOptions {
    fn default() -> Self {
        Self { max_iters: 200, tol: 1e-8, record_history: false }
    }
}

/// Result of [`frank_wolfe_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct FwSolution {
    pub lambda: SimplexWeights,
    /// Recovered primal point `z*`.
    pub z: Vec<f64>,
    /// `φ_ℓ(z*) − ω(λ)`.
    pub gap: f64,
    /// `ω(λ)` at the returned weights.
    pub omega: f64,
    pub iterations: usize,
    /// `ω(λ^k)` per iterate when requested.
    pub history: Vec<f64>,
}

/// Maximizes `ω` over the simplex with Frank–Wolfe, `K` iterations at most.
pub fn frank_wolfe_solve(inst: &SubproblemInstance, g: &ProxFriendlyG, k: usize) -> Result<FwSolution> {
    frank_wolfe_with(inst, g, &FwOptions { max_iters: k, ..FwOptions::default() })
}

/// Frank–Wolfe on `min −ω(λ)` over the simplex.
///
/// The linear minimization oracle returns the vertex `e_j` with `j` the
/// largest component of `∇ω` (lowest index on ties); the step is `2/(k+2)`,
/// starting from uniform weights. At each iterate the Frank–Wolfe gap equals
/// the primal–dual gap `φ_ℓ(p(λ)) − ω(λ)`, so the iterate with the smallest
/// gap is the one returned.
pub fn frank_wolfe_with(inst: &SubproblemInstance, g: &ProxFriendlyG, opts: &FwOptions) -> Result<FwSolution> {
    if opts.max_iters < 1 {
        return Err(domain("Frank-Wolfe needs at least one iteration"));
    }
    if g.dim() != inst.n() || g.l1_weights().len() != inst.m() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: g.dim() });
    }
    let m = inst.m();
    let mut lambda = SimplexWeights::uniform(m);
    let mut best: Option<(f64, f64, SimplexWeights, Vec<f64>)> = None;
    let mut history = Vec::new();
    let mut iterations = 0;

    let evaluate = |lambda: &SimplexWeights| {
        let p = inst.recover_primal(lambda, g);
        let grad = inst.pieces(&p, g);
        let quad = 0.5 * inst.ell * dist_sq(&p, &inst.y);
        let omega = dot(lambda.as_slice(), &grad) + quad;
        (p, grad, omega)
    };

    for k in 0..=opts.max_iters {
        let (p, grad, omega) = evaluate(&lambda);
        // lowest index wins ties
        let mut j = 0;
        for i in 1..m {
            if grad[i] > grad[j] {
                j = i;
            }
        }
        let gap = (grad[j] - dot(lambda.as_slice(), &grad)).max(0.0);
        if opts.record_history {
            history.push(omega);
        }
        if best.as_ref().is_none_or(|b| gap < b.0) {
            best = Some((gap, omega, lambda.clone(), p));
        }
        if gap <= opts.tol || k == opts.max_iters {
            break;
        }
        let step = 2.0 / (k as f64 + 2.0);
        let mut next = lambda.into_inner();
        for (i, l) in next.iter_mut().enumerate() {
            *l *= 1.0 - step;
            if i == j {
                *l += step;
            }
        }
        lambda = SimplexWeights(next);
        iterations = k + 1;
    }

    let (gap, omega, lambda, z) = best.expect("at least one iterate evaluated");
    Ok(FwSolution { lambda, z, gap, omega, iterations, history })
}

/// Residual of the optimality system: the norm of
/// `Σλ_i[∇f̃_i(y,μ) + η_i] + ℓ(z − y)` with the minimum-norm choice of
/// `η ∈ ∂(Σλ_i g_i)(z)`, plus the complementarity term
/// `Σ_i λ_i (max_j ψ_j(z) − ψ_i(z))`. Zero at the exact solution.
pub fn kkt_residual(z: &[f64], lambda: &SimplexWeights, inst: &SubproblemInstance, g: &ProxFriendlyG) -> f64 {
    let l = lambda.as_slice();
    let c = g.combined_weight(l);
    let d = inst.weighted_gradient(l);
    let mut sq = 0.0;
    for j in 0..inst.n() {
        let r = d[j] + inst.ell * (z[j] - inst.y[j]);
        let (s_lo, s_hi) = if z[j] > 0.0 {
            (c, c)
        } else if z[j] < 0.0 {
            (-c, -c)
        } else {
            (-c, c)
        };
        let lo = if z[j] <= g.lo()[j] { f64::NEG_INFINITY } else { r + s_lo };
        let hi = if z[j] >= g.hi()[j] { f64::INFINITY } else { r + s_hi };
        let dist = if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            0.0
        };
        sq += dist * dist;
    }
    let pieces = inst.pieces(z, g);
    let top = pieces.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let comp: f64 = l.iter().zip(&pieces).map(|(li, p)| li * (top - p)).sum();
    crate::math::sqrt(sq) + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wide_box(n: usize, m: usize) -> ProxFriendlyG {
        ProxFriendlyG::box_indicator(vec![-100.0; n], vec![100.0; n], m).unwrap()
    }

    fn random_instance(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SubproblemInstance {
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
        let gradients = (0..m).map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let offsets = (0..m).map(|_| rng.random_range(-0.5..0.5)).collect();
        SubproblemInstance::new(y.clone(), y, 0.1, rng.random_range(0.5..3.0), gradients, offsets).unwrap()
    }

    fn random_g(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ProxFriendlyG {
        let c = (0..m).map(|_| rng.random_range(0.0..0.5)).collect();
        ProxFriendlyG::weighted_l1_plus_box(vec![-1.0; n], vec![1.0; n], c).unwrap()
    }

    #[test]
    fn simplex_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![-0.1, 1.1]).is_err());
        assert!(SimplexWeights::new(vec![]).is_err());
    }

    #[test]
    fn phi_at_y_with_zero_offsets_is_zero() {
        let y = vec![0.3, -0.2];
        let inst = SubproblemInstance::new(y.clone(), y.clone(), 1.0, 2.0, vec![vec![1.0, 2.0], vec![-1.0, 0.5]], vec![0.0, 0.0]).unwrap();
        assert_eq!(phi_ell(&y, &inst, &wide_box(2, 2)), 0.0);
    }

    #[test]
    fn phi_is_infinite_outside_box() {
        let g = ProxFriendlyG::box_indicator(vec![0.0], vec![1.0], 1).unwrap();
        let inst = SubproblemInstance::new(vec![0.5], vec![0.5], 1.0, 1.0, vec![vec![1.0]], vec![0.0]).unwrap();
        assert_eq!(phi_ell(&[1.5], &inst, &g), f64::INFINITY);
    }

    #[test]
    fn single_objective_minimizer_is_gradient_step() {
        let y = vec![0.3, -0.2, 0.1];
        let grad = vec![1.0, -2.0, 0.5];
        let ell = 4.0;
        let inst = SubproblemInstance::new(y.clone(), y.clone(), 1.0, ell, vec![grad.clone()], vec![0.0]).unwrap();
        let g = wide_box(3, 1);
        let sol = frank_wolfe_solve(&inst, &g, 1).unwrap();
        assert_eq!(sol.lambda.as_slice(), &[1.0]);
        for j in 0..3 {
            assert!((sol.z[j] - (y[j] - grad[j] / ell)).abs() < 1e-15);
        }
        assert!(sol.gap.abs() < 1e-14);
        // the dual of a one-objective problem is tight
        assert!((dual_omega(&sol.lambda, &inst, &g) - phi_ell(&sol.z, &inst, &g)).abs() < 1e-13);
        assert!(kkt_residual(&sol.z, &sol.lambda, &inst, &g) < 1e-13);
    }

    #[test]
    fn prox_box_fixed_point() {
        let g = ProxFriendlyG::box_indicator(vec![0.0; 3], vec![1.0; 3], 2).unwrap();
        let v = vec![0.2, 0.5, 0.9];
        assert_eq!(weighted_prox(&SimplexWeights::uniform(2), 0.7, &v, &g), v);
    }

    #[test]
    fn prox_soft_threshold_then_clamp() {
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![0.0; 2], vec![1.0; 2], vec![0.01, 0.03]).unwrap();
        let lambda = SimplexWeights::vertex(2, 0);
        // coordinate 1: |0.005| < 0.01 → 0; coordinate 2: −2 + 0.01 → clamped to 0
        assert_eq!(weighted_prox(&lambda, 1.0, &[0.005, -2.0], &g), vec![0.0, 0.0]);
    }

    #[test]
    fn prox_continuity_as_t_vanishes() {
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![-1.0; 2], vec![1.0; 2], vec![1.0, 2.0]).unwrap();
        let v = [0.4, -0.3];
        for t in [1e-2, 1e-4, 1e-8] {
            let p = weighted_prox(&SimplexWeights::uniform(2), t, &v, &g);
            for j in 0..2 {
                assert!((p[j] - v[j]).abs() <= t * 2.0 + 1e-15);
            }
        }
    }

    #[test]
    fn prox_matches_grid_minimization() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let lo = rng.random_range(-2.0..0.5);
            let hi = lo + rng.random_range(0.1..2.0);
            let c = rng.random_range(0.0..1.5);
            let t = rng.random_range(0.1..2.0);
            let v = rng.random_range(-3.0..3.0);
            let g = ProxFriendlyG::weighted_l1_plus_box(vec![lo], vec![hi], vec![c]).unwrap();
            let p = weighted_prox(&SimplexWeights::vertex(1, 0), t, &[v], &g)[0];
            let obj = |u: f64| t * c * u.abs() + 0.5 * (u - v) * (u - v);
            let steps = ((hi - lo) / 1e-4).ceil() as usize;
            let mut best = (f64::INFINITY, lo);
            for s in 0..=steps {
                let u = (lo + s as f64 * 1e-4).min(hi);
                let f = obj(u);
                if f < best.0 {
                    best = (f, u);
                }
            }
            // 0 and the bounds are on the grid only up to rounding, check objective values
            assert!(obj(p) <= best.0 + 1e-12, "prox value {} grid {}", obj(p), best.0);
            assert!((p - best.1).abs() <= 1.01e-4);
        }
    }

    #[test]
    fn envelope_values() {
        let g = wide_box(2, 1);
        assert_eq!(moreau_envelope(&SimplexWeights::vertex(1, 0), 1.0, &[0.3, 0.4], &g), 0.0);
        // Huber: |·| at v = 3 gives 3 − ½
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![-10.0], vec![10.0], vec![1.0]).unwrap();
        let e = moreau_envelope(&SimplexWeights::vertex(1, 0), 1.0, &[3.0], &g);
        assert!((e - 2.5).abs() < 1e-15);
        // brute force 1-D minimization
        let brute = (0..=200_000).map(|s| -10.0 + s as f64 * 1e-4).map(|u| u.abs() + 0.5 * (u - 3.0) * (u - 3.0)).fold(f64::INFINITY, f64::min);
        assert!((e - brute).abs() < 1e-8);
    }

    #[test]
    fn envelope_below_function_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![-1.0; 3], vec![1.0; 3], vec![0.4, 0.9]).unwrap();
        for _ in 0..200 {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let w = rng.random_range(0.0..1.0);
            let lambda = SimplexWeights::new(vec![w, 1.0 - w]).unwrap();
            let t = rng.random_range(0.05..2.0);
            let h = t * (0.4 * w + 0.9 * (1.0 - w)) * crate::math::l1(&v);
            assert!(moreau_envelope(&lambda, t, &v, &g) <= h + 1e-14);
        }
    }

    #[test]
    fn omega_gradient_symmetry() {
        let y = vec![0.1, 0.2];
        let inst = SubproblemInstance::new(y.clone(), y, 1.0, 2.0, vec![vec![1.0, -1.0]; 3], vec![0.0; 3]).unwrap();
        let grad = dual_omega_grad(&SimplexWeights::uniform(3), &inst, &wide_box(2, 3));
        assert!(grad.iter().all(|&v| (v - grad[0]).abs() < 1e-15));
    }

    #[test]
    fn omega_is_midpoint_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = rng.random_range(2..4);
            let inst = random_instance(&mut rng, m, 3);
            let g = random_g(&mut rng, m, 3);
            let draw = |rng: &mut ChaCha8Rng| {
                let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|r| r / s).collect::<Vec<_>>()
            };
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let w = |v: Vec<f64>| dual_omega(&SimplexWeights(v), &inst, &g);
            assert!(w(mid) >= 0.5 * (w(a) + w(b)) - 1e-10);
        }
    }

    #[test]
    fn omega_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = 1e-6;
        for _ in 0..100 {
            let m = 3;
            let inst = random_instance(&mut rng, m, 4);
            let g = random_g(&mut rng, m, 4);
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
            let s: f64 = raw.iter().sum();
            let lam: Vec<f64> = raw.iter().map(|r| r / s).collect();
            let grad = dual_omega_grad(&SimplexWeights(lam.clone()), &inst, &g);
            // tangent direction e_a − e_b keeps the weights on the simplex
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                let mut p = lam.clone();
                let mut q = lam.clone();
                p[a] += h;
                p[b] -= h;
                q[a] -= h;
                q[b] += h;
                let num = (dual_omega(&SimplexWeights(p), &inst, &g) - dual_omega(&SimplexWeights(q), &inst, &g)) / (2.0 * h);
                let ana = grad[a] - grad[b];
                assert!((num - ana).abs() < 1e-5, "{num} vs {ana}");
            }
        }
    }

    #[test]
    fn frank_wolfe_first_step_lands_on_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let inst = random_instance(&mut rng, 3, 2);
        let g = wide_box(2, 3);
        let sol = frank_wolfe_with(&inst, &g, &FwOptions { max_iters: 1, tol: 0.0, record_history: true }).unwrap();
        assert_eq!(sol.history.len(), 2);
        // second recorded iterate is λ¹ = s, a vertex
        let grad0 = dual_omega_grad(&SimplexWeights::uniform(3), &inst, &g);
        let mut j = 0;
        for i in 1..3 {
            if grad0[i] > grad0[j] {
                j = i;
            }
        }
        let at_vertex = dual_omega(&SimplexWeights::vertex(3, j), &inst, &g);
        assert!((sol.history[1] - at_vertex).abs() < 1e-12);
    }

    #[test]
    fn frank_wolfe_rejects_zero_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = random_instance(&mut rng, 2, 2);
        assert!(frank_wolfe_solve(&inst, &wide_box(2, 2), 0).is_err());
    }

    #[test]
    fn weak_duality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let inst = random_instance(&mut rng, 2, 3);
            let g = random_g(&mut rng, 2, 3);
            for _ in 0..20 {
                let w = rng.random_range(0.0..=1.0);
                let z: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let om = dual_omega(&SimplexWeights(vec![w, 1.0 - w]), &inst, &g);
                assert!(om <= phi_ell(&z, &inst, &g) + 1e-12);
            }
        }
    }

    #[test]
    fn frank_wolfe_best_omega_trend() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = random_instance(&mut rng, 3, 4);
        let g = random_g(&mut rng, 3, 4);
        let sol = frank_wolfe_with(&inst, &g, &FwOptions { max_iters: 300, tol: 0.0, record_history: true }).unwrap();
        let mut best = f64::NEG_INFINITY;
        let mut bests = Vec::new();
        for &w in &sol.history {
            best = best.max(w);
            bests.push(best);
        }
        assert!(bests.windows(2).all(|p| p[1] >= p[0]));
        // the tail is close to the best value found
        assert!(bests[bests.len() - 1] - bests[bests.len() / 2] < 1e-2);
    }

    #[test]
    fn kkt_residual_vanishes_for_exact_gradient_step() {
        let y = vec![0.5, -0.5];
        let grad = vec![2.0, 1.0];
        let ell = 3.0;
        let inst = SubproblemInstance::new(y.clone(), y.clone(), 1.0, ell, vec![grad.clone()], vec![0.0]).unwrap();
        let z: Vec<f64> = y.iter().zip(&grad).map(|(a, b)| a - b / ell).collect();
        assert!(kkt_residual(&z, &SimplexWeights::vertex(1, 0), &inst, &wide_box(2, 1)) < 1e-15);
    }

    #[test]
    fn kkt_residual_grows_under_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, 2, 3);
            let g = wide_box(3, 2);
            let sol = frank_wolfe_solve(&inst, &g, 20_000).unwrap();
            let base = kkt_residual(&sol.z, &sol.lambda, &inst, &g);
            let dir: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nrm = crate::math::norm(&dir);
            let z: Vec<f64> = sol.z.iter().zip(&dir).map(|(a, d)| a + 0.1 * d / nrm).collect();
            assert!(kkt_residual(&z, &sol.lambda, &inst, &g) > base);
        }
    }
}
