//! The accelerated outer loop.
//!
//! Iteration `k` extrapolates `y^k = x^k + (k−1)/(k+α−1)(x^k − x^{k−1})`,
//! sets `μ_{k+1} = μ₀ / ((k+α−1) ln^σ(k+α−1))` and solves the subproblem at
//! `(x^k, y^k, μ_{k+1})` with `ℓ = 1/(γ̄μ_{k+1})`, shrinking `γ̄ ← ηγ̄` until the
//! descent test
//!
//! `2 agg_i(f̃_i(x̂) − f̃_i(y) − ⟨∇f̃_i(y), x̂ − y⟩) ≤ ℓ‖x̂ − y‖²`
//!
//! holds, with `agg = max` by default and `agg = min` under
//! [`SolverConfig::paper_literal_backtrack`]. The run stops once
//! `‖x^{k+1} − x^k‖_∞ < ε` and `μ_{k+1} < ε`.
//!
//! With smoothing disabled the same loop runs on `f̃ = f` with `μ` frozen at 1
//! (so `ℓ = 1/γ̄`), `κ = 0`, and only the `x` criterion stops it. This is the
//! smoothing-free baseline and needs every `f_i` to be smooth.

use crate::error::{Error, Result};
use crate::math::{dist_inf, dist_sq, dot, ln, powf};
use crate::problems::ProblemSpec;
use crate::subproblem::{frank_wolfe_with, FwOptions, SubproblemInstance};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

/// Parameters of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Extrapolation parameter `α > 3`.
    pub alpha: f64,
    /// Schedule exponent `σ ∈ (1/2, 1]`.
    pub sigma: f64,
    pub mu0: f64,
    /// Initial step `γ₀`.
    pub gamma0: f64,
    /// Backtracking factor `η ∈ (0, 1)`.
    pub eta: f64,
    /// Stopping tolerance `ε`.
    pub eps: f64,
    /// Outer iteration budget.
    pub max_iter: usize,
    /// Frank–Wolfe iteration budget per subproblem.
    pub fw_iters: usize,
    /// Frank–Wolfe gap tolerance.
    pub fw_tol: f64,
    /// `false` runs the smoothing-free baseline.
    pub smoothing_enabled: bool,
    /// Backtrack on `min_i` instead of `max_i`.
    pub paper_literal_backtrack: bool,
    /// Keep every iteration in the trace instead of every 10th.
    pub full_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 4.0,
            sigma: 0.75,
            mu0: 0.5,
            gamma0: 100.0,
            eta: 0.5,
            eps: 1e-3,
            max_iter: 1000,
            fw_iters: 200,
            fw_tol: 1e-10,
            smoothing_enabled: true,
            paper_literal_backtrack: false,
            full_trace: false,
        }
    }
}

impl SolverConfig {
    /// The baseline configuration: same parameters, smoothing off.
    pub fn fpga() -> Self {
        Self { smoothing_enabled: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if !(self.alpha > 3.0) {
            return bad("alpha must exceed 3");
        }
        if !(self.sigma > 0.5 && self.sigma <= 1.0) {
            return bad("sigma must lie in (0.5, 1]");
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad("eta must lie in (0, 1)");
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad("mu0 must be positive");
        }
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return bad("gamma0 must be positive");
        }
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if self.fw_iters == 0 {
            return bad("fw_iters must be at least 1");
        }
        if !(self.fw_tol >= 0.0) {
            return bad("fw_tol must be nonnegative");
        }
        Ok(())
    }
}

/// `y = x_cur + (k−1)/(k+α−1) (x_cur − x_prev)`.
pub fn extrapolate(x_cur: &[f64], x_prev: &[f64], k: usize, alpha: f64) -> Vec<f64> {
    let beta = (k as f64 - 1.0) / (k as f64 + alpha - 1.0);
    x_cur.iter().zip(x_prev).map(|(c, p)| c + beta * (c - p)).collect()
}

/// `μ_{k+1} = μ₀ / ((k+α−1) ln^σ(k+α−1))`, computed from `k` alone.
pub fn mu_schedule(k: usize, alpha: f64, sigma: f64, mu0: f64) -> f64 {
    let t = k as f64 + alpha - 1.0;
    mu0 / (t * powf(ln(t), sigma))
}

/// The smallest `k` with `μ_{k+1} < tol`, by forward scan.
pub fn first_k_below(tol: f64, alpha: f64, sigma: f64, mu0: f64) -> usize {
    let mut k = 0;
    while mu_schedule(k, alpha, sigma, mu0) >= tol {
        k += 1;
    }
    k
}

/// Result of one accepted backtracking search.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktrackStep {
    pub gamma: f64,
    pub x_next: Vec<f64>,
    pub shrinks: usize,
    pub fw_iterations: usize,
    pub fw_gap: f64,
    /// `ℓ‖x̂ − y‖² − 2 agg_i(...)`, nonnegative at acceptance up to rounding.
    pub descent_slack: f64,
}

/// Backtracking on `γ̄` at `(x, y, μ)`.
pub fn backtrack_gamma(
    spec: &ProblemSpec,
    x: &[f64],
    y: &[f64],
    mu: f64,
    gamma_bar: f64,
    cfg: &SolverConfig,
) -> Result<BacktrackStep> {
    if !(gamma_bar > 0.0) || !(mu > 0.0) {
        return Err(Error::Domain("backtracking needs gamma_bar > 0 and mu > 0".to_string()));
    }
    let m = spec.m();
    let fy: Vec<f64> = (0..m).map(|i| spec.smooth_value(i, y, mu)).collect();
    let grads: Vec<Vec<f64>> = (0..m).map(|i| spec.smooth_grad(i, y, mu)).collect();
    let offsets: Vec<f64> = (0..m).map(|i| fy[i] - spec.composite_smooth(i, x, mu)).collect();
    let mut inst = SubproblemInstance::new(x.to_vec(), y.to_vec(), mu, 1.0 / (gamma_bar * mu), grads, offsets)?;
    let opts = FwOptions { max_iters: cfg.fw_iters, tol: cfg.fw_tol, record_history: false };
    let mut gamma = gamma_bar;
    let mut shrinks = 0;
    let mut fw_iterations = 0;
    loop {
        inst.ell = 1.0 / (gamma * mu);
        let sol = frank_wolfe_with(&inst, &spec.g, &opts)?;
        fw_iterations += sol.iterations;
        let xhat = sol.z;
        let step: Vec<f64> = xhat.iter().zip(y).map(|(a, b)| a - b).collect();
        let excess = (0..m).map(|i| {
            let e = spec.smooth_value(i, &xhat, mu) - fy[i] - dot(&inst.gradients[i], &step);
            // rounding in the two function values
            e - 1e-14 * (1.0 + fy[i].abs())
        });
        let agg = if cfg.paper_literal_backtrack {
            excess.fold(f64::INFINITY, f64::min)
        } else {
            excess.fold(f64::NEG_INFINITY, f64::max)
        };
        let rhs = inst.ell * dist_sq(&xhat, y);
        if 2.0 * agg > rhs {
            gamma *= cfg.eta;
            shrinks += 1;
            if gamma < 1e-16 {
                return Err(Error::Nontermination { iteration: shrinks, gamma });
            }
            continue;
        }
        return Ok(BacktrackStep {
            gamma,
            x_next: xhat,
            shrinks,
            fw_iterations,
            fw_gap: sol.gap,
            descent_slack: rhs - 2.0 * agg,
        });
    }
}

/// One retained iteration of a run; iteration `k` produced `x^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    /// `μ_{k+1}`
    pub mu: f64,
    /// `γ_{k+1}`
    pub gamma: f64,
    /// `‖x^{k+1} − x^k‖_∞`
    pub dx_inf: f64,
    /// `F(x^{k+1})`
    pub objectives: Vec<f64>,
    /// `x^{k+1}`
    pub x: Vec<f64>,
    pub fw_gap: f64,
    pub fw_iterations: usize,
    pub shrinks: usize,
    pub descent_slack: f64,
}

/// Outcome of one run from one start.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// The start after projection onto the box.
    pub x0: Vec<f64>,
    pub x: Vec<f64>,
    /// `F(x)`
    pub objectives: Vec<f64>,
    pub outer_iters: usize,
    pub fw_iters_total: usize,
    pub shrinks_total: usize,
    pub converged: bool,
    pub final_mu: f64,
    pub final_gamma: f64,
    pub smoothing: bool,
    pub trace: Vec<TraceRecord>,
}

/// Runs the method with smoothing on.
pub fn sapgm_run(spec: &ProblemSpec, x0: &[f64], cfg: &SolverConfig) -> Result<RunOutcome> {
    run_loop(spec, x0, &SolverConfig { smoothing_enabled: true, ..cfg.clone() })
}

/// Runs the smoothing-free baseline. Fails on problems with a nonsmooth `f_i`.
pub fn fpga_run(spec: &ProblemSpec, x0: &[f64], cfg: &SolverConfig) -> Result<RunOutcome> {
    run_loop(spec, x0, &SolverConfig { smoothing_enabled: false, ..cfg.clone() })
}

/// Dispatches on [`SolverConfig::smoothing_enabled`].
pub fn run(spec: &ProblemSpec, x0: &[f64], cfg: &SolverConfig) -> Result<RunOutcome> {
    run_loop(spec, x0, cfg)
}

fn run_loop(spec: &ProblemSpec, x0: &[f64], cfg: &SolverConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    if x0.len() != spec.n {
        return Err(Error::DimensionMismatch { expected: spec.n, found: x0.len() });
    }
    let smoothing = cfg.smoothing_enabled;
    if !smoothing && !spec.is_smooth() {
        return Err(Error::Config(format!("'{}' has a nonsmooth objective; the baseline needs smooth f_i", spec.name)));
    }
    let x0 = spec.g.project(x0);
    let mut x_prev = x0.clone();
    let mut x_cur = x0.clone();
    let mut gamma = cfg.gamma0;
    let mut mu = if smoothing { cfg.mu0 } else { 1.0 };
    let mut trace = Vec::new();
    let mut fw_total = 0;
    let mut shrinks_total = 0;
    let mut converged = false;
    let mut iters = 0;

    for k in 0..cfg.max_iter {
        let mu_next = if smoothing { mu_schedule(k, cfg.alpha, cfg.sigma, cfg.mu0) } else { 1.0 };
        let y = extrapolate(&x_cur, &x_prev, k, cfg.alpha);
        let step = backtrack_gamma(spec, &x_cur, &y, mu_next, gamma, cfg)?;
        gamma = step.gamma;
        mu = mu_next;
        fw_total += step.fw_iterations;
        shrinks_total += step.shrinks;
        let dx = dist_inf(&step.x_next, &x_cur);
        x_prev = core::mem::replace(&mut x_cur, step.x_next);
        iters = k + 1;
        converged = dx < cfg.eps && (!smoothing || mu_next < cfg.eps);
        if cfg.full_trace || k % 10 == 0 || converged || iters == cfg.max_iter {
            trace.push(TraceRecord {
                k,
                mu: mu_next,
                gamma,
                dx_inf: dx,
                objectives: spec.objective_vector(&x_cur),
                x: x_cur.clone(),
                fw_gap: step.fw_gap,
                fw_iterations: step.fw_iterations,
                shrinks: step.shrinks,
                descent_slack: step.descent_slack,
            });
        }
        if converged {
            break;
        }
    }

    Ok(RunOutcome {
        objectives: spec.objective_vector(&x_cur),
        x0,
        x: x_cur,
        outer_iters: iters,
        fw_iters_total: fw_total,
        shrinks_total,
        converged,
        final_mu: mu,
        final_gamma: gamma,
        smoothing,
        trace,
    })
}

/// Which iterate the gap term of the energy is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyIndexing {
    /// `𝓔_{k+1}` built from `W_k`, `μ_k`, `γ_k` at `x^k` and `u_k`.
    AsPrinted,
    /// `𝓔_{k+1}` built from `W_{k+1}`, `μ_{k+1}`, `γ_{k+1}` at `x^{k+1}` and
    /// `u_k`, the pairing of the classical accelerated-gradient energy.
    Aligned,
}

/// Lyapunov quantities at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub k: usize,
    pub w: f64,
    pub u: Vec<f64>,
    /// `𝓔_{k+1}`
    pub energy: f64,
}

/// `u_k = ((k+α−1)x^{k+1} − k x^k)/(α−1)`
pub fn u_point(x_k: &[f64], x_next: &[f64], k: usize, alpha: f64) -> Vec<f64> {
    let a = (k as f64 + alpha - 1.0) / (alpha - 1.0);
    let b = k as f64 / (alpha - 1.0);
    x_next.iter().zip(x_k).map(|(n, c)| a * n - b * c).collect()
}

/// `W(x, μ) = min_i [F̃_i(x, μ) − F_i(x*)] + κμ`
pub fn w_gap(spec: &ProblemSpec, x: &[f64], mu: f64, kappa: f64, f_star: &[f64]) -> f64 {
    (0..spec.m())
        .map(|i| spec.composite_smooth(i, x, mu) - f_star[i])
        .fold(f64::INFINITY, f64::min)
        + kappa * mu
}

/// Inputs of [`diagnostics_step`] for iteration `k`.
#[derive(Debug, Clone, Copy)]
pub struct StepState<'a> {
    pub k: usize,
    pub x_k: &'a [f64],
    pub x_next: &'a [f64],
    pub mu_k: f64,
    pub mu_next: f64,
    pub gamma_k: f64,
    pub gamma_next: f64,
}

/// `W`, `u_k` and `𝓔_{k+1}` against the reference `(x*, F(x*))`.
pub fn diagnostics_step(
    spec: &ProblemSpec,
    state: &StepState<'_>,
    reference: (&[f64], &[f64]),
    cfg: &SolverConfig,
    indexing: EnergyIndexing,
) -> Diagnostics {
    let (x_star, f_star) = reference;
    let a = cfg.alpha;
    let kappa = if cfg.smoothing_enabled { spec.max_kappa() } else { 0.0 };
    let k = state.k;
    let kf = k as f64;
    let u = u_point(state.x_k, state.x_next, k, a);
    let (w, gm, mu_tail, t_tail) = match indexing {
        EnergyIndexing::AsPrinted => (
            w_gap(spec, state.x_k, state.mu_k, kappa, f_star),
            state.gamma_k * state.mu_k,
            state.mu_k,
            kf + a - 2.0,
        ),
        EnergyIndexing::Aligned => (
            w_gap(spec, state.x_next, state.mu_next, kappa, f_star),
            state.gamma_next * state.mu_next,
            state.mu_next,
            kf + a - 1.0,
        ),
    };
    let t = kf + a - 1.0;
    let tail = if kappa > 0.0 {
        4.0 * kappa * cfg.gamma0 * cfg.mu0 / (2.0 * cfg.sigma - 1.0) * mu_tail * t_tail * powf(ln(t_tail), 1.0 - cfg.sigma)
    } else {
        0.0
    };
    let energy = 2.0 * gm / (a - 1.0) * t * t * w + (a - 1.0) * dist_sq(&u, x_star) + tail;
    Diagnostics { k, w, u, energy }
}

/// Energies `𝓔_1, 𝓔_2, …` of a run kept with a full trace.
pub fn energy_sequence(
    spec: &ProblemSpec,
    outcome: &RunOutcome,
    reference: (&[f64], &[f64]),
    cfg: &SolverConfig,
    indexing: EnergyIndexing,
) -> Result<Vec<Diagnostics>> {
    if outcome.trace.len() != outcome.outer_iters || outcome.trace.iter().enumerate().any(|(i, r)| r.k != i) {
        return Err(Error::Config("energy needs a run with a full trace".to_string()));
    }
    let cfg = SolverConfig { smoothing_enabled: outcome.smoothing, ..cfg.clone() };
    let mut out = Vec::with_capacity(outcome.trace.len());
    for (k, rec) in outcome.trace.iter().enumerate() {
        let (x_k, mu_k, gamma_k) = if k == 0 {
            (&outcome.x0, if outcome.smoothing { cfg.mu0 } else { 1.0 }, cfg.gamma0)
        } else {
            let p = &outcome.trace[k - 1];
            (&p.x, p.mu, p.gamma)
        };
        let state = StepState {
            k,
            x_k,
            x_next: &rec.x,
            mu_k,
            mu_next: rec.mu,
            gamma_k,
            gamma_next: rec.gamma,
        };
        out.push(diagnostics_step(spec, &state, reference, &cfg, indexing));
    }
    Ok(out)
}

/// `max_z min_i [F_i(x) − F_i(z)]` over objective vectors `F(z)` of a
/// reference set: a lower bound on `u₀(x)`.
pub fn merit_from_values(fx: &[f64], reference: &[Vec<f64>]) -> f64 {
    reference
        .iter()
        .map(|fz| fx.iter().zip(fz).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// [`merit_from_values`] with the reference given as decision points.
pub fn merit_u0_approx(x: &[f64], reference_set: &[Vec<f64>], spec: &ProblemSpec) -> f64 {
    let fx = spec.objective_vector(x);
    let values: Vec<Vec<f64>> = reference_set.iter().map(|z| spec.objective_vector(z)).collect();
    merit_from_values(&fx, &values)
}

/// The reference point whose objective vector is closest to `target`.
pub fn closest_reference<'a>(target: &[f64], values: &'a [Vec<f64>]) -> Option<(usize, &'a Vec<f64>)> {
    values.iter().enumerate().min_by(|a, b| {
        let da = dist_sq(a.1, target);
        let db = dist_sq(b.1, target);
        da.total_cmp(&db)
    })
}
