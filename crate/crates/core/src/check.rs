//! Self-test suites run by `sapgm check`.
//!
//! The schedule and gradient suites take the function under test as a
//! closure, so a deliberately broken implementation can be fed in and the
//! suite shown to catch it.

use crate::math::{ln, norm_inf, powf};
use crate::problems::{build_problem, sample_starts, ProblemParams, ProblemSpec, PROBLEM_NAMES};
use crate::smoothing::{self, ABS_KAPPA, PLUS_KAPPA};
use crate::solver::mu_schedule;
use crate::subproblem::{
    dual_omega, frank_wolfe_with, phi_ell, weighted_prox, FwOptions, ProxFriendlyG, SimplexWeights, SubproblemInstance,
};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(k, α, σ, μ₀) ↦ μ_{k+1}`
pub type ScheduleFn = dyn Fn(usize, f64, f64, f64) -> f64;
/// `(problem, i, x, μ) ↦ ∇f̃_i(x, μ)`
pub type GradientFn = dyn Fn(&ProblemSpec, usize, &[f64], f64) -> Vec<f64>;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// One line per failing case, with its inputs.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The implementations exercised by [`run_all`].
pub struct Hooks<'a> {
    pub schedule: &'a ScheduleFn,
    pub gradient: &'a GradientFn,
}

fn library_schedule(k: usize, a: f64, s: f64, m: f64) -> f64 {
    mu_schedule(k, a, s, m)
}

fn library_gradient(p: &ProblemSpec, i: usize, x: &[f64], mu: f64) -> Vec<f64> {
    p.smooth_grad(i, x, mu)
}

impl Default for Hooks<'static> {
    fn default() -> Self {
        Self { schedule: &library_schedule, gradient: &library_gradient }
    }
}

/// Every suite, in a fixed order.
pub fn run_all(hooks: &Hooks<'_>) -> Vec<SuiteReport> {
    vec![
        smoothing_suite(),
        gradient_suite(hooks.gradient),
        prox_suite(),
        duality_suite(),
        schedule_suite(hooks.schedule),
    ]
}

/// Uniform approximation bounds of the scalar smoothings on `[−5μ, 5μ]`.
pub fn smoothing_suite() -> SuiteReport {
    let mut r = SuiteReport::new("smoothing");
    for mu in [1.0, 0.1, 1e-3] {
        let mut plus_err: f64 = 0.0;
        let mut abs_err: f64 = 0.0;
        for j in 0..=10_000 {
            let z = -5.0 * mu + 10.0 * mu * j as f64 / 10_000.0;
            plus_err = plus_err.max((smoothing::plus(z, mu) - z.max(0.0)).abs());
            abs_err = abs_err.max((smoothing::abs(z, mu) - z.abs()).abs());
        }
        r.case(plus_err <= PLUS_KAPPA * mu + 1e-12, || format!("plus: mu={mu} max error {plus_err:e}"));
        r.case(abs_err <= ABS_KAPPA * mu + 1e-12, || format!("abs: mu={mu} max error {abs_err:e}"));
    }
    r
}

/// Central differences with step `1e-6` against `gradient` on every
/// benchmark problem, 20 feasible points, `μ ∈ {1e-1, 1e-3}`.
pub fn gradient_suite(gradient: &GradientFn) -> SuiteReport {
    let mut r = SuiteReport::new("gradients");
    let params = ProblemParams { m_rows: 40, large_n: 15, ..ProblemParams::default() };
    let h = 1e-6;
    for name in PROBLEM_NAMES {
        let spec = build_problem(name, &params).expect("benchmark problems build");
        for x in sample_starts(&spec, 20, 17) {
            for mu in [1e-1, 1e-3] {
                for i in 0..spec.m() {
                    let g = gradient(&spec, i, &x, mu);
                    let fd: Vec<f64> = (0..spec.n)
                        .map(|j| {
                            let mut a = x.clone();
                            let mut b = x.clone();
                            a[j] += h;
                            b[j] -= h;
                            (spec.smooth_value(i, &a, mu) - spec.smooth_value(i, &b, mu)) / (2.0 * h)
                        })
                        .collect();
                    let diff: Vec<f64> = g.iter().zip(&fd).map(|(a, b)| a - b).collect();
                    let rel = norm_inf(&diff) / norm_inf(&fd).max(1.0);
                    r.case(g.len() == spec.n && rel <= 1e-6, || {
                        format!("{name} f{} mu={mu} x={x:?}: relative error {rel:e}", i + 1)
                    });
                }
            }
        }
    }
    r
}

/// The exact prox of `t·c|u|` plus a box against a dense scalar grid.
pub fn prox_suite() -> SuiteReport {
    let mut r = SuiteReport::new("prox");
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let c = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        let lam = rng.random_range(0.0..1.0);
        let t = rng.random_range(0.1..2.0);
        let v = rng.random_range(-3.0..3.0);
        let (lo, hi) = (-1.0, 1.5);
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![lo], vec![hi], c.to_vec()).expect("valid g");
        let w = SimplexWeights::new(vec![lam, 1.0 - lam]).expect("on simplex");
        let p = weighted_prox(&w, t, &[v], &g)[0];
        let tau = t * (lam * c[0] + (1.0 - lam) * c[1]);
        let obj = |u: f64| tau * u.abs() + 0.5 * (u - v) * (u - v);
        let mut best = (f64::INFINITY, 0.0);
        for j in 0..=25_000 {
            let u = lo + (hi - lo) * j as f64 / 25_000.0;
            if obj(u) < best.0 {
                best = (obj(u), u);
            }
        }
        r.case((p - best.1).abs() <= 2e-4 && obj(p) <= best.0 + 1e-12, || {
            format!("prox c={c:?} lambda={lam} t={t} v={v}: got {p}, grid {}", best.1)
        });
    }
    r
}

/// Frank–Wolfe gap and weak duality on random two-objective subproblems.
pub fn duality_suite() -> SuiteReport {
    let mut r = SuiteReport::new("duality");
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..50 {
        let n = rng.random_range(1..=5);
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..0.5)).collect();
        let grads: Vec<Vec<f64>> = (0..2).map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let offsets: Vec<f64> = (0..2).map(|_| rng.random_range(-0.5..0.5)).collect();
        let c: Vec<f64> = (0..2).map(|_| rng.random_range(0.0..0.5)).collect();
        let ell = rng.random_range(0.5..3.0);
        let g = ProxFriendlyG::weighted_l1_plus_box(vec![-1.0; n], vec![1.0; n], c).expect("valid g");
        let inst = SubproblemInstance::new(y.clone(), y, 0.1, ell, grads, offsets).expect("valid instance");
        let sol = frank_wolfe_with(&inst, &g, &FwOptions { max_iters: 5000, tol: 1e-9, record_history: false })
            .expect("solvable");
        let primal = phi_ell(&sol.z, &inst, &g);
        let dual = dual_omega(&sol.lambda, &inst, &g);
        let ok = primal - dual <= 1e-4 && primal >= dual - 1e-10 && (dual - sol.omega).abs() <= 1e-10;
        r.case(ok, || format!("instance {inst:?}: primal {primal} dual {dual}"));
    }
    r
}

/// The schedule against its closed form and the known first value.
pub fn schedule_suite(schedule: &ScheduleFn) -> SuiteReport {
    let mut r = SuiteReport::new("schedule");
    let (a, s, m) = (4.0, 0.75, 0.5);
    let closed = |k: usize| m / ((k as f64 + a - 1.0) * powf(ln(k as f64 + a - 1.0), s));
    for k in 0..2000 {
        let got = schedule(k, a, s, m);
        r.case(got == closed(k), || format!("k={k}: {got} vs {}", closed(k)));
    }
    let mu1 = schedule(0, a, s, m);
    r.case((mu1 - 0.155_31).abs() < 1e-5, || format!("mu_1 = {mu1}"));
    let mut prev = mu1;
    let mut monotone = true;
    for k in 1..10_000 {
        let v = schedule(k, a, s, m);
        monotone &= v < prev;
        prev = v;
    }
    r.case(monotone, || String::from("schedule not strictly decreasing"));
    r
}
