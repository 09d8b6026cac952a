//! Benchmark problems.
//!
//! Every problem is `F_i = f_i + g_i` on a box. The nonsmooth pieces of `f_i`
//! (maxima, absolute values, ℓ1 norms) are replaced by the smoothings of
//! [`crate::smoothing`]; smooth pieces are used as they are and contribute
//! nothing to κ. `g_i` is the box indicator, plus an ℓ1 term for the
//! large-scale problem when that term is routed to the prox.
//!
//! | name            | m | box            |
//! |-----------------|---|----------------|
//! | `large_scale`   | 2 | `[0, 1]^n`     |
//! | `cr_mf2`        | 2 | `[1.5, 2]^2`   |
//! | `cb3_lq`        | 2 | `[1.5, 2]^2`   |
//! | `cb3_mf1`       | 2 | `[0, 1]^2`     |
//! | `jos1_l1`       | 3 | `[1, 2]^n`     |
//! | `bk1_l1`        | 3 | `[−5, 10]^2`   |
//! | `sp1_l1`        | 3 | `[5, 10]^2`    |
//! | `jos1`          | 2 | `[1, 2]^n`     |
//! | `bk1`           | 2 | `[−5, 10]^2`   |
//! | `sp1`           | 2 | `[5, 10]^2`    |
//!
//! The last three are the smooth two-objective parts of the three-objective
//! rows, used to compare the method against its smoothing-free baseline.

use crate::error::{Error, Result};
use crate::math::{dot, exp, norm_sq, sq};
use crate::smoothing::{self, ABS_KAPPA, PLUS_KAPPA};
use crate::subproblem::ProxFriendlyG;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The benchmark problem names accepted by [`build_problem`].
pub const PROBLEM_NAMES: [&str; 10] =
    ["large_scale", "cr_mf2", "cb3_lq", "cb3_mf1", "jos1_l1", "bk1_l1", "sp1_l1", "jos1", "bk1", "sp1"];

/// Default `ε̂` of the large-scale second objective.
pub const DEFAULT_EPS_HAT: f64 = 1e-3;

/// Data of the large-scale sparse problem.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleData {
    pub m_rows: usize,
    pub n: usize,
    pub spar: f64,
    pub seed: u64,
    pub epsilon_hat: f64,
    /// Row-major `m_rows × n` matrix.
    pub a: Vec<f64>,
    pub x_true: Vec<f64>,
    pub b: Vec<f64>,
}

impl LargeScaleData {
    pub fn row(&self, j: usize) -> &[f64] {
        &self.a[j * self.n..(j + 1) * self.n]
    }

    /// Number of nonzeros the generator places in `x_true`.
    pub fn nonzero_count(n: usize, spar: f64) -> usize {
        // guard against 0.1 * 100 landing a hair above an integer
        let s = spar * n as f64;
        (crate::math::ceil(s - 1e-9) as usize).min(n)
    }

    fn frobenius_sq(&self) -> f64 {
        norm_sq(&self.a)
    }
}

/// Generates a large-scale instance.
///
/// With a ChaCha8 stream seeded by `seed`: the entries of `A` are drawn
/// row-major from the standard normal; `x_true` gets `n` draws from
/// `(0, 1]`, its first `n − ⌈spar·n⌉` entries are zeroed, the vector is
/// shuffled (Fisher–Yates) and clipped to `≤ 1`; finally `b = max(A x_true, 0)`.
pub fn generate_large_scale(m_rows: usize, n: usize, spar: f64, seed: u64) -> Result<LargeScaleData> {
    if m_rows == 0 || n == 0 {
        return Err(Error::Domain("m_rows and n must be at least 1".to_string()));
    }
    if !(spar > 0.0 && spar <= 1.0) {
        return Err(Error::Domain("spar must lie in (0, 1]".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..m_rows * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let mut x: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let zeros = n - LargeScaleData::nonzero_count(n, spar);
    for v in x.iter_mut().take(zeros) {
        *v = 0.0;
    }
    x.shuffle(&mut rng);
    for v in x.iter_mut() {
        *v = v.min(1.0);
    }
    let b = (0..m_rows).map(|j| dot(&a[j * n..(j + 1) * n], &x).max(0.0)).collect();
    Ok(LargeScaleData { m_rows, n, spar, seed, epsilon_hat: DEFAULT_EPS_HAT, a, x_true: x, b })
}

/// One objective `f_i` together with its smoothing `f̃_i(·, μ)`.
#[derive(Debug, Clone)]
pub enum SmoothedObjective {
    /// `(1/n) Σ (x_i − shift)²`
    MeanSquares { shift: f64 },
    /// `(x_1 − c)² + (x_2 − c)²`
    SquaredDistance { center: f64 },
    /// `(x_1 − 1)² + (x_1 − x_2)²`
    Sp1First,
    /// `(x_2 − 3)² + (x_1 − x_2)²`
    Sp1Second,
    /// `‖x‖₁`
    L1Norm,
    /// `max{x_1² + (x_2−1)² + x_2 − 1, −x_1² − (x_2−1)² + x_2 + 1}`
    CrFirst,
    /// `−x_1 + 2q + 1.75|q|`, `q = x_1² + x_2² − 1`
    Mf2Second,
    /// `max{x_1⁴ + x_2², (2−x_1)² + (2−x_2)², 2e^{x_2−x_1}}`
    Cb3,
    /// `max{−x_1 − x_2, −x_1 − x_2 + x_1² + x_2² − 1}`
    LqSecond,
    /// `−x_1 + 20 max{x_1² + x_2² − 1, 0}`
    Mf1Second,
    /// `‖max{Ax, 0} − b‖₁ + l1·‖x‖₁`
    LargeScaleFirst { data: Arc<LargeScaleData>, l1: f64 },
    /// `−max{‖Ax − b‖₁ − ε̂, 0} − 0.03‖x‖₁`
    LargeScaleSecond { data: Arc<LargeScaleData> },
}

impl SmoothedObjective {
    /// `f̃(x, μ)`. Smooth objectives ignore `μ`.
    pub fn value(&self, x: &[f64], mu: f64) -> f64 {
        use smoothing::{abs, l1, max_with_weights, plus};
        match self {
            Self::MeanSquares { shift } => x.iter().map(|v| sq(v - shift)).sum::<f64>() / x.len() as f64,
            Self::SquaredDistance { center } => sq(x[0] - center) + sq(x[1] - center),
            Self::Sp1First => sq(x[0] - 1.0) + sq(x[0] - x[1]),
            Self::Sp1Second => sq(x[1] - 3.0) + sq(x[0] - x[1]),
            Self::L1Norm => l1(x, mu),
            Self::CrFirst => {
                let (a, b) = cr_pieces(x);
                max_with_weights(&[a, b], mu, None)
            }
            Self::Mf2Second => {
                let q = x[0] * x[0] + x[1] * x[1] - 1.0;
                -x[0] + 2.0 * q + 1.75 * abs(q, mu)
            }
            Self::Cb3 => max_with_weights(&cb3_pieces(x), mu, None),
            Self::LqSecond => {
                let a = -x[0] - x[1];
                max_with_weights(&[a, a + x[0] * x[0] + x[1] * x[1] - 1.0], mu, None)
            }
            Self::Mf1Second => -x[0] + 20.0 * plus(x[0] * x[0] + x[1] * x[1] - 1.0, mu),
            Self::LargeScaleFirst { data, l1: c } => {
                let fit: f64 = (0..data.m_rows).map(|j| abs(plus(dot(data.row(j), x), mu) - data.b[j], mu)).sum();
                fit + if *c != 0.0 { c * l1(x, mu) } else { 0.0 }
            }
            Self::LargeScaleSecond { data } => {
                let s: f64 = (0..data.m_rows).map(|j| abs(dot(data.row(j), x) - data.b[j], mu)).sum();
                -plus(s - data.epsilon_hat, mu) - 0.03 * l1(x, mu)
            }
        }
    }

    /// `∇_x f̃(x, μ)` written into `out`.
    pub fn grad(&self, x: &[f64], mu: f64, out: &mut [f64]) {
        use smoothing::{abs, abs_grad, max_with_weights, plus, plus_grad};
        match self {
            Self::MeanSquares { shift } => {
                let k = 2.0 / x.len() as f64;
                for (o, v) in out.iter_mut().zip(x) {
                    *o = k * (v - shift);
                }
            }
            Self::SquaredDistance { center } => {
                out[0] = 2.0 * (x[0] - center);
                out[1] = 2.0 * (x[1] - center);
            }
            Self::Sp1First => {
                out[0] = 2.0 * (x[0] - 1.0) + 2.0 * (x[0] - x[1]);
                out[1] = -2.0 * (x[0] - x[1]);
            }
            Self::Sp1Second => {
                out[0] = 2.0 * (x[0] - x[1]);
                out[1] = 2.0 * (x[1] - 3.0) - 2.0 * (x[0] - x[1]);
            }
            Self::L1Norm => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = abs_grad(*v, mu);
                }
            }
            Self::CrFirst => {
                let (a, b) = cr_pieces(x);
                let mut w = [0.0; 2];
                max_with_weights(&[a, b], mu, Some(&mut w));
                let ga = [2.0 * x[0], 2.0 * (x[1] - 1.0) + 1.0];
                let gb = [-2.0 * x[0], -2.0 * (x[1] - 1.0) + 1.0];
                out[0] = w[0] * ga[0] + w[1] * gb[0];
                out[1] = w[0] * ga[1] + w[1] * gb[1];
            }
            Self::Mf2Second => {
                let q = x[0] * x[0] + x[1] * x[1] - 1.0;
                let dq = 2.0 + 1.75 * abs_grad(q, mu);
                out[0] = -1.0 + dq * 2.0 * x[0];
                out[1] = dq * 2.0 * x[1];
            }
            Self::Cb3 => {
                let mut w = [0.0; 3];
                max_with_weights(&cb3_pieces(x), mu, Some(&mut w));
                let e = 2.0 * exp(x[1] - x[0]);
                let g = [
                    [4.0 * x[0] * x[0] * x[0], 2.0 * x[1]],
                    [-2.0 * (2.0 - x[0]), -2.0 * (2.0 - x[1])],
                    [-e, e],
                ];
                for k in 0..2 {
                    out[k] = (0..3).map(|j| w[j] * g[j][k]).sum();
                }
            }
            Self::LqSecond => {
                let a = -x[0] - x[1];
                let mut w = [0.0; 2];
                max_with_weights(&[a, a + x[0] * x[0] + x[1] * x[1] - 1.0], mu, Some(&mut w));
                out[0] = -1.0 + w[1] * 2.0 * x[0];
                out[1] = -1.0 + w[1] * 2.0 * x[1];
            }
            Self::Mf1Second => {
                let d = 20.0 * plus_grad(x[0] * x[0] + x[1] * x[1] - 1.0, mu);
                out[0] = -1.0 + d * 2.0 * x[0];
                out[1] = d * 2.0 * x[1];
            }
            Self::LargeScaleFirst { data, l1: c } => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = if *c != 0.0 { c * abs_grad(*v, mu) } else { 0.0 };
                }
                for j in 0..data.m_rows {
                    let row = data.row(j);
                    let a = dot(row, x);
                    let w = abs_grad(plus(a, mu) - data.b[j], mu) * plus_grad(a, mu);
                    if w != 0.0 {
                        for (o, r) in out.iter_mut().zip(row) {
                            *o += w * r;
                        }
                    }
                }
            }
            Self::LargeScaleSecond { data } => {
                let mut inner = vec![0.0; x.len()];
                let mut s = 0.0;
                for j in 0..data.m_rows {
                    let row = data.row(j);
                    let r = dot(row, x) - data.b[j];
                    s += abs(r, mu);
                    let w = abs_grad(r, mu);
                    for (o, a) in inner.iter_mut().zip(row) {
                        *o += w * a;
                    }
                }
                let outer = plus_grad(s - data.epsilon_hat, mu);
                for ((o, v), i) in out.iter_mut().zip(x).zip(&inner) {
                    *o = -outer * i - 0.03 * abs_grad(*v, mu);
                }
            }
        }
    }

    /// The nonsmooth `f(x)`.
    pub fn exact(&self, x: &[f64]) -> f64 {
        match self {
            Self::L1Norm => crate::math::l1(x),
            Self::CrFirst => {
                let (a, b) = cr_pieces(x);
                a.max(b)
            }
            Self::Mf2Second => {
                let q = x[0] * x[0] + x[1] * x[1] - 1.0;
                -x[0] + 2.0 * q + 1.75 * q.abs()
            }
            Self::Cb3 => cb3_pieces(x).into_iter().fold(f64::NEG_INFINITY, f64::max),
            Self::LqSecond => {
                let a = -x[0] - x[1];
                a.max(a + x[0] * x[0] + x[1] * x[1] - 1.0)
            }
            Self::Mf1Second => -x[0] + 20.0 * (x[0] * x[0] + x[1] * x[1] - 1.0).max(0.0),
            Self::LargeScaleFirst { data, l1: c } => {
                let fit: f64 = (0..data.m_rows).map(|j| (dot(data.row(j), x).max(0.0) - data.b[j]).abs()).sum();
                fit + c * crate::math::l1(x)
            }
            Self::LargeScaleSecond { data } => {
                let s: f64 = (0..data.m_rows).map(|j| (dot(data.row(j), x) - data.b[j]).abs()).sum();
                -(s - data.epsilon_hat).max(0.0) - 0.03 * crate::math::l1(x)
            }
            smooth => smooth.value(x, 1.0),
        }
    }

    /// κ with `|f̃(x, μ) − f(x)| ≤ κ μ`.
    pub fn kappa(&self) -> f64 {
        match self {
            Self::L1Norm => f64::NAN, // depends on n, see ProblemSpec::kappa
            Self::CrFirst | Self::LqSecond => smoothing::smooth_max_kappa(2),
            Self::Mf2Second => 1.75 * ABS_KAPPA,
            Self::Cb3 => smoothing::smooth_max_kappa(3),
            Self::Mf1Second => 20.0 * PLUS_KAPPA,
            Self::LargeScaleFirst { data, l1 } => {
                data.m_rows as f64 * (ABS_KAPPA + PLUS_KAPPA) + l1 * data.n as f64 * ABS_KAPPA
            }
            Self::LargeScaleSecond { data } => {
                PLUS_KAPPA + data.m_rows as f64 * ABS_KAPPA + 0.03 * data.n as f64 * ABS_KAPPA
            }
            _ => 0.0,
        }
    }

    /// `L` such that `∇f̃(·, μ)` is `L/μ`-Lipschitz on the problem box for
    /// every `μ ∈ (0, 1]`. Smooth curvature `L_s` enters as `L_s · 1`.
    pub fn lip_factor(&self, n: usize) -> f64 {
        match self {
            Self::MeanSquares { .. } => 2.0 / n as f64,
            Self::SquaredDistance { .. } => 2.0,
            // largest eigenvalue of [[4, −2], [−2, 2]] is 3 + √5
            Self::Sp1First | Self::Sp1Second => 3.0 + crate::math::sqrt(5.0),
            Self::L1Norm => 1.0,
            // ‖∇(b − a)‖² ≤ 16(x_1² + (x_2 − 1)²) ≤ 80 on [1.5, 2]², both Hessians ±2I
            Self::CrFirst => 2.0 + 80.0,
            // h(q) = 2q + 1.75θ̃(q): h' ≤ 3.75, h'' ≤ 1.75/μ, ∇²q = 2I, ‖∇q‖² ≤ 32
            Self::Mf2Second => 7.5 + 1.75 * 32.0,
            // piece Hessians ≤ 48, gradient differences ≤ 38 on [0, 2]², two folds
            Self::Cb3 => 48.0 + 2.0 * 38.0 * 38.0,
            // b − a = q, ‖∇q‖² ≤ 32, Hessian of the second piece 2I
            Self::LqSecond => 2.0 + 32.0,
            // 20(φ̃' ∇²q + φ̃'' ∇q∇qᵀ) with ‖∇q‖² ≤ 8 on [0, 1]²
            Self::Mf1Second => 20.0 * (2.0 + 8.0),
            Self::LargeScaleFirst { data, l1 } => 2.0 * data.frobenius_sq() + l1,
            Self::LargeScaleSecond { data } => (data.m_rows as f64 + 1.0) * data.frobenius_sq() + 0.03,
        }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, Self::MeanSquares { .. } | Self::SquaredDistance { .. } | Self::Sp1First | Self::Sp1Second)
    }
}

fn cr_pieces(x: &[f64]) -> (f64, f64) {
    let s = x[0] * x[0] + (x[1] - 1.0) * (x[1] - 1.0);
    (s + x[1] - 1.0, -s + x[1] + 1.0)
}

fn cb3_pieces(x: &[f64]) -> [f64; 3] {
    [
        sq(sq(x[0])) + x[1] * x[1],
        sq(2.0 - x[0]) + sq(2.0 - x[1]),
        2.0 * exp(x[1] - x[0]),
    ]
}

/// Construction parameters for [`build_problem`].
#[derive(Debug, Clone)]
pub struct ProblemParams {
    /// Dimension of the JOS1 problems.
    pub n: usize,
    pub m_rows: usize,
    pub large_n: usize,
    pub spar: f64,
    pub seed: u64,
    pub epsilon_hat: f64,
    /// Route the `+0.01‖x‖₁` term of the large-scale problem into `g_1`.
    pub l1_in_prox: bool,
    /// Prebuilt large-scale data; overrides `m_rows`, `large_n`, `spar`, `seed`.
    pub data: Option<Arc<LargeScaleData>>,
}

impl Default for ProblemParams {
    fn default() -> Self {
        Self {
            n: 2,
            m_rows: 500,
            large_n: 100,
            spar: 0.1,
            seed: 0,
            epsilon_hat: DEFAULT_EPS_HAT,
            l1_in_prox: false,
            data: None,
        }
    }
}

/// A fully wired benchmark problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub n: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub objectives: Vec<SmoothedObjective>,
    pub g: ProxFriendlyG,
    pub large_scale: Option<Arc<LargeScaleData>>,
}

impl ProblemSpec {
    pub fn m(&self) -> usize {
        self.objectives.len()
    }

    /// `f̃_i(x, μ)`
    pub fn smooth_value(&self, i: usize, x: &[f64], mu: f64) -> f64 {
        self.objectives[i].value(x, mu)
    }

    pub fn smooth_grad(&self, i: usize, x: &[f64], mu: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.objectives[i].grad(x, mu, &mut out);
        out
    }

    /// `F̃_i(x, μ) = f̃_i(x, μ) + g_i(x)`
    pub fn composite_smooth(&self, i: usize, x: &[f64], mu: f64) -> f64 {
        self.smooth_value(i, x, mu) + self.g.value(i, x)
    }

    /// `F(x)`, the nonsmooth objective vector.
    pub fn objective_vector(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m()).map(|i| self.objectives[i].exact(x) + self.g.value(i, x)).collect()
    }

    /// `F̃(x, μ)`
    pub fn smoothed_vector(&self, x: &[f64], mu: f64) -> Vec<f64> {
        (0..self.m()).map(|i| self.composite_smooth(i, x, mu)).collect()
    }

    /// κ_i of objective `i`.
    pub fn kappa(&self, i: usize) -> f64 {
        match &self.objectives[i] {
            SmoothedObjective::L1Norm => self.n as f64 * ABS_KAPPA,
            o => o.kappa(),
        }
    }

    pub fn max_kappa(&self) -> f64 {
        (0..self.m()).map(|i| self.kappa(i)).fold(0.0, f64::max)
    }

    pub fn lip_factor(&self, i: usize) -> f64 {
        self.objectives[i].lip_factor(self.n)
    }

    pub fn is_smooth(&self) -> bool {
        self.objectives.iter().all(SmoothedObjective::is_smooth)
    }

    /// Points on the Pareto set, when it is known in closed form.
    pub fn known_front_hint(&self, count: usize) -> Option<Vec<Vec<f64>>> {
        let line = |a: f64, b: f64| -> Vec<Vec<f64>> {
            (0..count)
                .map(|k| {
                    let t = if count > 1 { a + (b - a) * k as f64 / (count - 1) as f64 } else { a };
                    vec![t; self.n]
                })
                .collect()
        };
        match self.name.as_str() {
            "jos1" => Some(line(1.0, 2.0)),
            "bk1" => Some(line(0.0, 5.0)),
            _ => None,
        }
    }
}

/// Normalizes spellings such as `CR&MF2`, `JOS1 & l1` or `cb3-lq`.
pub fn canonical_name(name: &str) -> String {
    let mut out = String::new();
    for c in name.trim().chars() {
        match c {
            '&' | '-' | ' ' | '_' => {
                if !out.ends_with('_') {
                    out.push('_');
                }
            }
            'ℓ' => out.push('l'),
            c => out.extend(c.to_lowercase()),
        }
    }
    out.trim_matches('_').replace("largescale", "large_scale")
}

/// Builds one of the [`PROBLEM_NAMES`].
pub fn build_problem(name: &str, params: &ProblemParams) -> Result<ProblemSpec> {
    use SmoothedObjective::*;
    let name = canonical_name(name);
    let square = |lo: f64, hi: f64, n: usize| (vec![lo; n], vec![hi; n]);
    let (n, (lo, hi), objectives, large_scale, l1) = match name.as_str() {
        "cr_mf2" => (2, square(1.5, 2.0, 2), vec![CrFirst, Mf2Second], None, None),
        "cb3_lq" => (2, square(1.5, 2.0, 2), vec![Cb3, LqSecond], None, None),
        "cb3_mf1" => (2, square(0.0, 1.0, 2), vec![Cb3, Mf1Second], None, None),
        "jos1_l1" | "jos1" => {
            if params.n == 0 {
                return Err(Error::Config("JOS1 dimension must be at least 1".to_string()));
            }
            let mut obj = vec![MeanSquares { shift: 0.0 }, MeanSquares { shift: 2.0 }];
            if name == "jos1_l1" {
                obj.push(L1Norm);
            }
            (params.n, square(1.0, 2.0, params.n), obj, None, None)
        }
        "bk1_l1" | "bk1" => {
            let mut obj = vec![SquaredDistance { center: 0.0 }, SquaredDistance { center: 5.0 }];
            if name == "bk1_l1" {
                obj.push(L1Norm);
            }
            (2, square(-5.0, 10.0, 2), obj, None, None)
        }
        "sp1_l1" | "sp1" => {
            let mut obj = vec![Sp1First, Sp1Second];
            if name == "sp1_l1" {
                obj.push(L1Norm);
            }
            (2, square(5.0, 10.0, 2), obj, None, None)
        }
        "large_scale" => {
            let data = match &params.data {
                Some(d) => d.clone(),
                None => {
                    let mut d = generate_large_scale(params.m_rows, params.large_n, params.spar, params.seed)?;
                    d.epsilon_hat = params.epsilon_hat;
                    Arc::new(d)
                }
            };
            let n = data.n;
            let (first_l1, g_l1) = if params.l1_in_prox { (0.0, Some(vec![0.01, 0.0])) } else { (0.01, None) };
            let obj = vec![
                LargeScaleFirst { data: data.clone(), l1: first_l1 },
                LargeScaleSecond { data: data.clone() },
            ];
            (n, square(0.0, 1.0, n), obj, Some(data), g_l1)
        }
        other => return Err(Error::Config(alloc::format!("unknown problem '{other}'"))),
    };
    let m = objectives.len();
    let g = match l1 {
        Some(c) => ProxFriendlyG::weighted_l1_plus_box(lo.clone(), hi.clone(), c)?,
        None => ProxFriendlyG::box_indicator(lo.clone(), hi.clone(), m)?,
    };
    Ok(ProblemSpec { name, n, lo, hi, objectives, g, large_scale })
}

/// `count` points drawn uniformly from the box of `spec`.
pub fn sample_starts(spec: &ProblemSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| spec.lo.iter().zip(&spec.hi).map(|(l, h)| l + (h - l) * rng.random::<f64>()).collect())
        .collect()
}

/// Weights on the simplex: `count` evenly spaced for `m = 2`, otherwise the
/// finest simplex lattice with at most `count` points.
pub fn weight_grid(m: usize, count: usize) -> Vec<Vec<f64>> {
    match m {
        1 => vec![vec![1.0]],
        2 => (0..count.max(2))
            .map(|k| {
                let w = k as f64 / (count.max(2) - 1) as f64;
                vec![w, 1.0 - w]
            })
            .collect(),
        _ => {
            let mut h = 1;
            while lattice_size(m, h + 1) <= count {
                h += 1;
            }
            let mut out = Vec::new();
            let mut cur = vec![0usize; m];
            lattice(m, h, 0, h, &mut cur, &mut out);
            out
        }
    }
}

fn lattice_size(m: usize, h: usize) -> usize {
    // C(h + m − 1, m − 1)
    let mut r = 1usize;
    for k in 1..m {
        r = r * (h + k) / k;
    }
    r
}

fn lattice(m: usize, h: usize, idx: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
    if idx == m - 1 {
        cur[idx] = left;
        out.push(cur.iter().map(|&c| c as f64 / h as f64).collect());
        return;
    }
    for k in 0..=left {
        cur[idx] = k;
        lattice(m, h, idx + 1, left - k, cur, out);
    }
}

/// Reference Pareto points of a smooth problem: for each weight vector of
/// [`weight_grid`], the minimizer of `Σ w_i f_i` over the box by projected
/// gradient with backtracking.
pub fn scalarization_sweep(spec: &ProblemSpec, weight_count: usize, max_iters: usize) -> Result<Vec<Vec<f64>>> {
    if !spec.is_smooth() {
        return Err(Error::Unsupported(alloc::format!("scalarization sweep needs a smooth problem, '{}' is not", spec.name)));
    }
    let center: Vec<f64> = spec.lo.iter().zip(&spec.hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let mut points = Vec::new();
    for w in weight_grid(spec.m(), weight_count) {
        let f = |x: &[f64]| (0..spec.m()).map(|i| w[i] * spec.objectives[i].exact(x)).sum::<f64>();
        let grad = |x: &[f64]| {
            let mut g = vec![0.0; spec.n];
            let mut gi = vec![0.0; spec.n];
            for (obj, wi) in spec.objectives.iter().zip(&w) {
                obj.grad(x, 1.0, &mut gi);
                for (a, b) in g.iter_mut().zip(&gi) {
                    *a += wi * b;
                }
            }
            g
        };
        let mut x = center.clone();
        let mut t = 1.0;
        for _ in 0..max_iters {
            let fx = f(&x);
            let gx = grad(&x);
            let next = loop {
                let cand: Vec<f64> = x.iter().zip(&gx).map(|(a, b)| a - t * b).collect();
                let cand = spec.g.project(&cand);
                let d: Vec<f64> = cand.iter().zip(&x).map(|(a, b)| a - b).collect();
                if f(&cand) <= fx + dot(&gx, &d) + norm_sq(&d) / (2.0 * t) + 1e-15 || t < 1e-12 {
                    break cand;
                }
                t *= 0.5;
            };
            let moved = crate::math::dist_inf(&next, &x);
            x = next;
            if moved < 1e-14 {
                break;
            }
        }
        points.push(x);
    }
    Ok(points)
}
