//! Smoothing functions for the nonsmooth primitives used by the benchmark
//! problems.
//!
//! Every smoothing `f̃(·, μ)` here is C¹ and convex for fixed `μ > 0`, its
//! gradient is Lipschitz with constant `1/μ`, and it is uniformly close to
//! the nonsmooth function: `|f̃(z, μ) − f(z)| ≤ κ μ`.
//!
//! | primitive  | smoothing                          | κ   |
//! |------------|------------------------------------|-----|
//! | `max(z,0)` | piecewise cubic, [`smooth_plus`]   | 1/6 |
//! | `|z|`      | Huber-type, [`smooth_abs`]         | 1/2 |
//!
//! For `max(z, 0)` the largest deviation is at `z = 0`, where the cubic
//! branches both give `μ/6`; on `[−μ, 0]` the error is `(z+μ)³/(6μ²)` and on
//! `[0, μ]` it is `(μ−z)³/(6μ²)`, both bounded by `μ/6`. That gives κ = 1/6.
//!
//! The cubic branch on `0 ≤ z ≤ μ` is `z + (μ−z)³/(6μ²)`. Writing it as
//! `z + (z+μ)³/(6μ²)` would jump from `μ` to `μ + 8μ/6` at `z = μ`; the
//! mirrored form is the one that is continuous, C¹ and convex.

use crate::error::{domain, Result};
use alloc::vec::Vec;

/// κ for [`smooth_plus`].
pub const PLUS_KAPPA: f64 = 1.0 / 6.0;
/// κ for [`smooth_abs`].
pub const ABS_KAPPA: f64 = 0.5;

/// The two scalar primitives that have a smoothing in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingPrimitive {
    /// `max(z, 0)`
    Plus,
    /// `|z|`
    Abs,
}

impl SmoothingPrimitive {
    pub fn value(self, z: f64, mu: f64) -> Result<f64> {
        match self {
            Self::Plus => smooth_plus(z, mu),
            Self::Abs => smooth_abs(z, mu),
        }
    }

    pub fn grad(self, z: f64, mu: f64) -> Result<f64> {
        match self {
            Self::Plus => smooth_plus_grad(z, mu),
            Self::Abs => smooth_abs_grad(z, mu),
        }
    }

    /// The nonsmooth function being approximated.
    pub fn exact(self, z: f64) -> f64 {
        match self {
            Self::Plus => z.max(0.0),
            Self::Abs => z.abs(),
        }
    }

    pub fn kappa(self) -> f64 {
        match self {
            Self::Plus => PLUS_KAPPA,
            Self::Abs => ABS_KAPPA,
        }
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(domain("smoothing parameter must be positive and finite"))
    }
}

/// Smoothed `max(z, 0)`.
pub fn smooth_plus(z: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(plus(z, mu))
}

/// Derivative of [`smooth_plus`] in `z`.
pub fn smooth_plus_grad(z: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(plus_grad(z, mu))
}

/// Smoothed `|z|`.
pub fn smooth_abs(z: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(abs(z, mu))
}

/// Derivative of [`smooth_abs`] in `z`.
pub fn smooth_abs_grad(z: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(abs_grad(z, mu))
}

/// Smoothed `‖x‖₁`, the componentwise sum of [`smooth_abs`].
pub fn smooth_l1(x: &[f64], mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(l1(x, mu))
}

/// Gradient of [`smooth_l1`].
pub fn smooth_l1_grad(x: &[f64], mu: f64) -> Result<Vec<f64>> {
    check_mu(mu)?;
    Ok(x.iter().map(|&z| abs_grad(z, mu)).collect())
}

/// Smoothed maximum of `values`, folded left to right with
/// `a ⊕ b = a + smooth_plus(b − a, μ)`.
///
/// The fold order is fixed because the smoothed value depends on it.
pub fn smooth_max(values: &[f64], mu: f64) -> Result<f64> {
    check_mu(mu)?;
    if values.is_empty() {
        return Err(domain("smooth_max of an empty list"));
    }
    Ok(max_with_weights(values, mu, None))
}

/// [`smooth_max`] together with its partial derivatives with respect to each
/// entry of `values`. The gradient of a smoothed max of functions `v_j(x)` is
/// `Σ_j weights[j] ∇v_j(x)`; the weights are nonnegative and sum to one.
pub fn smooth_max_weights(values: &[f64], mu: f64) -> Result<(f64, Vec<f64>)> {
    check_mu(mu)?;
    if values.is_empty() {
        return Err(domain("smooth_max of an empty list"));
    }
    let mut weights = alloc::vec![0.0; values.len()];
    let v = max_with_weights(values, mu, Some(&mut weights));
    Ok((v, weights))
}

#[inline]
pub(crate) fn plus(z: f64, mu: f64) -> f64 {
    if z < -mu {
        0.0
    } else if z < 0.0 {
        let t = z + mu;
        t * t * t / (6.0 * mu * mu)
    } else if z <= mu {
        let t = mu - z;
        z + t * t * t / (6.0 * mu * mu)
    } else {
        z
    }
}

#[inline]
pub(crate) fn plus_grad(z: f64, mu: f64) -> f64 {
    if z < -mu {
        0.0
    } else if z < 0.0 {
        let t = z + mu;
        t * t / (2.0 * mu * mu)
    } else if z <= mu {
        let t = mu - z;
        1.0 - t * t / (2.0 * mu * mu)
    } else {
        1.0
    }
}

#[inline]
pub(crate) fn abs(z: f64, mu: f64) -> f64 {
    if z.abs() > mu {
        z.abs()
    } else {
        z * z / (2.0 * mu) + mu / 2.0
    }
}

#[inline]
pub(crate) fn abs_grad(z: f64, mu: f64) -> f64 {
    if z > mu {
        1.0
    } else if z < -mu {
        -1.0
    } else {
        z / mu
    }
}

pub(crate) fn l1(x: &[f64], mu: f64) -> f64 {
    x.iter().map(|&z| abs(z, mu)).sum()
}

/// Left fold of the smoothed max. When `weights` is given it receives
/// `∂ result / ∂ values[j]`.
pub(crate) fn max_with_weights(values: &[f64], mu: f64, weights: Option<&mut [f64]>) -> f64 {
    let mut acc = values[0];
    match weights {
        None => {
            for &b in &values[1..] {
                acc += plus(b - acc, mu);
            }
        }
        Some(w) => {
            w[0] = 1.0;
            for (j, &b) in values.iter().enumerate().skip(1) {
                let d = plus_grad(b - acc, mu);
                acc += plus(b - acc, mu);
                for wk in w[..j].iter_mut() {
                    *wk *= 1.0 - d;
                }
                w[j] = d;
            }
        }
    }
    acc
}

/// κ of the left fold over `count` entries: each of the `count − 1` folds
/// adds at most `μ/6` and the fold is 1-Lipschitz in its accumulator.
pub fn smooth_max_kappa(count: usize) -> f64 {
    count.saturating_sub(1) as f64 * PLUS_KAPPA
}
