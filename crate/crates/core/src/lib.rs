//! Smoothing accelerated proximal gradient method with extrapolation for
//! nonsmooth convex multiobjective optimization.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`smoothing`]: smooth approximations of `max(z, 0)`, `|z|`, `‖x‖₁` and
//!   finite maxima, with their gradients and approximation constants.
//! - [`subproblem`]: the per-iteration max-of-linearizations subproblem, its
//!   dual over the simplex, a Frank–Wolfe solver and primal recovery by prox.
//! - [`solver`]: the accelerated outer loop with the smoothing schedule,
//!   backtracking on the step size, the smoothing-free baseline and the
//!   Lyapunov diagnostics.
//! - [`problems`]: the benchmark problem suite and the large-scale data
//!   generator.
//! - [`metrics`]: nondominance filtering, purity, spread metrics,
//!   hypervolume and performance profiles.
//! - [`check`]: self-test suites used by the `check` command of the CLI.
//!
//! IO, timing, parallel orchestration and file formats live in the
//! `sapgm-cli` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod check;
mod error;
pub mod math;
pub mod metrics;
pub mod problems;
pub mod smoothing;
pub mod solver;
pub mod subproblem;

pub use error::{Error, Result};
pub use metrics::{Front, ProfileCurve};
pub use problems::{LargeScaleData, ProblemParams, ProblemSpec};
pub use solver::{RunOutcome, SolverConfig};
pub use subproblem::{ProxFriendlyG, SimplexWeights, SubproblemInstance};
