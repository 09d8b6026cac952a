use proptest::prelude::*;
use sapgm_core::problems::{build_problem, sample_starts, scalarization_sweep, ProblemParams, ProblemSpec};
use sapgm_core::solver::{
    backtrack_gamma, energy_sequence, first_k_below, fpga_run, merit_from_values, mu_schedule, sapgm_run,
    EnergyIndexing, SolverConfig,
};
use sapgm_core::Error;

fn problem(name: &str) -> ProblemSpec {
    build_problem(name, &ProblemParams { m_rows: 40, large_n: 12, ..ProblemParams::default() }).unwrap()
}

#[test]
fn schedule_threshold_matches_forward_scan() {
    // independent scan written against the closed form
    let mut k = 0usize;
    loop {
        let t = k as f64 + 3.0;
        if 0.5 / (t * t.ln().powf(0.75)) < 1e-3 {
            break;
        }
        k += 1;
    }
    assert_eq!(first_k_below(1e-3, 4.0, 0.75, 0.5), k);
    assert_eq!(k, 147);
}

#[test]
fn reported_convergence_is_sound() {
    for name in ["cr_mf2", "cb3_lq", "jos1_l1", "bk1_l1", "sp1_l1", "large_scale"] {
        let spec = problem(name);
        let cfg = SolverConfig::default();
        for x0 in sample_starts(&spec, 3, 4) {
            let out = sapgm_run(&spec, &x0, &cfg).unwrap();
            let last = out.trace.last().unwrap();
            if out.converged {
                assert!(last.dx_inf < cfg.eps && last.mu < cfg.eps, "{name}");
                assert!(out.outer_iters > first_k_below(cfg.eps, cfg.alpha, cfg.sigma, cfg.mu0));
            } else {
                assert_eq!(out.outer_iters, cfg.max_iter);
            }
            assert_eq!(out.objectives, spec.objective_vector(&out.x));
            assert!(spec.g.contains(&out.x));
        }
    }
}

#[test]
fn literal_backtracking_variant_also_runs() {
    let spec = problem("cb3_lq");
    let cfg = SolverConfig { paper_literal_backtrack: true, full_trace: true, ..SolverConfig::default() };
    let x0 = [1.6, 1.9];
    let out = sapgm_run(&spec, &x0, &cfg).unwrap();
    let default = sapgm_run(&spec, &x0, &SolverConfig { full_trace: true, ..SolverConfig::default() }).unwrap();
    assert!(out.trace.iter().all(|r| r.descent_slack >= 0.0));
    // the min-test never asks for more shrinking than the max-test
    assert!(out.trace[0].gamma >= default.trace[0].gamma);
}

#[test]
fn fpga_stops_on_the_x_criterion_alone() {
    let spec = problem("bk1");
    let cfg = SolverConfig::fpga();
    let out = fpga_run(&spec, &[3.0, -1.0], &cfg).unwrap();
    assert!(out.converged);
    assert!(out.outer_iters < first_k_below(cfg.eps, cfg.alpha, cfg.sigma, cfg.mu0));
    assert_eq!(out.final_mu, 1.0);
}

#[test]
fn baseline_on_a_weak_pareto_start_barely_moves() {
    let spec = problem("jos1");
    let out = fpga_run(&spec, &[1.4, 1.4], &SolverConfig::fpga()).unwrap();
    assert!(out.converged);
    assert_eq!(out.outer_iters, 1);
    assert!((out.x[0] - 1.4).abs() <= 1e-3);
}

#[test]
fn fpga_reaches_the_jos1_front() {
    let spec = problem("jos1");
    let reference = scalarization_sweep(&spec, 200, 5000).unwrap();
    let values: Vec<Vec<f64>> = reference.iter().map(|z| spec.objective_vector(z)).collect();
    let out = fpga_run(&spec, &[1.5, 1.5], &SolverConfig::fpga()).unwrap();
    assert!(merit_from_values(&out.objectives, &values) <= 1e-4);
}

#[test]
fn energy_is_nonincreasing_on_baseline_runs() {
    let spec = problem("jos1");
    let reference = scalarization_sweep(&spec, 200, 5000).unwrap();
    let values: Vec<Vec<f64>> = reference.iter().map(|z| spec.objective_vector(z)).collect();
    let cfg = SolverConfig { full_trace: true, eps: 1e-12, ..SolverConfig::fpga() };
    for x0 in sample_starts(&spec, 20, 3) {
        let out = fpga_run(&spec, &x0, &cfg).unwrap();
        let star = (0..values.len())
            .max_by(|&a, &b| {
                merit_from_values(&out.objectives, &values[a..=a])
                    .total_cmp(&merit_from_values(&out.objectives, &values[b..=b]))
            })
            .unwrap();
        // the printed pairing builds 𝓔_1 from γ₀ before any backtracking, so
        // it is only checked from 𝓔_2 on
        for (indexing, skip) in [(EnergyIndexing::Aligned, 0), (EnergyIndexing::AsPrinted, 1)] {
            let e = energy_sequence(&spec, &out, (&reference[star], &values[star]), &cfg, indexing).unwrap();
            let slack = 1e-8 * (1.0 + e[0].energy.abs());
            for w in e.windows(2).skip(skip) {
                assert!(w[1].energy <= w[0].energy + slack, "{indexing:?} {x0:?}");
            }
        }
    }
}

#[test]
fn energy_needs_a_full_trace() {
    let spec = problem("jos1");
    let cfg = SolverConfig { eps: 1e-12, ..SolverConfig::fpga() };
    let out = fpga_run(&spec, &[1.0, 2.0], &cfg).unwrap();
    let x = [1.5, 1.5];
    let f = spec.objective_vector(&x);
    let r = energy_sequence(&spec, &out, (&x, &f), &cfg, EnergyIndexing::AsPrinted);
    assert!(out.outer_iters > 11);
    assert!(matches!(r, Err(Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedule_is_exact_and_decreasing(k in 0usize..1_000_000, alpha in 3.01f64..10.0, sigma in 0.51f64..1.0, mu0 in 0.01f64..5.0) {
        let t = k as f64 + alpha - 1.0;
        let closed = mu0 / (t * t.ln().powf(sigma));
        let got = mu_schedule(k, alpha, sigma, mu0);
        prop_assert!((got - closed).abs() <= 1e-14 * closed);
        prop_assert!(mu_schedule(k + 1, alpha, sigma, mu0) < got);
    }

    #[test]
    fn gamma_is_nonincreasing_and_steps_pass_the_descent_test(seed in 0u64..1000, which in 0usize..4) {
        let name = ["cr_mf2", "cb3_mf1", "bk1_l1", "sp1_l1"][which];
        let spec = problem(name);
        let x0 = sample_starts(&spec, 1, seed).remove(0);
        let cfg = SolverConfig { full_trace: true, max_iter: 60, ..SolverConfig::default() };
        let out = sapgm_run(&spec, &x0, &cfg).unwrap();
        let mut prev = cfg.gamma0;
        for r in &out.trace {
            prop_assert!(r.gamma <= prev);
            prev = r.gamma;
            prop_assert_eq!(r.mu, mu_schedule(r.k, cfg.alpha, cfg.sigma, cfg.mu0));
            prop_assert!(r.descent_slack >= 0.0);
        }
    }

    #[test]
    fn accepted_step_satisfies_descent_lemma_for_every_objective(seed in 0u64..1000) {
        let spec = problem("cb3_lq");
        let x = sample_starts(&spec, 1, seed).remove(0);
        let mu = 0.05;
        let cfg = SolverConfig::default();
        let step = backtrack_gamma(&spec, &x, &x, mu, 10.0, &cfg).unwrap();
        let ell = 1.0 / (step.gamma * mu);
        for i in 0..spec.m() {
            let g = spec.smooth_grad(i, &x, mu);
            let d: Vec<f64> = step.x_next.iter().zip(&x).map(|(a, b)| a - b).collect();
            let lin: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
            let quad: f64 = d.iter().map(|v| v * v).sum::<f64>() * ell / 2.0;
            let lhs = spec.smooth_value(i, &step.x_next, mu);
            let rhs = spec.smooth_value(i, &x, mu) + lin + quad;
            prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
