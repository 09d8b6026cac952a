//! Multistart orchestration and run artifacts.

use crate::error::{HarnessError, Result};
use crate::formats::{fmt_f64, numbered, write_front};
use crate::manifest::RunManifest;
use rayon::prelude::*;
use sapgm_core::metrics::filter_nondominated;
use sapgm_core::problems::sample_starts;
use sapgm_core::solver::run;
use sapgm_core::{ProblemSpec, RunOutcome};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

/// One start's result.
#[derive(Debug, Clone)]
pub struct StartRecord {
    pub start: usize,
    pub outcome: RunOutcome,
    /// Wall clock of the solve.
    pub time_s: f64,
}

/// Totals written to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problem: String,
    pub solver: String,
    pub starts: usize,
    pub converged: usize,
    pub total_outer_iters: u64,
    pub total_fw_iters: u64,
    pub total_time_s: f64,
    pub front_size: usize,
}

/// A finished multistart run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub manifest: RunManifest,
    pub spec: ProblemSpec,
    pub records: Vec<StartRecord>,
    /// Nondominated final objective vectors, in start order.
    pub front: Vec<Vec<f64>>,
}

impl RunArtifacts {
    pub fn summary(&self) -> Summary {
        Summary {
            problem: self.spec.name.clone(),
            solver: self.manifest.solver.label().to_string(),
            starts: self.records.len(),
            converged: self.records.iter().filter(|r| r.outcome.converged).count(),
            total_outer_iters: self.records.iter().map(|r| r.outcome.outer_iters as u64).sum(),
            total_fw_iters: self.records.iter().map(|r| r.outcome.fw_iters_total as u64).sum(),
            total_time_s: self.records.iter().map(|r| r.time_s).sum(),
            front_size: self.front.len(),
        }
    }
}

/// Runs every start of `manifest`. Starts fan out over the rayon pool; the
/// records come back in start order.
pub fn execute(manifest: &RunManifest) -> Result<RunArtifacts> {
    manifest.validate()?;
    let spec = manifest.build_problem()?;
    let cfg = manifest.solver_config();
    let starts = sample_starts(&spec, manifest.starts, manifest.seed);
    let records = starts
        .par_iter()
        .enumerate()
        .map(|(start, x0)| {
            let t = Instant::now();
            let outcome = run(&spec, x0, &cfg)?;
            Ok(StartRecord { start, outcome, time_s: t.elapsed().as_secs_f64() })
        })
        .collect::<Result<Vec<_>>>()?;
    let finals: Vec<Vec<f64>> = records.iter().map(|r| r.outcome.objectives.clone()).collect();
    let front = filter_nondominated(&finals)?;
    for r in records.iter().filter(|r| !r.outcome.converged) {
        log::warn!("start {} hit the iteration budget", r.start);
    }
    Ok(RunArtifacts { manifest: manifest.clone(), spec, records, front })
}

/// Writes `runs.csv`, `timings.csv`, `front.csv`, `manifest.json`,
/// `summary.json` and, when requested, `trace.csv` into `dir`.
pub fn write_artifacts(art: &RunArtifacts, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::file(dir, e.to_string()))?;
    let (m, n) = (art.spec.m(), art.spec.n);

    let mut runs = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("runs.csv"))?));
    let mut header: Vec<String> =
        ["start", "converged", "outer_iters", "fw_iters", "shrinks", "final_mu", "final_gamma"].map(String::from).into();
    header.extend(numbered("f", m));
    header.extend(numbered("x", n));
    runs.write_record(&header)?;
    for r in &art.records {
        let o = &r.outcome;
        let mut row = vec![
            r.start.to_string(),
            u8::from(o.converged).to_string(),
            o.outer_iters.to_string(),
            o.fw_iters_total.to_string(),
            o.shrinks_total.to_string(),
            fmt_f64(o.final_mu),
            fmt_f64(o.final_gamma),
        ];
        row.extend(o.objectives.iter().chain(&o.x).map(|v| fmt_f64(*v)));
        runs.write_record(&row)?;
    }
    runs.flush()?;

    let mut timings = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("timings.csv"))?));
    timings.write_record(["start", "time_s"])?;
    for r in &art.records {
        timings.write_record([r.start.to_string(), fmt_f64(r.time_s)])?;
    }
    timings.flush()?;

    write_front(BufWriter::new(File::create(dir.join("front.csv"))?), m, &art.front)?;
    std::fs::write(dir.join("manifest.json"), art.manifest.to_json()?)?;
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&art.summary())? + "\n")?;

    if art.manifest.trace {
        let mut trace = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("trace.csv"))?));
        let mut header: Vec<String> =
            ["start", "k", "mu", "gamma", "dx_inf", "fw_gap", "fw_iters", "shrinks", "descent_slack"].map(String::from).into();
        header.extend(numbered("f", m));
        trace.write_record(&header)?;
        for r in &art.records {
            for t in &r.outcome.trace {
                let mut row = vec![
                    r.start.to_string(),
                    t.k.to_string(),
                    fmt_f64(t.mu),
                    fmt_f64(t.gamma),
                    fmt_f64(t.dx_inf),
                    fmt_f64(t.fw_gap),
                    t.fw_iterations.to_string(),
                    t.shrinks.to_string(),
                    fmt_f64(t.descent_slack),
                ];
                row.extend(t.objectives.iter().map(|v| fmt_f64(*v)));
                trace.write_record(&row)?;
            }
        }
        trace.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::SolverKind;
    use sapgm_core::metrics::dominates;

    fn small(problem: &str) -> RunManifest {
        RunManifest { problem: problem.into(), starts: 6, seed: 3, ..RunManifest::default() }
    }

    #[test]
    fn records_follow_start_order_and_front_is_nondominated() {
        let art = execute(&small("cb3_mf1")).unwrap();
        assert_eq!(art.records.len(), 6);
        assert!(art.records.iter().enumerate().all(|(i, r)| r.start == i));
        for a in &art.front {
            assert!(!art.front.iter().any(|b| dominates(b, a)));
        }
        assert!(art.front.iter().all(|p| art.records.iter().any(|r| &r.outcome.objectives == p)));
        let s = art.summary();
        assert_eq!(s.total_outer_iters, art.records.iter().map(|r| r.outcome.outer_iters as u64).sum::<u64>());
        assert!(s.total_time_s >= 0.0);
    }

    #[test]
    fn parallel_and_serial_runs_agree() {
        let m = small("sp1_l1");
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| execute(&m)).unwrap();
        let parallel = execute(&m).unwrap();
        let strip = |a: &RunArtifacts| a.records.iter().map(|r| r.outcome.clone()).collect::<Vec<_>>();
        assert_eq!(strip(&serial), strip(&parallel));
        assert_eq!(serial.front, parallel.front);
    }

    #[test]
    fn baseline_on_nonsmooth_problem_is_refused() {
        let m = RunManifest { solver: SolverKind::Fpga, ..small("cr_mf2") };
        assert!(matches!(execute(&m), Err(HarnessError::Usage(_))));
    }
}
