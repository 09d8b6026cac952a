//! Front metrics tables and performance profiles.

use crate::error::{HarnessError, Result};
use crate::formats::{read_front, MetricsRow};
use crate::runner::Summary;
use sapgm_core::metrics::{
    default_reference_point, hypervolume, inverted_cost, performance_profile, points_beyond, purity, reference_front,
    spread_delta, spread_gamma, Extremes, Profile, INVERT_EPS,
};
use sapgm_core::Front;
use std::path::{Path, PathBuf};

/// A front plus the cost columns of the run that produced it, if known.
#[derive(Debug, Clone)]
pub struct FrontInput {
    pub label: String,
    pub path: PathBuf,
    pub points: Vec<Vec<f64>>,
    pub outer_iters: Option<u64>,
    pub time_s: Option<f64>,
}

/// Splits `label=path`; a bare path is labelled by its file stem.
pub fn parse_labeled(arg: &str) -> Result<(String, PathBuf)> {
    let (label, path) = match arg.split_once('=') {
        Some((l, p)) => (l.to_string(), PathBuf::from(p)),
        None => {
            let p = PathBuf::from(arg);
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (stem, p)
        }
    };
    if label.is_empty() || label.contains(',') {
        return Err(HarnessError::usage(format!("'{arg}' needs a label without commas: label=path")));
    }
    Ok((label, path))
}

/// Reads a front CSV, or a run directory's `front.csv` and `summary.json`.
pub fn load_front_input(label: &str, path: &Path) -> Result<FrontInput> {
    let (front_path, summary) = if path.is_dir() {
        let s = path.join("summary.json");
        let summary: Option<Summary> = if s.exists() {
            let text = std::fs::read_to_string(&s)?;
            Some(serde_json::from_str(&text).map_err(|e| HarnessError::file(&s, e.to_string()))?)
        } else {
            None
        };
        (path.join("front.csv"), summary)
    } else {
        (path.to_path_buf(), None)
    };
    Ok(FrontInput {
        label: label.to_string(),
        points: read_front(&front_path)?,
        path: front_path,
        outer_iters: summary.as_ref().map(|s| s.total_outer_iters),
        time_s: summary.as_ref().map(|s| s.total_time_s),
    })
}

/// Purity against the union reference, spreads against the reference
/// extremes and hypervolume at `ref_point` (default: union max plus 10% of
/// the range). Every front is filtered to its nondominated points first.
pub fn compute_metrics(inputs: &[FrontInput], ref_point: Option<&[f64]>) -> Result<Vec<MetricsRow>> {
    if inputs.is_empty() {
        return Err(HarnessError::usage("metrics needs at least one front"));
    }
    let mut dim: Option<(usize, &Path)> = None;
    for inp in inputs {
        if let Some(first) = inp.points.first() {
            match dim {
                None => dim = Some((first.len(), &inp.path)),
                Some((m, origin)) if m != first.len() => {
                    return Err(HarnessError::file(
                        &inp.path,
                        format!("has {} objectives but {} has {m}", first.len(), origin.display()),
                    ));
                }
                _ => {}
            }
        }
    }
    let fronts = inputs.iter().map(|i| Front::filtered(i.label.clone(), &i.points)).collect::<sapgm_core::Result<Vec<_>>>()?;
    let reference = reference_front(&fronts)?;
    let extremes = Extremes::of(&reference);
    let r = match ref_point {
        Some(r) => {
            if let Some((m, _)) = dim.filter(|(m, _)| *m != r.len()) {
                return Err(HarnessError::usage(format!("reference point has {} entries, fronts have {m}", r.len())));
            }
            Some(r.to_vec())
        }
        None => default_reference_point(&fronts),
    };
    let mut rows = Vec::new();
    for (inp, front) in inputs.iter().zip(&fronts) {
        let hv = match &r {
            Some(r) if !front.is_empty() => {
                let beyond = points_beyond(&front.points, r);
                if beyond > 0 {
                    log::warn!("{}: {beyond} points do not dominate the reference point", inp.label);
                }
                match hypervolume(&front.points, r) {
                    Ok(v) => Some(v),
                    Err(sapgm_core::Error::Unsupported(msg)) => {
                        log::warn!("{}: {msg}", inp.label);
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            _ => None,
        };
        rows.push(MetricsRow {
            solver: inp.label.clone(),
            points: front.len(),
            purity: purity(front, &reference),
            gamma: spread_gamma(front, extremes.as_ref()),
            delta: spread_delta(front, extremes.as_ref()),
            hypervolume: hv,
            outer_iters: inp.outer_iters,
            time_s: inp.time_s,
        });
    }
    Ok(rows)
}

/// Profiled columns of `metrics.csv`.
pub const PROFILE_METRICS: [&str; 6] = ["outer_iters", "time_s", "purity", "gamma", "delta", "hypervolume"];

/// Cost of one cell: purity and hypervolume are inverted, the rest are used
/// as is and floored at `1e-12`. Empty cells are failures.
pub fn metric_cost(row: &MetricsRow, metric: &str) -> Option<f64> {
    let direct = |v: Option<f64>| v.filter(|v| v.is_finite()).map(|v| v.max(INVERT_EPS));
    match metric {
        "outer_iters" => direct(row.outer_iters.map(|v| v as f64)),
        "time_s" => direct(row.time_s),
        "gamma" => direct(row.gamma),
        "delta" => direct(row.delta),
        "purity" => row.purity.filter(|v| v.is_finite() && *v >= 0.0).map(inverted_cost),
        "hypervolume" => row.hypervolume.filter(|v| v.is_finite() && *v >= 0.0).map(inverted_cost),
        _ => None,
    }
}

/// One profile per metric over `tables[problem]`. Solvers are the union of
/// labels in first-seen order; a solver missing from a table fails there.
pub fn build_profiles(tables: &[Vec<MetricsRow>], grid_points: usize) -> Result<Vec<(&'static str, Profile)>> {
    let mut labels: Vec<String> = Vec::new();
    for t in tables {
        for (i, r) in t.iter().enumerate() {
            if t[..i].iter().any(|q| q.solver == r.solver) {
                return Err(HarnessError::usage(format!("solver '{}' appears twice in one table", r.solver)));
            }
            if !labels.contains(&r.solver) {
                labels.push(r.solver.clone());
            }
        }
    }
    if labels.len() < 2 {
        return Err(HarnessError::usage(format!("profiles need at least 2 solvers, found {}", labels.len())));
    }
    let mut out = Vec::new();
    for metric in PROFILE_METRICS {
        let costs: Vec<Vec<Option<f64>>> = tables
            .iter()
            .map(|t| labels.iter().map(|l| t.iter().find(|r| &r.solver == l).and_then(|r| metric_cost(r, metric))).collect())
            .collect();
        let profile = performance_profile(&labels, &costs, grid_points)?;
        if !profile.dropped.is_empty() {
            log::warn!("{metric}: tables {:?} dropped, no solver has a value", profile.dropped);
        }
        out.push((metric, profile));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(label: &str, points: Vec<Vec<f64>>) -> FrontInput {
        FrontInput { label: label.into(), path: PathBuf::from(format!("{label}.csv")), points, outer_iters: None, time_s: None }
    }

    fn row(solver: &str, iters: u64, purity: f64) -> MetricsRow {
        MetricsRow {
            solver: solver.into(),
            points: 1,
            purity: Some(purity),
            gamma: Some(1.0),
            delta: Some(1.0),
            hypervolume: Some(1.0),
            outer_iters: Some(iters),
            time_s: None,
        }
    }

    #[test]
    fn front_against_itself_is_pure() {
        let pts = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]];
        let rows = compute_metrics(&[input("a", pts)], None).unwrap();
        assert_eq!(rows[0].purity, Some(1.0));
        assert!(rows[0].gamma.unwrap().is_finite() && rows[0].delta.unwrap().is_finite());
        assert!(rows[0].hypervolume.unwrap() > 0.0);
    }

    #[test]
    fn dimension_mismatch_names_the_file() {
        let err = compute_metrics(&[input("a", vec![vec![0.0, 1.0]]), input("b", vec![vec![0.0, 1.0, 2.0]])], None)
            .unwrap_err()
            .to_string();
        assert!(err.contains("b.csv"), "{err}");
    }

    #[test]
    fn labels_parse() {
        assert_eq!(parse_labeled("dnnm=x/y.csv").unwrap(), ("dnnm".into(), PathBuf::from("x/y.csv")));
        assert_eq!(parse_labeled("x/front_a.csv").unwrap().0, "front_a");
        assert!(parse_labeled("=y.csv").is_err());
    }

    #[test]
    fn profiles_follow_hand_computed_steps() {
        // iterations: problem 1 a=100 b=200, problem 2 a=300 b=150
        let tables = vec![vec![row("a", 100, 1.0), row("b", 200, 0.5)], vec![row("a", 300, 0.25), row("b", 150, 1.0)]];
        let profiles = build_profiles(&tables, 10).unwrap();
        let (_, iters) = &profiles[0];
        assert_eq!(iters.curves[0].at(1.0), 0.5);
        assert_eq!(iters.curves[1].at(1.0), 0.5);
        assert_eq!(iters.curves[0].at(1.999), 0.5);
        assert_eq!(iters.curves[0].at(2.0), 1.0);
        assert_eq!(iters.curves[1].at(2.0), 1.0);
        // purity is inverted: a wins problem 1, b wins problem 2 at ratio 4 for a
        let (name, pur) = &profiles[2];
        assert_eq!(*name, "purity");
        assert_eq!(pur.curves[0].at(1.0), 0.5);
        assert_eq!(pur.curves[0].at(3.99), 0.5);
        assert_eq!(pur.curves[0].at(4.0), 1.0);
        // time is empty everywhere
        assert_eq!(profiles[1].1.dropped, vec![0, 1]);
    }

    #[test]
    fn identical_solvers_hit_one_at_tau_one() {
        let tables = vec![vec![row("a", 10, 0.5), row("b", 10, 0.5)]];
        for (_, p) in build_profiles(&tables, 5).unwrap().iter().filter(|(m, _)| *m != "time_s") {
            assert!(p.curves.iter().all(|c| c.at(1.0) == 1.0));
        }
    }

    #[test]
    fn single_solver_is_a_usage_error() {
        let tables = vec![vec![row("a", 10, 1.0)], vec![row("a", 20, 1.0)]];
        assert!(matches!(build_profiles(&tables, 5), Err(HarnessError::Usage(_))));
    }
}
