//! CSV and binary artifacts. Column layouts are listed in `docs/formats.md`.

use crate::error::{HarnessError, Result};
use sapgm_core::metrics::ProfileCurve;
use sapgm_core::LargeScaleData;
use std::io::{Read, Write};
use std::path::Path;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `prefix1,...,prefixN`
pub fn numbered(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

/// Writes a front with header `f1,...,fm`.
pub fn write_front<W: Write>(w: W, m: usize, points: &[Vec<f64>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(numbered("f", m))?;
    for p in points {
        out.write_record(p.iter().map(|v| fmt_f64(*v)))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a front; the header must be `f1,...,fm`.
pub fn read_front(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::file(path, e.to_string()))?;
    let header = r.headers().map_err(|e| HarnessError::file(path, e.to_string()))?.clone();
    let m = header.len();
    if m == 0 || header.iter().ne(numbered("f", m).iter().map(String::as_str)) {
        return Err(HarnessError::file(path, "header must be f1,...,fm"));
    }
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::file(path, e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| HarnessError::file(path, format!("row {}: {e}", line + 1)))?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(HarnessError::file(path, format!("row {}: non-finite value", line + 1)));
        }
        points.push(row);
    }
    Ok(points)
}

/// One row of `metrics.csv`; `None` is an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub solver: String,
    pub points: usize,
    pub purity: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub hypervolume: Option<f64>,
    pub outer_iters: Option<u64>,
    pub time_s: Option<f64>,
}

pub const METRICS_HEADER: [&str; 8] = ["solver", "points", "purity", "gamma", "delta", "hypervolume", "outer_iters", "time_s"];

pub fn write_metrics<W: Write>(w: W, rows: &[MetricsRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(METRICS_HEADER)?;
    for r in rows {
        out.write_record([
            r.solver.clone(),
            r.points.to_string(),
            fmt_opt(r.purity),
            fmt_opt(r.gamma),
            fmt_opt(r.delta),
            fmt_opt(r.hypervolume),
            r.outer_iters.map(|v| v.to_string()).unwrap_or_default(),
            fmt_opt(r.time_s),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>> {
    let bad = |msg: String| HarnessError::file(path, msg);
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(METRICS_HEADER) {
        return Err(bad(format!("header must be {}", METRICS_HEADER.join(","))));
    }
    let float = |s: &str, line: usize| -> Result<Option<f64>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse().map(Some).map_err(|e| bad(format!("row {line}: {e}")))
    };
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let line = i + 1;
        rows.push(MetricsRow {
            solver: rec[0].to_string(),
            points: rec[1].parse().map_err(|e| bad(format!("row {line}: {e}")))?,
            purity: float(&rec[2], line)?,
            gamma: float(&rec[3], line)?,
            delta: float(&rec[4], line)?,
            hypervolume: float(&rec[5], line)?,
            outer_iters: if rec[6].is_empty() {
                None
            } else {
                Some(rec[6].parse().map_err(|e| bad(format!("row {line}: {e}")))?)
            },
            time_s: float(&rec[7], line)?,
        });
    }
    Ok(rows)
}

/// `tau,rho_<label>,...` with one row per grid point. All curves share a grid.
pub fn write_profile<W: Write>(w: W, curves: &[ProfileCurve]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![String::from("tau")];
    header.extend(curves.iter().map(|c| format!("rho_{}", c.label)));
    out.write_record(&header)?;
    if let Some(first) = curves.first() {
        for (i, (tau, _)) in first.points.iter().enumerate() {
            let mut row = vec![fmt_f64(*tau)];
            row.extend(curves.iter().map(|c| fmt_f64(c.points[i].1)));
            out.write_record(&row)?;
        }
    }
    out.flush()?;
    Ok(())
}

const MAGIC: &[u8; 8] = b"SAPGMLS1";

/// Little-endian: magic, `m_rows: u64`, `n: u64`, `spar: f64`, `seed: u64`,
/// `epsilon_hat: f64`, then `A` row-major, `x_true`, `b`.
pub fn write_large_scale<W: Write>(mut w: W, d: &LargeScaleData) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(d.m_rows as u64).to_le_bytes())?;
    w.write_all(&(d.n as u64).to_le_bytes())?;
    w.write_all(&d.spar.to_le_bytes())?;
    w.write_all(&d.seed.to_le_bytes())?;
    w.write_all(&d.epsilon_hat.to_le_bytes())?;
    for v in d.a.iter().chain(&d.x_true).chain(&d.b) {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_large_scale(path: &Path) -> Result<LargeScaleData> {
    let bad = |msg: &str| HarnessError::file(path, msg.to_string());
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| HarnessError::file(path, e.to_string()))?;
    if bytes.len() < 48 || &bytes[..8] != MAGIC {
        return Err(bad("not a large-scale data file"));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 + 8 * i..16 + 8 * i].try_into().expect("8 bytes") };
    let m_rows = u64::from_le_bytes(word(0)) as usize;
    let n = u64::from_le_bytes(word(1)) as usize;
    let spar = f64::from_le_bytes(word(2));
    let seed = u64::from_le_bytes(word(3));
    let epsilon_hat = f64::from_le_bytes(word(4));
    let count = m_rows
        .checked_mul(n)
        .and_then(|mn| mn.checked_add(n + m_rows))
        .ok_or_else(|| bad("header sizes overflow"))?;
    let body = &bytes[48..];
    if body.len() != 8 * count {
        return Err(bad("payload length does not match the header"));
    }
    let values: Vec<f64> =
        body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    let (a, rest) = values.split_at(m_rows * n);
    let (x_true, b) = rest.split_at(n);
    Ok(LargeScaleData {
        m_rows,
        n,
        spar,
        seed,
        epsilon_hat,
        a: a.to_vec(),
        x_true: x_true.to_vec(),
        b: b.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sapgm_core::problems::generate_large_scale;

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324, f64::MAX] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn front_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("front.csv");
        let pts = vec![vec![0.1, 2.0 / 3.0], vec![1e-17, -4.0]];
        write_front(std::fs::File::create(&path).unwrap(), 2, &pts).unwrap();
        assert_eq!(read_front(&path).unwrap(), pts);
    }

    #[test]
    fn front_header_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        let err = read_front(&path).unwrap_err().to_string();
        assert!(err.contains("x.csv"), "{err}");
    }

    #[test]
    fn metrics_round_trip() {
        let rows = vec![MetricsRow {
            solver: "s".into(),
            points: 3,
            purity: Some(0.5),
            gamma: None,
            delta: Some(1.25),
            hypervolume: Some(0.0),
            outer_iters: Some(29600),
            time_s: None,
        }];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("metrics.csv");
        write_metrics(std::fs::File::create(&path).unwrap(), &rows).unwrap();
        assert_eq!(read_metrics(&path).unwrap(), rows);
    }

    #[test]
    fn large_scale_round_trip() {
        let d = generate_large_scale(7, 11, 0.3, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.bin");
        write_large_scale(std::fs::File::create(&path).unwrap(), &d).unwrap();
        assert_eq!(read_large_scale(&path).unwrap(), d);
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
        assert!(read_large_scale(&path).is_err());
    }
}
