//! Least-squares power-law fits `count ~ c T^eps`.

use std::io::{BufRead, Write};

use serde::Serialize;

use super::count::CountResult;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct GrowthFit {
    pub epsilon: f64,
    pub log_c: f64,
    pub c: f64,
    /// `log count - (eps log T + log c)` per used point.
    pub residuals: Vec<f64>,
    pub points_used: usize,
}

/// Fit of `log count` against `log T` over the points with positive counts.
pub fn growth_fit(counts: &[(u64, u64)]) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .filter(|(t, c)| *t > 0 && *c > 0)
        .map(|&(t, c)| ((t as f64).ln(), (c as f64).ln()))
        .collect();
    let mut ts: Vec<u64> = counts.iter().filter(|(t, c)| *t > 0 && *c > 0).map(|p| p.0).collect();
    ts.sort_unstable();
    ts.dedup();
    if ts.len() < 3 {
        return invalid("a growth fit needs at least 3 distinct T with positive counts");
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let epsilon = sxy / sxx;
    let log_c = my - epsilon * mx;
    Ok(GrowthFit {
        epsilon,
        log_c,
        c: log_c.exp(),
        residuals: pts.iter().map(|p| p.1 - (epsilon * p.0 + log_c)).collect(),
        points_used: pts.len(),
    })
}

pub fn write_csv<W: Write>(mut w: W, rows: &[CountResult]) -> Result<()> {
    writeln!(w, "T,count,mode,min_margin")?;
    for r in rows {
        let m = r.min_margin.map(|x| format!("{x:e}")).unwrap_or_default();
        writeln!(w, "{},{},{},{}", r.t, r.count, r.mode, m)?;
    }
    Ok(())
}

/// `(T, count)` pairs from a CSV written by [`write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    // '#' lines carry the run configuration
    let mut lines = r.lines().filter(|l| !l.as_ref().is_ok_and(|s| s.starts_with('#')));
    let header = lines.next().ok_or_else(|| Error::InvalidInput("empty CSV".into()))??;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let (Some(ti), Some(ci)) = (cols.iter().position(|c| *c == "T"), cols.iter().position(|c| *c == "count")) else {
        return invalid("CSV needs T and count columns");
    };
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |i: usize| -> Result<u64> {
            f.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad value on CSV line {}", n + 2)))
        };
        out.push((parse(ti)?, parse(ci)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{enumerate_bounded, Interval};

    #[test]
    fn exact_laws() {
        let sq: Vec<(u64, u64)> = (2..10).map(|t| (t, t * t)).collect();
        assert!((growth_fit(&sq).unwrap().epsilon - 2.0).abs() < 1e-9);
        let flat: Vec<(u64, u64)> = (2..10).map(|t| (t, 7)).collect();
        let f = growth_fit(&flat).unwrap();
        assert!(f.epsilon.abs() < 1e-9 && (f.c - 7.0).abs() < 1e-9);
        assert!(growth_fit(&[(1, 1), (2, 4)]).is_err());
    }

    #[test]
    fn farey_growth() {
        let counts: Vec<(u64, u64)> = (10..=100)
            .step_by(10)
            .map(|t| (t, enumerate_bounded(1, t, &Interval::unit()).unwrap().len() as u64))
            .collect();
        let f = growth_fit(&counts).unwrap();
        assert!((1.8..=2.2).contains(&f.epsilon), "{}", f.epsilon);
    }

    #[test]
    fn csv_round_trip() {
        let rows: Vec<(u64, u64)> = vec![(3, 5), (4, 7)];
        let text = "# {\"seed\":0}\nT,count,mode,min_margin\n3,5,full,\n4,7,full,1e-3\n";
        assert_eq!(read_csv(text.as_bytes()).unwrap(), rows);
    }
}
