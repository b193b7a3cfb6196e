//! Least-squares slopes of query counts on log–log axes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CliError, CliResult};
use crate::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    N,
    InvEps,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "n" => Ok(Axis::N),
            "inv_eps" | "eps" => Ok(Axis::InvEps),
            other => Err(CliError::Config(format!("unknown axis {other:?} (n or inv_eps)"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::N => "n",
            Axis::InvEps => "inv_eps",
        })
    }
}

/// Which ledger column to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Main,
    Folklore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub axis: Axis,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Whether counts were divided by `m^2` before fitting.
    pub log_correction: bool,
    pub points: usize,
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axis={} slope={:.4} intercept={:.4} r2={:.4} log_correction={} points={}",
            self.axis, self.slope, self.intercept, self.r2, self.log_correction, self.points
        )
    }
}

/// Main-ledger fit with the `m^2` correction.
pub fn fit_scaling(rows: &[SweepRow], axis: Axis) -> CliResult<ScalingFit> {
    fit_scaling_with(rows, axis, Column::Main, true)
}

/// Averages the (optionally `m^2`-corrected) counts per distinct axis value,
/// then fits `log2(count) = slope * log2(axis) + intercept`.
pub fn fit_scaling_with(rows: &[SweepRow], axis: Axis, column: Column, correction: bool) -> CliResult<ScalingFit> {
    let mut groups: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in rows {
        let q = match column {
            Column::Main => r.queries_total,
            Column::Folklore => r
                .queries_folklore
                .ok_or_else(|| CliError::Config("rows carry no folklore counts".into()))?,
        } as f64;
        let y = if correction { q / (r.m * r.m) as f64 } else { q };
        let x = match axis {
            Axis::N => r.n as f64,
            Axis::InvEps => 1.0 / r.eps,
        };
        let g = groups.entry(x.to_bits()).or_insert((x, 0.0, 0));
        g.1 += y;
        g.2 += 1;
    }
    if groups.len() < 4 {
        return Err(CliError::Config(format!(
            "need at least 4 distinct {axis} values, got {}",
            groups.len()
        )));
    }
    let pts: Vec<(f64, f64)> = groups
        .values()
        .map(|&(x, sum, count)| (x.log2(), (sum / count as f64).log2()))
        .collect();
    if pts.iter().any(|(_, y)| !y.is_finite()) {
        return Err(CliError::Config("query counts must be positive to fit".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy <= f64::EPSILON * k {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        axis,
        slope,
        intercept,
        r2,
        log_correction: correction,
        points: pts.len(),
    })
}
