//! Seeded sweeps over `(family, n, eps, trial)` and their CSV form.

use rayon::prelude::*;

use qentropy::estimator::{folklore_estimate_with, Mode};
use qentropy::{choose_params, make_distribution, Family, OracleModel, PolyCache, PreparedEstimator};

use crate::config::SweepConfig;
use crate::error::{CliError, CliResult};

pub const CSV_HEADER: &str =
    "family,n,eps,seed,estimate,exact,abs_err,success,queries_total,queries_folklore,m,skipped_levels";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    pub estimate: f64,
    pub exact: f64,
    pub abs_err: f64,
    pub success: bool,
    pub queries_total: u64,
    pub queries_folklore: Option<u64>,
    pub m: usize,
    pub skipped_levels: usize,
}

/// Runs every trial of every cell. Trial `t` uses seed `seed0 + t` in every
/// cell. Rows come back sorted by `(family, n, eps, seed)` and are written to
/// `output_path` when one is set.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let cache = PolyCache::<f64>::new();
    let mode = if cfg.exact_qae { Mode::Exact } else { Mode::Sampled };
    let mut cells = Vec::new();
    for fam in &cfg.families {
        for &n in &cfg.n_values {
            for &eps in &cfg.eps_values {
                cells.push((fam, n, eps));
            }
        }
    }
    let per_cell: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(fam, n, eps)| run_cell(cfg, &cache, mode, fam, n, eps))
        .collect::<CliResult<_>>()?;
    let mut rows: Vec<SweepRow> = per_cell.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.family
            .cmp(&b.family)
            .then(a.n.cmp(&b.n))
            .then(a.eps.total_cmp(&b.eps))
            .then(a.seed.cmp(&b.seed))
    });
    if let Some(path) = &cfg.output_path {
        std::fs::write(path, rows_to_csv(&rows)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(rows)
}

fn run_cell(
    cfg: &SweepConfig,
    cache: &PolyCache<f64>,
    mode: Mode,
    fam: &Family,
    n: usize,
    eps: f64,
) -> CliResult<Vec<SweepRow>> {
    let dist = make_distribution::<f64>(fam, n)?;
    let params = choose_params(n, eps)?.with_cost_constant(cfg.cost_constant)?;
    let m = params.m;
    let prep = PreparedEstimator::new(dist.clone(), params, cache)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = cfg.seed0.wrapping_add(t as u64);
            let rep = prep.run(seed, mode)?;
            let queries_folklore = if cfg.folklore {
                let mut o = OracleModel::new(dist.clone()).with_cost_constant(cfg.cost_constant);
                Some(folklore_estimate_with(&mut o, eps, seed, mode, cache)?.queries())
            } else {
                None
            };
            Ok(SweepRow {
                family: fam.name(),
                n,
                eps,
                seed,
                estimate: rep.v,
                exact: rep.exact_entropy,
                abs_err: rep.abs_error,
                success: rep.abs_error <= eps,
                queries_total: rep.queries(),
                queries_folklore,
                m,
                skipped_levels: rep.skipped_levels(),
            })
        })
        .collect()
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.12e},{:.12e},{:.12e},{},{},{},{},{}\n",
            field(&r.family),
            r.n,
            r.eps,
            r.seed,
            r.estimate,
            r.exact,
            r.abs_err,
            u8::from(r.success),
            r.queries_total,
            r.queries_folklore.map(|q| q.to_string()).unwrap_or_default(),
            r.m,
            r.skipped_levels
        ));
    }
    out
}

/// Parses the output of [`rows_to_csv`]. Family names never contain commas,
/// so a plain split suffices.
pub fn rows_from_csv(text: &str) -> CliResult<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => return Err(CliError::Config("missing or unexpected CSV header".into())),
    }
    let bad = |i: usize, what: &str| CliError::Config(format!("row {}: bad {what}", i + 2));
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(bad(i, "column count"));
            }
            Ok(SweepRow {
                family: f[0].to_string(),
                n: f[1].parse().map_err(|_| bad(i, "n"))?,
                eps: f[2].parse().map_err(|_| bad(i, "eps"))?,
                seed: f[3].parse().map_err(|_| bad(i, "seed"))?,
                estimate: f[4].parse().map_err(|_| bad(i, "estimate"))?,
                exact: f[5].parse().map_err(|_| bad(i, "exact"))?,
                abs_err: f[6].parse().map_err(|_| bad(i, "abs_err"))?,
                success: f[7] == "1",
                queries_total: f[8].parse().map_err(|_| bad(i, "queries_total"))?,
                queries_folklore: if f[9].is_empty() {
                    None
                } else {
                    Some(f[9].parse().map_err(|_| bad(i, "queries_folklore"))?)
                },
                m: f[10].parse().map_err(|_| bad(i, "m"))?,
                skipped_levels: f[11].parse().map_err(|_| bad(i, "skipped_levels"))?,
            })
        })
        .collect()
}

/// Fraction of rows whose estimate landed within eps.
pub fn success_rate(rows: &[SweepRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.success).count() as f64 / rows.len() as f64
}
