//! Invariant suites behind `qentropy certify`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qentropy::amplitude::{fixed_point_amplify_rounds, fixed_point_closed_form, qae_distribution, qae_error_bound};
use qentropy::lowerbound::HardInstance;
use qentropy::separation::{threshold, BranchSimulator};
use qentropy::{
    approx_sqrt_log, choose_params, entropy_relation_check, make_distribution, make_sk, make_step_poly, BoundedPoly,
    CascadeConfig, CoefficientTable, Error, Family, PolyCache, PreparedEstimator, StructuredState,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Polys,
    Cascade,
    Qae,
    Reduction,
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "polys" => Ok(Target::Polys),
            "cascade" => Ok(Target::Cascade),
            "qae" => Ok(Target::Qae),
            "reduction" => Ok(Target::Reduction),
            other => Err(CliError::Config(format!(
                "unknown certification target {other:?} (polys, cascade, qae, reduction)"
            ))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Polys => "polys",
            Target::Cascade => "cascade",
            Target::Qae => "qae",
            Target::Reduction => "reduction",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertReport {
    pub target: Target,
    pub checks: Vec<Check>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: {}\n",
                if c.ok { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.ok).count();
        out.push_str(&format!(
            "certify {}: {} ({} checks, {} failed)\n",
            self.target,
            if failed == 0 { "pass" } else { "fail" },
            self.checks.len(),
            failed
        ));
        out
    }
}

/// Runs the named suite. For `polys`, `poly_file` replaces the default set
/// with a single coefficient table read from disk.
pub fn certify(target: Target, poly_file: Option<&Path>) -> CliResult<CertReport> {
    let checks = match target {
        Target::Polys => match poly_file {
            Some(path) => poly_file_checks(path)?,
            None => poly_checks()?,
        },
        Target::Cascade => cascade_checks()?,
        Target::Qae => qae_checks()?,
        Target::Reduction => reduction_checks()?,
    };
    Ok(CertReport { target, checks })
}

fn offset_check(label: &str, p: &BoundedPoly) -> Check {
    let g = p.grid_check(true);
    let detail = format!(
        "degree {}, offset grid of {} points: sup {:.6}, errors {:?} vs bounds {:?}",
        p.degree(),
        g.points,
        g.sup,
        g.achieved.iter().map(|a| format!("{a:.3e}")).collect::<Vec<_>>(),
        p.certificates()
            .iter()
            .map(|c| format!("{:.3e}", c.bound))
            .collect::<Vec<_>>()
    );
    Check::new(format!("{label}/offset"), g.passes(p.certificates(), 2.0), detail)
}

fn verify_check(label: &str, p: &BoundedPoly) -> Check {
    match p.verify() {
        Ok(()) => Check::new(format!("{label}/cert"), true, "stored certificates hold"),
        Err(e) => Check::new(format!("{label}/cert"), false, e.to_string()),
    }
}

type PolyBuilder = Box<dyn Fn() -> qentropy::Result<BoundedPoly> + Send + Sync>;

/// The default polynomial set: `S_k`, step and `sqrt(log)` families.
pub fn default_polys() -> CliResult<Vec<(String, BoundedPoly)>> {
    let mut specs: Vec<(String, PolyBuilder)> = Vec::new();
    for k in 1..=8 {
        specs.push((format!("S_{k}(eta=0.01)"), Box::new(move || make_sk(k, 0.01))));
    }
    for eps in [0.1, 0.05] {
        for j in 1..=8 {
            specs.push((
                format!("step(phi=2^-{j},eps={eps})"),
                Box::new(move || make_step_poly(0.5f64.powi(j), eps)),
            ));
        }
    }
    for j in 1..=7 {
        specs.push((
            format!("sqrt_log(beta=2^-{j},eta=0.05)"),
            Box::new(move || approx_sqrt_log(0.5f64.powi(j), 0.05)),
        ));
    }
    specs
        .par_iter()
        .map(|(name, build)| Ok((name.clone(), build()?)))
        .collect()
}

fn poly_checks() -> CliResult<Vec<Check>> {
    let polys = default_polys()?;
    let mut checks = Vec::new();
    for (name, p) in &polys {
        checks.push(verify_check(name, p));
        checks.push(offset_check(name, p));
    }
    Ok(checks)
}

fn poly_file_checks(path: &Path) -> CliResult<Vec<Check>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let label = path.display().to_string();
    match BoundedPoly::<f64>::from_text(&text) {
        Ok(p) => Ok(vec![verify_check(&label, &p), offset_check(&label, &p)]),
        Err(Error::Check { check, detail }) => Ok(vec![Check::new(format!("{label}/{check}"), false, detail)]),
        Err(Error::Unbounded(sup)) => Ok(vec![Check::new(
            format!("{label}/sup_norm"),
            false,
            format!("measured sup {sup}"),
        )]),
        Err(e) => Err(e.into()),
    }
}

/// 1000 points spaced evenly in `log2 x` over `[lo, 1]`.
pub fn log_grid(lo: f64, points: usize) -> Vec<f64> {
    let a = lo.log2();
    (0..points)
        .map(|i| 2f64.powf(a * (1.0 - i as f64 / (points - 1) as f64)))
        .collect()
}

fn cascade_checks() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let m_max = 12;
    for eps in [0.1, 0.05] {
        let cache = PolyCache::new();
        let full = CascadeConfig::with_floor(m_max, eps, eps * eps / 8.0, &cache)?;
        // Threshold clauses for every level on a grid reaching below phi_m.
        let xs = log_grid(threshold::<f64>(m_max + 1), 1000);
        let table = CoefficientTable::build(&full, &xs)?;
        let mut worst = (0.0f64, String::from("none"));
        for j in 1..=m_max {
            let phi = threshold::<f64>(j);
            for (i, &x) in xs.iter().enumerate() {
                let (b, bp) = (table.beta(j)?[i], table.beta_prime(j)?[i]);
                if x <= phi && b > worst.0 {
                    worst = (b, format!("beta_{j}({x:.6e}) = {b:.3e}"));
                }
                if x >= 2.0 * phi && bp > worst.0 {
                    worst = (bp, format!("beta'_{j}({x:.6e}) = {bp:.3e}"));
                }
            }
        }
        checks.push(Check::new(
            format!("threshold(eps={eps})"),
            worst.0 <= eps,
            format!("worst clause {} vs eps {eps}", worst.1),
        ));
        for m in 1..=m_max {
            let cfg = CascadeConfig::with_floor(m, eps, eps * eps / 8.0, &cache)?;
            let xs = log_grid(threshold::<f64>(m), 1000);
            let t = CoefficientTable::build(&cfg, &xs)?;
            let mut fail = None;
            let mut min_margin = f64::INFINITY;
            for (i, x) in xs.iter().enumerate() {
                let c = t.concentration(i, 4.0, eps)?;
                let floor = 1.0 - 4.0 * c.j_star as f64 * eps * eps;
                min_margin = min_margin.min(c.mass - floor);
                if !c.ok && fail.is_none() {
                    fail = Some(format!(
                        "x = {:.6e}, j* = {}, mass {:.6} < {:.6}",
                        x, c.j_star, c.mass, floor
                    ));
                }
            }
            checks.push(Check::new(
                format!("concentration(eps={eps},m={m})"),
                fail.is_none(),
                fail.unwrap_or_else(|| format!("min margin {min_margin:.3e}")),
            ));
        }
    }
    let fixtures = fixtures();
    let cfg = CascadeConfig::new(8, 0.1)?;
    for (fam, n) in &fixtures {
        let d = make_distribution::<f64>(fam, *n)?;
        let xs = d.amplitudes();
        let table = CoefficientTable::build(&cfg, &xs)?;
        let mut sim = BranchSimulator::new(d.probs());
        let mut dev = 0.0f64;
        for k in 1..=8 {
            sim.apply_level(cfg.step_poly(k)?, &xs)?;
            let s = StructuredState::from_table(&table, d.probs(), k)?;
            for i in 0..*n {
                for j in 1..=k {
                    dev = dev.max((s.branches[j - 1][i] - sim.amplitude(j, i)).abs());
                }
                dev = dev.max((s.residual[i] - sim.amplitude(0, i)).abs());
            }
        }
        checks.push(Check::new(
            format!("recurrence({fam},n={n})"),
            dev <= 1e-12,
            format!("max |table - simulator| = {dev:.3e}"),
        ));
    }
    let cache = PolyCache::new();
    for (fam, n) in &fixtures {
        for eps in [0.5, 0.25] {
            let d = make_distribution::<f64>(fam, *n)?;
            let p = choose_params(*n, eps)?;
            let prep = PreparedEstimator::new(d, p.clone(), &cache)?;
            let mut worst = (0.0f64, 0usize);
            for (i, s) in prep.level_weights().iter().enumerate() {
                let k = i + 1;
                let bound = 4.0 * *n as f64 / 4f64.powi(k as i32) + 16.0 * p.m as f64 * p.delta * p.delta;
                if s / bound > worst.0 {
                    worst = (s / bound, k);
                }
            }
            checks.push(Check::new(
                format!("sum_bound({fam},n={n},eps={eps})"),
                worst.0 <= 1.0,
                format!("max Sum(k)/bound = {:.4} at k = {}", worst.0, worst.1),
            ));
        }
    }
    Ok(checks)
}

/// Families `{uniform, zipf(1), two_point, dyadic}` at `n ∈ {8, 64, 256}`.
pub fn fixtures() -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for fam in [
        Family::Uniform,
        Family::Zipf { exponent: 1.0 },
        Family::TwoPoint { mass: 0.64 },
        Family::Dyadic,
    ] {
        for n in [8, 64, 256] {
            out.push((fam.clone(), n));
        }
    }
    out
}

fn qae_checks() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let floor = 8.0 / std::f64::consts::PI.powi(2);
    for m in [16usize, 64, 256] {
        let mut worst = (f64::INFINITY, 0.0);
        for i in 0..50 {
            let a = i as f64 / 49.0;
            let mass = qae_distribution(a, m)?.mass_within(a, qae_error_bound(a, m));
            if mass < worst.0 {
                worst = (mass, a);
            }
        }
        checks.push(Check::new(
            format!("coverage(M={m})"),
            worst.0 >= floor - 1e-9,
            format!("min mass {:.6} at a = {:.4} (floor {floor:.6})", worst.0, worst.1),
        ));
    }
    let mut dev = 0.0f64;
    for lambda in [0.001f64, 0.01, 0.1, 0.5] {
        for delta in [0.05, 0.2, 0.5] {
            for l in [1usize, 5, 21, 101] {
                let sim = fixed_point_amplify_rounds(lambda, delta, l)?.fidelity_sq;
                dev = dev.max((sim - fixed_point_closed_form(lambda, delta, l)).abs());
            }
        }
    }
    checks.push(Check::new(
        "amplification/closed_form",
        dev <= 1e-9,
        format!("max |simulated - closed form| = {dev:.3e}"),
    ));
    Ok(checks)
}

fn reduction_checks() -> CliResult<Vec<Check>> {
    let worked = HardInstance::parse("11000000\n00110000\n00001100\n00000011\n")?;
    let c = entropy_relation_check(&worked)?;
    let mut checks = vec![Check::new(
        "worked(n=4,k=8)",
        (c.rhs - 2.0).abs() <= 1e-12 && c.max_dev <= 1e-12,
        format!("H(p) = {}, recovered {}, H(q) = {}", c.lhs, c.rhs, c.h_q),
    )];
    let (max_dev, count) = random_relation_sweep(100, 0xC0FFEE)?;
    checks.push(Check::new(
        "relation(100 random instances)",
        max_dev <= 1e-10,
        format!("max_dev {max_dev:.3e} over {count} nondegenerate instances"),
    ));
    Ok(checks)
}

/// Largest identity deviation over `count` random instances with `n, k <= 64`.
/// Instances whose `t/k` is exactly 0 or 1 are redrawn.
pub fn random_relation_sweep(count: usize, seed: u64) -> CliResult<(f64, usize)> {
    let mut max_dev = 0.0f64;
    let mut done = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while done < count {
        let n = rng.random_range(1..=64);
        let k = rng.random_range(2..=64);
        let t = rng.random_range(0.05..0.95) * k as f64;
        let inst = HardInstance::random(n, k, t, rng.random())?;
        match entropy_relation_check(&inst) {
            Ok(c) => {
                max_dev = max_dev.max(c.max_dev);
                done += 1;
            }
            Err(Error::DegenerateInstance(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((max_dev, done))
}
