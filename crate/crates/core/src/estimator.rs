//! The level-by-level entropy estimator, its deterministic oracle `exact_v`,
//! and the single-polynomial baseline.
//!
//! Level `k` of the cascade isolates the outcomes whose `sqrt(p_i)` lies near
//! the band `[2^-k, 2^-(k-1))`. Its weight `Sum(k) = Σ p_i B_k(√p_i)^2` and the
//! flag amplitude `v'_k` of `S_k` on the normalized branch are estimated by
//! boosted amplitude estimation, giving `v_k = (k+1) v'_k Sum(k)` and
//! `v = -2 + 8 Σ v_k`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{
    amplification_rounds, fixed_point_amplify_rounds, fixed_point_closed_form, grid_size_for, qae_distribution,
    QaeSampler,
};
use crate::distributions::Distribution;
use crate::error::{out_of_range, Error, Result};
use crate::oracle::{csv_field, Formula, OracleModel, QueryLedger};
use crate::polyapprox::{BoundedPoly, PolyCache};
use crate::scalar::{stable_sum, Real};
use crate::separation::{query_cost_uk, CascadeConfig, CoefficientTable};

pub const DEFAULT_BOOST_ROUNDS: usize = 15;

/// `Sum(k) <= SUM_BOUND_FACTOR * n / 4^k` bounds the level weight a priori.
pub const SUM_BOUND_FACTOR: f64 = 16.0;

/// Fraction of the nominal `eps / (2m)` granted to each `Sum(k)` estimate.
pub const SUM_BUDGET_SCALE: f64 = 0.25;

/// Fraction of the nominal `eps / (2m Sum(k))` granted to each `v'_k` estimate.
pub const V_BUDGET_SCALE: f64 = 1.0 / 16.0;

// Above this many rounds the amplification fidelity comes from the closed form
// instead of stepping the phase sequence.
const SIMULATE_ROUNDS_MAX: usize = 4097;

/// Parameter schedule for support size `n` and target error `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorParams {
    pub n: usize,
    pub eps: f64,
    /// Smallest `m` with `2^m eps >= 2n`.
    pub m: usize,
    /// Separation error `sqrt(eps / (4m))`.
    pub delta: f64,
    /// Polynomial error `eps / 4`.
    pub eta: f64,
    /// Odd number of estimation rounds whose median is kept.
    pub boost_rounds: usize,
    pub cost_constant: f64,
}

pub fn choose_params(n: usize, eps: f64) -> Result<EstimatorParams> {
    if n < 2 {
        return out_of_range("n", n as f64, "n >= 2");
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return out_of_range("eps", eps, "(0, 1]");
    }
    let ratio = 2.0 * n as f64 / eps;
    let mut m = 1usize;
    while 2f64.powi(m as i32) < ratio {
        m += 1;
    }
    Ok(EstimatorParams {
        n,
        eps,
        m,
        delta: (eps / (4.0 * m as f64)).sqrt(),
        eta: eps / 4.0,
        boost_rounds: DEFAULT_BOOST_ROUNDS,
        cost_constant: 1.0,
    })
}

impl EstimatorParams {
    pub fn with_boost_rounds(mut self, rounds: usize) -> Result<Self> {
        if rounds.is_multiple_of(2) {
            return Err(Error::EvenRounds(rounds));
        }
        self.boost_rounds = rounds;
        Ok(self)
    }

    pub fn with_cost_constant(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return out_of_range("cost_constant", c, "(0, inf)");
        }
        self.cost_constant = c;
        Ok(self)
    }

    /// Floor of the cascade step polynomials, `delta^2 / (4(m+1))`, keeping
    /// every `B'_j` strictly positive.
    pub fn step_floor(&self) -> f64 {
        self.delta * self.delta / (4.0 * (self.m + 1) as f64)
    }

    /// Accuracy of `S_k`: `eta / (4(k+1))`.
    pub fn sk_eta(&self, k: usize) -> f64 {
        self.eta / (4.0 * (k + 1) as f64)
    }

    pub fn sum_bound(&self, k: usize) -> f64 {
        (SUM_BOUND_FACTOR * self.n as f64 / 4f64.powi(k as i32)).min(1.0)
    }

    pub fn sum_target(&self) -> f64 {
        SUM_BUDGET_SCALE * self.eps / (2.0 * self.m as f64)
    }

    pub fn v_target(&self, sum_hat: f64) -> f64 {
        V_BUDGET_SCALE * self.eps / (2.0 * self.m as f64 * sum_hat)
    }

    /// Levels whose weight estimate is at or below this are dropped.
    pub fn skip_threshold(&self, k: usize) -> f64 {
        let t = self.eps / (4.0 * self.m as f64 * (k + 1) as f64);
        t * t
    }

    /// Amplification deficit `eps / (8m)`.
    pub fn amp_delta(&self) -> f64 {
        self.eps / (8.0 * self.m as f64)
    }

    /// Grid size of the `Sum(k)` estimate, or `None` when the a-priori bound
    /// already meets the budget.
    pub fn sum_grid(&self, k: usize) -> Result<Option<usize>> {
        let bound = self.sum_bound(k);
        if bound <= self.sum_target() {
            return Ok(None);
        }
        grid_size_for(bound, self.sum_target()).map(Some)
    }
}

/// `-2 + 8 Σ v_k`.
pub fn assemble_v<T: Real>(v_k: &[T]) -> T {
    T::of(-2.0) + T::of(8.0) * stable_sum(v_k.iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// `Sum(k)`'s a-priori bound is already within budget.
    Bound,
    /// The `Sum(k)` estimate fell at or below the level threshold.
    BelowThreshold,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::Bound => "bound",
            SkipReason::BelowThreshold => "threshold",
        })
    }
}

/// Whether estimates are sampled or replaced by their true values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sampled,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cascade,
    Folklore,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cascade => "cascade",
            Method::Folklore => "folklore",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport<T = f64> {
    pub k: usize,
    pub sum_true: T,
    pub sum_hat: T,
    pub vprime_true: T,
    pub vprime_hat: T,
    /// Contribution `(k+1) v'_k Sum(k)` as used in the assembly.
    pub v_k: T,
    /// Grid sizes of the two estimates; 0 when not run.
    pub sum_grid: usize,
    pub v_grid: usize,
    pub amp_rounds: usize,
    /// Squared overlap reached by amplification, if it ran.
    pub fidelity_sq: Option<T>,
    pub skipped: Option<SkipReason>,
    pub queries: u64,
}

#[derive(Debug, Clone)]
pub struct EstimateReport<T = f64> {
    pub method: Method,
    pub mode: Mode,
    pub levels: Vec<LevelReport<T>>,
    pub v: T,
    pub exact_entropy: T,
    pub abs_error: T,
    pub ledger: QueryLedger,
    pub params: EstimatorParams,
    pub seed: u64,
}

impl<T: Real> EstimateReport<T> {
    pub fn v_k(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.v_k).collect()
    }

    pub fn sum_k(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.sum_hat).collect()
    }

    pub fn skipped_levels(&self) -> usize {
        self.levels.iter().filter(|l| l.skipped.is_some()).count()
    }

    pub fn queries(&self) -> u64 {
        self.ledger.total()
    }

    /// One row per level followed by a `summary` row carrying `v`, the exact
    /// entropy and the ledger total.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "row,k,sum_true,sum_hat,vprime_true,vprime_hat,v_k,sum_grid,v_grid,amp_rounds,fidelity_sq,skip,queries\n",
        );
        let f = |x: T| format!("{:.17e}", x.to_f64_lossy());
        for l in &self.levels {
            out.push_str(&format!(
                "level,{},{},{},{},{},{},{},{},{},{},{},{}\n",
                l.k,
                f(l.sum_true),
                f(l.sum_hat),
                f(l.vprime_true),
                f(l.vprime_hat),
                f(l.v_k),
                l.sum_grid,
                l.v_grid,
                l.amp_rounds,
                l.fidelity_sq.map(f).unwrap_or_default(),
                l.skipped.map(|s| s.to_string()).unwrap_or_default(),
                l.queries
            ));
        }
        out.push_str(&format!(
            "summary,{},{},,{},,{},,,,,{},{}\n",
            self.params.m,
            f(self.exact_entropy),
            f(self.abs_error),
            f(self.v),
            csv_field(&format!("{}/{:?}", self.method, self.mode).to_lowercase()),
            self.ledger.total()
        ));
        out
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "method {} ({:?} mode), seed {}\nn = {}, eps = {}, m = {}, delta = {:.6}, eta = {:.6}\n",
            self.method, self.mode, self.seed, p.n, p.eps, p.m, p.delta, p.eta
        );
        out.push_str(&format!(
            "estimate {:.6}, exact entropy {:.6}, abs error {:.6}\n",
            self.v.to_f64_lossy(),
            self.exact_entropy.to_f64_lossy(),
            self.abs_error.to_f64_lossy()
        ));
        out.push_str(&format!(
            "queries {} over {} levels ({} skipped)\n",
            self.ledger.total(),
            self.levels.len(),
            self.skipped_levels()
        ));
        for l in &self.levels {
            let state = match l.skipped {
                Some(r) => format!("skipped ({r})"),
                None => format!("v_k {:.6}", l.v_k.to_f64_lossy()),
            };
            out.push_str(&format!(
                "  k={:>2} Sum {:.3e} (est {:.3e}) {} queries {}\n",
                l.k,
                l.sum_true.to_f64_lossy(),
                l.sum_hat.to_f64_lossy(),
                state,
                l.queries
            ));
        }
        out
    }
}

struct Level<T> {
    k: usize,
    sk: Arc<BoundedPoly<T>>,
    cascade_cost: u64,
    sum_true: T,
    vprime_true: T,
    sum_sampler: Option<QaeSampler<T>>,
    sum_grid: usize,
}

// Keyed by (level, grid size).
type SamplerCache<T> = HashMap<(usize, usize), Arc<QaeSampler<T>>>;

/// Everything about a `(distribution, eps)` pair that does not depend on the
/// seed, so repeated trials only redo the sampling.
pub struct PreparedEstimator<T = f64> {
    dist: Distribution<T>,
    params: EstimatorParams,
    levels: Vec<Level<T>>,
    exact_v: T,
    v_samplers: Mutex<SamplerCache<T>>,
}

impl<T: Real> PreparedEstimator<T> {
    pub fn new(dist: Distribution<T>, params: EstimatorParams, cache: &PolyCache<T>) -> Result<Self> {
        if dist.n() != params.n {
            return Err(Error::InvalidDistribution(format!(
                "distribution has {} outcomes, parameters expect {}",
                dist.n(),
                params.n
            )));
        }
        let cfg = CascadeConfig::with_floor(params.m, T::of(params.delta), T::of(params.step_floor()), cache)?;
        let xs = dist.amplitudes();
        let table = CoefficientTable::build(&cfg, &xs)?;
        let probs = dist.probs();
        let mut levels = Vec::with_capacity(params.m);
        for k in 1..=params.m {
            let sk = cache.sk(k, T::of(params.sk_eta(k)))?;
            let bk = table.b(k)?;
            let sum_true = stable_sum(probs.iter().zip(bk).map(|(&p, &b)| p * b * b));
            let weighted = stable_sum(probs.iter().zip(bk).zip(&xs).map(|((&p, &b), &x)| {
                let s = sk.eval_unchecked(x);
                p * b * b * s * s
            }));
            let vprime_true = if sum_true > T::zero() {
                (weighted / sum_true).min(T::one())
            } else {
                T::zero()
            };
            let (sum_sampler, sum_grid) = match params.sum_grid(k)? {
                Some(g) => (Some(qae_distribution(sum_true.min(T::one()), g)?.sampler()), g),
                None => (None, 0),
            };
            levels.push(Level {
                k,
                sk,
                cascade_cost: query_cost_uk(&cfg, k)?,
                sum_true,
                vprime_true,
                sum_sampler,
                sum_grid,
            });
        }
        let exact_v = assemble_v(
            &levels
                .iter()
                .map(|l| T::of((l.k + 1) as f64) * l.vprime_true * l.sum_true)
                .collect::<Vec<_>>(),
        );
        Ok(Self {
            dist,
            params,
            levels,
            exact_v,
            v_samplers: Mutex::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &EstimatorParams {
        &self.params
    }

    pub fn dist(&self) -> &Distribution<T> {
        &self.dist
    }

    /// `v` with every estimate replaced by its true value.
    pub fn exact_v(&self) -> T {
        self.exact_v
    }

    /// True level weights `Sum(k)`, `k = 1..=m`.
    pub fn level_weights(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.sum_true).collect()
    }

    fn v_sampler(&self, k: usize, a: T, grid: usize) -> Result<Arc<QaeSampler<T>>> {
        let mut map = self.v_samplers.lock().expect("sampler cache poisoned");
        if let Some(s) = map.get(&(k, grid)) {
            return Ok(s.clone());
        }
        let s = Arc::new(qae_distribution(a, grid)?.sampler());
        map.insert((k, grid), s.clone());
        Ok(s)
    }

    pub fn run(&self, seed: u64, mode: Mode) -> Result<EstimateReport<T>> {
        let p = &self.params;
        let r = p.boost_rounds as u64;
        let c = p.cost_constant;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ledger = QueryLedger::new();
        let mut reports = Vec::with_capacity(self.levels.len());
        for lv in &self.levels {
            let k = lv.k;
            let factor = T::of((k + 1) as f64);
            let exact_vk = factor * lv.vprime_true * lv.sum_true;
            let before = ledger.total();
            let mut rep = LevelReport {
                k,
                sum_true: lv.sum_true,
                sum_hat: T::zero(),
                vprime_true: lv.vprime_true,
                vprime_hat: T::zero(),
                v_k: T::zero(),
                sum_grid: lv.sum_grid,
                v_grid: 0,
                amp_rounds: 0,
                fidelity_sq: None,
                skipped: None,
                queries: 0,
            };
            let exact = mode == Mode::Exact;
            let Some(sampler) = &lv.sum_sampler else {
                rep.skipped = Some(SkipReason::Bound);
                if exact {
                    rep.sum_hat = lv.sum_true;
                    rep.vprime_hat = lv.vprime_true;
                    rep.v_k = exact_vk;
                }
                reports.push(rep);
                continue;
            };
            let bound = T::of(p.sum_bound(k));
            rep.sum_hat = if exact {
                lv.sum_true
            } else {
                sampler.boosted(p.boost_rounds, &mut rng)?.min(bound)
            };
            ledger.push(
                format!("sum_qae[{k}]"),
                Formula::AmplitudeEstimation,
                r.saturating_mul(lv.sum_grid as u64).saturating_mul(lv.cascade_cost),
                c,
            );
            let sum_hat = rep.sum_hat.to_f64_lossy();
            if sum_hat <= p.skip_threshold(k) {
                rep.skipped = Some(SkipReason::BelowThreshold);
                if exact {
                    rep.vprime_hat = lv.vprime_true;
                    rep.v_k = exact_vk;
                }
                rep.queries = ledger.total() - before;
                reports.push(rep);
                continue;
            }
            let amp_delta = p.amp_delta();
            let rounds = amplification_rounds(sum_hat, amp_delta, c);
            rep.amp_rounds = rounds;
            if lv.sum_true > T::zero() {
                rep.fidelity_sq = Some(amplified_fidelity(lv.sum_true.min(T::one()), T::of(amp_delta), rounds)?);
            }
            let sup = lv.sk.sup_norm().to_f64_lossy();
            let v_grid = grid_size_for((sup * sup).min(0.5), p.v_target(sum_hat))?;
            rep.v_grid = v_grid;
            rep.vprime_hat = if exact {
                lv.vprime_true
            } else {
                self.v_sampler(k, lv.vprime_true, v_grid)?
                    .boosted(p.boost_rounds, &mut rng)?
            };
            let calls = r.saturating_mul(v_grid as u64);
            ledger.push(
                format!("amplify[{k}]"),
                Formula::Amplification,
                calls.saturating_mul(rounds as u64).saturating_mul(lv.cascade_cost),
                c,
            );
            ledger.push(
                format!("svt[{k}]"),
                Formula::SvtDegree,
                calls.saturating_mul(lv.sk.degree() as u64),
                c,
            );
            rep.v_k = factor * rep.vprime_hat * rep.sum_hat;
            rep.queries = ledger.total() - before;
            reports.push(rep);
        }
        let v = assemble_v(&reports.iter().map(|l| l.v_k).collect::<Vec<_>>());
        let h = self.dist.shannon_entropy();
        Ok(EstimateReport {
            method: Method::Cascade,
            mode,
            levels: reports,
            v,
            exact_entropy: h,
            abs_error: (v - h).abs(),
            ledger,
            params: self.params.clone(),
            seed,
        })
    }
}

fn amplified_fidelity<T: Real>(lambda: T, delta: T, rounds: usize) -> Result<T> {
    if rounds <= SIMULATE_ROUNDS_MAX {
        Ok(fixed_point_amplify_rounds(lambda, delta, rounds)?.fidelity_sq)
    } else {
        Ok(fixed_point_closed_form(lambda, delta, rounds))
    }
}

/// `v` computed straight from the definitions: `-2 + 8 Σ_k (k+1) Σ_i p_i
/// S_k(√p_i)^2 B_k(√p_i)^2`.
pub fn exact_v<T: Real>(d: &Distribution<T>, params: &EstimatorParams, cache: &PolyCache<T>) -> Result<T> {
    let cfg = CascadeConfig::with_floor(params.m, T::of(params.delta), T::of(params.step_floor()), cache)?;
    let xs = d.amplitudes();
    let table = CoefficientTable::build(&cfg, &xs)?;
    let mut terms = Vec::with_capacity(params.m);
    for k in 1..=params.m {
        let sk = cache.sk(k, T::of(params.sk_eta(k)))?;
        let bk = table.b(k)?;
        let inner = stable_sum(d.probs().iter().zip(bk).zip(&xs).map(|((&p, &b), &x)| {
            let s = sk.eval_unchecked(x);
            p * s * s * b * b
        }));
        terms.push(T::of((k + 1) as f64) * inner);
    }
    Ok(assemble_v(&terms))
}

/// Runs the estimator against an oracle and charges its ledger.
pub fn estimate_entropy<T: Real>(o: &mut OracleModel<T>, eps: f64, seed: u64) -> Result<EstimateReport<T>> {
    estimate_entropy_with(o, eps, seed, Mode::Sampled, &PolyCache::new())
}

pub fn estimate_entropy_with<T: Real>(
    o: &mut OracleModel<T>,
    eps: f64,
    seed: u64,
    mode: Mode,
    cache: &PolyCache<T>,
) -> Result<EstimateReport<T>> {
    let params = choose_params(o.dist().n(), eps)?.with_cost_constant(o.cost_constant())?;
    let prep = PreparedEstimator::new(o.dist().clone(), params, cache)?;
    let report = prep.run(seed, mode)?;
    o.ledger_mut().merge(&report.ledger);
    Ok(report)
}

/// Parameters of the single-polynomial baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct FolkloreParams {
    /// Cutoff `beta = eps / (2n)` on probabilities.
    pub beta: f64,
    /// `log2(1 / sqrt(beta))`, the normalization of the polynomial.
    pub log_factor: f64,
    pub eta: f64,
    pub target: f64,
}

impl FolkloreParams {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        choose_params(n, eps)?;
        let beta = eps / (2.0 * n as f64);
        let log_factor = (1.0 / beta.sqrt()).log2();
        Ok(Self {
            beta,
            log_factor,
            eta: eps / (32.0 * log_factor),
            target: eps / (16.0 * log_factor),
        })
    }
}

/// The baseline: one polynomial approximating `sqrt(ln(1/x))` above
/// `sqrt(beta)`, applied to the whole oracle and read out by a single boosted
/// estimate. Reported as one level with `k = 0`, `Sum = 1` and `v = 8 v_0`.
pub fn folklore_estimate<T: Real>(o: &mut OracleModel<T>, eps: f64, seed: u64) -> Result<EstimateReport<T>> {
    folklore_estimate_with(o, eps, seed, Mode::Sampled, &PolyCache::new())
}

pub fn folklore_estimate_with<T: Real>(
    o: &mut OracleModel<T>,
    eps: f64,
    seed: u64,
    mode: Mode,
    cache: &PolyCache<T>,
) -> Result<EstimateReport<T>> {
    let dist = o.dist().clone();
    let params = choose_params(dist.n(), eps)?.with_cost_constant(o.cost_constant())?;
    let fp = FolkloreParams::new(dist.n(), eps)?;
    let poly = cache.sqrt_log(T::of(fp.beta.sqrt()), T::of(fp.eta))?;
    let xs = dist.amplitudes();
    let a_true = stable_sum(dist.probs().iter().zip(&xs).map(|(&p, &x)| {
        let s = poly.eval_unchecked(x);
        p * s * s
    }))
    .min(T::one());
    let sup = poly.sup_norm().to_f64_lossy();
    let grid = grid_size_for((sup * sup).min(0.5), fp.target)?;
    let a_hat = match mode {
        Mode::Exact => a_true,
        Mode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            qae_distribution(a_true, grid)?
                .sampler()
                .boosted(params.boost_rounds, &mut rng)?
        }
    };
    let mut ledger = QueryLedger::new();
    ledger.push(
        "folklore_qae".into(),
        Formula::AmplitudeEstimation,
        (params.boost_rounds as u64)
            .saturating_mul(grid as u64)
            .saturating_mul(poly.degree() as u64),
        params.cost_constant,
    );
    let lf = T::of(fp.log_factor);
    let v_0 = lf * a_hat;
    let v = T::of(8.0) * v_0;
    let h = dist.shannon_entropy();
    o.ledger_mut().merge(&ledger);
    Ok(EstimateReport {
        method: Method::Folklore,
        mode,
        levels: vec![LevelReport {
            k: 0,
            sum_true: T::one(),
            sum_hat: T::one(),
            vprime_true: a_true,
            vprime_hat: a_hat,
            v_k: v_0,
            sum_grid: 0,
            v_grid: grid,
            amp_rounds: 0,
            fidelity_sq: None,
            skipped: None,
            queries: ledger.total(),
        }],
        v,
        exact_entropy: h,
        abs_error: (v - h).abs(),
        ledger,
        params,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{make_distribution, Family};
    use crate::polyapprox::make_step_poly_with_floor;

    #[test]
    fn schedule_examples() {
        let p = choose_params(1024, 0.1).unwrap();
        assert_eq!(p.m, 15);
        assert!((p.delta - (0.1f64 / 60.0).sqrt()).abs() < 1e-15);
        assert!((p.delta - 0.0408).abs() < 1e-4);
        assert_eq!(p.eta, 0.025);
        assert_eq!(choose_params(2, 1.0).unwrap().m, 2);
        assert!(choose_params(8, 0.0).is_err());
        assert!(choose_params(8, 1.5).is_err());
        assert!(choose_params(1, 0.5).is_err());
        assert!(p.clone().with_boost_rounds(4).is_err());
        assert!(p.with_cost_constant(-1.0).is_err());
    }

    // Independent of CoefficientTable: walk the cascade one point at a time.
    fn exact_v_from_scratch(probs: &[f64], params: &EstimatorParams) -> f64 {
        let floor = params.delta * params.delta / (4.0 * (params.m + 1) as f64);
        let steps: Vec<_> = (1..=params.m)
            .map(|j| make_step_poly_with_floor(0.5f64.powi(j as i32), params.delta, floor).unwrap())
            .collect();
        let mut total = 0.0;
        for k in 1..=params.m {
            let sk = crate::polyapprox::make_sk(k, params.eta / (4.0 * (k + 1) as f64)).unwrap();
            for &p in probs {
                let x = p.sqrt();
                let mut carry = 1.0;
                for step in &steps[..k - 1] {
                    let b = step.eval(x).unwrap();
                    carry *= (1.0 - b * b).sqrt();
                }
                let bk = carry * steps[k - 1].eval(x).unwrap();
                let s = sk.eval(x).unwrap();
                total += (k + 1) as f64 * p * s * s * bk * bk;
            }
        }
        -2.0 + 8.0 * total
    }

    #[test]
    fn exact_v_matches_from_scratch_sum() {
        let d = make_distribution::<f64>(&Family::TwoPoint { mass: 0.64 }, 2).unwrap();
        let params = choose_params(2, 0.5).unwrap();
        let cache = PolyCache::new();
        let v = exact_v(&d, &params, &cache).unwrap();
        let oracle = exact_v_from_scratch(d.probs(), &params);
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
        let prep = PreparedEstimator::new(d, params, &cache).unwrap();
        assert!((prep.exact_v() - v).abs() < 1e-12);
    }

    #[test]
    fn noiseless_path_equals_oracle() {
        let cache = PolyCache::new();
        for (fam, n) in [
            (Family::Uniform, 8),
            (Family::Zipf { exponent: 1.0 }, 16),
            (Family::Point, 4),
        ] {
            let d = make_distribution::<f64>(&fam, n).unwrap();
            let params = choose_params(n, 0.5).unwrap();
            let v = exact_v(&d, &params, &cache).unwrap();
            let prep = PreparedEstimator::new(d, params, &cache).unwrap();
            let rep = prep.run(0, Mode::Exact).unwrap();
            assert!((rep.v - v).abs() < 1e-10, "{fam}: {} vs {v}", rep.v);
            assert_eq!(rep.v, assemble_v(&rep.v_k()));
        }
    }

    #[test]
    fn budget_additivity_under_adversarial_perturbation() {
        let cache = PolyCache::new();
        let d = make_distribution::<f64>(&Family::Uniform, 8).unwrap();
        let params = choose_params(8, 0.25).unwrap();
        let prep = PreparedEstimator::new(d, params.clone(), &cache).unwrap();
        let exact = prep.run(0, Mode::Exact).unwrap();
        let per_level = params.eps / params.m as f64;
        for signs in [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]] {
            let perturbed: Vec<f64> = exact
                .v_k()
                .iter()
                .enumerate()
                .map(|(i, &v)| v + signs[i % 2] * per_level / 8.0)
                .collect();
            let dev = (assemble_v(&perturbed) - exact.v).abs();
            assert!(dev <= params.eps + 1e-12, "dev {dev}");
        }
    }

    #[test]
    fn uniform_eight_is_accurate() {
        let cache = PolyCache::new();
        let d = make_distribution::<f64>(&Family::Uniform, 8).unwrap();
        let prep = PreparedEstimator::new(d, choose_params(8, 0.25).unwrap(), &cache).unwrap();
        let ok = (0..60)
            .filter(|&s| prep.run(s, Mode::Sampled).unwrap().abs_error <= 0.25)
            .count();
        assert!(ok >= 40, "{ok}/60");
        let a = prep.run(7, Mode::Sampled).unwrap();
        let b = prep.run(7, Mode::Sampled).unwrap();
        assert_eq!(a.v, b.v);
        assert_eq!(a.ledger, b.ledger);
    }

    #[test]
    fn oracle_ledger_is_charged() {
        let d = make_distribution::<f64>(&Family::Uniform, 8).unwrap();
        let mut o = OracleModel::new(d);
        let rep = estimate_entropy(&mut o, 0.5, 3).unwrap();
        assert_eq!(o.query_count(), rep.queries());
        assert!(rep.queries() > 0);
        assert_eq!(rep.levels.iter().map(|l| l.queries).sum::<u64>(), rep.ledger.total());
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), rep.levels.len() + 2);
        assert!(csv.lines().last().unwrap().starts_with("summary,"));
        assert!(rep.to_text().contains("queries"));
    }

    #[test]
    fn folklore_on_uniform() {
        let d = make_distribution::<f64>(&Family::Uniform, 8).unwrap();
        let mut o = OracleModel::new(d);
        let exact = folklore_estimate_with(&mut o, 0.25, 0, Mode::Exact, &PolyCache::new()).unwrap();
        assert!(exact.abs_error <= 0.125, "{}", exact.abs_error);
        let fp = FolkloreParams::new(8, 0.25).unwrap();
        assert!((8.0 * fp.beta - 0.125).abs() < 1e-15);
        let r = folklore_estimate(&mut o, 0.25, 1).unwrap();
        assert_eq!(r.levels.len(), 1);
        assert!(r.queries() > 0);
    }
}
