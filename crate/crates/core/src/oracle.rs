//! Probability-oracle model, semantic singular value transformation and the
//! query ledger.

use std::fmt;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::polyapprox::{BoundedPoly, SUP_SLACK};
use crate::scalar::{stable_sum, Real};

/// Which cost rule produced a ledger entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// One oracle use per unit of polynomial degree.
    SvtDegree,
    /// Sum of the step-polynomial degrees of every cascade level applied.
    Cascade,
    /// Fixed-point amplification rounds times the per-round cost.
    Amplification,
    /// Grid size times boosting rounds times the per-call cost.
    AmplitudeEstimation,
    /// Counts supplied directly by the caller.
    Direct,
}

impl Formula {
    pub fn id(self) -> &'static str {
        match self {
            Formula::SvtDegree => "svt_degree",
            Formula::Cascade => "cascade",
            Formula::Amplification => "amplification",
            Formula::AmplitudeEstimation => "amplitude_estimation",
            Formula::Direct => "direct",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub label: String,
    pub formula: Formula,
    pub count: u64,
    /// Implementation constant in force when the count was derived.
    pub cost_constant: f64,
}

/// Audit trail of oracle uses. Controlled and inverse uses count the same as
/// plain ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryLedger {
    entries: Vec<LedgerEntry>,
    total: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn charge(&mut self, label: impl Into<String>, formula: Formula, count: i64) -> Result<()> {
        self.charge_with_constant(label, formula, count, 1.0)
    }

    pub fn charge_with_constant(
        &mut self,
        label: impl Into<String>,
        formula: Formula,
        count: i64,
        cost_constant: f64,
    ) -> Result<()> {
        if count < 0 {
            return Err(Error::NegativeCount(count));
        }
        self.push(label.into(), formula, count as u64, cost_constant);
        Ok(())
    }

    pub(crate) fn push(&mut self, label: String, formula: Formula, count: u64, cost_constant: f64) {
        self.total = self.total.saturating_add(count);
        self.entries.push(LedgerEntry {
            label,
            formula,
            count,
            cost_constant,
        });
    }

    /// Appends all entries of `other`; totals add.
    pub fn merge(&mut self, other: &QueryLedger) {
        for e in &other.entries {
            self.push(e.label.clone(), e.formula, e.count, e.cost_constant);
        }
    }

    /// Sum of counts whose label starts with `prefix`.
    pub fn total_for(&self, prefix: &str) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.label.starts_with(prefix))
            .map(|e| e.count)
            .sum()
    }

    /// `subroutine,formula,count` rows followed by a `TOTAL` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subroutine,formula,count\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", csv_field(&e.label), e.formula, e.count));
        }
        out.push_str(&format!("TOTAL,,{}\n", self.total));
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A probability oracle for `dist` whose block has singular values
/// `sqrt(p_i)`, together with the ledger of queries made through it.
#[derive(Debug, Clone)]
pub struct OracleModel<T = f64> {
    dist: Distribution<T>,
    ledger: QueryLedger,
    cost_constant: f64,
}

impl<T: Real> OracleModel<T> {
    pub fn new(dist: Distribution<T>) -> Self {
        Self {
            dist,
            ledger: QueryLedger::new(),
            cost_constant: 1.0,
        }
    }

    pub fn with_cost_constant(mut self, c: f64) -> Self {
        self.cost_constant = c;
        self
    }

    pub fn dist(&self) -> &Distribution<T> {
        &self.dist
    }

    pub fn cost_constant(&self) -> f64 {
        self.cost_constant
    }

    pub fn singular_values(&self) -> Vec<T> {
        self.dist.amplitudes()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    pub fn query_count(&self) -> u64 {
        self.ledger.total
    }
}

/// Outcome of a transformation: the flag-1 branch amplitudes per outcome and
/// the squared norm of everything else.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedAmplitudes<T = f64> {
    pub flagged: Vec<T>,
    pub residual_mass: T,
}

impl<T: Real> FlaggedAmplitudes<T> {
    /// Applies `poly` to the singular values `xs` of a branch whose outcome
    /// amplitudes are `amps`: `flagged[i] = amps[i] * poly(xs[i])`.
    pub fn from_branch(amps: &[T], xs: &[T], poly: &BoundedPoly<T>) -> Self {
        let flagged: Vec<T> = amps.iter().zip(xs).map(|(&a, &x)| a * poly.eval_unchecked(x)).collect();
        let norm = stable_sum(amps.iter().map(|&a| a * a));
        let kept = stable_sum(flagged.iter().map(|&f| f * f));
        Self {
            flagged,
            residual_mass: norm - kept,
        }
    }

    pub fn norm_defect(&self) -> T {
        (stable_sum(self.flagged.iter().map(|&f| f * f)) + self.residual_mass - T::one()).abs()
    }
}

/// Transforms the oracle's block by `poly`: `flagged[i] = sqrt(p_i) poly(sqrt(p_i))`.
/// Charges `poly.degree()` queries.
pub fn apply_svt<T: Real>(o: &mut OracleModel<T>, poly: &BoundedPoly<T>) -> Result<FlaggedAmplitudes<T>> {
    let slack = T::of(SUP_SLACK).max(T::epsilon() * T::of(8.0));
    if poly.sup_norm() > T::one() + slack {
        return Err(Error::Unbounded(poly.sup_norm().to_f64_lossy()));
    }
    let xs = o.singular_values();
    let out = FlaggedAmplitudes::from_branch(&xs, &xs, poly);
    let c = o.cost_constant;
    o.ledger.push("svt".into(), Formula::SvtDegree, poly.degree() as u64, c);
    Ok(out)
}

/// `Σ flagged[i]^2`.
pub fn power_sum<T: Real>(f: &FlaggedAmplitudes<T>) -> T {
    stable_sum(f.flagged.iter().map(|&a| a * a))
}
