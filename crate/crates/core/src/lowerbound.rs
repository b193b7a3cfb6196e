//! Hard instances behind the lower bound: `n` bit strings of length `k` whose
//! Hamming weights define `p`, the padded distribution `q` they induce, and
//! the identity `H(q) = (t/k) H(p) + B(t/k)` linking the two.

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{binary_entropy, Distribution};
use crate::error::{out_of_range, Error, Result};
use crate::scalar::entropy_term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardInstance {
    bits: Vec<Vec<bool>>,
    weights: Vec<u64>,
    total: u64,
}

impl HardInstance {
    pub fn from_bits(bits: Vec<Vec<bool>>) -> Result<Self> {
        let k = bits.first().map_or(0, Vec::len);
        if bits.is_empty() || k == 0 {
            return Err(Error::DegenerateInstance("need n >= 1 rows of k >= 1 bits".into()));
        }
        if let Some(i) = bits.iter().position(|row| row.len() != k) {
            return Err(Error::DegenerateInstance(format!(
                "row {i} has {} bits, expected {k}",
                bits[i].len()
            )));
        }
        let weights: Vec<u64> = bits
            .iter()
            .map(|row| row.iter().filter(|&&b| b).count() as u64)
            .collect();
        let total = weights.iter().sum();
        if total == 0 {
            return Err(Error::DegenerateInstance("all-zero bit matrix".into()));
        }
        Ok(Self { bits, weights, total })
    }

    /// Places `round(t n)` ones uniformly at random among the `n k` cells, so
    /// the realized `t = R/n` is as close to the target as the grid allows.
    pub fn random(n: usize, k: usize, t: f64, seed: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::DegenerateInstance("need n >= 1 and k >= 1".into()));
        }
        if !(t > 0.0 && t <= k as f64) {
            return out_of_range("t", t, "(0, k]");
        }
        let ones = ((t * n as f64).round() as usize).clamp(1, n * k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bits = vec![vec![false; k]; n];
        for cell in sample(&mut rng, n * k, ones) {
            bits[cell / k][cell % k] = true;
        }
        Self::from_bits(bits)
    }

    /// Rows of `0`/`1` characters; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("unexpected character {other:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            bits.push(row);
        }
        Self::from_bits(bits)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.bits {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn k(&self) -> usize {
        self.bits[0].len()
    }

    pub fn bits(&self) -> &[Vec<bool>] {
        &self.bits
    }

    /// Hamming weights `f_i`.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// `R = Σ f_i`.
    pub fn total_weight(&self) -> u64 {
        self.total
    }

    /// `t = R / n`, exact.
    pub fn t(&self) -> Ratio<u64> {
        Ratio::new(self.total, self.n() as u64)
    }

    /// `t / k = R / (n k)`, exact.
    pub fn t_over_k(&self) -> Ratio<u64> {
        Ratio::new(self.total, self.cells())
    }

    fn cells(&self) -> u64 {
        (self.n() * self.k()) as u64
    }

    /// `p_i = f_i / R`, exact.
    pub fn p_exact(&self) -> Vec<Ratio<u64>> {
        self.weights.iter().map(|&f| Ratio::new(f, self.total)).collect()
    }

    /// `q_i = f_i / (n k)` for `i <= n`, then `q_{n+1} = 1 - R / (n k)`; exact.
    pub fn q_exact(&self) -> Vec<Ratio<u64>> {
        let nk = self.cells();
        let mut q: Vec<Ratio<u64>> = self.weights.iter().map(|&f| Ratio::new(f, nk)).collect();
        q.push(Ratio::new(nk - self.total, nk));
        q
    }

    pub fn p(&self) -> Result<Distribution<f64>> {
        Distribution::new(self.p_exact().iter().map(ratio_f64).collect())
    }

    pub fn q(&self) -> Result<Distribution<f64>> {
        Distribution::new(self.q_exact().iter().map(ratio_f64).collect())
    }
}

fn ratio_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// Entropy of an exact rational vector: -Σ (a/b) log2(a/b) with the log split
// so that no intermediate division rounds twice.
fn rational_entropy(v: &[Ratio<u64>]) -> f64 {
    v.iter()
        .map(|r| {
            if *r.numer() == 0 {
                return 0.0;
            }
            let (a, b) = (*r.numer() as f64, *r.denom() as f64);
            a / b * (b.log2() - a.log2())
        })
        .sum()
}

/// One draw of the three-step sampler: uniform row `i`, uniform column `j`,
/// outcome `i` if the bit is set and `n + 1` otherwise (1-based).
pub fn sample_q<R: Rng + ?Sized>(inst: &HardInstance, rng: &mut R) -> usize {
    let i = rng.random_range(0..inst.n());
    let j = rng.random_range(0..inst.k());
    if inst.bits[i][j] {
        i + 1
    } else {
        inst.n() + 1
    }
}

/// `draws` outcomes from a generator seeded with `seed`.
pub fn sample_q_seeded(inst: &HardInstance, seed: u64, draws: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws).map(|_| sample_q(inst, &mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationCheck {
    /// `H(p)`.
    pub lhs: f64,
    /// `(k/t) (H(q) - B(t/k))`.
    pub rhs: f64,
    pub max_dev: f64,
    pub h_q: f64,
}

pub fn entropy_relation_check(inst: &HardInstance) -> Result<RelationCheck> {
    let tk = inst.t_over_k();
    if *tk.numer() == 0 || tk.numer() >= tk.denom() {
        return Err(Error::DegenerateInstance(format!(
            "t/k = {tk} must lie strictly inside (0, 1)"
        )));
    }
    let lhs = rational_entropy(&inst.p_exact());
    let h_q = rational_entropy(&inst.q_exact());
    let rhs = recover_entropy(inst, h_q)?;
    Ok(RelationCheck {
        lhs,
        rhs,
        max_dev: (lhs - rhs).abs(),
        h_q,
    })
}

/// Maps an estimate of `H(q)` back to `H(p)`: `(k/t)(h_q - B(t/k))`. An error
/// of `e` in `h_q` becomes `(k/t) e`.
pub fn recover_entropy(inst: &HardInstance, h_q: f64) -> Result<f64> {
    let tk = inst.t_over_k();
    let b = binary_entropy(ratio_f64(&tk))?;
    let inv = *tk.denom() as f64 / *tk.numer() as f64;
    Ok(inv * (h_q - b))
}

/// The function `f: [n] × [k] -> [n+1]` whose uniform preimage counts realize
/// `q`. Entry `i k + j` is the outcome for row `i`, column `j` (1-based).
pub fn discrete_oracle_view(inst: &HardInstance) -> Vec<usize> {
    let n = inst.n();
    inst.bits
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().map(move |&b| if b { i + 1 } else { n + 1 }))
        .collect()
}

/// Outcome counts of a [`discrete_oracle_view`] table, indexed `0..=n` for
/// outcomes `1..=n+1`.
pub fn view_counts(table: &[usize], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for &s in table {
        counts[s - 1] += 1;
    }
    counts
}

/// `H` of an empirical or exact count vector, base 2.
pub fn count_entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| entropy_term(c as f64 / total as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> HardInstance {
        HardInstance::parse("11000000\n00110000\n00001100\n00000011\n").unwrap()
    }

    #[test]
    fn worked_instance() {
        let inst = worked();
        assert_eq!(inst.weights(), &[2, 2, 2, 2]);
        assert_eq!(inst.t(), Ratio::from_integer(2));
        let q = inst.q_exact();
        assert_eq!(q[..4], [Ratio::new(1, 16); 4]);
        assert_eq!(q[4], Ratio::new(3, 4));
        let c = entropy_relation_check(&inst).unwrap();
        assert!((c.lhs - 2.0).abs() < 1e-12);
        assert!((c.h_q - 1.311_278_124_459_132_8).abs() < 1e-12);
        assert!((c.rhs - 2.0).abs() < 1e-12);
        assert!(c.max_dev <= 1e-12);
    }

    #[test]
    fn smallest_instance() {
        let inst = HardInstance::parse("1").unwrap();
        assert_eq!(inst.p().unwrap().probs(), &[1.0]);
        assert_eq!(inst.q().unwrap().probs(), &[1.0, 0.0]);
        assert!(sample_q_seeded(&inst, 4, 100).iter().all(|&s| s == 1));
        // t/k = 1 leaves the identity undefined.
        assert!(entropy_relation_check(&inst).is_err());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(HardInstance::parse("000\n000\n").is_err());
        assert!(HardInstance::parse("01\n011\n").is_err());
        assert!(matches!(
            HardInstance::parse("01\n0x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(HardInstance::parse("").is_err());
    }

    #[test]
    fn oracle_view_counts() {
        let inst = worked();
        let table = discrete_oracle_view(&inst);
        assert_eq!(table.len(), 32);
        let counts = view_counts(&table, 4);
        assert_eq!(counts, vec![2, 2, 2, 2, 24]);
        for (c, q) in counts.iter().zip(inst.q_exact()) {
            assert_eq!(Ratio::new(*c, 32), q);
        }
    }

    #[test]
    fn random_instances_hold_invariants() {
        let inst = HardInstance::random(16, 32, 4.0, 9).unwrap();
        assert_eq!(inst.total_weight(), 64);
        assert_eq!(inst.t(), Ratio::from_integer(4));
        let q = inst.q_exact();
        assert_eq!(q.iter().copied().sum::<Ratio<u64>>(), Ratio::from_integer(1));
        assert!(inst.p().is_ok() && inst.q().is_ok());
        assert_eq!(HardInstance::parse(&inst.to_text()).unwrap(), inst);
        assert_eq!(sample_q_seeded(&inst, 3, 50), sample_q_seeded(&inst, 3, 50));
    }
}
