//! Fixed-point amplitude amplification and canonical amplitude estimation,
//! each simulated exactly on its two-dimensional invariant subspace.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{out_of_range, Error, Result};
use crate::oracle::{Formula, QueryLedger};
use crate::scalar::Real;

/// Chebyshev polynomial `T_L(x)` for any real `x`.
pub fn chebyshev_t<T: Real>(l: f64, x: T) -> T {
    let l = T::of(l);
    if x.abs() <= T::one() {
        (l * x.acos()).cos()
    } else if x > T::zero() {
        (l * x.acosh()).cosh()
    } else {
        let v = (l * (-x).acosh()).cosh();
        // Only integer orders are evaluated outside [-1, 1] at negative x.
        if (l.to_f64_lossy().round() as i64) % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// Smallest odd integer `>= max(x, 1)`.
pub fn odd_ceil(x: f64) -> usize {
    let l = (x.ceil().max(1.0)) as usize;
    if l % 2 == 1 {
        l
    } else {
        l + 1
    }
}

/// `L = ceil(c ln(2/delta) / sqrt(lambda))`, rounded up to odd.
pub fn amplification_rounds(lambda: f64, delta: f64, c: f64) -> usize {
    odd_ceil(c * (2.0 / delta).ln() / lambda.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifyResult<T = f64> {
    /// `|<T|T'>|^2` after the sequence.
    pub fidelity_sq: T,
    /// Oracle rounds; each round costs one application of the state
    /// preparation or its inverse.
    pub rounds: usize,
    pub lambda: T,
    pub delta: T,
}

impl<T: Real> AmplifyResult<T> {
    /// Charges `rounds * round_cost` queries.
    pub fn charge(&self, ledger: &mut QueryLedger, label: impl Into<String>, round_cost: u64, c: f64) {
        ledger.push(
            label.into(),
            Formula::Amplification,
            (self.rounds as u64).saturating_mul(round_cost),
            c,
        );
    }
}

/// Fixed-point search with the round count from [`amplification_rounds`].
pub fn fixed_point_amplify<T: Real>(lambda: T, delta: T, c: f64) -> Result<AmplifyResult<T>> {
    check_amplify_inputs(lambda, delta)?;
    let l = amplification_rounds(lambda.to_f64_lossy(), delta.to_f64_lossy(), c);
    fixed_point_amplify_rounds(lambda, delta, l)
}

fn check_amplify_inputs<T: Real>(lambda: T, delta: T) -> Result<()> {
    if lambda == T::zero() {
        return Err(Error::NoOverlap);
    }
    if !(lambda > T::zero() && lambda <= T::one()) {
        return out_of_range("lambda", lambda.to_f64_lossy(), "(0, 1]");
    }
    if !(delta > T::zero() && delta < T::one()) {
        return out_of_range("delta", delta.to_f64_lossy(), "(0, 1)");
    }
    Ok(())
}

/// Runs the phase sequence tuned for `(delta, rounds)` on an initial state with
/// target overlap `lambda`. `rounds` must be odd.
pub fn fixed_point_amplify_rounds<T: Real>(lambda: T, delta: T, rounds: usize) -> Result<AmplifyResult<T>> {
    check_amplify_inputs(lambda, delta)?;
    if rounds.is_multiple_of(2) {
        return out_of_range("rounds", rounds as f64, "odd values");
    }
    let l_count = (rounds - 1) / 2;
    let big_l = rounds as f64;
    let inv_gamma = chebyshev_t(1.0 / big_l, T::one() / delta);
    let gamma = T::one() / inv_gamma;
    let root = (T::one() - gamma * gamma).max(T::zero()).sqrt();
    let alpha: Vec<T> = (1..=l_count)
        .map(|j| {
            let t = T::of((2.0 * std::f64::consts::PI * j as f64 / big_l).tan()) * root;
            // acot(t) on (0, pi).
            let acot = T::FRAC_PI_2() - t.atan();
            T::of(2.0) * acot
        })
        .collect();
    let beta: Vec<T> = (1..=l_count).map(|j| -alpha[l_count - j]).collect();

    // Basis (|T>, |T_perp>); |s> = sqrt(lambda)|T> + sqrt(1-lambda)|T_perp>.
    let s = [
        Complex::new(lambda.sqrt(), T::zero()),
        Complex::new((T::one() - lambda).max(T::zero()).sqrt(), T::zero()),
    ];
    let mut psi = s;
    let one = Complex::new(T::one(), T::zero());
    for j in 0..l_count {
        // S_t(beta), written as e^{i beta} on the complement (equal to e^{-i beta}
        // on the target up to a global phase, which fidelity ignores).
        let eb = Complex::from_polar(T::one(), beta[j]);
        psi[1] = psi[1] * eb;
        // S_s(alpha) = I - (1 - e^{i alpha}) |s><s|.
        let ea = Complex::from_polar(T::one(), alpha[j]);
        let overlap = s[0].conj() * psi[0] + s[1].conj() * psi[1];
        let f = (one - ea) * overlap;
        psi[0] = -(psi[0] - f * s[0]);
        psi[1] = -(psi[1] - f * s[1]);
    }
    Ok(AmplifyResult {
        fidelity_sq: psi[0].norm_sqr(),
        rounds,
        lambda,
        delta,
    })
}

/// Success probability of the `rounds`-round sequence in closed form:
/// `1 - delta^2 T_L(T_{1/L}(1/delta) sqrt(1 - lambda))^2`.
pub fn fixed_point_closed_form<T: Real>(lambda: T, delta: T, rounds: usize) -> T {
    let big_l = rounds as f64;
    let arg = chebyshev_t(1.0 / big_l, T::one() / delta) * (T::one() - lambda).sqrt();
    let t = chebyshev_t(big_l, arg);
    T::one() - delta * delta * t * t
}

/// Smallest deficit `delta_L` an `L`-round sequence guarantees for overlap
/// `lambda`: `1 / T_L(1 / sqrt(1 - lambda))`.
pub fn best_delta<T: Real>(lambda: T, rounds: usize) -> T {
    if lambda >= T::one() {
        return T::zero();
    }
    T::one() / chebyshev_t(rounds as f64, T::one() / (T::one() - lambda).sqrt())
}

/// Error radius that canonical estimation with grid `m` attains with
/// probability at least `8/pi^2`: `2 pi sqrt(a(1-a))/M + pi^2/M^2`.
pub fn qae_error_bound<T: Real>(a: T, m: usize) -> T {
    let mm = T::of(m as f64);
    let pi = T::PI();
    T::of(2.0) * pi * (a * (T::one() - a)).max(T::zero()).sqrt() / mm + pi * pi / (mm * mm)
}

/// Smallest power-of-two grid `M >= 2` whose error radius is at most `target`
/// for every amplitude up to `a_bound`.
pub fn grid_size_for(a_bound: f64, target: f64) -> Result<usize> {
    if !(target > 0.0 && target.is_finite()) {
        return out_of_range("target", target, "(0, inf)");
    }
    let a = a_bound.clamp(0.0, 0.5);
    let mut m = 2usize;
    while qae_error_bound(a, m) > target {
        m = m.checked_mul(2).ok_or(Error::GridSize(usize::MAX))?;
        if m > 1 << 40 {
            return Err(Error::GridSize(m));
        }
    }
    Ok(m)
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::GridSize(m));
    }
    Ok(())
}

/// Exact outcome law of canonical estimation with grid `M`, reported on the
/// estimate grid `sin^2(pi j / M)`, `j = 0..=M/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaeDistribution<T = f64> {
    pub m: usize,
    pub grid: Vec<T>,
    pub probs: Vec<T>,
}

impl<T: Real> QaeDistribution<T> {
    /// Probability that the estimate lands within `radius` of `a`.
    pub fn mass_within(&self, a: T, radius: T) -> T {
        self.grid
            .iter()
            .zip(&self.probs)
            .filter(|(&g, _)| (g - a).abs() <= radius)
            .map(|(_, &p)| p)
            .fold(T::zero(), |acc, p| acc + p)
    }

    pub fn sampler(&self) -> QaeSampler<T> {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0f64;
        for p in &self.probs {
            acc += p.to_f64_lossy();
            cdf.push(acc);
        }
        QaeSampler {
            m: self.m,
            grid: self.grid.clone(),
            cdf,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,estimate,probability\n");
        for (j, (g, p)) in self.grid.iter().zip(&self.probs).enumerate() {
            out.push_str(&format!("{j},{:.17e},{:.17e}\n", g.to_f64_lossy(), p.to_f64_lossy()));
        }
        out
    }
}

fn fejer<T: Real>(m: usize, delta: T) -> T {
    // Reduce to [-1/2, 1/2).
    let half = T::of(0.5);
    let d = delta - (delta + half).floor();
    let s = (T::PI() * d).sin();
    if s.abs() < T::of(1e-300) {
        return T::one();
    }
    let mm = T::of(m as f64);
    let num = (mm * T::PI() * d).sin();
    (num * num) / (mm * mm * s * s)
}

pub fn qae_distribution<T: Real>(a: T, m: usize) -> Result<QaeDistribution<T>> {
    check_grid(m)?;
    if !(a >= T::zero() && a <= T::one()) {
        return out_of_range("a", a.to_f64_lossy(), "[0, 1]");
    }
    let theta = a.sqrt().asin() / T::PI();
    let mm = T::of(m as f64);
    let half = m / 2;
    let mut probs = vec![T::zero(); half + 1];
    for y in 0..m {
        let frac = T::of(y as f64) / mm;
        let p = T::of(0.5) * (fejer(m, frac - theta) + fejer(m, frac + theta));
        let j = y.min(m - y);
        probs[j] = probs[j] + p;
    }
    let grid = (0..=half)
        .map(|j| {
            let s = (T::PI() * T::of(j as f64) / mm).sin();
            s * s
        })
        .collect();
    Ok(QaeDistribution { m, grid, probs })
}

/// Inverse-CDF sampler over a [`QaeDistribution`].
#[derive(Debug, Clone)]
pub struct QaeSampler<T = f64> {
    m: usize,
    grid: Vec<T>,
    cdf: Vec<f64>,
}

impl<T: Real> QaeSampler<T> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let total = *self.cdf.last().expect("nonempty grid");
        let u = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u).min(self.grid.len() - 1);
        self.grid[idx]
    }

    /// Median of `rounds` independent draws.
    pub fn boosted<R: Rng + ?Sized>(&self, rounds: usize, rng: &mut R) -> Result<T> {
        if rounds.is_multiple_of(2) {
            return Err(Error::EvenRounds(rounds));
        }
        let mut draws: Vec<T> = (0..rounds).map(|_| self.sample(rng)).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).expect("grid values are finite"));
        Ok(draws[rounds / 2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaeOutcome<T = f64> {
    pub estimate: T,
    pub m: usize,
    pub true_amp: T,
}

pub fn qae_estimate<T: Real>(a: T, m: usize, seed: u64) -> Result<QaeOutcome<T>> {
    let sampler = qae_distribution(a, m)?.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(QaeOutcome {
        estimate: sampler.sample(&mut rng),
        m,
        true_amp: a,
    })
}

pub fn boosted_estimate<T: Real>(a: T, m: usize, rounds: usize, seed: u64) -> Result<T> {
    if rounds.is_multiple_of(2) {
        return Err(Error::EvenRounds(rounds));
    }
    let sampler = qae_distribution(a, m)?.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sampler.boosted(rounds, &mut rng)
}

/// Charges `rounds * m * unit_cost` queries for boosted estimation.
pub fn charge_qae(ledger: &mut QueryLedger, label: impl Into<String>, m: usize, rounds: usize, unit_cost: u64, c: f64) {
    let count = (m as u64).saturating_mul(rounds as u64).saturating_mul(unit_cost);
    ledger.push(label.into(), Formula::AmplitudeEstimation, count, c);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_values() {
        assert!((chebyshev_t(4.0, 0.5f64) + 0.5).abs() < 1e-15);
        assert!((chebyshev_t(2.0, 3.0f64) - 17.0).abs() < 1e-12);
        assert!((chebyshev_t(3.0, -2.0f64) + 26.0).abs() < 1e-12);
        // T_{1/L}(T_L(x)) = x for x >= 1.
        assert!((chebyshev_t(1.0 / 5.0, chebyshev_t(5.0, 1.3f64)) - 1.3).abs() < 1e-12);
    }

    #[test]
    fn simulation_matches_closed_form() {
        for &lambda in &[0.01f64, 0.05, 0.2, 0.5, 0.9, 1.0] {
            for &delta in &[0.5f64, 0.1, 0.01] {
                for rounds in [1usize, 3, 5, 9, 21, 51] {
                    let sim = fixed_point_amplify_rounds(lambda, delta, rounds).unwrap();
                    let cf = fixed_point_closed_form(lambda, delta, rounds);
                    assert!(
                        (sim.fidelity_sq - cf).abs() < 1e-10,
                        "lambda={lambda} delta={delta} L={rounds}: {} vs {cf}",
                        sim.fidelity_sq
                    );
                }
            }
        }
    }

    #[test]
    fn amplify_examples() {
        let r = fixed_point_amplify(1.0f64, 0.1, 1.0).unwrap();
        assert!((r.fidelity_sq - 1.0).abs() < 1e-12);
        assert!(r.rounds <= 7);
        let r = fixed_point_amplify(0.25f64, 0.01, 1.0).unwrap();
        assert!(r.rounds as f64 <= 200f64.ln() * 2.0 + 2.0);
        assert!(r.fidelity_sq >= 1.0 - 1e-4);
        assert_eq!(fixed_point_amplify(0.0f64, 0.1, 1.0), Err(Error::NoOverlap));
        assert!(fixed_point_amplify(0.5f64, 0.0, 1.0).is_err());
        assert!(fixed_point_amplify_rounds(0.5f64, 0.1, 4).is_err());
    }

    #[test]
    fn qae_examples() {
        let d = qae_distribution(0.0f64, 16).unwrap();
        assert!((d.probs[0] - 1.0).abs() < 1e-12);
        let a = (std::f64::consts::PI / 32.0).sin().powi(2);
        let d = qae_distribution(a, 32).unwrap();
        assert!((d.probs[1] - 1.0).abs() < 1e-12);
        assert!((d.grid[1] - a).abs() < 1e-15);
        let d = qae_distribution(0.3f64, 32).unwrap();
        let mass = d.mass_within(0.3, qae_error_bound(0.3, 32));
        assert!(mass >= 8.0 / std::f64::consts::PI.powi(2));
        let total: f64 = d.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(qae_distribution(0.3f64, 24).is_err());
        assert!(qae_distribution(0.3f64, 1).is_err());
        assert!(qae_distribution(1.3f64, 16).is_err());
    }

    #[test]
    fn estimates_are_seeded_and_on_grid() {
        let a = qae_estimate(0.3f64, 64, 7).unwrap();
        let b = qae_estimate(0.3f64, 64, 7).unwrap();
        assert_eq!(a, b);
        let d = qae_distribution(0.3f64, 64).unwrap();
        assert!(d.grid.contains(&a.estimate));
        assert_eq!(qae_estimate(1.0f64, 16, 3).unwrap().estimate, 1.0);
        let med = boosted_estimate(0.3f64, 64, 15, 11).unwrap();
        assert!(d.grid.contains(&med));
        assert_eq!(boosted_estimate(0.3f64, 64, 4, 1), Err(Error::EvenRounds(4)));
        // One round is a single draw from the same stream.
        assert_eq!(
            boosted_estimate(0.3f64, 64, 1, 5).unwrap(),
            qae_estimate(0.3f64, 64, 5).unwrap().estimate
        );
    }

    #[test]
    fn grid_chooser() {
        let m = grid_size_for(0.3, 0.01).unwrap();
        assert!(m.is_power_of_two());
        assert!(qae_error_bound(0.3, m) <= 0.01);
        assert!(qae_error_bound(0.3, m / 2) > 0.01);
        // Amplitudes above 1/2 use the 1/2 worst case.
        assert_eq!(grid_size_for(0.9, 0.01).unwrap(), grid_size_for(0.5, 0.01).unwrap());
        assert!(grid_size_for(0.3, 0.0).is_err());
    }

    #[test]
    fn ledger_charges() {
        let mut l = QueryLedger::new();
        charge_qae(&mut l, "qae", 64, 15, 3, 1.0);
        assert_eq!(l.total(), 64 * 15 * 3);
        let r = fixed_point_amplify(0.1f64, 0.1, 1.0).unwrap();
        r.charge(&mut l, "amp", 10, 1.0);
        assert_eq!(l.total(), 64 * 15 * 3 + 10 * r.rounds as u64);
    }
}
