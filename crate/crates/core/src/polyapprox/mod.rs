//! Bounded, parity-constrained polynomials with grid certificates.
//!
//! Every constructor projects a smooth target onto the Chebyshev basis,
//! truncates, and certifies the result on a grid of at least ten points per
//! unit of degree. A polynomial that leaves `[-1, 1]` after projection is
//! rescaled by its measured sup norm and the certificates are recomputed
//! after the rescale.

mod cache;
pub mod chebyshev;
mod smooth;
mod text;

use std::fmt;

use crate::error::{out_of_range, Error, Result};
use crate::scalar::Real;
use smooth::Ramp;

pub use cache::PolyCache;

/// Slack allowed on `|P| <= 1` by grid certification.
pub const SUP_SLACK: f64 = 1e-9;

/// Degree budget multiplier: constructors fail once the degree exceeds
/// `DEGREE_CAP * law`, where `law` is the construction's nominal degree law.
pub const DEGREE_CAP: f64 = 64.0;

const MAX_SAMPLES: usize = 1 << 24;

fn sup_slack<T: Real>() -> T {
    T::of(SUP_SLACK).max(T::epsilon() * T::of(8.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, k: usize) -> bool {
        match self {
            Parity::Even => k.is_multiple_of(2),
            Parity::Odd => k % 2 == 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Functions a certificate can compare against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target<T> {
    Constant(T),
    /// `sqrt(ln(1/x)) / (2 sqrt(ln(1/beta)))`.
    SqrtLogRatio {
        beta: T,
    },
    /// `sqrt(log2(2/x)) / (2 sqrt(level + 1))`.
    ShiftedSqrtLog {
        level: usize,
    },
}

impl<T: Real> Target<T> {
    pub fn eval(&self, x: T) -> T {
        let two = T::of(2.0);
        match *self {
            Target::Constant(c) => c,
            Target::SqrtLogRatio { beta } => {
                let num = (-x.abs().ln()).max(T::zero()).sqrt();
                num / (two * (-beta.ln()).sqrt())
            }
            Target::ShiftedSqrtLog { level } => {
                let num = (two / x.abs()).log2().max(T::zero()).sqrt();
                num / (two * T::of(level as f64 + 1.0).sqrt())
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            Target::Constant(c) => format!("const:{:.16e}", c.to_f64_lossy()),
            Target::SqrtLogRatio { beta } => {
                format!("sqrt_log_ratio:{:.16e}", beta.to_f64_lossy())
            }
            Target::ShiftedSqrtLog { level } => format!("shifted_sqrt_log:{level}"),
        }
    }

    pub fn parse_id(s: &str) -> Option<Self> {
        let (head, arg) = s.split_once(':')?;
        match head {
            "const" => Some(Target::Constant(T::of(arg.parse().ok()?))),
            "sqrt_log_ratio" => Some(Target::SqrtLogRatio {
                beta: T::of(arg.parse().ok()?),
            }),
            "shifted_sqrt_log" => Some(Target::ShiftedSqrtLog {
                level: arg.parse().ok()?,
            }),
            _ => None,
        }
    }
}

/// One accuracy claim: `|P(x) - target(x)| <= bound` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertEntry<T> {
    pub lo: T,
    pub hi: T,
    pub target: Target<T>,
    pub bound: T,
    /// Largest deviation measured on the certification grid.
    pub achieved: T,
}

/// Result of re-checking a polynomial on some grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCheck<T> {
    pub points: usize,
    pub sup: T,
    pub achieved: Vec<T>,
}

impl<T: Real> GridCheck<T> {
    /// Whether the sup stays within `1 + SUP_SLACK` and each certificate within
    /// `factor` times its bound.
    pub fn passes(&self, certs: &[CertEntry<T>], factor: T) -> bool {
        self.sup <= T::one() + sup_slack::<T>() && certs.iter().zip(&self.achieved).all(|(c, &a)| a <= c.bound * factor)
    }
}

/// Real polynomial in the Chebyshev basis with certified `|P| <= 1` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedPoly<T = f64> {
    coeffs: Vec<T>,
    parity: Parity,
    sup_norm: T,
    rescale: T,
    certs: Vec<CertEntry<T>>,
    degree_constant: Option<f64>,
}

impl<T: Real> BoundedPoly<T> {
    /// Wraps user coefficients. Wrong-parity coefficients must be exactly zero
    /// and the polynomial must pass the sup-norm grid check; nothing is rescaled.
    pub fn from_chebyshev(coeffs: Vec<T>, parity: Parity) -> Result<Self> {
        Self::from_parts(coeffs, parity, Vec::new(), T::one(), None)
    }

    pub fn from_monomial(mono: &[T], parity: Parity) -> Result<Self> {
        for (k, &c) in mono.iter().enumerate() {
            if !parity.admits(k) && c != T::zero() {
                return Err(Error::Parity {
                    index: k,
                    value: c.to_f64_lossy(),
                });
            }
        }
        let mut coeffs = chebyshev::from_monomial(mono);
        for (k, c) in coeffs.iter_mut().enumerate() {
            if !parity.admits(k) {
                *c = T::zero();
            }
        }
        Self::from_chebyshev(coeffs, parity)
    }

    pub fn constant(c: T) -> Result<Self> {
        Self::from_chebyshev(vec![c], Parity::Even)
    }

    /// `P(x) = x`.
    pub fn identity() -> Self {
        Self::from_chebyshev(vec![T::zero(), T::one()], Parity::Odd).expect("T_1 is bounded")
    }

    pub(crate) fn from_parts(
        mut coeffs: Vec<T>,
        parity: Parity,
        certs: Vec<CertEntry<T>>,
        rescale: T,
        degree_constant: Option<f64>,
    ) -> Result<Self> {
        for (k, &c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::Check {
                    check: "finite_coefficients".into(),
                    detail: format!("coefficient {k} = {c}"),
                });
            }
            if !parity.admits(k) && c != T::zero() {
                return Err(Error::Parity {
                    index: k,
                    value: c.to_f64_lossy(),
                });
            }
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == T::zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        let mut poly = Self {
            coeffs,
            parity,
            sup_norm: T::zero(),
            rescale,
            certs,
            degree_constant,
        };
        let check = poly.grid_check(false);
        if check.sup > T::one() + sup_slack::<T>() {
            return Err(Error::Unbounded(check.sup.to_f64_lossy()));
        }
        poly.sup_norm = check.sup;
        for (c, a) in poly.certs.iter_mut().zip(check.achieved) {
            c.achieved = a;
        }
        Ok(poly)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Chebyshev coefficients `a_0..=a_d`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn certificates(&self) -> &[CertEntry<T>] {
        &self.certs
    }

    /// Sup of `|P|` measured on the certification grid.
    pub fn sup_norm(&self) -> T {
        self.sup_norm
    }

    /// Factor the projected polynomial was multiplied by (1 if no rescale).
    pub fn rescale_factor(&self) -> T {
        self.rescale
    }

    /// Measured `degree / law` for constructed polynomials.
    pub fn degree_constant(&self) -> Option<f64> {
        self.degree_constant
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if x.is_nan() || x.abs() > T::one() {
            return out_of_range("x", x.to_f64_lossy(), "[-1, 1]");
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: T) -> T {
        chebyshev::clenshaw(&self.coeffs, x)
    }

    fn grid_size(&self) -> usize {
        (10 * self.degree()).max(64)
    }

    /// Checks sup norm and certificates on the Lobatto grid of `10 * degree`
    /// points (`offset = false`) or on an interleaved grid with a different
    /// node count (`offset = true`). Interval endpoints are always included.
    pub fn grid_check(&self, offset: bool) -> GridCheck<T> {
        let g = self.grid_size();
        let pts = if offset {
            chebyshev::eval_offset_grid(&self.coeffs, g + 7)
        } else {
            chebyshev::eval_lobatto_grid(&self.coeffs, g)
        };
        let sup = pts.iter().fold(T::zero(), |acc, &(_, v)| acc.max(v.abs()));
        let achieved = self
            .certs
            .iter()
            .map(|c| {
                let mut worst = T::zero();
                for &(x, v) in &pts {
                    if x >= c.lo && x <= c.hi {
                        worst = worst.max((v - c.target.eval(x)).abs());
                    }
                }
                for x in [c.lo, c.hi] {
                    worst = worst.max((self.eval_unchecked(x) - c.target.eval(x)).abs());
                }
                worst
            })
            .collect();
        GridCheck {
            points: pts.len(),
            sup,
            achieved,
        }
    }

    /// Re-verifies the stored claims on the standard grid, naming the first
    /// failing check.
    pub fn verify(&self) -> Result<()> {
        let check = self.grid_check(false);
        if check.sup > T::one() + sup_slack::<T>() {
            return Err(Error::Check {
                check: "sup_norm".into(),
                detail: format!("max |P| = {} on {} points", check.sup, check.points),
            });
        }
        for (i, (c, a)) in self.certs.iter().zip(&check.achieved).enumerate() {
            if *a > c.bound {
                return Err(Error::Check {
                    check: format!("cert[{i}]"),
                    detail: format!(
                        "max |P - {}| on [{}, {}] is {} > {}",
                        c.target.id(),
                        c.lo,
                        c.hi,
                        a,
                        c.bound
                    ),
                });
            }
        }
        Ok(())
    }
}

struct Construction<F> {
    target: F,
    parity: Parity,
    trunc_tol: f64,
    certs: Vec<(f64, f64, Target<f64>, f64)>,
    law: f64,
}

fn cast_target<T: Real>(t: Target<f64>) -> Target<T> {
    match t {
        Target::Constant(c) => Target::Constant(T::of(c)),
        Target::SqrtLogRatio { beta } => Target::SqrtLogRatio { beta: T::of(beta) },
        Target::ShiftedSqrtLog { level } => Target::ShiftedSqrtLog { level },
    }
}

impl<F: Fn(f64) -> f64> Construction<F> {
    fn budget(&self) -> usize {
        (DEGREE_CAP * self.law).ceil() as usize
    }

    fn run<T: Real>(self) -> Result<BoundedPoly<T>> {
        let budget = self.budget();
        let max_n = (4 * budget).next_power_of_two().clamp(64, MAX_SAMPLES);
        let mut n = 64usize;
        let coeffs = loop {
            let mut a: Vec<f64> = chebyshev::interpolate(&self.target, n);
            for (k, c) in a.iter_mut().enumerate() {
                if !self.parity.admits(k) {
                    *c = 0.0;
                }
            }
            let upper: f64 = a[n / 2..].iter().map(|c| c.abs()).sum();
            if upper <= self.trunc_tol / 8.0 || n >= max_n {
                break a;
            }
            n *= 2;
        };

        // Smallest degree whose discarded tail is within the truncation budget.
        let tail_after = |d: usize| -> f64 { coeffs[(d + 1).min(coeffs.len())..].iter().map(|c| c.abs()).sum() };
        let mut d = 0;
        let mut tail = 0.0;
        for k in (1..coeffs.len()).rev() {
            if tail + coeffs[k].abs() > self.trunc_tol {
                d = k;
                break;
            }
            tail += coeffs[k].abs();
        }
        let worst_bound = self.certs.iter().map(|c| c.3).fold(f64::INFINITY, f64::min);
        let certs: Vec<CertEntry<T>> = self
            .certs
            .iter()
            .map(|&(lo, hi, target, bound)| CertEntry {
                lo: T::of(lo),
                hi: T::of(hi),
                target: cast_target(target),
                bound: T::of(bound),
                achieved: T::zero(),
            })
            .collect();

        loop {
            if d > budget {
                return Err(Error::Construction {
                    budget,
                    achieved: tail_after(budget),
                    target: worst_bound,
                });
            }
            let mut c: Vec<T> = coeffs[..=d.min(coeffs.len() - 1)].iter().map(|&x| T::of(x)).collect();
            let probe = BoundedPoly {
                coeffs: c.clone(),
                parity: self.parity,
                sup_norm: T::zero(),
                rescale: T::one(),
                certs: certs.clone(),
                degree_constant: None,
            };
            // The grid sup can miss the true sup between nodes by a small
            // fraction of the truncation ripple; keep a margin below 1.
            let ceiling = T::one() - T::of(self.trunc_tol / 8.0);
            let mut rescale = T::one();
            let sup = probe.grid_check(false).sup.max(probe.grid_check(true).sup);
            if sup > ceiling {
                rescale = ceiling / sup;
                for x in c.iter_mut() {
                    *x = *x * rescale;
                }
            }
            let poly = BoundedPoly::from_parts(c, self.parity, certs.clone(), rescale, Some(d as f64 / self.law))?;
            let failing = poly
                .certs
                .iter()
                .find(|c| c.achieved > c.bound)
                .map(|c| (c.achieved.to_f64_lossy(), c.bound.to_f64_lossy()));
            match failing {
                None => return Ok(poly),
                Some((achieved, bound)) => {
                    if d + 1 >= coeffs.len() || d >= budget {
                        return Err(Error::Construction {
                            budget,
                            achieved,
                            target: bound,
                        });
                    }
                    d = (d + (d / 8).max(2)).min(coeffs.len() - 1);
                }
            }
        }
    }
}

fn check_unit(name: &'static str, v: f64, lo_open: f64, hi: f64) -> Result<()> {
    if v > lo_open && v <= hi {
        Ok(())
    } else {
        out_of_range(name, v, "the documented range")
    }
}

/// Even polynomial within `eta` of `sqrt(ln(1/x)) / (2 sqrt(ln(1/beta)))` on
/// `[beta, 1 - beta]`. Nominal degree law `(1/beta) ln(1/(beta eta))`.
pub fn approx_sqrt_log<T: Real>(beta: T, eta: T) -> Result<BoundedPoly<T>> {
    let (beta, eta) = (beta.to_f64_lossy(), eta.to_f64_lossy());
    check_unit("beta", beta, 0.0, 0.5)?;
    check_unit("eta", eta, 0.0, 0.5)?;
    let tail = eta / 8.0;
    let low = Ramp::new(0.75 * beta, 0.25 * beta, tail);
    let high = Ramp::new(1.0 - 0.75 * beta, 0.25 * beta, tail);
    let norm = 2.0 * (1.0 / beta).ln().sqrt();
    let target = move |x: f64| {
        let ax = x.abs();
        if ax == 0.0 || ax >= 1.0 {
            return 0.0;
        }
        let w = low.even_step(x) * (1.0 - high.even_step(x));
        w * (-ax.ln()).max(0.0).sqrt() / norm
    };
    Construction {
        target,
        parity: Parity::Even,
        trunc_tol: eta / 2.0,
        certs: vec![(beta, 1.0 - beta, Target::SqrtLogRatio { beta }, eta)],
        law: (1.0 / beta) * (1.0 / (beta * eta)).ln(),
    }
    .run()
}

/// Even polynomial within `eta` of `sqrt(log2(2/x)) / (2 sqrt(k + 1))` on
/// `[2^-k, 1]`. Nominal degree law `2^(k+1) ln(2^(k+1)/eta)`.
pub fn make_sk<T: Real>(k: usize, eta: T) -> Result<BoundedPoly<T>> {
    let eta = eta.to_f64_lossy();
    if k == 0 || k > 60 {
        return Err(Error::Level { level: k, max: 60 });
    }
    check_unit("eta", eta, 0.0, 0.5)?;
    let phi_next = 0.5f64.powi(k as i32 + 1);
    let window = Ramp::new(1.5 * phi_next, 0.5 * phi_next, eta / 8.0);
    let norm = 2.0 * ((k + 1) as f64).sqrt();
    let target = move |x: f64| {
        let ax = x.abs();
        if ax == 0.0 {
            return 0.0;
        }
        window.even_step(x) * (2.0 / ax).log2().max(0.0).sqrt() / norm
    };
    Construction {
        target,
        parity: Parity::Even,
        trunc_tol: eta / 2.0,
        certs: vec![(2.0 * phi_next, 1.0, Target::ShiftedSqrtLog { level: k }, eta)],
        law: (1.0 / phi_next) * (1.0 / (eta * phi_next)).ln(),
    }
    .run()
}

/// Default floor `eps^2 / 8` of [`make_step_poly_with_floor`].
pub fn make_step_poly<T: Real>(phi: T, eps: T) -> Result<BoundedPoly<T>> {
    let e = eps.to_f64_lossy();
    step_poly(phi.to_f64_lossy(), e, e * e / 8.0)
}

/// Even threshold polynomial `b` with `b <= eps` on `[0, phi]`,
/// `b >= sqrt(1 - eps^2)` on `[2 phi, 1]` and `floor / 2 <= b <= 1` everywhere
/// on `[-1, 1]`. `floor` must lie in `(0, eps^2 / 8]`; smaller floors cost degree
/// only logarithmically. Nominal degree law `(1/phi) ln(1/eps)`.
pub fn make_step_poly_with_floor<T: Real>(phi: T, eps: T, floor: T) -> Result<BoundedPoly<T>> {
    step_poly(phi.to_f64_lossy(), eps.to_f64_lossy(), floor.to_f64_lossy())
}

fn step_poly<T: Real>(phi: f64, eps: f64, floor: f64) -> Result<BoundedPoly<T>> {
    check_unit("phi", phi, 0.0, 1.0)?;
    if !(eps > 0.0 && eps < 1.0) {
        return out_of_range("eps", eps, "(0, 1)");
    }
    if !(floor > 0.0 && floor <= eps * eps / 8.0 * (1.0 + 1e-12)) {
        return out_of_range("floor", floor, "(0, eps^2/8]");
    }
    let tol = (eps * eps / 16.0).min(floor / 2.0);
    let ramp = Ramp::new(1.5 * phi, 0.5 * phi, tol);
    let target = move |x: f64| floor + (1.0 - floor) * ramp.even_step(x);
    let mut certs = vec![
        (0.0, 1.0, Target::Constant(0.5), 0.5 + SUP_SLACK),
        (0.0, phi, Target::Constant(0.0), eps),
    ];
    if 2.0 * phi <= 1.0 {
        certs.push((2.0 * phi, 1.0, Target::Constant(1.0), 1.0 - (1.0 - eps * eps).sqrt()));
    }
    Construction {
        target,
        parity: Parity::Even,
        trunc_tol: tol,
        certs,
        law: (1.0 / phi) * (1.0 / eps).ln(),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_log_examples() {
        let p = approx_sqrt_log(0.25f64, 0.05).unwrap();
        let target = 1.0 / (2.0 * 2f64.sqrt());
        assert!((Target::SqrtLogRatio { beta: 0.25 }.eval(0.5) - target).abs() < 1e-15);
        assert!((p.eval(0.5).unwrap() - target).abs() <= 0.05);
        for x in [-1.0, 0.0, 1.0] {
            assert!(p.eval(x).unwrap().abs() <= 1.0);
        }
        assert_eq!(p.parity(), Parity::Even);
        let q = approx_sqrt_log(0.1f64, 0.01).unwrap();
        let c = q.degree_constant().unwrap();
        assert!(q.degree() as f64 <= c * 10.0 * 1000f64.ln() + 1e-9);
        assert!(c <= DEGREE_CAP);
    }

    #[test]
    fn sk_examples() {
        let s = make_sk(1, 0.05f64).unwrap();
        let c = &s.certificates()[0];
        assert_eq!((c.lo, c.hi), (0.5, 1.0));
        let t = Target::<f64>::ShiftedSqrtLog { level: 1 }.eval(1.0);
        assert!((t - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((s.eval(1.0).unwrap() - t).abs() <= 0.05);
        for k in 1..=4 {
            let s = make_sk(k, 0.05f64).unwrap();
            for i in 0..=50 {
                let x = i as f64 / 50.0;
                assert!((s.eval(x).unwrap() - s.eval(-x).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn step_examples() {
        let b = make_step_poly(0.25f64, 0.1).unwrap();
        assert!(b.eval(0.2).unwrap() <= 0.1);
        assert!(b.eval(0.6).unwrap() >= (1.0f64 - 0.01).sqrt());
        assert!(b.degree() as f64 <= b.degree_constant().unwrap() * 4.0 * 10f64.ln() + 1e-9);
        let half = make_step_poly(0.5f64, 0.1).unwrap();
        let upper = &half.certificates()[2];
        assert_eq!((upper.lo, upper.hi), (1.0, 1.0));
        assert!(half.eval(1.0).unwrap() >= (0.99f64).sqrt());
        let one = make_step_poly(1.0f64, 0.1).unwrap();
        assert_eq!(one.certificates().len(), 2);
    }

    #[test]
    fn step_stays_in_unit_interval() {
        let b = make_step_poly(0.125f64, 0.2).unwrap();
        for i in 0..=2000 {
            let x = -1.0 + i as f64 / 1000.0;
            let v = b.eval(x).unwrap();
            assert!(v > 0.0 && v <= 1.0 + SUP_SLACK, "x={x} v={v}");
        }
    }

    #[test]
    fn user_polynomials() {
        let c = BoundedPoly::constant(1.0f64).unwrap();
        assert_eq!(c.eval(0.3).unwrap(), 1.0);
        assert!(BoundedPoly::constant(1.5f64).is_err());
        let t4 = BoundedPoly::from_chebyshev(vec![0.0, 0.0, 0.0, 0.0, 1.0f64], Parity::Even).unwrap();
        assert!((t4.eval(0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!(t4.eval(1.5).is_err());
        assert!(matches!(
            BoundedPoly::from_chebyshev(vec![0.0, 0.5f64], Parity::Even),
            Err(Error::Parity { index: 1, .. })
        ));
        let sq = BoundedPoly::from_monomial(&[0.0, 0.0, 1.0f64], Parity::Even).unwrap();
        assert!((sq.eval(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!(BoundedPoly::from_monomial(&[0.0, 0.0, 2.0f64], Parity::Even).is_err());
        assert_eq!(BoundedPoly::<f64>::identity().eval(-0.3).unwrap(), -0.3);
    }

    #[test]
    fn parameter_errors() {
        assert!(approx_sqrt_log(0.0f64, 0.1).is_err());
        assert!(approx_sqrt_log(0.6f64, 0.1).is_err());
        assert!(approx_sqrt_log(0.25f64, 0.0).is_err());
        assert!(make_sk(0, 0.1f64).is_err());
        assert!(make_sk(2, 0.7f64).is_err());
        assert!(make_step_poly(0.0f64, 0.1).is_err());
        assert!(make_step_poly(0.5f64, 1.0).is_err());
        assert!(make_step_poly_with_floor(0.5f64, 0.1, 0.01).is_err());
    }

    #[test]
    fn unreachable_accuracy_reports_achieved_error() {
        // A degree budget far below what the transition width needs.
        let c = Construction {
            target: |x: f64| if x.abs() > 0.5 { 1.0 } else { 0.0 },
            parity: Parity::Even,
            trunc_tol: 1e-3,
            certs: vec![(0.6, 1.0, Target::Constant(1.0), 1e-3)],
            law: 0.5,
        };
        match c.run::<f64>() {
            Err(Error::Construction {
                budget,
                achieved,
                target,
            }) => {
                assert_eq!(budget, 32);
                assert!(achieved > target);
            }
            other => panic!("expected construction failure, got {other:?}"),
        }
    }

    #[test]
    fn single_precision_construction() {
        let p = make_step_poly(0.25f32, 0.1).unwrap();
        assert!(p.eval(0.1).unwrap() <= 0.1);
        assert!(p.grid_check(true).passes(p.certificates(), 2.0));
    }
}
