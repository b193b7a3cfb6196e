//! Finite probability vectors, their entropies, and the test families.

use std::fmt;
use std::str::FromStr;

use crate::error::{out_of_range, Error, Result};
use crate::scalar::{entropy_term, stable_sum, Real};

/// A probability vector over `n` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T = f64> {
    probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    /// Validates without renormalizing: every entry finite and nonnegative,
    /// total within the scalar's normalization tolerance of 1.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty probability vector".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < T::zero() {
                return Err(Error::InvalidDistribution(format!(
                    "probs[{i}] = {p} is not a finite nonnegative number"
                )));
            }
        }
        let total = stable_sum(probs.iter().copied());
        if (total - T::one()).abs() > T::norm_tolerance() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Singular values of the oracle block, `sqrt(p_i)`.
    pub fn amplitudes(&self) -> Vec<T> {
        self.probs.iter().map(|p| p.sqrt()).collect()
    }

    pub fn shannon_entropy(&self) -> T {
        shannon_entropy(self)
    }

    /// Plain-text form read by [`Distribution::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.probs {
            out.push_str(&format!("{:.17e}\n", p.to_f64_lossy()));
        }
        out
    }

    /// One probability per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut probs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("not a decimal number: {line:?}"),
            })?;
            probs.push(T::of(v));
        }
        Self::new(probs)
    }
}

/// `-Σ p_i log2 p_i` with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(d: &Distribution<T>) -> T {
    stable_sum(d.probs.iter().map(|&p| entropy_term(p)))
}

/// `-x log2 x - (1-x) log2 (1-x)` for `x` in `[0, 1]`.
pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return out_of_range("x", x.to_f64_lossy(), "[0, 1]");
    }
    Ok(entropy_term(x) + entropy_term(T::one() - x))
}

/// Named shapes used as fixtures and sweep inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Uniform,
    /// All mass on the first outcome.
    Point,
    /// `p_i ∝ i^{-s}`.
    Zipf {
        exponent: f64,
    },
    /// `(mass, 1 - mass, 0, ...)`.
    TwoPoint {
        mass: f64,
    },
    /// `p_i = 2^{-i}` for `i < n`, last outcome takes the remainder `2^{-(n-1)}`.
    Dyadic,
    Explicit(Vec<f64>),
}

impl Family {
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Uniform => write!(f, "uniform"),
            Family::Point => write!(f, "point"),
            Family::Zipf { exponent } => write!(f, "zipf:{exponent}"),
            Family::TwoPoint { mass } => write!(f, "two_point:{mass}"),
            Family::Dyadic => write!(f, "dyadic"),
            Family::Explicit(_) => write!(f, "explicit"),
        }
    }
}

/// Accepts `uniform`, `point`, `dyadic`, `zipf[:s]` (default `s = 1`) and
/// `two_point[:mass]` (default `0.64`).
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let parse_arg = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a.parse().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad family parameter {a:?}"),
                }),
            }
        };
        match head {
            "uniform" => Ok(Family::Uniform),
            "point" => Ok(Family::Point),
            "dyadic" => Ok(Family::Dyadic),
            "zipf" => Ok(Family::Zipf {
                exponent: parse_arg(1.0)?,
            }),
            "two_point" => Ok(Family::TwoPoint { mass: parse_arg(0.64)? }),
            other => Err(Error::Parse {
                line: 1,
                msg: format!("unknown family {other:?}"),
            }),
        }
    }
}

pub fn make_distribution<T: Real>(family: &Family, n: usize) -> Result<Distribution<T>> {
    if n == 0 {
        return out_of_range("n", 0.0, "n >= 1");
    }
    let probs: Vec<T> = match family {
        Family::Uniform => vec![T::one() / T::of(n as f64); n],
        Family::Point => {
            let mut v = vec![T::zero(); n];
            v[0] = T::one();
            v
        }
        Family::Zipf { exponent } => {
            if !(exponent.is_finite() && *exponent > 0.0) {
                return out_of_range("zipf exponent", *exponent, "(0, inf)");
            }
            let w: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-exponent)).collect();
            let z = stable_sum(w.iter().copied());
            w.iter().map(|x| T::of(x / z)).collect()
        }
        Family::TwoPoint { mass } => {
            if n < 2 {
                return out_of_range("n", n as f64, "n >= 2 for two_point");
            }
            if !(*mass >= 0.0 && *mass <= 1.0) {
                return out_of_range("two_point mass", *mass, "[0, 1]");
            }
            let mut v = vec![T::zero(); n];
            v[0] = T::of(*mass);
            v[1] = T::of(1.0 - mass);
            v
        }
        Family::Dyadic => {
            let mut v: Vec<T> = (1..n).map(|i| T::of(0.5f64.powi(i as i32))).collect();
            v.push(T::of(0.5f64.powi(n as i32 - 1)));
            v
        }
        Family::Explicit(ps) => {
            if ps.len() != n {
                return Err(Error::InvalidDistribution(format!(
                    "explicit vector has {} entries, expected {n}",
                    ps.len()
                )));
            }
            ps.iter().map(|&p| T::of(p)).collect()
        }
    };
    Distribution::new(probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        let u = make_distribution::<f64>(&Family::Uniform, 4).unwrap();
        assert_eq!(u.shannon_entropy(), 2.0);
        let pm = Distribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(pm.shannon_entropy(), 0.0);
        let d = Distribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(d.shannon_entropy(), 1.5);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let direct = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((binary_entropy(0.25).unwrap() - direct).abs() < 1e-15);
        assert!((binary_entropy(0.25f64).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn families() {
        let u = make_distribution::<f64>(&Family::Uniform, 8).unwrap();
        assert!(u.probs().iter().all(|&p| p == 0.125));
        let t = make_distribution::<f64>(&Family::TwoPoint { mass: 0.64 }, 2).unwrap();
        assert_eq!(t.probs(), &[0.64, 0.36]);
        let z = make_distribution::<f64>(&Family::Zipf { exponent: 1.0 }, 4).unwrap();
        let expect = [12.0 / 25.0, 6.0 / 25.0, 4.0 / 25.0, 3.0 / 25.0];
        for (a, b) in z.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let d = make_distribution::<f64>(&Family::Dyadic, 4).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.25, 0.125, 0.125]);
        let p = make_distribution::<f64>(&Family::Point, 3).unwrap();
        assert_eq!(p.probs(), &[1.0, 0.0, 0.0]);
        assert_eq!(make_distribution::<f64>(&Family::Dyadic, 1).unwrap().probs(), &[1.0]);
    }

    #[test]
    fn family_errors() {
        assert!(make_distribution::<f64>(&Family::Uniform, 0).is_err());
        assert!(make_distribution::<f64>(&Family::Zipf { exponent: 0.0 }, 4).is_err());
        assert!(make_distribution::<f64>(&Family::TwoPoint { mass: 0.5 }, 1).is_err());
        assert!(make_distribution::<f64>(&Family::Explicit(vec![0.5, 0.5]), 3).is_err());
        assert!(make_distribution::<f64>(&Family::Explicit(vec![0.5, 0.6]), 2).is_err());
    }

    #[test]
    fn rejects_invalid_vectors() {
        assert!(Distribution::<f64>::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.5 + 1e-9]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Distribution::new(vec![0.5, 0.5 + 1e-13]).is_ok());
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            Family::Uniform,
            Family::Point,
            Family::Dyadic,
            Family::Zipf { exponent: 1.0 },
            Family::TwoPoint { mass: 0.64 },
        ] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("zipf".parse::<Family>().unwrap(), Family::Zipf { exponent: 1.0 });
        assert!("gauss".parse::<Family>().is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "# fixture\n0.5\n\n0.25 # tail\n0.25\n";
        let d = Distribution::<f64>::parse(text).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.25, 0.25]);
        let z = make_distribution::<f64>(&Family::Zipf { exponent: 1.3 }, 7).unwrap();
        assert_eq!(Distribution::<f64>::parse(&z.to_text()).unwrap(), z);
        assert!(matches!(
            Distribution::<f64>::parse("0.5\nabc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn single_precision() {
        let u = make_distribution::<f32>(&Family::Uniform, 16).unwrap();
        assert!((u.shannon_entropy() - 4.0).abs() < 1e-5);
    }
}
