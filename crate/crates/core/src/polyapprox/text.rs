//! Plain-text coefficient tables.
//!
//! ```text
//! basis=chebyshev degree=4 parity=even rescale=1 degree_constant=2.5
//! # cert <lo> <hi> <target-id> <bound>
//! <a_0>
//! ...
//! <a_4>
//! ```

use super::{BoundedPoly, CertEntry, Parity, Target};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn sig17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl<T: Real> BoundedPoly<T> {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "basis=chebyshev degree={} parity={} rescale={}",
            self.degree(),
            self.parity,
            sig17(self.rescale)
        );
        if let Some(c) = self.degree_constant {
            out.push_str(&format!(" degree_constant={c:.16e}"));
        }
        out.push('\n');
        for c in &self.certs {
            out.push_str(&format!(
                "# cert {} {} {} {}\n",
                sig17(c.lo),
                sig17(c.hi),
                c.target.id(),
                sig17(c.bound)
            ));
        }
        for a in &self.coeffs {
            out.push_str(&sig17(*a));
            out.push('\n');
        }
        out
    }

    /// Parses [`BoundedPoly::to_text`] output and re-runs grid certification,
    /// so a tampered table fails with the name of the violated check.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut degree = None;
        let mut parity = None;
        let mut rescale = T::one();
        let mut degree_constant = None;
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| parse_err(hline + 1, format!("bad header field {field:?}")))?;
            let bad = || parse_err(hline + 1, format!("bad value in {field:?}"));
            match k {
                "basis" if v == "chebyshev" => {}
                "basis" => return Err(parse_err(hline + 1, format!("unsupported basis {v:?}"))),
                "degree" => degree = Some(v.parse::<usize>().map_err(|_| bad())?),
                "parity" => {
                    parity = Some(match v {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        _ => return Err(bad()),
                    })
                }
                "rescale" => rescale = T::of(v.parse::<f64>().map_err(|_| bad())?),
                "degree_constant" => degree_constant = Some(v.parse::<f64>().map_err(|_| bad())?),
                _ => return Err(parse_err(hline + 1, format!("unknown header key {k:?}"))),
            }
        }
        let degree = degree.ok_or_else(|| parse_err(hline + 1, "missing degree"))?;
        let parity = parity.ok_or_else(|| parse_err(hline + 1, "missing parity"))?;

        let mut certs = Vec::new();
        let mut coeffs = Vec::new();
        for (idx, raw) in lines {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.first() != Some(&"cert") {
                    continue;
                }
                if parts.len() != 5 {
                    return Err(parse_err(idx + 1, "cert line needs lo hi target bound"));
                }
                let num = |s: &str| -> Result<T> {
                    s.parse::<f64>()
                        .map(T::of)
                        .map_err(|_| parse_err(idx + 1, format!("bad number {s:?}")))
                };
                certs.push(CertEntry {
                    lo: num(parts[1])?,
                    hi: num(parts[2])?,
                    target: Target::parse_id(parts[3])
                        .ok_or_else(|| parse_err(idx + 1, format!("bad target {:?}", parts[3])))?,
                    bound: num(parts[4])?,
                    achieved: T::zero(),
                });
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("bad coefficient {line:?}")))?;
            coeffs.push(T::of(v));
        }
        if coeffs.len() != degree + 1 {
            return Err(parse_err(
                hline + 1,
                format!(
                    "degree {degree} needs {} coefficients, found {}",
                    degree + 1,
                    coeffs.len()
                ),
            ));
        }
        let poly = Self::from_parts(coeffs, parity, certs, rescale, degree_constant).map_err(|e| match e {
            Error::Unbounded(sup) => Error::Check {
                check: "sup_norm".into(),
                detail: format!("max |P| = {sup}"),
            },
            other => other,
        })?;
        poly.verify()?;
        Ok(poly)
    }
}
