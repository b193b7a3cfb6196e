//! Flat `key = value` sweep configuration.

use std::path::Path;

use qentropy::Family;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub n_values: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub trials: usize,
    pub seed0: u64,
    pub cost_constant: f64,
    pub output_path: Option<String>,
    /// Also run the single-polynomial baseline for every row.
    pub folklore: bool,
    /// Replace sampled estimates by their true values.
    pub exact_qae: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            families: vec![Family::Uniform],
            n_values: vec![8],
            eps_values: vec![0.5],
            trials: 1,
            seed0: 0,
            cost_constant: 1.0,
            output_path: None,
            folklore: false,
            exact_qae: false,
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad(format!("{key}: cannot parse {s:?}"))))
        .collect()
}

fn parse_bool(key: &str, value: &str) -> CliResult<bool> {
    match value {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(bad(format!("{key}: expected true/false, got {value:?}"))),
    }
}

impl SweepConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let one = |v: &str| -> CliResult<f64> { v.parse().map_err(|_| bad(format!("{key}: not a number: {v:?}"))) };
        match key {
            "families" | "family" | "dist" => {
                self.families = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<Family>().map_err(|e| bad(e.to_string())))
                    .collect::<CliResult<_>>()?;
            }
            "n_values" | "n" => self.n_values = parse_list(key, value)?,
            "eps_values" | "eps" => self.eps_values = parse_list(key, value)?,
            "trials" => self.trials = one(value)? as usize,
            "seed0" | "seed" => {
                self.seed0 = value
                    .parse()
                    .map_err(|_| bad(format!("{key}: not an integer: {value:?}")))?
            }
            "cost_constant" => self.cost_constant = one(value)?,
            "output_path" | "out" => self.output_path = Some(value.to_string()),
            "folklore" => self.folklore = parse_bool(key, value)?,
            "exact_qae" => self.exact_qae = parse_bool(key, value)?,
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", idx + 1)))?;
            cfg.set(k.trim(), v.trim())
                .map_err(|e| bad(format!("line {}: {e}", idx + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials < 1 {
            return Err(bad("trials must be at least 1"));
        }
        if self.families.is_empty() || self.n_values.is_empty() || self.eps_values.is_empty() {
            return Err(bad("families, n_values and eps_values must be nonempty"));
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(bad(format!("n = {n} is below 2")));
        }
        if let Some(e) = self.eps_values.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
            return Err(bad(format!("eps = {e} is outside (0, 1]")));
        }
        if !(self.cost_constant > 0.0 && self.cost_constant.is_finite()) {
            return Err(bad(format!("cost_constant = {} must be positive", self.cost_constant)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_format() {
        let cfg = SweepConfig::parse(
            "# sweep\nfamilies = uniform, zipf:1\nn_values = 8,64\neps_values=0.5\ntrials = 3\nseed0 = 7\nfolklore = true\n",
        )
        .unwrap();
        assert_eq!(cfg.families, vec![Family::Uniform, Family::Zipf { exponent: 1.0 }]);
        assert_eq!(cfg.n_values, vec![8, 64]);
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.seed0, 7);
        assert!(cfg.folklore);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SweepConfig::parse("bogus = 1").is_err());
        assert!(SweepConfig::parse("n_values 8").is_err());
        assert!(SweepConfig::parse("families = gauss").is_err());
        let mut cfg = SweepConfig {
            n_values: vec![1],
            ..SweepConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg = SweepConfig::default();
        cfg.eps_values = vec![0.0];
        assert!(cfg.validate().is_err());
        cfg = SweepConfig::default();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }
}
