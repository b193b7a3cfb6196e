use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("{name} = {value} is outside {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error(
        "polynomial construction failed: degree budget {budget} reached with sup error {achieved:e} (target {target:e})"
    )]
    Construction { budget: usize, achieved: f64, target: f64 },

    #[error("polynomial is not bounded by 1 on [-1, 1]: measured sup {0}")]
    Unbounded(f64),

    #[error("coefficient {index} = {value:e} violates the declared parity")]
    Parity { index: usize, value: f64 },

    #[error("level {level} outside 1..={max}")]
    Level { level: usize, max: usize },

    #[error("initial overlap is zero")]
    NoOverlap,

    #[error("grid size M = {0} must be a power of two >= 2")]
    GridSize(usize),

    #[error("boosting needs an odd number of rounds, got {0}")]
    EvenRounds(usize),

    #[error("degenerate hard instance: {0}")]
    DegenerateInstance(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("negative query count {0}")]
    NegativeCount(i64),

    #[error("check '{check}' failed: {detail}")]
    Check { check: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range<T>(name: &'static str, value: f64, expected: &'static str) -> Result<T> {
    Err(Error::OutOfRange { name, value, expected })
}
