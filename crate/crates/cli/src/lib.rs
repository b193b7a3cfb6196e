//! Experiment driver for the `qentropy` simulator: sweeps, scaling fits and
//! certification reports.

pub mod certify;
pub mod config;
pub mod error;
pub mod fit;
pub mod sweep;

pub use certify::{certify, CertReport, Check, Target};
pub use config::SweepConfig;
pub use error::{CliError, CliResult};
pub use fit::{fit_scaling, Axis, Column, ScalingFit};
pub use sweep::{rows_to_csv, run_sweep, SweepRow};
