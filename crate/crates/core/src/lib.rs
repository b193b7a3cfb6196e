//! Classical simulator of a quantum Shannon entropy estimator in the
//! probability-oracle model.

pub mod amplitude;
pub mod distributions;
pub mod error;
pub mod estimator;
pub mod lowerbound;
pub mod oracle;
pub mod polyapprox;
pub mod scalar;
pub mod separation;

pub use distributions::{binary_entropy, make_distribution, shannon_entropy, Distribution, Family};
pub use error::{Error, Result};
pub use estimator::{
    choose_params, estimate_entropy, exact_v, folklore_estimate, EstimateReport, EstimatorParams, Mode,
    PreparedEstimator,
};
pub use lowerbound::{discrete_oracle_view, entropy_relation_check, sample_q, HardInstance};
pub use oracle::{apply_svt, power_sum, FlaggedAmplitudes, Formula, OracleModel, QueryLedger};
pub use polyapprox::{approx_sqrt_log, make_sk, make_step_poly, BoundedPoly, Parity, PolyCache};
pub use scalar::Real;
pub use separation::{CascadeConfig, CoefficientTable, StructuredState};

pub type DistributionF32 = Distribution<f32>;
pub type BoundedPolyF32 = BoundedPoly<f32>;
pub type EstimateReportF32 = EstimateReport<f32>;
pub type PreparedEstimatorF32 = PreparedEstimator<f32>;
