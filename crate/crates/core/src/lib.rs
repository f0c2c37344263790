//! Estimation of time-varying alpha-stable return distributions and derived
//! market-efficiency indicators from price-return series.
//!
//! The pipeline, date by date:
//!
//! 1. [`ewq`] maintains exponentially weighted quantiles of past returns, so
//!    that recent observations dominate with discount factor `omega`.
//! 2. [`mcculloch`] turns five of those quantiles into stable-law parameters
//!    `(alpha, beta, gamma, mu0)` through tabulated quantile-ratio maps.
//! 3. [`hurst`] tracks a weighted two-scale moment ratio on log-prices and
//!    yields a local Hurst exponent `H`; combined with the tail exponent this
//!    gives the memory parameter `m = H - 1/alpha`.
//! 4. [`trace`] runs the whole per-date pipeline and records probability
//!    integral transforms (PITs) of one-step-ahead density forecasts.
//! 5. [`discount`] scores each candidate `omega` by a scaled uniformity
//!    discrepancy of its PITs and selects the best one.
//! 6. [`significance`] simulates the same estimators on a driftless Brownian
//!    null and attaches Monte-Carlo confidence bands to `H`, `m` and `alpha`.
//!
//! [`stable`] supplies the underlying distribution machinery: characteristic
//! function, density and distribution function by numerical inversion, and
//! deterministic Chambers-Mallows-Stuck sampling.

pub mod discount;
pub mod error;
pub mod ewq;
pub mod hurst;
mod math;
pub mod mcculloch;
mod quad;
pub mod series;
pub mod significance;
pub mod stable;
pub mod trace;

pub use discount::{
    discrepancy, ks_uniform, select_omega, DiscrepancyReport, OmegaSelection, PitSeries,
    DEFAULT_NU,
};
pub use error::{Error, Result};
pub use ewq::WeightedSample;
pub use hurst::{memory_param, MomentState};
pub use mcculloch::{estimate, McCullochTables, QuantileSet};
pub use series::ReturnSeries;
pub use significance::{
    bands, simulate_null, simulate_null_paths, Band, ConfidenceBands, LevelBands, NullEstimate,
    DEFAULT_LEVELS,
};
pub use stable::{StableParams, DEFAULT_CDF_TOL};
pub use trace::{run_trace, EfficiencyTrace, TraceOptions, TraceRow};
