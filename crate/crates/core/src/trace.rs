//! The per-date estimation pipeline: quantiles, parameters, exponent, PIT.
//!
//! [`run_trace`] walks a [`ReturnSeries`] from its first estimation date to
//! the end. At each date it reads five exponentially weighted quantiles,
//! maps them to stable-law parameters, evaluates the discounted Hurst
//! exponent and the memory parameter, and scores the newly observed return
//! against the previous date's fitted density through the probability
//! integral transform `Z_t = F_{t-1}(r_t)`. Dates where estimation is
//! impossible (degenerate quantile spreads, vanishing increment moments) are
//! recorded as [`TraceGap`]s instead of silently fabricated values.

use crate::discount::PitSeries;
use crate::error::{Error, Result};
use crate::ewq::WeightedSample;
use crate::hurst::{memory_param, MomentState};
use crate::mcculloch::{estimate, McCullochTables, QuantileSet};
use crate::series::ReturnSeries;
use crate::stable::{self, StableParams};
use chrono::NaiveDate;

/// PITs are clamped into `[PIT_CLAMP, 1 - PIT_CLAMP]` so downstream sorting
/// and uniformity statistics never see exact 0 or 1.
pub const PIT_CLAMP: f64 = 1e-12;

/// Fewest warm-up returns that make all five quantile levels meaningful.
pub const MIN_WARMUP: usize = 5;

/// Knobs for a trace run.
#[derive(Debug, Clone)]
pub struct TraceOptions {
    /// Evaluate the one-step-ahead PIT at each date (costs one numerical
    /// cdf per date); disable for null simulations that only need estimates.
    pub compute_pits: bool,
    /// Drop sample entries once their weight decays below this threshold.
    pub prune_threshold: Option<f64>,
    /// Absolute tolerance of the PIT cdf evaluations.
    pub cdf_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            compute_pits: true,
            prune_threshold: None,
            cdf_tol: stable::DEFAULT_CDF_TOL,
        }
    }
}

/// One successfully estimated date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// Trading date of this estimate.
    pub date: NaiveDate,
    /// Index of the date within the input series.
    pub index: usize,
    /// Fitted stable-law parameters (S0).
    pub params: StableParams,
    /// Discounted two-scale Hurst exponent.
    pub hurst: f64,
    /// Memory parameter `hurst - 1/alpha`.
    pub memory: f64,
    /// PIT of this date's return under the previous date's fit; `None` on
    /// the first estimation date or when the previous date had no fit.
    pub pit: Option<f64>,
}

/// A date where estimation failed, with the failure it produced.
#[derive(Debug, Clone)]
pub struct TraceGap {
    pub date: NaiveDate,
    pub index: usize,
    pub error: Error,
}

/// Output of a full trace run.
#[derive(Debug, Clone)]
pub struct EfficiencyTrace {
    /// Discount factor the trace was run with.
    pub omega: f64,
    /// First estimation index of the underlying series.
    pub t0_index: usize,
    /// Successfully estimated dates, ascending.
    pub rows: Vec<TraceRow>,
    /// Failed dates, ascending.
    pub gaps: Vec<TraceGap>,
}

impl EfficiencyTrace {
    /// The PIT values present in the trace, in date order.
    pub fn pit_series(&self) -> PitSeries {
        PitSeries {
            omega: self.omega,
            z: self.rows.iter().filter_map(|r| r.pit).collect(),
        }
    }

    /// Number of dates covered (rows plus gaps).
    pub fn span(&self) -> usize {
        self.rows.len() + self.gaps.len()
    }
}

/// Runs the full pipeline over the series at discount `omega`.
///
/// Both the weighted quantile sample and the Hurst moment state are seeded
/// over the warm-up window with the same discount, so the first estimate
/// already reflects exponentially discounted history. The output covers one
/// row or gap per date from `t0_index` to the end of the series.
pub fn run_trace(series: &ReturnSeries, omega: f64, opts: &TraceOptions) -> Result<EfficiencyTrace> {
    if !omega.is_finite() || omega <= 0.0 || omega >= 1.0 {
        return Err(Error::invalid(format!("omega must be in (0, 1), got {omega}")));
    }
    let t0 = series.t0_index();
    if t0 + 1 < MIN_WARMUP {
        return Err(Error::invalid(format!(
            "need at least {MIN_WARMUP} warm-up returns, have {}",
            t0 + 1
        )));
    }
    let returns = series.returns();
    let dates = series.dates();
    let prices = series.log_prices();
    let tables = McCullochTables::bundled();

    let mut ws = WeightedSample::from_batch(&returns[..=t0], omega)?;
    ws.set_prune_threshold(opts.prune_threshold);
    let mut moments = MomentState::new(prices[0], prices[1])?;
    for &p in &prices[2..=t0 + 1] {
        moments.update(p, omega)?;
    }

    let mut trace = EfficiencyTrace {
        omega,
        t0_index: t0,
        rows: Vec::with_capacity(series.len() - t0),
        gaps: Vec::new(),
    };
    let mut prev_params: Option<StableParams> = None;

    for i in t0..series.len() {
        // The PIT scores return i under the parameters fitted at date i - 1,
        // so it is evaluated before the state absorbs the new return.
        let mut pit_failure: Option<Error> = None;
        let pit = if i > t0 && opts.compute_pits {
            match prev_params {
                Some(p) => match stable::cdf_tol(returns[i], &p, opts.cdf_tol) {
                    Ok(z) => Some(z.clamp(PIT_CLAMP, 1.0 - PIT_CLAMP)),
                    Err(e) => {
                        pit_failure = Some(e);
                        None
                    }
                },
                None => None,
            }
        } else {
            None
        };

        if i > t0 {
            ws.update(returns[i])?;
            moments.update(prices[i + 1], omega)?;
        }

        let estimated = QuantileSet::from_weighted(&ws)
            .and_then(|q| estimate(&q, tables))
            .and_then(|params| Ok((params, moments.hurst()?)));
        match (estimated, pit_failure) {
            (Ok((params, hurst)), None) => {
                trace.rows.push(TraceRow {
                    date: dates[i],
                    index: i,
                    params,
                    hurst,
                    memory: memory_param(hurst, params.alpha),
                    pit,
                });
                prev_params = Some(params);
            }
            (Ok((params, _)), Some(e)) => {
                // The fit succeeded but the density forecast could not be
                // scored; keep the parameters for the next date's PIT.
                trace.gaps.push(TraceGap { date: dates[i], index: i, error: e });
                prev_params = Some(params);
            }
            (Err(e), _) => {
                trace.gaps.push(TraceGap { date: dates[i], index: i, error: e });
                prev_params = None;
            }
        }
    }
    debug_assert_eq!(trace.span(), series.len() - t0);
    Ok(trace)
}
