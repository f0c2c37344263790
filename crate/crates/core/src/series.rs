//! Dated log-return series feeding the estimation pipeline.

use crate::error::{Error, Result};
use chrono::NaiveDate;

/// A strictly date-ordered series of log-returns with a designated first
/// estimation date.
///
/// Index `t0_index` marks the first date at which parameters are estimated;
/// returns at indices `0..=t0_index` form the warm-up window. Log-prices are
/// reconstructed from the returns by cumulative summation from an arbitrary
/// anchor at zero, which the downstream increment statistics never see.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    dates: Vec<NaiveDate>,
    returns: Vec<f64>,
    t0_index: usize,
}

impl ReturnSeries {
    /// Validated constructor from parallel date and return vectors.
    pub fn new(dates: Vec<NaiveDate>, returns: Vec<f64>, t0_index: usize) -> Result<Self> {
        if dates.len() != returns.len() {
            return Err(Error::invalid(format!(
                "{} dates but {} returns",
                dates.len(),
                returns.len()
            )));
        }
        if returns.len() < 2 {
            return Err(Error::invalid("a return series needs at least two observations"));
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "dates must be strictly increasing, found {} before {}",
                w[0], w[1]
            )));
        }
        if let Some((i, v)) = returns.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite return {v} at index {i}")));
        }
        if t0_index == 0 || t0_index >= returns.len() {
            return Err(Error::invalid(format!(
                "t0 index {t0_index} must be positive and below the series length {}",
                returns.len()
            )));
        }
        Ok(ReturnSeries { dates, returns, t0_index })
    }

    /// A series with synthetic consecutive calendar dates, for simulations.
    pub fn synthetic(returns: Vec<f64>, t0_index: usize) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        let dates = (0..returns.len() as i64)
            .map(|i| start + chrono::Duration::days(i))
            .collect();
        ReturnSeries::new(dates, returns, t0_index)
    }

    /// Dates, parallel to [`returns`](Self::returns).
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    /// Log-returns in date order.
    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    /// Index of the first estimation date.
    pub fn t0_index(&self) -> usize {
        self.t0_index
    }

    /// Number of dated returns.
    pub fn len(&self) -> usize {
        self.returns.len()
    }

    /// True when the series holds no returns (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    /// Log-price path anchored at zero: entry `k + 1` is the cumulative sum
    /// of the first `k + 1` returns, i.e. the log-price on date `k`.
    pub fn log_prices(&self) -> Vec<f64> {
        let mut prices = Vec::with_capacity(self.returns.len() + 1);
        prices.push(0.0);
        let mut acc = 0.0;
        for r in &self.returns {
            acc += r;
            prices.push(acc);
        }
        prices
    }

    /// Index of the first date on or after `date`, if any.
    pub fn first_index_at_or_after(&self, date: NaiveDate) -> Option<usize> {
        let idx = self.dates.partition_point(|&d| d < date);
        (idx < self.dates.len()).then_some(idx)
    }
}
