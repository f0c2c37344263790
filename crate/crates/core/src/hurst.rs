//! Dynamic Hurst exponent from exponentially weighted increment moments.
//!
//! [`MomentState`] tracks two discounted sums over a log-price stream: `m1`
//! accumulates squared one-step increments and `m2` squared two-step
//! increments, each decayed by `omega` per observation. The local Hurst
//! exponent follows from the two-scale ratio
//!
//! `H = (1/2) log2( (t - 1) m2 / ((t - 2) m1) )`,
//!
//! which is 1/2 when two-step increments carry twice the one-step variance,
//! as under independent increments. Combining with a tail index gives the
//! memory parameter `m = H - 1/alpha`: zero for an efficient market,
//! negative under mean reversion, positive under persistence.

use crate::error::{Error, Result};

/// Discounted one-step and two-step squared-increment sums of a price stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    m1: f64,
    m2: f64,
    t: usize,
    prev1: f64,
    prev2: f64,
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("{name} must be finite, got {x}")));
    }
    Ok(())
}

impl MomentState {
    /// Starts the recurrence from the first two log-prices.
    ///
    /// Both moment sums start at zero: increments begin accumulating with the
    /// third price, the first one that closes a two-step span.
    pub fn new(x0: f64, x1: f64) -> Result<Self> {
        check_finite("x0", x0)?;
        check_finite("x1", x1)?;
        Ok(MomentState { m1: 0.0, m2: 0.0, t: 2, prev1: x1, prev2: x0 })
    }

    /// Absorbs the next log-price: decay both sums, add the new squared
    /// one-step and two-step increments, shift the price registers.
    pub fn update(&mut self, x: f64, omega: f64) -> Result<()> {
        check_finite("x", x)?;
        if !omega.is_finite() || omega <= 0.0 || omega >= 1.0 {
            return Err(Error::invalid(format!("omega must be in (0, 1), got {omega}")));
        }
        let d1 = x - self.prev1;
        let d2 = x - self.prev2;
        self.m1 = omega * self.m1 + d1 * d1;
        self.m2 = omega * self.m2 + d2 * d2;
        self.prev2 = self.prev1;
        self.prev1 = x;
        self.t += 1;
        Ok(())
    }

    /// The local Hurst exponent of the absorbed stream.
    pub fn hurst(&self) -> Result<f64> {
        if self.t < 3 {
            return Err(Error::invalid(format!(
                "Hurst exponent needs at least 3 prices, have {}",
                self.t
            )));
        }
        if self.m1 <= 0.0 || self.m2 <= 0.0 {
            return Err(Error::UndefinedExponent(format!(
                "degenerate increment moments m1={}, m2={}",
                self.m1, self.m2
            )));
        }
        let t = self.t as f64;
        Ok(0.5 * ((t - 1.0) * self.m2 / ((t - 2.0) * self.m1)).log2())
    }

    /// Discounted sum of squared one-step increments.
    pub fn m1(&self) -> f64 {
        self.m1
    }

    /// Discounted sum of squared two-step increments.
    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Number of log-prices absorbed.
    pub fn count(&self) -> usize {
        self.t
    }
}

/// Memory parameter `m = H - 1/alpha`.
pub fn memory_param(h: f64, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 2.0, "alpha out of range: {alpha}");
    h - alpha.recip()
}
