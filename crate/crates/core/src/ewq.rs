//! Exponentially weighted quantiles of a return stream.
//!
//! A [`WeightedSample`] is a discrete distribution over every observed return,
//! where the weight of the observation made `k` steps ago decays like
//! `omega^k`. Batch construction over a warm-up window assigns observation
//! `i` of `t` the normalized weight `(1 - omega) omega^(t-i) / (1 - omega^t)`;
//! each subsequent update multiplies all existing weights by `omega` and
//! inserts the new value with weight `1 - omega`, which preserves the unit
//! total. Quantiles are read off the sorted support by cumulative weight.

use crate::error::{Error, Result};

/// Weights for `t` observations at discount `omega`, oldest first.
///
/// Entry `i` (1-based) is `(1 - omega) omega^(t-i) / (1 - omega^t)`; the
/// entries are increasing and sum to one.
pub fn weights(t: usize, omega: f64) -> Result<Vec<f64>> {
    check_omega(omega)?;
    if t == 0 {
        return Err(Error::invalid("weights require at least one observation"));
    }
    // 1 - omega^t via expm1 keeps the normalizer accurate for omega near 1.
    let denom = -(t as f64 * omega.ln()).exp_m1();
    let mut w = vec![0.0; t];
    let mut cur = (1.0 - omega) / denom;
    for i in (0..t).rev() {
        w[i] = cur;
        cur *= omega;
    }
    Ok(w)
}

fn check_omega(omega: f64) -> Result<()> {
    if !omega.is_finite() || omega <= 0.0 || omega >= 1.0 {
        return Err(Error::invalid(format!("omega must be in (0, 1), got {omega}")));
    }
    Ok(())
}

/// Discrete exponentially weighted distribution of observed values.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    /// `(value, weight)` entries, ascending by value; ties keep both entries.
    entries: Vec<(f64, f64)>,
    /// Observations absorbed so far.
    count: usize,
    omega: f64,
    prune_threshold: Option<f64>,
}

impl WeightedSample {
    /// Builds the distribution over a warm-up window of values in time order.
    pub fn from_batch(values: &[f64], omega: f64) -> Result<Self> {
        let w = weights(values.len(), omega)?;
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::invalid(format!("non-finite value at position {i}")));
            }
        }
        let mut entries: Vec<(f64, f64)> = values.iter().copied().zip(w).collect();
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(WeightedSample { entries, count: values.len(), omega, prune_threshold: None })
    }

    /// Drops entries whose weight decays below `threshold` on future updates.
    ///
    /// Off by default so that long-run batch/recursive comparisons stay exact;
    /// a threshold around 1e-15 bounds memory on very long streams while
    /// perturbing the total weight by far less than the update rounding.
    pub fn set_prune_threshold(&mut self, threshold: Option<f64>) {
        self.prune_threshold = threshold;
    }

    /// Absorbs one new observation: decay all weights, insert at `1 - omega`.
    pub fn update(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite observation {x}")));
        }
        for e in &mut self.entries {
            e.1 *= self.omega;
        }
        if let Some(thr) = self.prune_threshold {
            self.entries.retain(|e| e.1 >= thr);
        }
        let idx = self.entries.partition_point(|e| e.0 <= x);
        self.entries.insert(idx, (x, 1.0 - self.omega));
        self.count += 1;
        debug_assert!({
            let s = self.total_weight();
            s > 0.999_999 && s < 1.0 + 1e-9
        });
        Ok(())
    }

    /// Smallest value whose cumulative weight reaches `p`.
    ///
    /// For `p > 1/2` the scan runs from the upper tail instead, accumulating
    /// the small trailing weights first; both scans define the same value.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::invalid(format!("quantile level must be in (0, 1), got {p}")));
        }
        if self.entries.is_empty() {
            return Err(Error::degenerate("quantile of an empty sample"));
        }
        if p <= 0.5 {
            let mut acc = 0.0;
            for e in &self.entries {
                acc += e.1;
                if acc >= p {
                    return Ok(e.0);
                }
            }
            Ok(self.entries.last().unwrap().0)
        } else {
            // Find the lowest entry with at most 1 - p weight strictly above it.
            let tail = 1.0 - p;
            let mut above = 0.0;
            for k in (0..self.entries.len()).rev() {
                let next_above = above + self.entries[k].1;
                if k == 0 || next_above > tail {
                    return Ok(self.entries[k].0);
                }
                above = next_above;
            }
            unreachable!("non-empty entries always yield a quantile")
        }
    }

    /// Cumulative weight of entries with value at most `x` (right-continuous).
    pub fn cdf(&self, x: f64) -> f64 {
        let end = self.entries.partition_point(|e| e.0 <= x);
        self.entries[..end].iter().map(|e| e.1).sum()
    }

    /// Number of distinct stored entries (equals observations unless pruned).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no entries are stored.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Observations absorbed since construction.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Discount factor the sample was built with.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Sum of all stored weights (1 up to rounding, slightly less if pruned).
    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Read-only view of the `(value, weight)` entries, ascending by value.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }
}
