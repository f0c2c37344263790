//! Monte-Carlo confidence bands under the efficient-market null.
//!
//! The null model is a driftless geometric Brownian motion observed daily:
//! log-returns are independent standard Gaussians. Scale invariance of the
//! pipeline's shape statistics makes the volatility choice immaterial. A
//! simulated path is warmed up exactly like the real dataset, the estimation
//! pipeline runs over a long evaluation stretch, and the per-date estimates
//! of `(H, m, alpha)` yield empirical quantile bands. A real-data estimate
//! falling outside the level-`p` band rejects the efficient-market null at
//! confidence `p` for that date.

use crate::error::{Error, Result};
use crate::series::ReturnSeries;
use crate::trace::{run_trace, TraceOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Confidence levels used by the command-line reports.
pub const DEFAULT_LEVELS: [f64; 3] = [0.95, 0.99, 0.995];

/// One simulated date's indicator estimates under the null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullEstimate {
    pub hurst: f64,
    pub memory: f64,
    pub alpha: f64,
}

/// Lower and upper empirical quantiles of one indicator at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

impl Band {
    /// Whether the value lies inside the closed band.
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper
    }
}

/// Bands of all three indicators at one confidence level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelBands {
    pub level: f64,
    pub hurst: Band,
    pub memory: Band,
    pub alpha: Band,
}

/// Bands across all requested confidence levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBands {
    pub levels: Vec<LevelBands>,
}

impl ConfidenceBands {
    /// The bands for an exact confidence level, if present.
    pub fn level(&self, p: f64) -> Option<&LevelBands> {
        self.levels.iter().find(|l| l.level == p)
    }
}

/// Simulates one null path and traces it: `eval_len` per-date estimates
/// after a warm-up of `warmup_len` returns, all at discount `omega`.
///
/// The same seed always yields the same path and estimates. PITs are not
/// evaluated: band construction needs only the indicator triples.
pub fn simulate_null(
    warmup_len: usize,
    eval_len: usize,
    omega: f64,
    seed: u64,
) -> Result<Vec<NullEstimate>> {
    if warmup_len < crate::trace::MIN_WARMUP {
        return Err(Error::invalid(format!(
            "warm-up of {warmup_len} is shorter than the minimum {}",
            crate::trace::MIN_WARMUP
        )));
    }
    if eval_len == 0 {
        return Err(Error::invalid("evaluation span must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let returns: Vec<f64> = (0..warmup_len + eval_len)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let series = ReturnSeries::synthetic(returns, warmup_len - 1)?;
    let opts = TraceOptions { compute_pits: false, ..TraceOptions::default() };
    let trace = run_trace(&series, omega, &opts)?;
    if let Some(gap) = trace.gaps.first() {
        return Err(gap.error.clone());
    }
    // Drop the warm-up boundary estimate itself: the evaluation stretch
    // starts one date later, giving exactly eval_len triples.
    Ok(trace
        .rows
        .iter()
        .skip(1)
        .map(|r| NullEstimate { hurst: r.hurst, memory: r.memory, alpha: r.params.alpha })
        .collect())
}

/// Pools several independent null paths, in seed order.
pub fn simulate_null_paths(
    warmup_len: usize,
    eval_len: usize,
    omega: f64,
    seeds: &[u64],
) -> Result<Vec<NullEstimate>> {
    if seeds.is_empty() {
        return Err(Error::invalid("need at least one seed"));
    }
    let per_path: Vec<Vec<NullEstimate>> = seeds
        .par_iter()
        .map(|&seed| simulate_null(warmup_len, eval_len, omega, seed))
        .collect::<Result<_>>()?;
    Ok(per_path.into_iter().flatten().collect())
}

// Empirical quantile at level q of an unsorted copy of one indicator.
fn field_bands(mut values: Vec<f64>, levels: &[f64]) -> Vec<Band> {
    values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    levels
        .iter()
        .map(|&p| Band {
            lower: crate::math::empirical_quantile(&values, (1.0 - p) / 2.0),
            upper: crate::math::empirical_quantile(&values, (1.0 + p) / 2.0),
        })
        .collect()
}

/// Empirical confidence bands of the pooled null estimates.
///
/// Each level `p` takes the quantiles at `(1 - p)/2` and `(1 + p)/2` of each
/// indicator's estimates. At least 1,000 estimates are required so the outer
/// levels rest on a meaningful number of tail points.
pub fn bands(estimates: &[NullEstimate], levels: &[f64]) -> Result<ConfidenceBands> {
    if estimates.len() < 1_000 {
        return Err(Error::invalid(format!(
            "confidence bands need at least 1000 estimates, have {}",
            estimates.len()
        )));
    }
    if levels.is_empty() {
        return Err(Error::invalid("no confidence levels requested"));
    }
    for &p in levels {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::invalid(format!("confidence level {p} outside (0, 1)")));
        }
    }
    let h = field_bands(estimates.iter().map(|e| e.hurst).collect(), levels);
    let m = field_bands(estimates.iter().map(|e| e.memory).collect(), levels);
    let a = field_bands(estimates.iter().map(|e| e.alpha).collect(), levels);
    Ok(ConfidenceBands {
        levels: levels
            .iter()
            .zip(h.into_iter().zip(m.into_iter().zip(a)))
            .map(|(&level, (hurst, (memory, alpha)))| LevelBands { level, hurst, memory, alpha })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_reproduces_the_same_estimates() {
        let a = simulate_null(40, 60, 0.93, 42).unwrap();
        let b = simulate_null(40, 60, 0.93, 42).unwrap();
        let c = simulate_null(40, 60, 0.93, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 60);
    }

    #[test]
    fn estimates_satisfy_the_memory_identity() {
        for e in simulate_null(60, 80, 0.95, 7).unwrap() {
            assert!((e.memory - (e.hurst - e.alpha.recip())).abs() < 1e-15);
            assert!(e.alpha > 0.5 && e.alpha <= 2.0);
        }
    }

    #[test]
    fn pooled_paths_concatenate_in_seed_order() {
        let pooled = simulate_null_paths(40, 50, 0.94, &[1, 2]).unwrap();
        let first = simulate_null(40, 50, 0.94, 1).unwrap();
        let second = simulate_null(40, 50, 0.94, 2).unwrap();
        assert_eq!(pooled.len(), 100);
        assert_eq!(&pooled[..50], &first[..]);
        assert_eq!(&pooled[50..], &second[..]);
    }

    #[test]
    fn uniform_synthetic_estimates_give_textbook_bands() {
        let n = 2000;
        let estimates: Vec<NullEstimate> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                NullEstimate { hurst: u, memory: u, alpha: u }
            })
            .collect();
        let b = bands(&estimates, &[0.95]).unwrap();
        let band = b.levels[0].hurst;
        assert!((band.lower - 0.025).abs() < 0.01, "lower {}", band.lower);
        assert!((band.upper - 0.975).abs() < 0.01, "upper {}", band.upper);
    }

    #[test]
    fn constant_estimates_collapse_to_zero_width() {
        let estimates = vec![NullEstimate { hurst: 0.5, memory: 0.0, alpha: 2.0 }; 1500];
        let b = bands(&estimates, &DEFAULT_LEVELS).unwrap();
        for l in &b.levels {
            assert_eq!(l.hurst.lower, l.hurst.upper);
            assert_eq!(l.memory.lower, 0.0);
            assert_eq!(l.alpha.upper, 2.0);
        }
    }

    #[test]
    fn bands_nest_across_levels_on_simulated_data() {
        let estimates = simulate_null(40, 1200, 0.93, 11).unwrap();
        let b = bands(&estimates, &DEFAULT_LEVELS).unwrap();
        for w in b.levels.windows(2) {
            let (narrow, wide) = (&w[0], &w[1]);
            assert!(wide.hurst.lower <= narrow.hurst.lower);
            assert!(wide.hurst.upper >= narrow.hurst.upper);
            assert!(wide.memory.lower <= narrow.memory.lower);
            assert!(wide.memory.upper >= narrow.memory.upper);
            assert!(wide.alpha.lower <= narrow.alpha.lower);
            assert!(wide.alpha.upper >= narrow.alpha.upper);
        }
        for l in &b.levels {
            assert!(l.hurst.lower < l.hurst.upper);
            assert!(l.memory.lower < l.memory.upper);
        }
        // Membership helper agrees with the raw bounds.
        let h = &b.levels[0].hurst;
        assert!(h.contains(h.lower) && h.contains(h.upper));
        assert!(!h.contains(h.upper + 1e-9));
    }

    #[test]
    fn too_few_estimates_or_bad_levels_are_rejected() {
        let estimates = vec![NullEstimate { hurst: 0.5, memory: 0.0, alpha: 2.0 }; 999];
        assert!(bands(&estimates, &[0.95]).is_err());
        let estimates = vec![NullEstimate { hurst: 0.5, memory: 0.0, alpha: 2.0 }; 1000];
        assert!(bands(&estimates, &[]).is_err());
        assert!(bands(&estimates, &[1.0]).is_err());
        assert!(bands(&estimates, &[0.0]).is_err());
    }

    #[test]
    fn level_lookup_finds_exact_levels() {
        let estimates = vec![NullEstimate { hurst: 0.5, memory: 0.0, alpha: 2.0 }; 1000];
        let b = bands(&estimates, &DEFAULT_LEVELS).unwrap();
        assert!(b.level(0.99).is_some());
        assert!(b.level(0.97).is_none());
    }
}
