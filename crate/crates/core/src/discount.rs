//! Discount-factor selection by density-forecast uniformity.
//!
//! Under a correct sequence of one-step-ahead density forecasts the PITs
//! `Z_t` are independent uniforms. Each candidate discount `omega` is scored
//! by the discrepancy
//!
//! `d_nu = max over windows [s, t] with t - s + 1 >= nu of sqrt(len) * k`,
//!
//! where `k` compares the window's sorted PITs against the uniform grid
//! `j / (len - 1)`. Scanning every window makes the statistic sensitive to
//! short bursts of miscalibration that a whole-sample test would wash out.
//! The selected `omega*` minimizes `d_nu`; ties resolve toward the larger
//! (more conservative, longer-memory) discount.

use crate::error::{Error, Result};
use crate::series::ReturnSeries;
use crate::trace::{run_trace, TraceOptions};
use rayon::prelude::*;

/// Default minimum window length, one trading month.
pub const DEFAULT_NU: usize = 22;

/// The PIT sequence produced by one candidate discount factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PitSeries {
    /// Discount factor that produced the PITs.
    pub omega: f64,
    /// PIT values in date order, each inside (0, 1).
    pub z: Vec<f64>,
}

/// Discrepancy of one candidate, with the window achieving the maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyReport {
    /// Discount factor the PITs came from.
    pub omega: f64,
    /// The discrepancy value `d_nu`.
    pub d: f64,
    /// Start and end indices (inclusive, into the PIT sequence) of the
    /// first window attaining `d`.
    pub window: (usize, usize),
}

/// Outcome of a grid search over candidate discount factors.
#[derive(Debug, Clone)]
pub struct OmegaSelection {
    /// The minimizing discount factor.
    pub omega_star: f64,
    /// Per-candidate discrepancies, in grid order.
    pub reports: Vec<DiscrepancyReport>,
    /// Candidates dropped for failing on too many dates: `(omega, gap count)`.
    pub disqualified: Vec<(f64, usize)>,
}

/// Uniformity statistic of one window: the largest gap between the sorted
/// values and the uniform grid `j / (len - 1)`.
pub fn ks_uniform(window: &[f64]) -> Result<f64> {
    let n = window.len();
    if n < 2 {
        return Err(Error::invalid(format!("window needs at least 2 values, got {n}")));
    }
    let mut sorted = window.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ks_of_sorted(&sorted))
}

// The same statistic over an already-sorted window.
fn ks_of_sorted(sorted: &[f64]) -> f64 {
    let step = (sorted.len() - 1) as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(j, &z)| (j as f64 / step - z).abs())
        .fold(0.0, f64::max)
}

/// The windowed discrepancy `d_nu` of a PIT sequence.
///
/// Every contiguous window of length at least `nu` is scored; each start
/// index extends its sorted window incrementally, so the whole scan costs
/// O(T^2) insertions rather than a sort per window.
pub fn discrepancy(pits: &PitSeries, nu: usize) -> Result<DiscrepancyReport> {
    let z = &pits.z;
    let n = z.len();
    if nu < 2 {
        return Err(Error::invalid(format!("minimum window must be at least 2, got {nu}")));
    }
    if n < nu {
        return Err(Error::invalid(format!(
            "need at least {nu} PIT values, have {n}"
        )));
    }
    let mut best_d = f64::NEG_INFINITY;
    let mut best_window = (0, 0);
    let mut sorted: Vec<f64> = Vec::with_capacity(n);
    for s in 0..=n - nu {
        sorted.clear();
        sorted.extend_from_slice(&z[s..s + nu - 1]);
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        for t in s + nu - 1..n {
            let idx = sorted.partition_point(|&v| v <= z[t]);
            sorted.insert(idx, z[t]);
            let d = (sorted.len() as f64).sqrt() * ks_of_sorted(&sorted);
            if d > best_d {
                best_d = d;
                best_window = (s, t);
            }
        }
    }
    Ok(DiscrepancyReport { omega: pits.omega, d: best_d, window: best_window })
}

// Candidate ordering: smaller discrepancy wins, ties go to the larger omega.
pub(crate) fn better_candidate(a: &DiscrepancyReport, b: &DiscrepancyReport) -> bool {
    a.d < b.d || (a.d == b.d && a.omega > b.omega)
}

/// The default search grid, 0.900 to 0.990 in steps of 0.001.
pub fn default_grid() -> Vec<f64> {
    (900..=990).map(|i| i as f64 / 1000.0).collect()
}

/// Scores every candidate discount on the series and returns the minimizer.
///
/// Candidates whose trace fails on more than 5% of the estimated dates are
/// disqualified; an error is returned only when no candidate survives.
pub fn select_omega(
    series: &ReturnSeries,
    grid: &[f64],
    nu: usize,
    opts: &TraceOptions,
) -> Result<OmegaSelection> {
    if grid.is_empty() {
        return Err(Error::invalid("empty discount-factor grid"));
    }
    for &w in grid {
        if !w.is_finite() || w <= 0.0 || w >= 1.0 {
            return Err(Error::invalid(format!("grid discount {w} outside (0, 1)")));
        }
    }
    let span = series.len() - series.t0_index();
    let pit_opts = TraceOptions { compute_pits: true, ..opts.clone() };

    let outcomes: Vec<Result<std::result::Result<DiscrepancyReport, (f64, usize)>>> = grid
        .par_iter()
        .map(|&omega| {
            let trace = run_trace(series, omega, &pit_opts)?;
            let gaps = trace.gaps.len();
            if gaps as f64 > 0.05 * span as f64 {
                return Ok(Err((omega, gaps)));
            }
            match discrepancy(&trace.pit_series(), nu) {
                Ok(report) => Ok(Ok(report)),
                // Too few usable PITs counts as a failed candidate, not a
                // failure of the whole search.
                Err(_) => Ok(Err((omega, gaps))),
            }
        })
        .collect();

    let mut reports = Vec::new();
    let mut disqualified = Vec::new();
    for outcome in outcomes {
        match outcome? {
            Ok(report) => reports.push(report),
            Err(dq) => disqualified.push(dq),
        }
    }
    let best = reports
        .iter()
        .copied()
        .reduce(|a, b| if better_candidate(&b, &a) { b } else { a })
        .ok_or_else(|| Error::degenerate("every candidate discount factor was disqualified"))?;
    Ok(OmegaSelection { omega_star: best.omega, reports, disqualified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pits(z: Vec<f64>) -> PitSeries {
        PitSeries { omega: 0.95, z }
    }

    #[test]
    fn ks_statistic_matches_hand_enumerations() {
        assert_eq!(ks_uniform(&[0.0, 0.5, 1.0]).unwrap(), 0.0);
        assert_eq!(ks_uniform(&[0.25, 0.5, 0.75]).unwrap(), 0.25);
        assert_eq!(ks_uniform(&[0.5, 0.5, 0.5]).unwrap(), 0.5);
        // Order must not matter.
        assert_eq!(ks_uniform(&[0.75, 0.25, 0.5]).unwrap(), 0.25);
        assert!(ks_uniform(&[0.5]).is_err());
    }

    #[test]
    fn constant_pits_peak_on_the_full_window() {
        let report = discrepancy(&pits(vec![0.5; 30]), 22).unwrap();
        assert!((report.d - 30f64.sqrt() * 0.5).abs() < 1e-12);
        assert_eq!(report.window, (0, 29));
    }

    #[test]
    fn evenly_spaced_pits_score_zero_on_the_full_window() {
        let n = 100;
        // A shuffled uniform grid: the full window sorts back to the grid.
        let mut z: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            z.swap(i, j);
        }
        assert!(ks_uniform(&z).unwrap() <= 1e-15);
        // Sub-windows of the shuffle still fluctuate, so the overall
        // discrepancy is positive and attained on some shorter window.
        let report = discrepancy(&pits(z), 22).unwrap();
        assert!(report.d > 0.0);
        assert!(report.window.1 - report.window.0 + 1 >= 22);
    }

    #[test]
    fn incremental_scan_equals_brute_force_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let n = 160;
            let z: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-9..1.0 - 1e-9)).collect();
            let fast = discrepancy(&pits(z.clone()), 22).unwrap();
            // Independent double loop: sort every window from scratch.
            let mut best = f64::NEG_INFINITY;
            let mut window = (0, 0);
            for s in 0..n {
                for t in s..n {
                    let len = t - s + 1;
                    if len < 22 {
                        continue;
                    }
                    let mut w = z[s..=t].to_vec();
                    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let mut k: f64 = 0.0;
                    for (j, &v) in w.iter().enumerate() {
                        k = k.max((j as f64 / (len - 1) as f64 - v).abs());
                    }
                    let d = (len as f64).sqrt() * k;
                    if d > best {
                        best = d;
                        window = (s, t);
                    }
                }
            }
            assert_eq!(fast.d, best, "discrepancy value diverged from oracle");
            assert_eq!(fast.window, window, "achieving window diverged from oracle");
        }
    }

    #[test]
    fn discrepancy_rejects_short_series_and_tiny_windows() {
        assert!(discrepancy(&pits(vec![0.5; 10]), 22).is_err());
        assert!(discrepancy(&pits(vec![0.5; 10]), 1).is_err());
        assert!(discrepancy(&pits(vec![0.2, 0.4, 0.6]), 2).is_ok());
    }

    #[test]
    fn candidate_ordering_prefers_small_d_then_large_omega() {
        let a = DiscrepancyReport { omega: 0.91, d: 1.0, window: (0, 21) };
        let b = DiscrepancyReport { omega: 0.95, d: 1.2, window: (0, 21) };
        let c = DiscrepancyReport { omega: 0.93, d: 1.0, window: (0, 21) };
        assert!(better_candidate(&a, &b));
        assert!(!better_candidate(&b, &a));
        // Equal d: the larger omega wins regardless of comparison order.
        assert!(better_candidate(&c, &a));
        assert!(!better_candidate(&a, &c));
    }

    #[test]
    fn grid_search_returns_a_grid_member_with_full_reports() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let returns: Vec<f64> = (0..140).map(|_| rng.gen_range(-0.02..0.02)).collect();
        let series = ReturnSeries::synthetic(returns, 59).unwrap();
        let opts = TraceOptions { cdf_tol: 1e-5, ..TraceOptions::default() };
        let grid = [0.93, 0.95, 0.97];
        let sel = select_omega(&series, &grid, 22, &opts).unwrap();
        assert!(grid.contains(&sel.omega_star));
        assert_eq!(sel.reports.len(), 3);
        assert!(sel.disqualified.is_empty());
        // Reports come back in grid order.
        for (r, w) in sel.reports.iter().zip(grid) {
            assert_eq!(r.omega, w);
        }
        let best = sel.reports.iter().find(|r| r.omega == sel.omega_star).unwrap();
        assert!(sel.reports.iter().all(|r| best.d <= r.d));
    }

    #[test]
    fn single_candidate_grid_returns_that_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let returns: Vec<f64> = (0..90).map(|_| rng.gen_range(-0.02..0.02)).collect();
        let series = ReturnSeries::synthetic(returns, 49).unwrap();
        let opts = TraceOptions { cdf_tol: 1e-5, ..TraceOptions::default() };
        let sel = select_omega(&series, &[0.956], 22, &opts).unwrap();
        assert_eq!(sel.omega_star, 0.956);
    }

    #[test]
    fn degenerate_series_disqualifies_all_candidates() {
        // Varied warm-up, then constant returns: quantile spreads collapse
        // once the constant regime dominates, so almost every date fails.
        let mut returns: Vec<f64> = (0..30).map(|i| 0.01 * ((i * 13 % 30) as f64 - 15.0)).collect();
        returns.extend(vec![0.0; 40]);
        let series = ReturnSeries::synthetic(returns, 29).unwrap();
        let opts = TraceOptions { cdf_tol: 1e-4, ..TraceOptions::default() };
        let err = select_omega(&series, &[0.4], 22, &opts).unwrap_err();
        assert!(matches!(err, Error::DegenerateSample(_)));
    }

    #[test]
    fn default_grid_spans_the_documented_range() {
        let g = default_grid();
        assert_eq!(g.len(), 91);
        assert_eq!(g[0], 0.900);
        assert_eq!(g[90], 0.990);
        assert!((g[1] - 0.901).abs() < 1e-15);
    }
}
