//! Quantile-based estimation of stable-law parameters.
//!
//! Five quantiles at levels 5%, 25%, 50%, 75% and 95% determine two
//! scale/location-free statistics
//!
//! `v_alpha = (Q95 - Q05) / (Q75 - Q25)`,
//! `v_beta = (Q95 + Q05 - 2 Q50) / (Q95 - Q05)`,
//!
//! which index published lookup tables `phi1`, `phi2` giving the tail and
//! skewness estimates, and two further tables `phi3`, `phi4` that recover
//! scale and location:
//!
//! `gamma = (Q75 - Q25) / phi3(alpha, beta)`,
//! `zeta = Q50 + gamma phi4(alpha, beta)`.
//!
//! `zeta` equals the S0 location for `alpha != 1` and the classical S1
//! location at `alpha = 1`. Lookups interpolate bilinearly inside the grids
//! and clamp to the boundary outside; interdecile ratios below the Gaussian
//! node 2.439 therefore map to `alpha = 2` exactly.

use crate::error::{Error, Result};
use crate::ewq::WeightedSample;
use crate::math::empirical_quantile;
use crate::stable::{is_alpha_one, StableParams};
use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};
use std::sync::OnceLock;

/// Smallest tail index the tables resolve; estimates clamp here.
pub const MIN_ALPHA: f64 = 0.6;

/// The five quantiles feeding the estimator, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSet {
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
}

impl QuantileSet {
    /// Validated constructor; quantiles must be finite and non-decreasing.
    pub fn new(q05: f64, q25: f64, q50: f64, q75: f64, q95: f64) -> Result<Self> {
        let q = [q05, q25, q50, q75, q95];
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("quantiles must be finite"));
        }
        if q.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid(format!("quantiles must be non-decreasing, got {q:?}")));
        }
        Ok(QuantileSet { q05, q25, q50, q75, q95 })
    }

    /// Reads the five levels out of an exponentially weighted sample.
    pub fn from_weighted(ws: &WeightedSample) -> Result<Self> {
        QuantileSet::new(
            ws.quantile(0.05)?,
            ws.quantile(0.25)?,
            ws.quantile(0.50)?,
            ws.quantile(0.75)?,
            ws.quantile(0.95)?,
        )
    }

    /// Empirical quantiles (ceil(np)-th order statistics) of a raw sample.
    pub fn from_sample(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empty sample"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite value in sample"));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        QuantileSet::new(
            empirical_quantile(&sorted, 0.05),
            empirical_quantile(&sorted, 0.25),
            empirical_quantile(&sorted, 0.50),
            empirical_quantile(&sorted, 0.75),
            empirical_quantile(&sorted, 0.95),
        )
    }
}

/// The scale/location-free statistics `(v_alpha, v_beta)`.
///
/// Requires strictly positive interquartile and interdecile spreads.
pub fn v_stats(q: &QuantileSet) -> Result<(f64, f64)> {
    let iqr = q.q75 - q.q25;
    let idr = q.q95 - q.q05;
    if iqr <= 0.0 {
        return Err(Error::degenerate("zero interquartile spread"));
    }
    if idr <= 0.0 {
        return Err(Error::degenerate("zero interdecile spread"));
    }
    Ok((idr / iqr, (q.q95 + q.q05 - 2.0 * q.q50) / idr))
}

// A rectangular interpolation grid with ascending coordinates.
#[derive(Debug, Clone)]
struct Grid {
    rows: Vec<f64>,
    cols: Vec<f64>,
    vals: Vec<f64>, // row-major
}

impl Grid {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.vals[i * self.cols.len() + j]
    }

    // Bilinear interpolation with coordinates clamped to the grid bounds.
    fn lookup(&self, r: f64, c: f64) -> f64 {
        let (i, fr) = bracket(&self.rows, r);
        let (j, fc) = bracket(&self.cols, c);
        let top = self.at(i, j) * (1.0 - fc) + self.at(i, j + 1) * fc;
        let bot = self.at(i + 1, j) * (1.0 - fc) + self.at(i + 1, j + 1) * fc;
        top * (1.0 - fr) + bot * fr
    }
}

// Lower bracket index and interpolation fraction for a clamped coordinate.
fn bracket(nodes: &[f64], x: f64) -> (usize, f64) {
    let x = x.clamp(nodes[0], nodes[nodes.len() - 1]);
    let hi = nodes.partition_point(|&n| n <= x).clamp(1, nodes.len() - 1);
    let lo = hi - 1;
    ((lo), (x - nodes[lo]) / (nodes[hi] - nodes[lo]))
}

/// The four published lookup tables behind the estimator.
#[derive(Debug, Clone)]
pub struct McCullochTables {
    phi1: Grid,
    phi2: Grid,
    phi3: Grid,
    phi4: Grid,
}

impl McCullochTables {
    /// The tables bundled with the crate, parsed once on first use.
    pub fn bundled() -> &'static McCullochTables {
        static BUNDLED: OnceLock<McCullochTables> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            McCullochTables::from_text(include_str!("../assets/mcculloch_tables.txt"))
                .expect("bundled table asset is valid")
        })
    }

    /// Parses tables from the documented plain-text layout: `table <name>`,
    /// `cols <c...>`, then one `row <r> <v...>` line per grid row.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pending: Option<(String, Option<Vec<f64>>, Vec<f64>, Vec<f64>)> = None;
        let mut done: Vec<(String, Grid)> = Vec::new();
        let mut finish = |p: Option<(String, Option<Vec<f64>>, Vec<f64>, Vec<f64>)>| -> Result<()> {
            if let Some((name, cols, rows, vals)) = p {
                let cols = cols.ok_or_else(|| Error::invalid(format!("table {name}: missing cols line")))?;
                if rows.len() < 2 || cols.len() < 2 {
                    return Err(Error::invalid(format!("table {name}: needs at least a 2x2 grid")));
                }
                if rows.windows(2).any(|w| w[0] >= w[1]) || cols.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid(format!("table {name}: coordinates must be strictly increasing")));
                }
                done.push((name, Grid { rows, cols, vals }));
            }
            Ok(())
        };

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let nums = |parts: std::str::SplitWhitespace| -> Result<Vec<f64>> {
                parts
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|_| Error::invalid(format!("line {}: bad number {s:?}", lineno + 1)))
                    })
                    .collect()
            };
            match key {
                "table" => {
                    let name = parts
                        .next()
                        .ok_or_else(|| Error::invalid(format!("line {}: table needs a name", lineno + 1)))?
                        .to_string();
                    finish(pending.take())?;
                    pending = Some((name, None, Vec::new(), Vec::new()));
                }
                "cols" => {
                    let p = pending
                        .as_mut()
                        .ok_or_else(|| Error::invalid(format!("line {}: cols outside a table", lineno + 1)))?;
                    p.1 = Some(nums(parts)?);
                }
                "row" => {
                    let p = pending
                        .as_mut()
                        .ok_or_else(|| Error::invalid(format!("line {}: row outside a table", lineno + 1)))?;
                    let ncols = p
                        .1
                        .as_ref()
                        .ok_or_else(|| Error::invalid(format!("line {}: row before cols", lineno + 1)))?
                        .len();
                    let mut v = nums(parts)?;
                    if v.len() != ncols + 1 {
                        return Err(Error::invalid(format!(
                            "line {}: expected coordinate plus {ncols} values, got {}",
                            lineno + 1,
                            v.len()
                        )));
                    }
                    p.2.push(v[0]);
                    p.3.append(&mut v.split_off(1));
                }
                other => {
                    return Err(Error::invalid(format!("line {}: unknown directive {other:?}", lineno + 1)));
                }
            }
        }
        finish(pending.take())?;

        let mut take = |name: &str| -> Result<Grid> {
            let idx = done
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| Error::invalid(format!("missing table {name}")))?;
            Ok(done.remove(idx).1)
        };
        let t = McCullochTables {
            phi1: take("phi1")?,
            phi2: take("phi2")?,
            phi3: take("phi3")?,
            phi4: take("phi4")?,
        };
        if !done.is_empty() {
            return Err(Error::invalid(format!("unexpected extra table {:?}", done[0].0)));
        }
        if t.phi3.vals.iter().any(|&v| v <= 0.0) {
            return Err(Error::invalid("phi3 values must be positive"));
        }
        Ok(t)
    }

    /// Tail-index map `phi1(v_alpha, v_beta)`, even in `v_beta`, in [0.6, 2].
    pub fn phi1(&self, v_alpha: f64, v_beta: f64) -> f64 {
        self.phi1.lookup(v_alpha, v_beta.abs()).clamp(MIN_ALPHA, 2.0)
    }

    /// Skewness map `phi2(v_alpha, v_beta)`, odd in `v_beta`, in [-1, 1].
    pub fn phi2(&self, v_alpha: f64, v_beta: f64) -> f64 {
        v_beta.signum() * self.phi2.lookup(v_alpha, v_beta.abs()).clamp(-1.0, 1.0)
    }

    /// Interquartile-spread map `phi3(alpha, beta) > 0`, even in `beta`.
    pub fn phi3(&self, alpha: f64, beta: f64) -> f64 {
        self.phi3.lookup(alpha, beta.abs())
    }

    /// Location-offset map `phi4(alpha, beta)`, odd in `beta`.
    pub fn phi4(&self, alpha: f64, beta: f64) -> f64 {
        beta.signum() * self.phi4.lookup(alpha, beta.abs())
    }
}

/// Tail and skewness estimates from the v-statistics.
pub fn alpha_beta(v_alpha: f64, v_beta: f64, tables: &McCullochTables) -> (f64, f64) {
    (tables.phi1(v_alpha, v_beta), tables.phi2(v_alpha, v_beta))
}

/// Scale and the three location readings `(gamma, zeta, mu0, mu)`.
///
/// `zeta` is the tabulated location; it equals the S0 location `mu0` away
/// from `alpha = 1` and the S1 location `mu` at `alpha = 1`, and the other
/// reading is recovered through the parameterization conversion.
pub fn scale_location(
    q: &QuantileSet,
    alpha_hat: f64,
    beta_hat: f64,
    tables: &McCullochTables,
) -> (f64, f64, f64, f64) {
    let gamma = (q.q75 - q.q25) / tables.phi3(alpha_hat, beta_hat);
    let zeta = q.q50 + gamma * tables.phi4(alpha_hat, beta_hat);
    if is_alpha_one(alpha_hat) {
        let mu = zeta;
        let mu0 = zeta + beta_hat * FRAC_2_PI * gamma * gamma.ln();
        (gamma, zeta, mu0, mu)
    } else {
        let mu0 = zeta;
        let mu = zeta - beta_hat * gamma * (FRAC_PI_2 * alpha_hat).tan();
        (gamma, zeta, mu0, mu)
    }
}

// Tail estimates landing on the removable singularity of the S1 location
// conversion are pushed a safe distance to the side they came from.
pub(crate) fn nudge_alpha(alpha: f64) -> f64 {
    if (alpha - 1.0).abs() <= 1e-9 {
        if alpha < 1.0 {
            1.0 - 1e-6
        } else {
            1.0 + 1e-6
        }
    } else {
        alpha
    }
}

/// Full quantile-to-parameters estimate, in the S0 parameterization.
pub fn estimate(q: &QuantileSet, tables: &McCullochTables) -> Result<StableParams> {
    let (v_alpha, v_beta) = v_stats(q)?;
    let (alpha, beta) = alpha_beta(v_alpha, v_beta, tables);
    let alpha = nudge_alpha(alpha);
    let (gamma, _zeta, mu0, _mu) = scale_location(q, alpha, beta, tables);
    StableParams::new(alpha, beta, gamma, mu0)
}
