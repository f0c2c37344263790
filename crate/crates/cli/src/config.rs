//! Run configuration: defaults, optional TOML file, and flag overrides.
//!
//! Precedence is flag > config file > built-in default for every setting.
//! The resolved configuration is echoed verbatim into each command's run
//! manifest so any output directory documents how it was produced.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use stable_eff::DEFAULT_LEVELS;

use crate::CommonArgs;

/// Discount-factor choice: a fixed value or data-driven selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaChoice {
    Fixed(f64),
    Auto,
}

impl OmegaChoice {
    fn parse(text: &str) -> Result<Self> {
        if text.eq_ignore_ascii_case("auto") {
            return Ok(OmegaChoice::Auto);
        }
        let value: f64 = text
            .parse()
            .with_context(|| format!("omega must be a number in (0, 1) or `auto`, got `{text}`"))?;
        if !value.is_finite() || value <= 0.0 || value >= 1.0 {
            bail!("omega must lie strictly between 0 and 1, got {value}");
        }
        Ok(OmegaChoice::Fixed(value))
    }

    /// The form the choice was requested in, for the manifest echo.
    pub fn echo(&self) -> String {
        match self {
            OmegaChoice::Fixed(v) => format!("{v}"),
            OmegaChoice::Auto => "auto".to_string(),
        }
    }
}

/// Optional TOML configuration file mirroring the command-line flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    omega: Option<toml::Value>,
    t0: Option<String>,
    nu: Option<usize>,
    grid: Option<String>,
    levels: Option<String>,
    seed: Option<u64>,
    eval_dates: Option<usize>,
    paths: Option<usize>,
    prune: Option<f64>,
    quad_tol: Option<f64>,
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub omega: OmegaChoice,
    pub t0: Option<NaiveDate>,
    pub nu: usize,
    pub grid_spec: String,
    pub grid: Vec<f64>,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub eval_dates: usize,
    pub paths: usize,
    pub prune: Option<f64>,
    pub quad_tol: f64,
}

/// The configuration block embedded in every run manifest.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub input: Option<String>,
    pub out: String,
    pub omega: String,
    pub t0: Option<String>,
    pub nu: usize,
    pub grid: String,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub eval_dates: usize,
    pub paths: usize,
    pub prune: Option<f64>,
    pub quad_tol: f64,
}

pub const DEFAULT_GRID_SPEC: &str = "0.900:0.990:0.001";
const DEFAULT_EVAL_DATES: usize = 4000;

/// Parses `start:end:step` into an inclusive ascending grid.
///
/// Grid points are computed as `start + i * step` rounded to the step's
/// granularity, so a spec like `0.900:0.990:0.001` yields exact
/// three-decimal candidates rather than accumulated floating-point drift.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be start:end:step, got `{spec}`");
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad grid component `{p}` in `{spec}`"))
        })
        .collect::<Result<_>>()?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start {
        bail!("grid requires start <= end and step > 0, got `{spec}`");
    }
    // Round every candidate at the precision the spec itself is written in,
    // so repeated stepping cannot accumulate floating-point drift.
    let decimals = parts
        .iter()
        .map(|p| p.trim().split('.').nth(1).map_or(0, str::len))
        .max()
        .unwrap_or(0)
        .min(12) as i32;
    let scale = 10f64.powi(decimals);
    let count = ((end - start) / step + 0.5).floor() as usize;
    let grid: Vec<f64> = (0..=count)
        .map(|i| ((start + i as f64 * step) * scale).round() / scale)
        .take_while(|&w| w <= end + step * 1e-9)
        .collect();
    for &w in &grid {
        if w <= 0.0 || w >= 1.0 {
            bail!("grid candidate {w} lies outside (0, 1)");
        }
    }
    if grid.is_empty() {
        bail!("grid `{spec}` contains no candidates");
    }
    Ok(grid)
}

/// Parses comma-separated confidence levels, each strictly inside (0, 1).
pub fn parse_levels(spec: &str) -> Result<Vec<f64>> {
    let levels: Vec<f64> = spec
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad confidence level `{p}`"))
        })
        .collect::<Result<_>>()?;
    if levels.is_empty() {
        bail!("no confidence levels given");
    }
    for &p in &levels {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            bail!("confidence level {p} must lie strictly between 0 and 1");
        }
    }
    Ok(levels)
}

fn parse_date(text: &str) -> Result<NaiveDate> {
    text.parse::<NaiveDate>()
        .with_context(|| format!("`{text}` is not an ISO-8601 date (yyyy-mm-dd)"))
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
}

impl RunConfig {
    /// Merges built-in defaults, the optional config file, and flags.
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };

        let omega_text = match (&args.omega, &file.omega) {
            (Some(flag), _) => flag.clone(),
            (None, Some(toml::Value::String(s))) => s.clone(),
            (None, Some(toml::Value::Float(v))) => format!("{v}"),
            (None, Some(other)) => bail!("config `omega` must be a number or `auto`, got {other}"),
            (None, None) => "auto".to_string(),
        };
        let omega = OmegaChoice::parse(&omega_text)?;

        let t0 = match (&args.t0, &file.t0) {
            (Some(flag), _) => Some(parse_date(flag)?),
            (None, Some(text)) => Some(parse_date(text)?),
            (None, None) => None,
        };

        let grid_spec = args
            .grid
            .clone()
            .or(file.grid)
            .unwrap_or_else(|| DEFAULT_GRID_SPEC.to_string());
        let grid = parse_grid(&grid_spec)?;

        let levels = match args.levels.clone().or(file.levels) {
            Some(spec) => parse_levels(&spec)?,
            None => DEFAULT_LEVELS.to_vec(),
        };

        let nu = args.nu.or(file.nu).unwrap_or(stable_eff::DEFAULT_NU);
        if nu < 2 {
            bail!("nu must be at least 2, got {nu}");
        }
        let eval_dates = args.eval_dates.or(file.eval_dates).unwrap_or(DEFAULT_EVAL_DATES);
        let paths = args.paths.or(file.paths).unwrap_or(1);
        if paths == 0 {
            bail!("paths must be at least 1");
        }
        let quad_tol = args.quad_tol.or(file.quad_tol).unwrap_or(stable_eff::DEFAULT_CDF_TOL);
        if !quad_tol.is_finite() || quad_tol <= 0.0 {
            bail!("quad-tol must be a positive number, got {quad_tol}");
        }
        let prune = args.prune.or(file.prune);
        if let Some(thr) = prune {
            if !thr.is_finite() || thr < 0.0 || thr >= 1e-3 {
                bail!("prune threshold must lie in [0, 1e-3), got {thr}");
            }
        }

        Ok(RunConfig {
            input: args.input.clone().or(file.input),
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            omega,
            t0,
            nu,
            grid_spec,
            grid,
            levels,
            seed: args.seed.or(file.seed).unwrap_or(0),
            eval_dates,
            paths,
            prune,
            quad_tol,
        })
    }

    /// The input path, required by every command that reads prices.
    pub fn input_path(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| anyhow::anyhow!("--input <csv> is required for this command"))
    }

    /// The first estimation date, required by every command that traces.
    pub fn t0_date(&self) -> Result<NaiveDate> {
        self.t0
            .ok_or_else(|| anyhow::anyhow!("--t0 <yyyy-mm-dd> is required for this command"))
    }

    /// Seeds for the pooled null paths: `seed, seed + 1, ...`.
    pub fn path_seeds(&self) -> Vec<u64> {
        (0..self.paths as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            input: self.input.as_ref().map(|p| p.display().to_string()),
            out: self.out.display().to_string(),
            omega: self.omega.echo(),
            t0: self.t0.map(|d| d.to_string()),
            nu: self.nu,
            grid: self.grid_spec.clone(),
            levels: self.levels.clone(),
            seed: self.seed,
            eval_dates: self.eval_dates,
            paths: self.paths,
            prune: self.prune,
            quad_tol: self.quad_tol,
        }
    }
}
