//! The five pipeline commands and their output files.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chrono::NaiveDate;
use serde_json::{json, Map, Value};
use stable_eff::trace::TraceOptions;
use stable_eff::{
    bands, run_trace, select_omega, simulate_null_paths, ConfidenceBands, EfficiencyTrace,
    OmegaSelection, ReturnSeries,
};

use crate::config::{OmegaChoice, RunConfig};
use crate::ingest;
use crate::output::{fmt_float, fmt_opt, level_label, write_csv, write_manifest};

/// Points per side of the density grid; 801 samples across mu0 +/- 20 gamma.
const DENSITY_HALF_WIDTH: f64 = 20.0;
const DENSITY_POINTS: usize = 801;

fn load_series(cfg: &RunConfig) -> Result<ReturnSeries> {
    let path = cfg.input_path()?;
    let t0 = cfg.t0_date()?;
    let table = ingest::read_prices(path)?;
    if table.skipped > 0 {
        eprintln!("note: skipped {} malformed input rows", table.skipped);
    }
    table.into_series(t0)
}

fn trace_options(cfg: &RunConfig, compute_pits: bool) -> TraceOptions {
    TraceOptions {
        compute_pits,
        prune_threshold: cfg.prune,
        cdf_tol: cfg.quad_tol,
    }
}

/// Resolves `auto` by grid search; fixed values pass through.
fn resolve_omega(cfg: &RunConfig, series: &ReturnSeries) -> Result<(f64, Option<OmegaSelection>)> {
    match cfg.omega {
        OmegaChoice::Fixed(v) => Ok((v, None)),
        OmegaChoice::Auto => {
            let selection =
                select_omega(series, &cfg.grid, cfg.nu, &trace_options(cfg, true))?;
            Ok((selection.omega_star, Some(selection)))
        }
    }
}

/// Simulates the pooled efficient-market null and takes quantile bands.
fn null_bands(cfg: &RunConfig, warmup_len: usize, omega: f64) -> Result<ConfidenceBands> {
    let estimates = simulate_null_paths(warmup_len, cfg.eval_dates, omega, &cfg.path_seeds())?;
    bands(&estimates, &cfg.levels).map_err(Into::into)
}

fn report_gaps(trace: &EfficiencyTrace) {
    for gap in &trace.gaps {
        eprintln!("warning: {} (index {}): {}", gap.date, gap.index, gap.error);
    }
}

fn scan_rows(selection: &OmegaSelection, grid: &[f64]) -> Vec<Vec<String>> {
    // Both lists echo grid elements bitwise, so keying on the bits restores
    // full grid order for the merged table.
    let mut rows = Vec::with_capacity(grid.len());
    let reports: std::collections::HashMap<u64, _> =
        selection.reports.iter().map(|r| (r.omega.to_bits(), r)).collect();
    let dropped: std::collections::HashMap<u64, usize> =
        selection.disqualified.iter().map(|&(w, g)| (w.to_bits(), g)).collect();
    for &omega in grid {
        let key = omega.to_bits();
        if let Some(r) = reports.get(&key) {
            rows.push(vec![
                fmt_float(omega),
                "ok".to_string(),
                fmt_float(r.d),
                r.window.0.to_string(),
                r.window.1.to_string(),
                String::new(),
            ]);
        } else if let Some(&gaps) = dropped.get(&key) {
            rows.push(vec![
                fmt_float(omega),
                "disqualified".to_string(),
                String::new(),
                String::new(),
                String::new(),
                gaps.to_string(),
            ]);
        }
    }
    rows
}

/// `select-omega`: score every candidate discount and report the minimizer.
pub fn select_omega_cmd(cfg: &RunConfig) -> Result<()> {
    let series = load_series(cfg)?;
    let selection = select_omega(&series, &cfg.grid, cfg.nu, &trace_options(cfg, true))?;

    for r in &selection.reports {
        println!(
            "omega={} d={} window=[{},{}]",
            fmt_float(r.omega),
            fmt_float(r.d),
            r.window.0,
            r.window.1
        );
    }
    for &(omega, gaps) in &selection.disqualified {
        println!("omega={} disqualified gaps={gaps}", fmt_float(omega));
    }
    println!("omega_star={}", fmt_float(selection.omega_star));

    let scan_path = cfg.out.join("omega_scan.csv");
    write_csv(
        &scan_path,
        &["omega", "status", "d", "window_start", "window_end", "gaps"],
        &scan_rows(&selection, &cfg.grid),
    )?;
    let mut results = Map::new();
    results.insert("omega_star".into(), json!(selection.omega_star));
    results.insert("candidates".into(), json!(cfg.grid.len()));
    results.insert("disqualified".into(), json!(selection.disqualified.len()));
    write_manifest(&cfg.out, "select-omega", cfg, results)?;
    Ok(())
}

fn trace_header(levels: &[f64]) -> Vec<String> {
    let mut header: Vec<String> = ["date", "alpha", "beta", "gamma", "mu0", "h", "m", "pit"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for &p in levels {
        let label = level_label(p);
        for ind in ["h", "m", "alpha"] {
            header.push(format!("reject_{ind}_{label}"));
        }
    }
    header
}

fn trace_rows(trace: &EfficiencyTrace, bands: &ConfidenceBands) -> Vec<Vec<String>> {
    trace
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![
                r.date.to_string(),
                fmt_float(r.params.alpha),
                fmt_float(r.params.beta),
                fmt_float(r.params.gamma),
                fmt_float(r.params.mu0),
                fmt_float(r.hurst),
                fmt_float(r.memory),
                fmt_opt(r.pit),
            ];
            for level in &bands.levels {
                for (band, value) in [
                    (level.hurst, r.hurst),
                    (level.memory, r.memory),
                    (level.alpha, r.params.alpha),
                ] {
                    row.push(if band.contains(value) { "0" } else { "1" }.to_string());
                }
            }
            row
        })
        .collect()
}

/// `trace`: per-date parameters, efficiency indicators, PITs, and null flags.
pub fn trace_cmd(cfg: &RunConfig) -> Result<()> {
    let series = load_series(cfg)?;
    let (omega, _) = resolve_omega(cfg, &series)?;
    let trace = run_trace(&series, omega, &trace_options(cfg, true))?;
    report_gaps(&trace);
    let bands = null_bands(cfg, series.t0_index() + 1, omega)?;

    let header = trace_header(&cfg.levels);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = cfg.out.join("trace.csv");
    write_csv(&path, &header_refs, &trace_rows(&trace, &bands))?;
    println!(
        "wrote {} estimated dates ({} gaps) to {}",
        trace.rows.len(),
        trace.gaps.len(),
        path.display()
    );

    let mut results = Map::new();
    results.insert("omega_resolved".into(), json!(omega));
    results.insert("rows".into(), json!(trace.rows.len()));
    results.insert("gaps".into(), json!(trace.gaps.len()));
    results.insert("warmup_returns".into(), json!(series.t0_index() + 1));
    write_manifest(&cfg.out, "trace", cfg, results)?;
    Ok(())
}

fn bands_rows(bands: &ConfidenceBands) -> Vec<Vec<String>> {
    bands
        .levels
        .iter()
        .map(|l| {
            vec![
                fmt_float(l.level),
                fmt_float(l.hurst.lower),
                fmt_float(l.hurst.upper),
                fmt_float(l.memory.lower),
                fmt_float(l.memory.upper),
                fmt_float(l.alpha.lower),
                fmt_float(l.alpha.upper),
            ]
        })
        .collect()
}

/// `bands`: Monte-Carlo null confidence bands for the dataset's geometry.
pub fn bands_cmd(cfg: &RunConfig) -> Result<()> {
    let series = load_series(cfg)?;
    let (omega, _) = resolve_omega(cfg, &series)?;
    let bands = null_bands(cfg, series.t0_index() + 1, omega)?;

    for l in &bands.levels {
        println!(
            "level={} H=[{},{}] m=[{},{}] alpha=[{},{}]",
            fmt_float(l.level),
            fmt_float(l.hurst.lower),
            fmt_float(l.hurst.upper),
            fmt_float(l.memory.lower),
            fmt_float(l.memory.upper),
            fmt_float(l.alpha.lower),
            fmt_float(l.alpha.upper)
        );
    }
    let path = cfg.out.join("bands.csv");
    write_csv(
        &path,
        &["level", "h_lower", "h_upper", "m_lower", "m_upper", "alpha_lower", "alpha_upper"],
        &bands_rows(&bands),
    )?;

    let mut results = Map::new();
    results.insert("omega_resolved".into(), json!(omega));
    results.insert("warmup_returns".into(), json!(series.t0_index() + 1));
    results.insert(
        "null_estimates".into(),
        json!(cfg.eval_dates * cfg.paths),
    );
    write_manifest(&cfg.out, "bands", cfg, results)?;
    Ok(())
}

fn parse_date_list(spec: &str) -> Result<Vec<NaiveDate>> {
    let dates: Vec<NaiveDate> = spec
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<NaiveDate>()
                .with_context(|| format!("`{p}` is not an ISO-8601 date"))
        })
        .collect::<Result<_>>()?;
    if dates.is_empty() {
        bail!("no density dates given");
    }
    Ok(dates)
}

/// `density`: fitted return-density curves at the requested trace dates.
pub fn density_cmd(cfg: &RunConfig, dates_spec: &str) -> Result<()> {
    let dates = parse_date_list(dates_spec)?;
    let series = load_series(cfg)?;
    let (omega, _) = resolve_omega(cfg, &series)?;
    let trace = run_trace(&series, omega, &trace_options(cfg, false))?;
    report_gaps(&trace);

    let mut written = Vec::new();
    for date in dates {
        let row = trace.rows.iter().find(|r| r.date == date).ok_or_else(|| {
            if let Some(gap) = trace.gaps.iter().find(|g| g.date == date) {
                anyhow!("no estimate at {date}: {}", gap.error)
            } else {
                anyhow!(
                    "{date} is not an estimated date (estimates run {} to {})",
                    trace.rows.first().map(|r| r.date.to_string()).unwrap_or_default(),
                    trace.rows.last().map(|r| r.date.to_string()).unwrap_or_default()
                )
            }
        })?;
        let p = row.params;
        let mut rows = Vec::with_capacity(DENSITY_POINTS);
        for i in 0..DENSITY_POINTS {
            let frac = i as f64 / (DENSITY_POINTS - 1) as f64;
            let x = p.mu0 + p.gamma * DENSITY_HALF_WIDTH * (2.0 * frac - 1.0);
            let pdf = stable_eff::stable::pdf_tol(x, &p, cfg.quad_tol)?;
            rows.push(vec![fmt_float(x), fmt_float(pdf)]);
        }
        let path = cfg.out.join(format!("density_{date}.csv"));
        write_csv(&path, &["x", "pdf"], &rows)?;
        println!(
            "wrote density at {date} (alpha={}, beta={}, gamma={}, mu0={}) to {}",
            fmt_float(p.alpha),
            fmt_float(p.beta),
            fmt_float(p.gamma),
            fmt_float(p.mu0),
            path.display()
        );
        written.push(date.to_string());
    }

    let mut results = Map::new();
    results.insert("omega_resolved".into(), json!(omega));
    results.insert("dates".into(), Value::from(written));
    write_manifest(&cfg.out, "density", cfg, results)?;
    Ok(())
}

/// Extreme values and endpoints of one indicator series, first occurrence
/// winning ties, matching a range summary of the trace.
struct Summary {
    min: f64,
    date_min: NaiveDate,
    max: f64,
    date_max: NaiveDate,
    last: f64,
}

fn summarize(values: &[(NaiveDate, f64)]) -> Result<Summary> {
    let first = values.first().ok_or_else(|| anyhow!("no estimated dates to summarize"))?;
    let mut s = Summary {
        min: first.1,
        date_min: first.0,
        max: first.1,
        date_max: first.0,
        last: first.1,
    };
    for &(date, v) in &values[1..] {
        if v < s.min {
            s.min = v;
            s.date_min = date;
        }
        if v > s.max {
            s.max = v;
            s.date_max = date;
        }
        s.last = v;
    }
    Ok(s)
}

/// The per-date indicator triples a report is built from.
type IndicatorRows = Vec<(NaiveDate, f64, f64, f64)>;

fn read_trace_csv(path: &Path) -> Result<IndicatorRows> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot open trace file {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("trace file lacks a `{name}` column"))
    };
    let (date_i, h_i, m_i, a_i) = (col("date")?, col("h")?, col("m")?, col("alpha")?);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let get = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let date: NaiveDate = get(date_i)
            .parse()
            .with_context(|| format!("bad date `{}` in trace file", get(date_i)))?;
        let parse_f = |i: usize| {
            get(i)
                .parse::<f64>()
                .with_context(|| format!("bad number `{}` in trace file", get(i)))
        };
        rows.push((date, parse_f(h_i)?, parse_f(m_i)?, parse_f(a_i)?));
    }
    Ok(rows)
}

/// `report`: range summary (min, argmin date, max, argmax date, final value)
/// of H, m, and alpha, either from a fresh trace or a saved `trace.csv`.
pub fn report_cmd(cfg: &RunConfig, from_trace: Option<&Path>) -> Result<()> {
    let (rows, mut results): (IndicatorRows, Map<String, Value>) = match from_trace {
        Some(path) => {
            let rows = read_trace_csv(path)?;
            let mut results = Map::new();
            results.insert("from_trace".into(), json!(path.display().to_string()));
            (rows, results)
        }
        None => {
            let series = load_series(cfg)?;
            let (omega, _) = resolve_omega(cfg, &series)?;
            let trace = run_trace(&series, omega, &trace_options(cfg, true))?;
            report_gaps(&trace);
            let rows = trace
                .rows
                .iter()
                .map(|r| (r.date, r.hurst, r.memory, r.params.alpha))
                .collect();
            let mut results = Map::new();
            results.insert("omega_resolved".into(), json!(omega));
            results.insert("rows".into(), json!(trace.rows.len()));
            (rows, results)
        }
    };

    type Extract = fn(&(NaiveDate, f64, f64, f64)) -> f64;
    let indicators: [(&str, Extract); 3] =
        [("h", |r| r.1), ("m", |r| r.2), ("alpha", |r| r.3)];
    let mut table = Vec::new();
    for (name, extract) in indicators {
        let values: Vec<(NaiveDate, f64)> = rows.iter().map(|r| (r.0, extract(r))).collect();
        let s = summarize(&values)?;
        println!(
            "{name}: min={} on {}, max={} on {}, last={}",
            fmt_float(s.min),
            s.date_min,
            fmt_float(s.max),
            s.date_max,
            fmt_float(s.last)
        );
        table.push(vec![
            name.to_string(),
            fmt_float(s.min),
            s.date_min.to_string(),
            fmt_float(s.max),
            s.date_max.to_string(),
            fmt_float(s.last),
        ]);
    }
    let path = cfg.out.join("report.csv");
    write_csv(
        &path,
        &["indicator", "min", "date_min", "max", "date_max", "last"],
        &table,
    )?;
    results.insert("indicators".into(), json!(["h", "m", "alpha"]));
    write_manifest(&cfg.out, "report", cfg, results)?;
    Ok(())
}
