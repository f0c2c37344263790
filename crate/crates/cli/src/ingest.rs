//! Price-file ingestion: CSV of daily closes to a validated return series.
//!
//! The reader expects a header containing `date` (ISO-8601) and `close`
//! (positive decimal) columns, in any order and case, with extra columns
//! ignored. Malformed rows are reported individually on stderr and skipped;
//! the run aborts when more than 1% of the data rows are bad, since at that
//! point silent skipping would distort the return series rather than patch
//! the odd vendor glitch.

use std::path::Path;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use stable_eff::ReturnSeries;

/// Maximum tolerated fraction of malformed data rows.
const MAX_BAD_FRACTION: f64 = 0.01;

/// Minimum warm-up returns before the first estimation date.
pub const MIN_WARMUP_RETURNS: usize = 31;

/// Outcome of reading a price file, before the estimation start is applied.
#[derive(Debug)]
pub struct PriceTable {
    /// Strictly increasing trading dates with their closes.
    rows: Vec<(NaiveDate, f64)>,
    /// Number of malformed rows skipped (already reported on stderr).
    pub skipped: usize,
}

fn field<'r>(record: &'r csv::StringRecord, idx: usize) -> &'r str {
    record.get(idx).unwrap_or("").trim()
}

/// Reads and validates the price CSV, reporting bad rows on stderr.
pub fn read_prices(path: &Path) -> Result<PriceTable> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open input file {}", path.display()))?;

    let headers = reader.headers().context("input file has no header row")?;
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
    };
    let (date_idx, close_idx) = match (find("date"), find("close")) {
        (Some(d), Some(c)) => (d, c),
        _ => bail!(
            "input header must contain `date` and `close` columns, found [{}]",
            headers.iter().collect::<Vec<_>>().join(", ")
        ),
    };

    let mut rows: Vec<(NaiveDate, f64, u64)> = Vec::new();
    let mut diagnostics: Vec<String> = Vec::new();
    let mut total = 0usize;
    for record in reader.records() {
        let record = record.context("unreadable CSV record")?;
        // Line numbers are 1-based positions in the file, header included,
        // so they match what an editor or `sed -n` shows.
        let line = record.position().map_or(0, |p| p.line());
        total += 1;
        let date_text = field(&record, date_idx);
        let close_text = field(&record, close_idx);
        let date = match date_text.parse::<NaiveDate>() {
            Ok(d) => d,
            Err(_) => {
                diagnostics.push(format!("row {line}: `{date_text}` is not an ISO-8601 date"));
                continue;
            }
        };
        let close = match close_text.parse::<f64>() {
            Ok(c) => c,
            Err(_) => {
                diagnostics.push(format!("row {line}: `{close_text}` is not a decimal close"));
                continue;
            }
        };
        if !close.is_finite() || close <= 0.0 {
            diagnostics.push(format!("row {line}: close {close} is not positive"));
            continue;
        }
        rows.push((date, close, line));
    }

    // Rows may arrive in any order; duplicates only become visible once
    // sorted. The later file line of a duplicated date is the one dropped.
    rows.sort_by_key(|&(date, _, line)| (date, line));
    let mut deduped: Vec<(NaiveDate, f64)> = Vec::with_capacity(rows.len());
    for &(date, close, line) in &rows {
        if deduped.last().is_some_and(|&(prev, _)| prev == date) {
            diagnostics.push(format!("row {line}: duplicate date {date}"));
            continue;
        }
        deduped.push((date, close));
    }

    for d in &diagnostics {
        eprintln!("warning: {d}");
    }
    let bad = diagnostics.len();
    if total == 0 {
        bail!("input file {} contains no data rows", path.display());
    }
    if bad as f64 > MAX_BAD_FRACTION * total as f64 {
        bail!(
            "{bad} of {total} rows are malformed (> {:.0}%); refusing to continue",
            MAX_BAD_FRACTION * 100.0
        );
    }
    Ok(PriceTable { rows: deduped, skipped: bad })
}

impl PriceTable {
    /// Log returns between consecutive closes, each dated by its later day,
    /// with estimation starting at the first return date on or after `t0`.
    pub fn into_series(self, t0: NaiveDate) -> Result<ReturnSeries> {
        if self.rows.len() < 2 {
            bail!("need at least two valid price rows, have {}", self.rows.len());
        }
        let dates: Vec<NaiveDate> = self.rows[1..].iter().map(|&(d, _)| d).collect();
        let returns: Vec<f64> = self
            .rows
            .windows(2)
            .map(|w| (w[1].1 / w[0].1).ln())
            .collect();
        let t0_index = dates.partition_point(|&d| d < t0);
        if t0_index >= dates.len() {
            bail!(
                "start date {t0} lies after the last return date {}",
                dates.last().unwrap()
            );
        }
        if t0_index < MIN_WARMUP_RETURNS - 1 {
            bail!(
                "start date {t0} leaves only {} warm-up returns; at least {} are required",
                t0_index + 1,
                MIN_WARMUP_RETURNS
            );
        }
        ReturnSeries::new(dates, returns, t0_index).map_err(Into::into)
    }
}
