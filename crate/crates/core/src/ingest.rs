//! Delimited daily market data files.
//!
//! The canonical format is UTF-8, comma-delimited, with a header row and
//! the columns `Date` (ISO-8601), `Close` (decimal) and optionally `Volume`
//! (integer). [`IngestConfig`] maps other exchange download layouts onto
//! the same record shape.

use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{DailyRecord, DailySeries};

#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub date_column: String,
    pub price_column: String,
    /// Volume column name. When `require_volume` is false a header without
    /// this column yields a series with no volume data.
    pub volume_column: Option<String>,
    pub require_volume: bool,
    /// chrono `strftime`-style pattern.
    pub date_format: String,
    pub delimiter: char,
    /// Numeric cells use `,` as the decimal separator.
    pub decimal_comma: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            date_column: "Date".into(),
            price_column: "Close".into(),
            volume_column: Some("Volume".into()),
            require_volume: false,
            date_format: "%Y-%m-%d".into(),
            delimiter: ',',
            decimal_comma: false,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.date_column == self.price_column {
            return Err(Error::InvalidConfig(
                "date and price columns must differ".into(),
            ));
        }
        if !self.delimiter.is_ascii() || self.delimiter.is_ascii_control() && self.delimiter != '\t'
        {
            return Err(Error::InvalidConfig(format!(
                "delimiter {:?} is not a single printable ASCII character",
                self.delimiter
            )));
        }
        if self.decimal_comma && self.delimiter == ',' {
            return Err(Error::InvalidConfig(
                "decimal comma requires a delimiter other than ','".into(),
            ));
        }
        Ok(())
    }
}

/// Parses one file into a series sorted ascending by date.
///
/// Any bad cell fails the whole parse; there is no partial result.
pub fn parse_daily_file<R: Read>(
    source: R,
    index_name: &str,
    config: &IngestConfig,
) -> Result<DailySeries> {
    config.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter as u8)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let date_idx = column(&config.date_column)
        .ok_or_else(|| Error::UnknownColumn(config.date_column.clone()))?;
    let price_idx = column(&config.price_column)
        .ok_or_else(|| Error::UnknownColumn(config.price_column.clone()))?;
    let volume_idx = match &config.volume_column {
        Some(name) => match column(name) {
            Some(idx) => Some(idx),
            None if config.require_volume => return Err(Error::UnknownColumn(name.clone())),
            None => None,
        },
        None => None,
    };

    let mut records = Vec::new();
    let mut row = csv::StringRecord::new();
    loop {
        let more = reader.read_record(&mut row).map_err(|e| match e.position() {
            Some(pos) => Error::MalformedRow {
                line: pos.line(),
                reason: e.to_string(),
            },
            None => Error::Csv(e),
        })?;
        if !more {
            break;
        }
        let line = row.position().map_or(0, |p| p.line());
        let malformed = |reason: String| Error::MalformedRow { line, reason };
        let cell = |idx: usize| row.get(idx).unwrap_or("");

        let date_cell = cell(date_idx);
        let date = NaiveDate::parse_from_str(date_cell, &config.date_format)
            .map_err(|e| malformed(format!("date {date_cell:?}: {e}")))?;

        let price_cell = cell(price_idx);
        if price_cell.is_empty() {
            return Err(malformed("empty price cell".into()));
        }
        let close = parse_decimal(price_cell, config.decimal_comma)
            .ok_or_else(|| malformed(format!("price {price_cell:?} is not a number")))?;
        if !(close > 0.0) {
            return Err(malformed(format!("price {close} is not positive")));
        }

        let volume = match volume_idx.map(cell) {
            None | Some("") => None,
            Some(text) => Some(
                parse_volume(text, config.decimal_comma)
                    .ok_or_else(|| malformed(format!("volume {text:?} is not a count")))?,
            ),
        };
        records.push(DailyRecord::new(date, close, volume));
    }

    if records.is_empty() {
        return Err(Error::EmptySeries);
    }
    records.sort_by_key(|r| r.date);
    if let Some(pair) = records.windows(2).find(|p| p[0].date == p[1].date) {
        return Err(Error::DuplicateDate(pair[0].date));
    }
    DailySeries::new(index_name, records)
}

fn parse_decimal(text: &str, decimal_comma: bool) -> Option<f64> {
    let value: f64 = if decimal_comma {
        text.replace(',', ".").parse().ok()?
    } else {
        text.parse().ok()?
    };
    value.is_finite().then_some(value)
}

fn parse_volume(text: &str, decimal_comma: bool) -> Option<u64> {
    if let Ok(v) = text.parse::<u64>() {
        return Some(v);
    }
    // Some providers export counts as floats ("1250000.0").
    let v = parse_decimal(text, decimal_comma)?;
    (v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64).then_some(v as u64)
}

/// Writes `series` in the canonical format. The `Volume` column is present
/// iff at least one record carries a volume.
pub fn write_canonical<W: Write>(series: &DailySeries, sink: W) -> Result<()> {
    let with_volume = series.has_volume();
    let mut writer = csv::Writer::from_writer(sink);
    if with_volume {
        writer.write_record(["Date", "Close", "Volume"])?;
    } else {
        writer.write_record(["Date", "Close"])?;
    }
    for r in series.records() {
        let date = r.date.format("%Y-%m-%d").to_string();
        // `{}` on f64 is the shortest representation that parses back exactly.
        let close = format!("{}", r.close);
        if with_volume {
            let volume = r.volume.map(|v| v.to_string()).unwrap_or_default();
            writer.write_record([date, close, volume])?;
        } else {
            writer.write_record([date, close])?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub n_records: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub span_days: i64,
    pub bad_prices: usize,
    pub missing_volumes: usize,
    /// Largest single-day `|δ|` in percent, over consecutive pairs whose
    /// earlier price is positive. `None` when no such pair exists.
    pub max_abs_fluctuation: Option<f64>,
}

pub fn validate_series(series: &DailySeries) -> ValidationSummary {
    let records = series.records();
    let first_date = records[0].date;
    let last_date = records[records.len() - 1].date;
    let max_abs_fluctuation = records
        .windows(2)
        .filter(|p| p[0].close > 0.0)
        .map(|p| (100.0 * (p[1].close - p[0].close) / p[0].close).abs())
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |m| m.max(d))));
    ValidationSummary {
        n_records: records.len(),
        first_date,
        last_date,
        span_days: (last_date - first_date).num_days(),
        bad_prices: records.iter().filter(|r| !(r.close > 0.0)).count(),
        missing_volumes: records.iter().filter(|r| r.volume.is_none()).count(),
        max_abs_fluctuation,
    }
}
