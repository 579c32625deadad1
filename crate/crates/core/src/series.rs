//! Daily price series, log transform and calendar-month aggregation.
//!
//! Time on the daily axis is the trading-day ordinal: record `k` sits at
//! `t = k` regardless of weekends or holidays between records. Monthly
//! aggregates group records by calendar `(year, month)` of their date.

use std::ops::Range;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::error::{Error, Result};

/// Months with fewer trading days than this are dropped from aggregation.
pub const MIN_DAYS_PER_MONTH: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DailyRecord {
    pub date: NaiveDate,
    pub close: f64,
    pub volume: Option<u64>,
}

impl DailyRecord {
    pub fn new(date: NaiveDate, close: f64, volume: Option<u64>) -> Self {
        Self {
            date,
            close,
            volume,
        }
    }
}

/// Ordered daily records for one index.
///
/// Construction enforces strictly increasing dates. Price positivity is
/// checked by the operations that need it, so that a series holding a bad
/// price can still be inspected by [`crate::ingest::validate_series`].
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    index_name: String,
    records: Vec<DailyRecord>,
}

impl DailySeries {
    pub fn new(index_name: impl Into<String>, records: Vec<DailyRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(k) = records
            .windows(2)
            .position(|pair| pair[1].date <= pair[0].date)
        {
            return Err(Error::UnorderedDates(k + 1));
        }
        Ok(Self {
            index_name: index_name.into(),
            records,
        })
    }

    pub fn index_name(&self) -> &str {
        &self.index_name
    }

    pub fn records(&self) -> &[DailyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Date of trading day `t = 0`.
    pub fn t_origin(&self) -> NaiveDate {
        self.records[0].date
    }

    pub fn closes(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.close)
    }

    pub fn has_volume(&self) -> bool {
        self.records.iter().any(|r| r.volume.is_some())
    }

    /// Returns a copy with every close multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            index_name: self.index_name.clone(),
            records: self
                .records
                .iter()
                .map(|r| DailyRecord {
                    close: r.close * factor,
                    ..r.clone()
                })
                .collect(),
        }
    }

    /// Returns a copy with the volume column replaced. `volumes` must have
    /// one entry per record.
    pub fn with_volumes(&self, volumes: &[u64]) -> Result<Self> {
        if volumes.len() != self.records.len() {
            return Err(Error::InvalidParams(format!(
                "volume column has {} entries, series has {}",
                volumes.len(),
                self.records.len()
            )));
        }
        let records = self
            .records
            .iter()
            .zip(volumes)
            .map(|(r, &v)| DailyRecord {
                volume: Some(v),
                ..r.clone()
            })
            .collect();
        Ok(Self {
            index_name: self.index_name.clone(),
            records,
        })
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        match self.records.iter().position(|r| !(r.close > 0.0)) {
            Some(day) => Err(Error::NonPositivePrice { day }),
            None => Ok(()),
        }
    }
}

/// Daily percentage changes `δ_k = 100 (S_k − S_{k−1}) / S_{k−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSeries {
    pub source: String,
    pub values: Vec<f64>,
}

impl FluctuationSeries {
    pub fn new(source: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            source: source.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Mean and population standard deviation of `ln S` over one calendar month.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthlyAggregate {
    /// Sequential index over retained months, starting at 0.
    pub tau: usize,
    pub year: i32,
    pub month: u32,
    pub mean_log: f64,
    pub std_log: f64,
    pub n_days: usize,
    /// Trading-day indices covered by this month.
    #[serde(skip)]
    pub days: Range<usize>,
}

impl MonthlyAggregate {
    /// `Σ²`, the within-month variance of `ln S`.
    pub fn variance(&self) -> f64 {
        self.std_log * self.std_log
    }
}

/// `(t, ln S_t)` for every record.
pub fn log_series(series: &DailySeries) -> Result<Vec<(f64, f64)>> {
    series.require_positive()?;
    Ok(series
        .closes()
        .enumerate()
        .map(|(k, close)| (k as f64, close.ln()))
        .collect())
}

/// Calendar-month runs of records as `((year, month), index range)`,
/// including months too short to be retained.
pub fn month_groups(series: &DailySeries) -> Vec<((i32, u32), Range<usize>)> {
    let mut groups: Vec<((i32, u32), Range<usize>)> = Vec::new();
    for (k, record) in series.records().iter().enumerate() {
        let key = (record.date.year(), record.date.month());
        match groups.last_mut() {
            Some((last, range)) if *last == key => range.end = k + 1,
            _ => groups.push((key, k..k + 1)),
        }
    }
    groups
}

pub fn monthly_aggregates(series: &DailySeries) -> Result<Vec<MonthlyAggregate>> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(
            "monthly aggregation needs at least 2 records".into(),
        ));
    }
    let logs = log_series(series)?;

    let aggregates: Vec<MonthlyAggregate> = month_groups(series)
        .into_iter()
        .filter(|(_, days)| days.len() >= MIN_DAYS_PER_MONTH)
        .enumerate()
        .map(|(tau, ((year, month), days))| {
            let values = logs[days.clone()].iter().map(|&(_, y)| y);
            let (mean_log, std_log) = mean_and_population_std(values);
            MonthlyAggregate {
                tau,
                year,
                month,
                mean_log,
                std_log,
                n_days: days.len(),
                days,
            }
        })
        .collect();

    if aggregates.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no calendar month has at least {MIN_DAYS_PER_MONTH} trading days"
        )));
    }
    Ok(aggregates)
}

/// Two-pass mean and population (divide-by-n) standard deviation.
pub(crate) fn mean_and_population_std<I>(values: I) -> (f64, f64)
where
    I: Iterator<Item = f64> + Clone,
{
    let Some(pivot) = values.clone().next() else {
        return (f64::NAN, f64::NAN);
    };
    // Shifting by the first value keeps constant input exactly dispersion-free.
    let (sum, n) = values
        .clone()
        .fold((0.0, 0usize), |(s, n), v| (s + (v - pivot), n + 1));
    let mean = pivot + sum / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / n as f64).sqrt())
}
