use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::ols::{fit_line, FitMode, FitResult};
use crate::series::MonthlyAggregate;

/// `w` in natural-log² units per month: slope of `Σ²` against `τ`.
pub fn fit_variance_decline(
    aggregates: &[MonthlyAggregate],
    mode: FitMode,
) -> Result<(f64, FitResult)> {
    if aggregates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "variance decline needs at least 2 months, got {}",
            aggregates.len()
        )));
    }
    let points: Vec<(f64, f64)> = aggregates
        .iter()
        .map(|a| (a.tau as f64, a.variance()))
        .collect();
    let fit = fit_line(&points, mode)?;
    Ok((fit.slope, fit))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceSpike {
    pub tau: usize,
    pub year: i32,
    pub month: u32,
    pub variance: f64,
}

/// Month with the largest `Σ²`; ties go to the earliest month.
pub fn detect_variance_spike(aggregates: &[MonthlyAggregate]) -> Result<VarianceSpike> {
    let mut best: Option<&MonthlyAggregate> = None;
    for a in aggregates {
        if best.is_none_or(|b| a.variance() > b.variance()) {
            best = Some(a);
        }
    }
    let a = best.ok_or_else(|| Error::InsufficientData("no monthly aggregates".into()))?;
    Ok(VarianceSpike {
        tau: a.tau,
        year: a.year,
        month: a.month,
        variance: a.variance(),
    })
}
