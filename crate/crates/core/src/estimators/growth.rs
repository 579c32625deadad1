//! Exponential growth rates fitted on log scales: daily price growth `a`,
//! monthly mean-log growth `m`, and daily volume growth `ν`.

use crate::error::{Error, Result};
use crate::estimators::ols::{linear_least_squares, FitResult};
use crate::series::{log_series, DailySeries, MonthlyAggregate};

/// `a` in percent per trading day: 100 × OLS slope of `ln S` against `t`.
pub fn fit_daily_growth(series: &DailySeries) -> Result<(f64, FitResult)> {
    let fit = linear_least_squares(&log_series(series)?)?;
    Ok((100.0 * fit.slope, fit))
}

/// `m` in natural-log units per month: OLS slope of `⟨ln S⟩` against `τ`.
pub fn fit_monthly_growth(aggregates: &[MonthlyAggregate]) -> Result<(f64, FitResult)> {
    if aggregates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "monthly growth needs at least 2 months, got {}",
            aggregates.len()
        )));
    }
    let points: Vec<(f64, f64)> = aggregates
        .iter()
        .map(|a| (a.tau as f64, a.mean_log))
        .collect();
    let fit = linear_least_squares(&points)?;
    Ok((fit.slope, fit))
}

/// `ν` in percent per trading day: 100 × OLS slope of `ln N` against `t`,
/// over records whose volume is present and positive. `t` stays the
/// record's position in the full series.
pub fn fit_volume_growth(series: &DailySeries) -> Result<(f64, FitResult)> {
    let points: Vec<(f64, f64)> = series
        .records()
        .iter()
        .enumerate()
        .filter_map(|(k, r)| match r.volume {
            Some(v) if v > 0 => Some((k as f64, (v as f64).ln())),
            _ => None,
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::NoVolumeData);
    }
    let fit = linear_least_squares(&points)?;
    Ok((100.0 * fit.slope, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{monthly_aggregates, DailyRecord};
    use chrono::NaiveDate;

    fn exponential(n: usize, rate: f64) -> DailySeries {
        let d0 = NaiveDate::from_ymd_opt(2001, 1, 1).unwrap();
        let records = (0..n)
            .map(|k| {
                DailyRecord::new(
                    d0 + chrono::Days::new(k as u64),
                    1000.0 * (rate * k as f64).exp(),
                    Some((1e6 * (0.0004 * k as f64).exp()).round() as u64),
                )
            })
            .collect();
        DailySeries::new("exp", records).unwrap()
    }

    #[test]
    fn noiseless_daily_growth() {
        let (a, fit) = fit_daily_growth(&exponential(1000, 0.0005)).unwrap();
        assert!((a - 0.05).abs() < 1e-12);
        assert!((fit.intercept - 1000f64.ln()).abs() < 1e-9);
        assert_eq!(fit.n, 1000);
    }

    #[test]
    fn monthly_growth_of_identity() {
        let aggs: Vec<MonthlyAggregate> = (0..5)
            .map(|tau| MonthlyAggregate {
                tau,
                year: 2000,
                month: tau as u32 + 1,
                mean_log: tau as f64,
                std_log: 0.0,
                n_days: 20,
                days: 0..0,
            })
            .collect();
        let (m, _) = fit_monthly_growth(&aggs).unwrap();
        assert!((m - 1.0).abs() < 1e-15);
        assert!(matches!(fit_monthly_growth(&aggs[..1]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn monthly_growth_with_fixed_month_length() {
        // 21 trading days per calendar month: mean_log(τ) = c + α(21τ + 10).
        let records = (0..21 * 12)
            .map(|k| {
                let date = NaiveDate::from_ymd_opt(2003, (k / 21) as u32 + 1, (k % 21) as u32 + 1).unwrap();
                DailyRecord::new(date, 50.0 * (0.0005 * k as f64).exp(), None)
            })
            .collect();
        let series = DailySeries::new("m", records).unwrap();
        let (m, _) = fit_monthly_growth(&monthly_aggregates(&series).unwrap()).unwrap();
        assert!((m - 0.0105).abs() < 1e-12, "{m}");
    }

    #[test]
    fn noiseless_volume_growth() {
        // Volumes are rounded to integers; at 1e6 the rounding error in ln N
        // is below 5e-7, so ν matches 0.04 far inside 1e-6.
        let (nu, _) = fit_volume_growth(&exponential(2000, 0.0005)).unwrap();
        assert!((nu - 0.04).abs() < 1e-6, "{nu}");
    }

    #[test]
    fn missing_or_zero_volume() {
        let d0 = NaiveDate::from_ymd_opt(2001, 1, 1).unwrap();
        let no_volume = DailySeries::new(
            "spx",
            (0..5)
                .map(|k| DailyRecord::new(d0 + chrono::Days::new(k), 1.0, None))
                .collect(),
        )
        .unwrap();
        assert!(matches!(fit_volume_growth(&no_volume), Err(Error::NoVolumeData)));

        let zeros = no_volume.with_volumes(&[0, 0, 5, 0, 0]).unwrap();
        assert!(matches!(fit_volume_growth(&zeros), Err(Error::NoVolumeData)));

        // Zero-volume days are skipped but keep their t positions.
        let sparse = no_volume.with_volumes(&[1, 0, 0, 0, 10]).unwrap();
        let (nu, fit) = fit_volume_growth(&sparse).unwrap();
        assert_eq!(fit.n, 2);
        assert!((nu - 100.0 * 10f64.ln() / 4.0).abs() < 1e-12);
    }
}
