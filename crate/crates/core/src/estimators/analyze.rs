//! One-index composition of every estimator into a [`RegularityReport`].

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::estimators::fluctuation::{
    build_histogram, daily_fluctuations, fit_gaussian_offset, fluctuation_moments, Histogram,
    DEFAULT_BIN_WIDTH,
};
use crate::estimators::growth::{fit_daily_growth, fit_monthly_growth, fit_volume_growth};
use crate::estimators::ols::{FitMode, FitResult};
use crate::estimators::volatility::{detect_variance_spike, fit_variance_decline, VarianceSpike};
use crate::series::{log_series, monthly_aggregates, DailySeries, FluctuationSeries, MonthlyAggregate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Histogram bin width in percent.
    pub bin_width: f64,
    pub variance_fit: FitMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            bin_width: DEFAULT_BIN_WIDTH,
            variance_fit: FitMode::Intercept,
        }
    }
}

/// An estimator that failed without preventing the report.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub daily_growth: FitResult,
    pub monthly_growth: FitResult,
    pub variance_decline: FitResult,
    pub volume_growth: Option<FitResult>,
    /// `a` as a fraction per day.
    pub a_fraction: f64,
    pub nu_fraction: Option<f64>,
    /// Volatility coefficient implied by the daily fluctuations, `σ/100`
    /// per √day.
    pub b_hat: f64,
    pub n_days: usize,
    pub n_months: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub options: AnalysisOptions,
    pub errors: Vec<FieldError>,
}

/// Growth, fluctuation and volatility parameters of one index.
///
/// `a` and `nu` are percent per trading day; `mu` and `sigma` percent;
/// `m` and `w` natural-log units per month.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub index_name: String,
    pub a: f64,
    pub mu: f64,
    pub sigma: f64,
    pub f0: Option<f64>,
    pub m: f64,
    pub w: f64,
    /// Absent when the source has no usable volume data.
    pub nu: Option<f64>,
    pub spike: VarianceSpike,
    pub diagnostics: Diagnostics,
}

/// A report together with the intermediate series it was computed from.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: RegularityReport,
    pub log_prices: Vec<(f64, f64)>,
    pub fluctuations: FluctuationSeries,
    pub histogram: Option<Histogram>,
    pub aggregates: Vec<MonthlyAggregate>,
    /// `(t, ln N)` over days with positive volume.
    pub log_volumes: Vec<(f64, f64)>,
}

pub fn analyze_index(series: &DailySeries, options: &AnalysisOptions) -> Result<RegularityReport> {
    analyze_index_detailed(series, options).map(|a| a.report)
}

/// Runs every estimator. Price-based fields (`a`, `μ`, `σ`, `m`, `w`) must
/// all succeed; the first failure among them is returned. Failures of `f0`
/// and `ν` are recorded in [`Diagnostics::errors`] instead.
pub fn analyze_index_detailed(series: &DailySeries, options: &AnalysisOptions) -> Result<Analysis> {
    if !(options.bin_width > 0.0) {
        return Err(Error::InvalidParams(format!(
            "bin width must be positive, got {}",
            options.bin_width
        )));
    }
    let log_prices = log_series(series)?;
    let (a, daily_fit) = fit_daily_growth(series)?;
    let fluctuations = daily_fluctuations(series)?;
    let (mu, sigma) = fluctuation_moments(&fluctuations)?;
    let aggregates = monthly_aggregates(series)?;
    let (m, monthly_fit) = fit_monthly_growth(&aggregates)?;
    let (w, variance_fit) = fit_variance_decline(&aggregates, options.variance_fit)?;
    let spike = detect_variance_spike(&aggregates)?;

    let mut errors = Vec::new();

    let histogram = build_histogram(&fluctuations, options.bin_width);
    let f0 = histogram
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|h| fit_gaussian_offset(h, mu, sigma).map_err(|e| e.to_string()));
    let f0 = match f0 {
        Ok(fit) => Some(fit.f0),
        Err(message) => {
            errors.push(FieldError { field: "f0", message });
            None
        }
    };

    let volume = fit_volume_growth(series);
    let (nu, volume_fit) = match volume {
        Ok((nu, fit)) => (Some(nu), Some(fit)),
        Err(e) => {
            errors.push(FieldError {
                field: "nu",
                message: e.to_string(),
            });
            (None, None)
        }
    };
    let log_volumes = series
        .records()
        .iter()
        .enumerate()
        .filter_map(|(k, r)| match r.volume {
            Some(v) if v > 0 => Some((k as f64, (v as f64).ln())),
            _ => None,
        })
        .collect();

    let records = series.records();
    let report = RegularityReport {
        index_name: series.index_name().to_owned(),
        a,
        mu,
        sigma,
        f0,
        m,
        w,
        nu,
        spike,
        diagnostics: Diagnostics {
            daily_growth: daily_fit,
            monthly_growth: monthly_fit,
            variance_decline: variance_fit,
            volume_growth: volume_fit,
            a_fraction: daily_fit.slope,
            nu_fraction: volume_fit.map(|f| f.slope),
            b_hat: sigma / 100.0,
            n_days: records.len(),
            n_months: aggregates.len(),
            first_date: records[0].date,
            last_date: records[records.len() - 1].date,
            options: *options,
            errors,
        },
    };

    Ok(Analysis {
        report,
        log_prices,
        fluctuations,
        histogram: histogram.ok(),
        aggregates,
        log_volumes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DailyRecord;
    use crate::simulator::{simulate_gbm, synthetic_date, GbmParams, VolatilitySchedule};
    use proptest::prelude::*;

    fn noiseless(n: usize, rate: f64, with_volume: bool) -> DailySeries {
        let records = (0..n)
            .map(|k| {
                let volume = with_volume.then(|| (1e6 * (0.0004 * k as f64).exp()).round() as u64);
                DailyRecord::new(synthetic_date(k), 1000.0 * (rate * k as f64).exp(), volume)
            })
            .collect();
        DailySeries::new("noiseless", records).unwrap()
    }

    #[test]
    fn noiseless_exponential_report() {
        let report = analyze_index(&noiseless(21 * 24, 0.0005, false), &AnalysisOptions::default()).unwrap();
        assert!((report.a - 0.05).abs() < 1e-9);
        // Every δ equals 100(e^0.0005 − 1).
        let delta = 100.0 * (0.0005f64.exp() - 1.0);
        assert!((report.mu - delta).abs() < 1e-9);
        assert!(report.sigma < 1e-9);
        assert!((report.m - 0.0105).abs() < 1e-9);
        assert!(report.w.abs() < 1e-9);
        assert_eq!(report.nu, None);
        // σ = 0 leaves no spread for the offset Gaussian; f0 is refused.
        assert_eq!(report.f0, None);
        let fields: Vec<_> = report.diagnostics.errors.iter().map(|e| e.field).collect();
        assert_eq!(fields, vec!["f0", "nu"]);
    }

    #[test]
    fn volume_is_reported_when_present() {
        let report = analyze_index(&noiseless(21 * 6, 0.0005, true), &AnalysisOptions::default()).unwrap();
        assert!((report.nu.unwrap() - 0.04).abs() < 1e-6);
        assert!(report.diagnostics.volume_growth.is_some());
    }

    #[test]
    fn too_few_months_fails() {
        let err = analyze_index(&noiseless(25, 0.0005, false), &AnalysisOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn simulated_gbm_recovers_parameters() {
        let (a, b, n) = (0.0003, 0.012, 5500);
        let params = GbmParams {
            a,
            b,
            s0: 1000.0,
            n_days: n,
            seed: 7,
            dt: 1.0,
        };
        let series = simulate_gbm(&params, &VolatilitySchedule::Constant).unwrap();
        let report = analyze_index(&series, &AnalysisOptions::default()).unwrap();

        // ln S drifts at ln(1 + a) − b²/2 per day to second order, and the
        // OLS slope of a random walk over n days has sd b·sqrt(1.2/n).
        let log_drift = a - b * b / 2.0;
        let slope_sd = b * (1.2 / n as f64).sqrt();
        assert!((report.diagnostics.a_fraction - log_drift).abs() < 3.0 * slope_sd);
        assert!((report.sigma - 100.0 * b).abs() < 0.05 * 100.0 * b);
        assert!((report.mu - 100.0 * a).abs() < 3.0 * report.sigma / (n as f64 - 1.0).sqrt());
        assert!(report.w.abs() < 3.0 * report.diagnostics.variance_decline.stderr_slope);
        assert!((report.m - 21.0 * log_drift).abs() < 3.0 * 21.0 * slope_sd);
        assert!(report.f0.unwrap() > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn slopes_are_scale_invariant(seed in any::<u64>(), c in 0.001f64..1000.0) {
            let params = GbmParams { a: 0.0004, b: 0.01, s0: 100.0, n_days: 300, seed, dt: 1.0 };
            let series = simulate_gbm(&params, &VolatilitySchedule::Constant).unwrap();
            let opts = AnalysisOptions::default();
            let base = analyze_index(&series, &opts).unwrap();
            let scaled = analyze_index(&series.scaled(c), &opts).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1e-12);
            prop_assert!(close(base.a, scaled.a));
            prop_assert!(close(base.mu, scaled.mu));
            prop_assert!(close(base.sigma, scaled.sigma));
            prop_assert!(close(base.m, scaled.m));
            // Σ² is tiny, so compare w on an absolute scale relative to Σ².
            prop_assert!((base.w - scaled.w).abs() <= 1e-10 * base.spike.variance);
        }

        #[test]
        fn slope_ignores_time_origin(seed in any::<u64>(), shift in -1e4f64..1e4) {
            let params = GbmParams { a: 0.0004, b: 0.01, s0: 100.0, n_days: 200, seed, dt: 1.0 };
            let series = simulate_gbm(&params, &VolatilitySchedule::Constant).unwrap();
            let pts = log_series(&series).unwrap();
            let shifted: Vec<(f64, f64)> = pts.iter().map(|&(t, y)| (t + shift, y)).collect();
            let f1 = crate::estimators::linear_least_squares(&pts).unwrap();
            let f2 = crate::estimators::linear_least_squares(&shifted).unwrap();
            prop_assert!((f1.slope - f2.slope).abs() <= 1e-9 * f1.slope.abs().max(1e-6));
        }
    }
}
