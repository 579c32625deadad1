//! Simulator-oracle suite: simulate with known parameters, estimate, and
//! compare against the generating values.
//!
//! Statistical tolerances are three standard deviations of the estimator
//! under the simulated model. For the log-price slope that is the spread
//! of an OLS slope fitted to a random walk, `b·sqrt(1.2/n)`, centred on the
//! log drift `a − b²/2`.

use crate::estimators::{
    analyze_index, fit_daily_growth, fit_gaussian_offset_points, fit_monthly_growth,
    fit_volume_growth, AnalysisOptions,
};
use crate::ingest::{parse_daily_file, write_canonical, IngestConfig};
use crate::series::{monthly_aggregates, DailyRecord, DailySeries};
use crate::simulator::{
    simulate_gbm, simulate_volume, synthetic_date, wiener_increments, GbmParams,
    VolatilitySchedule, TRADING_DAYS_PER_MONTH,
};

pub const DEFAULT_SEED: u64 = 20_190_430;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Multiplies every statistical tolerance. Values below 1 tighten.
    pub tolerance_scale: f64,
    /// Added to the generating drift on the expectation side only
    /// (fraction per day); a nonzero value must make the drift checks fail.
    pub drift_offset: f64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerance_scale: 1.0,
            drift_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn failed(name: &'static str, err: impl std::fmt::Display) -> CheckOutcome {
    check(name, false, format!("error: {err}"))
}

pub fn run_selftest(config: &SelftestConfig) -> Vec<CheckOutcome> {
    let s = config.tolerance_scale;
    let seed = config.seed;
    let mut out = Vec::new();

    out.extend(wiener_checks(seed, s));
    out.push(deterministic_drift(config));
    out.extend(gbm_checks(config));
    out.push(monthly_identity());
    out.extend(variance_trend_checks(seed, s));
    out.push(volume_check(seed, s));
    out.push(offset_gaussian());
    out.push(pipeline_determinism(seed));
    out
}

fn sample_mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn wiener_checks(seed: u64, s: f64) -> Vec<CheckOutcome> {
    let n = 100_000;
    let bound = 3.0 / (n as f64).sqrt();
    let (w1, w4) = match (wiener_increments(n, 1.0, seed), wiener_increments(n, 4.0, seed ^ 4)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return vec![failed("wiener increments", e)],
    };
    let (mean, sd) = sample_mean_sd(&w1);
    let num: f64 = w1.windows(2).map(|p| (p[0] - mean) * (p[1] - mean)).sum();
    let den: f64 = w1.iter().map(|x| (x - mean).powi(2)).sum();
    let lag1 = num / den;
    let (_, sd4) = sample_mean_sd(&w4);
    vec![
        check(
            "wiener mean and unit variance",
            mean.abs() < bound * s && (sd - 1.0).abs() < 0.01 * s,
            format!("mean {mean:.5} (|.| < {:.5}), sd {sd:.5} (1 ± {:.4})", bound * s, 0.01 * s),
        ),
        check(
            "wiener sqrt(dt) scaling",
            (sd4 - 2.0).abs() < 0.02 * s,
            format!("sd at dt=4 {sd4:.5} (2 ± {:.4})", 0.02 * s),
        ),
        check(
            "wiener independence",
            lag1.abs() < bound * s,
            format!("lag-1 autocorrelation {lag1:.5} (|.| < {:.5})", bound * s),
        ),
    ]
}

fn deterministic_drift(config: &SelftestConfig) -> CheckOutcome {
    let name = "zero-volatility drift";
    let a = 0.0005;
    let params = GbmParams {
        a,
        b: 0.0,
        s0: 1000.0,
        n_days: 1000,
        seed: config.seed,
        dt: 1.0,
    };
    let result = simulate_gbm(&params, &VolatilitySchedule::Constant).and_then(|p| fit_daily_growth(&p));
    match result {
        Ok((a_hat, _)) => {
            let expected = 100.0 * (1.0 + a + config.drift_offset).ln();
            check(
                name,
                (a_hat - expected).abs() < 1e-9,
                format!("a {a_hat:.9} vs {expected:.9} percent/day"),
            )
        }
        Err(e) => failed(name, e),
    }
}

fn gbm_checks(config: &SelftestConfig) -> Vec<CheckOutcome> {
    let s = config.tolerance_scale;
    let (a, b, n) = (0.0003, 0.012, 5500);
    let params = GbmParams {
        a,
        b,
        s0: 1000.0,
        n_days: n,
        seed: config.seed.wrapping_add(1),
        dt: 1.0,
    };
    let report = match simulate_gbm(&params, &VolatilitySchedule::Constant)
        .and_then(|p| analyze_index(&p, &AnalysisOptions::default()))
    {
        Ok(r) => r,
        Err(e) => return vec![failed("gbm recovery", e)],
    };

    let log_drift = a + config.drift_offset - b * b / 2.0;
    let slope_sd = b * (1.2 / n as f64).sqrt();
    let a_hat = report.diagnostics.a_fraction;
    let mu_tol = 3.0 * report.sigma / ((n - 1) as f64).sqrt() * s;
    vec![
        check(
            "gbm log-drift recovery",
            (a_hat - log_drift).abs() < 3.0 * slope_sd * s,
            format!(
                "slope {a_hat:.6} vs a - b^2/2 = {log_drift:.6} (± {:.6})",
                3.0 * slope_sd * s
            ),
        ),
        check(
            "gbm sigma recovery",
            (report.sigma - 100.0 * b).abs() < 0.05 * 100.0 * b * s,
            format!("sigma {:.4} vs {:.4} (± {:.4})", report.sigma, 100.0 * b, 5.0 * b * s),
        ),
        check(
            "gbm mu recovery",
            (report.mu - 100.0 * (a + config.drift_offset)).abs() < mu_tol,
            format!(
                "mu {:.5} vs {:.5} (± {mu_tol:.5})",
                report.mu,
                100.0 * (a + config.drift_offset)
            ),
        ),
    ]
}

fn noiseless_months(rate: f64, months: usize) -> DailySeries {
    let records = (0..months * TRADING_DAYS_PER_MONTH)
        .map(|k| DailyRecord::new(synthetic_date(k), 500.0 * (rate * k as f64).exp(), None))
        .collect();
    DailySeries::new("noiseless", records).expect("synthetic dates increase")
}

fn monthly_identity() -> CheckOutcome {
    let name = "monthly growth identity m = 21 a";
    let rate = 0.0005;
    let result = monthly_aggregates(&noiseless_months(rate, 48)).and_then(|a| fit_monthly_growth(&a));
    match result {
        Ok((m, _)) => {
            let expected = rate * TRADING_DAYS_PER_MONTH as f64;
            check(name, (m - expected).abs() < 1e-9, format!("m {m:.10} vs {expected:.10}"))
        }
        Err(e) => failed(name, e),
    }
}

fn variance_trend_checks(seed: u64, s: f64) -> Vec<CheckOutcome> {
    let n = 240 * TRADING_DAYS_PER_MONTH;
    let params = |b, seed| GbmParams {
        a: 0.0003,
        b,
        s0: 1000.0,
        n_days: n,
        seed,
        dt: 1.0,
    };
    let opts = AnalysisOptions::default();
    let constant = simulate_gbm(&params(0.012, seed.wrapping_add(2)), &VolatilitySchedule::Constant)
        .and_then(|p| analyze_index(&p, &opts));
    let decay = simulate_gbm(
        &params(0.02, seed.wrapping_add(3)),
        &VolatilitySchedule::LinearDecay { b_end: 0.005 },
    )
    .and_then(|p| analyze_index(&p, &opts));

    let mut out = Vec::new();
    match constant {
        Ok(r) => {
            let se = r.diagnostics.variance_decline.stderr_slope;
            out.push(check(
                "constant-b variance has no trend",
                r.w.abs() < 3.0 * se * s,
                format!("w {:.3e} (|.| < {:.3e})", r.w, 3.0 * se * s),
            ));
        }
        Err(e) => out.push(failed("constant-b variance has no trend", e)),
    }
    match decay {
        Ok(r) => {
            let se = r.diagnostics.variance_decline.stderr_slope;
            out.push(check(
                "decaying-b variance declines",
                r.w < 0.0 && r.w.abs() > 3.0 * se / s,
                format!("w {:.3e} (< -{:.3e})", r.w, 3.0 * se / s),
            ));
        }
        Err(e) => out.push(failed("decaying-b variance declines", e)),
    }
    out
}

fn volume_check(seed: u64, s: f64) -> CheckOutcome {
    let name = "volume growth recovery";
    let n = 5000;
    let params = GbmParams {
        a: 0.0003,
        b: 0.01,
        s0: 1000.0,
        n_days: n,
        seed: seed.wrapping_add(5),
        dt: 1.0,
    };
    let result = simulate_gbm(&params, &VolatilitySchedule::Constant).and_then(|p| {
        let volumes = simulate_volume(0.0004, 1e6, 0.2, n, seed.wrapping_add(6))?;
        fit_volume_growth(&p.with_volumes(&volumes)?)
    });
    match result {
        Ok((nu, fit)) => {
            let tol = 3.0 * 100.0 * fit.stderr_slope * s;
            check(
                name,
                (nu - 0.04).abs() < tol,
                format!("nu {nu:.5} vs 0.04 (± {tol:.5}) percent/day"),
            )
        }
        Err(e) => failed(name, e),
    }
}

fn offset_gaussian() -> CheckOutcome {
    let name = "offset-Gaussian amplitude and unit floor";
    let points: Vec<(f64, f64)> = (-6..=6)
        .map(|i| {
            let c = 0.5 * i as f64;
            (c, 1.0 + 100.0 * (-c * c / 2.0).exp())
        })
        .collect();
    match fit_gaussian_offset_points(&points, 0.0, 1.0) {
        Ok(fit) => {
            let tail = fit.model(8.0) - 1.0;
            check(
                name,
                (fit.f0 - 100.0).abs() < 1e-9 && tail.abs() < 1e-10,
                format!("f0 {:.12}, f(8 sigma) - 1 = {tail:.3e}", fit.f0),
            )
        }
        Err(e) => failed(name, e),
    }
}

/// Simulates, writes the canonical file, parses it back and renders the
/// report JSON.
pub fn pipeline_report(seed: u64) -> crate::Result<String> {
    let params = GbmParams {
        a: 0.0004,
        b: 0.011,
        s0: 2500.0,
        n_days: 1500,
        seed,
        dt: 1.0,
    };
    let series = simulate_gbm(&params, &VolatilitySchedule::Constant)?;
    let volumes = simulate_volume(0.0004, 1e6, 0.2, params.n_days, seed.wrapping_add(1))?;
    let series = series.with_volumes(&volumes)?;
    let mut file = Vec::new();
    write_canonical(&series, &mut file)?;
    let parsed = parse_daily_file(file.as_slice(), "SIM", &IngestConfig::default())?;
    let report = analyze_index(&parsed, &AnalysisOptions::default())?;
    Ok(crate::report::render(&[report]))
}

fn pipeline_determinism(seed: u64) -> CheckOutcome {
    let name = "pipeline determinism";
    match (pipeline_report(seed), pipeline_report(seed)) {
        (Ok(a), Ok(b)) => check(name, a == b, format!("{} bytes, identical: {}", a.len(), a == b)),
        (Err(e), _) | (_, Err(e)) => failed(name, e),
    }
}
