//! Seeded synthetic data with known generating parameters.
//!
//! Prices follow the discrete generalized Wiener step
//! `S_{k+1} = S_k (1 + a·Δt + b_k·ΔW_k)` with `ΔW_k = ε_k √Δt`. Synthetic
//! dates place exactly 21 trading days in every calendar month, starting
//! January 2000, so the monthly estimators see full months.

mod normal;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::{DailyRecord, DailySeries};

pub use normal::NormalSource;

pub const TRADING_DAYS_PER_MONTH: usize = 21;
const MAX_REDRAWS: usize = 1000;

/// `n` Wiener increments `ε_k √dt`.
pub fn wiener_increments(n: usize, dt: f64, seed: u64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    let scale = dt.sqrt();
    let mut src = NormalSource::new(seed);
    Ok((0..n).map(|_| src.next_standard() * scale).collect())
}

/// Trading day `k` of the synthetic calendar.
pub fn synthetic_date(k: usize) -> NaiveDate {
    let month = k / TRADING_DAYS_PER_MONTH;
    let day = (k % TRADING_DAYS_PER_MONTH) as u32 + 1;
    NaiveDate::from_ymd_opt(2000 + (month / 12) as i32, (month % 12) as u32 + 1, day)
        .expect("synthetic calendar stays within chrono's range")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    /// Drift, fraction per day.
    pub a: f64,
    /// Volatility, fraction per √day. Start value for decaying schedules.
    pub b: f64,
    pub s0: f64,
    /// Number of prices in the path, including `s0`.
    pub n_days: usize,
    pub seed: u64,
    /// Days per step.
    pub dt: f64,
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.s0 > 0.0) || !self.s0.is_finite() {
            return bad(format!("s0 must be positive, got {}", self.s0));
        }
        if !(self.b >= 0.0) || !self.b.is_finite() {
            return bad(format!("b must be non-negative, got {}", self.b));
        }
        if !self.a.is_finite() {
            return bad(format!("a must be finite, got {}", self.a));
        }
        if self.n_days < 1 {
            return bad("n_days must be at least 1".into());
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        Ok(())
    }
}

/// How `b` evolves along a path.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum VolatilitySchedule {
    /// `b_k = b` on every step.
    #[default]
    Constant,
    /// `b_k` falls linearly from `b` on the first step to `b_end` on the
    /// last.
    LinearDecay { b_end: f64 },
}

impl VolatilitySchedule {
    fn validate(&self, b_start: f64) -> Result<()> {
        match *self {
            VolatilitySchedule::Constant => Ok(()),
            VolatilitySchedule::LinearDecay { b_end } if b_end >= 0.0 && b_end <= b_start => Ok(()),
            VolatilitySchedule::LinearDecay { b_end } => Err(Error::InvalidParams(format!(
                "decay requires b ≥ b_end ≥ 0, got b = {b_start}, b_end = {b_end}"
            ))),
        }
    }

    /// Volatility on step `step` of `steps`.
    pub fn at(&self, b_start: f64, step: usize, steps: usize) -> f64 {
        match *self {
            VolatilitySchedule::Constant => b_start,
            VolatilitySchedule::LinearDecay { b_end } => {
                if steps <= 1 {
                    b_start
                } else {
                    let frac = step as f64 / (steps - 1) as f64;
                    b_start + (b_end - b_start) * frac
                }
            }
        }
    }
}

/// Simulates one price path on the synthetic calendar, named `"SIM"`.
///
/// A step whose draw would take the price to zero or below is redrawn from
/// the same stream; 1000 consecutive rejections fail the path.
pub fn simulate_gbm(params: &GbmParams, schedule: &VolatilitySchedule) -> Result<DailySeries> {
    params.validate()?;
    schedule.validate(params.b)?;

    let steps = params.n_days - 1;
    let sqrt_dt = params.dt.sqrt();
    let drift = params.a * params.dt;
    let mut src = NormalSource::new(params.seed);

    let mut records = Vec::with_capacity(params.n_days);
    let mut price = params.s0;
    records.push(DailyRecord::new(synthetic_date(0), price, None));
    for step in 0..steps {
        let b = schedule.at(params.b, step, steps);
        let mut attempts = 0;
        let next = loop {
            let candidate = price * (1.0 + drift + b * src.next_standard() * sqrt_dt);
            if candidate > 0.0 && candidate.is_finite() {
                break candidate;
            }
            attempts += 1;
            if attempts >= MAX_REDRAWS {
                return Err(Error::PathRejectionLimit { step });
            }
        };
        price = next;
        records.push(DailyRecord::new(synthetic_date(step + 1), price, None));
    }
    DailySeries::new("SIM", records)
}

/// `N_k = round(n0 · exp(ν k + η_k))` with `η_k ~ N(0, noise_sd²)`.
pub fn simulate_volume(nu: f64, n0: f64, noise_sd: f64, n_days: usize, seed: u64) -> Result<Vec<u64>> {
    if !(n0 >= 1.0) || !n0.is_finite() {
        return Err(Error::InvalidParams(format!("n0 must be at least 1, got {n0}")));
    }
    if !(noise_sd >= 0.0) || !noise_sd.is_finite() || !nu.is_finite() {
        return Err(Error::InvalidParams(format!(
            "need finite nu and noise_sd ≥ 0, got nu = {nu}, noise_sd = {noise_sd}"
        )));
    }
    let mut src = NormalSource::new(seed);
    Ok((0..n_days)
        .map(|k| {
            let eta = noise_sd * src.next_standard();
            (n0 * (nu * k as f64 + eta).exp()).round() as u64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{daily_fluctuations, fit_daily_growth, fit_volume_growth, fluctuation_moments};

    fn params(a: f64, b: f64, n_days: usize, seed: u64) -> GbmParams {
        GbmParams {
            a,
            b,
            s0: 1000.0,
            n_days,
            seed,
            dt: 1.0,
        }
    }

    fn mean_sd(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v.sqrt())
    }

    #[test]
    fn wiener_moments_and_scaling() {
        let w = wiener_increments(100_000, 1.0, 3).unwrap();
        let (m, sd) = mean_sd(&w);
        assert!(m.abs() < 3.0 / (1e5f64).sqrt());
        assert!((sd - 1.0).abs() < 0.01);

        let w4 = wiener_increments(100_000, 4.0, 4).unwrap();
        assert!((mean_sd(&w4).1 - 2.0).abs() < 0.02);
    }

    #[test]
    fn wiener_lag_one_autocorrelation() {
        let w = wiener_increments(100_000, 1.0, 8).unwrap();
        let (m, _) = mean_sd(&w);
        let num: f64 = w.windows(2).map(|p| (p[0] - m) * (p[1] - m)).sum();
        let den: f64 = w.iter().map(|x| (x - m).powi(2)).sum();
        assert!((num / den).abs() < 3.0 / (1e5f64).sqrt());
    }

    #[test]
    fn wiener_is_deterministic() {
        assert_eq!(wiener_increments(500, 1.0, 42).unwrap(), wiener_increments(500, 1.0, 42).unwrap());
        assert!(wiener_increments(5, 0.0, 1).is_err());
    }

    #[test]
    fn synthetic_calendar() {
        assert_eq!(synthetic_date(0), NaiveDate::from_ymd_opt(2000, 1, 1).unwrap());
        assert_eq!(synthetic_date(20), NaiveDate::from_ymd_opt(2000, 1, 21).unwrap());
        assert_eq!(synthetic_date(21), NaiveDate::from_ymd_opt(2000, 2, 1).unwrap());
        assert_eq!(synthetic_date(21 * 12), NaiveDate::from_ymd_opt(2001, 1, 1).unwrap());
    }

    #[test]
    fn zero_volatility_is_deterministic_compounding() {
        let a = 0.0005;
        let s = simulate_gbm(&params(a, 0.0, 400, 1), &VolatilitySchedule::Constant).unwrap();
        for (k, close) in s.closes().enumerate() {
            let exact = 1000.0 * (1.0 + a).powi(k as i32);
            assert!((close - exact).abs() <= 1e-12 * exact);
        }
        let (a_hat, _) = fit_daily_growth(&s).unwrap();
        assert!((a_hat - 100.0 * (1.0 + a).ln()).abs() < 1e-10);
    }

    #[test]
    fn flat_path() {
        let s = simulate_gbm(&params(0.0, 0.0, 50, 1), &VolatilitySchedule::Constant).unwrap();
        assert!(s.closes().all(|c| c == 1000.0));
    }

    #[test]
    fn fluctuation_moments_follow_step_law() {
        // E[δ] = 100·a·dt, sd[δ] = 100·b·√dt.
        let s = simulate_gbm(&params(0.0005, 0.015, 5000, 21), &VolatilitySchedule::Constant).unwrap();
        let (mu, sigma) = fluctuation_moments(&daily_fluctuations(&s).unwrap()).unwrap();
        assert!((mu - 0.05).abs() < 3.0 * 1.5 / 5000f64.sqrt());
        assert!((sigma - 1.5).abs() < 0.03 * 1.5);
    }

    #[test]
    fn paths_are_reproducible_and_positive() {
        let p = params(0.0003, 0.05, 3000, 77);
        let decay = VolatilitySchedule::LinearDecay { b_end: 0.01 };
        let s1 = simulate_gbm(&p, &decay).unwrap();
        let s2 = simulate_gbm(&p, &decay).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.closes().all(|c| c > 0.0));
    }

    #[test]
    fn absurd_volatility_hits_rejection_limit() {
        // 1 − 2 + 1e-6·ε > 0 needs ε > 1e6.
        let p = GbmParams {
            a: -2.0,
            b: 1e-6,
            ..params(0.0, 0.0, 10, 1)
        };
        assert!(matches!(
            simulate_gbm(&p, &VolatilitySchedule::Constant),
            Err(Error::PathRejectionLimit { step: 0 })
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(simulate_gbm(&GbmParams { s0: 0.0, ..params(0.0, 0.0, 5, 1) }, &VolatilitySchedule::Constant).is_err());
        assert!(simulate_gbm(&GbmParams { b: -0.1, ..params(0.0, 0.0, 5, 1) }, &VolatilitySchedule::Constant).is_err());
        assert!(simulate_gbm(&params(0.0, 0.0, 0, 1), &VolatilitySchedule::Constant).is_err());
        assert!(simulate_gbm(
            &params(0.0, 0.01, 5, 1),
            &VolatilitySchedule::LinearDecay { b_end: 0.02 }
        )
        .is_err());
    }

    #[test]
    fn decay_schedule_endpoints() {
        let s = VolatilitySchedule::LinearDecay { b_end: 0.005 };
        assert_eq!(s.at(0.02, 0, 101), 0.02);
        assert!((s.at(0.02, 100, 101) - 0.005).abs() < 1e-15);
        assert!((s.at(0.02, 50, 101) - 0.0125).abs() < 1e-15);
    }

    #[test]
    fn volume_paths() {
        let flat = simulate_volume(0.0, 5000.0, 0.0, 30, 1).unwrap();
        assert!(flat.iter().all(|&v| v == 5000));

        let base = simulate_gbm(&params(0.0, 0.0, 800, 1), &VolatilitySchedule::Constant).unwrap();
        let exact = simulate_volume(0.0004, 1e6, 0.0, 800, 1).unwrap();
        let (nu, _) = fit_volume_growth(&base.with_volumes(&exact).unwrap()).unwrap();
        assert!((nu - 0.04).abs() < 1e-6);

        let base = simulate_gbm(&params(0.0, 0.0, 5000, 1), &VolatilitySchedule::Constant).unwrap();
        let noisy = simulate_volume(0.0004, 1e6, 0.2, 5000, 31).unwrap();
        let (nu, fit) = fit_volume_growth(&base.with_volumes(&noisy).unwrap()).unwrap();
        assert!((nu - 0.04).abs() < 3.0 * 100.0 * fit.stderr_slope, "{nu}");

        assert!(simulate_volume(0.0, 0.5, 0.0, 3, 1).is_err());
        assert!(simulate_volume(0.0, 1.0, -1.0, 3, 1).is_err());
    }
}
