//! Daily percentage fluctuations, their moments, and the offset-Gaussian
//! profile `f(δ) = 1 + f0·exp(−(δ−μ)²/(2σ²))` fitted to their
//! unnormalized histogram.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{mean_and_population_std, DailySeries, FluctuationSeries};

pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

/// `δ_k = 100 (S_k − S_{k−1}) / S_{k−1}` for `k = 1..n`.
pub fn daily_fluctuations(series: &DailySeries) -> Result<FluctuationSeries> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(
            "fluctuations need at least 2 records".into(),
        ));
    }
    let records = series.records();
    let mut values = Vec::with_capacity(records.len() - 1);
    for (k, pair) in records.windows(2).enumerate() {
        let prev = pair[0].close;
        if !(prev > 0.0) {
            return Err(Error::NonPositivePrice { day: k });
        }
        values.push(100.0 * (pair[1].close - prev) / prev);
    }
    Ok(FluctuationSeries::new(series.index_name(), values))
}

/// Mean `μ = ⟨δ⟩` and population standard deviation
/// `σ = sqrt(⟨δ²⟩ − μ²)`, evaluated in two passes.
pub fn fluctuation_moments(fluct: &FluctuationSeries) -> Result<(f64, f64)> {
    if fluct.len() < 2 {
        return Err(Error::InsufficientData(
            "moments need at least 2 fluctuations".into(),
        ));
    }
    Ok(mean_and_population_std(fluct.values.iter().copied()))
}

/// Uniform-width histogram with raw (unnormalized) counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub origin: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Left edge of bin `i`; `edge(n_bins)` is the right edge of the last bin.
    pub fn edge(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.bin_width
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        (0..=self.n_bins()).map(|i| self.edge(i)).collect()
    }

    pub fn center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.bin_width
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin holding `x` under the left-closed, right-open convention, judged
    /// against the stored edges.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.origin) || x >= self.edge(self.n_bins()) {
            return None;
        }
        // The scaled offset can land one bin off the exact edge comparison.
        let mut i = (((x - self.origin) / self.bin_width).floor() as usize).min(self.n_bins() - 1);
        while i > 0 && x < self.edge(i) {
            i -= 1;
        }
        while i + 1 < self.n_bins() && x >= self.edge(i + 1) {
            i += 1;
        }
        Some(i)
    }

    /// `(center, count)` for every bin.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.center(i), c as f64))
            .collect()
    }
}

/// Bins `δ` on `[min δ − w, max δ + w]` with width `w`.
pub fn build_histogram(fluct: &FluctuationSeries, bin_width: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::InvalidParams(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if fluct.is_empty() {
        return Err(Error::InsufficientData("cannot bin an empty series".into()));
    }
    let (lo, hi) = fluct
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let origin = lo - bin_width;
    let n_bins = ((hi + bin_width - origin) / bin_width).ceil() as usize + 1;
    let mut hist = Histogram {
        origin,
        bin_width,
        counts: vec![0; n_bins],
    };
    for &v in &fluct.values {
        let i = hist
            .bin_of(v)
            .expect("bins span one width beyond the extremes");
        hist.counts[i] += 1;
    }
    Ok(hist)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianOffsetFit {
    pub mu: f64,
    pub sigma: f64,
    pub f0: f64,
}

impl GaussianOffsetFit {
    /// `1 + f0·exp(−(δ−μ)²/(2σ²))`.
    pub fn model(&self, delta: f64) -> f64 {
        1.0 + self.f0 * unit_gaussian(delta, self.mu, self.sigma)
    }
}

fn unit_gaussian(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp()
}

/// Fits `f0` against the histogram with `μ` and `σ` held fixed.
pub fn fit_gaussian_offset(hist: &Histogram, mu: f64, sigma: f64) -> Result<GaussianOffsetFit> {
    fit_gaussian_offset_points(&hist.points(), mu, sigma)
}

/// Closed-form least squares for `f0` over `(center, count)` points:
/// `f0 = Σ g_i (c_i − 1) / Σ g_i²`, where `g_i` is the unit Gaussian at the
/// center. Only the span from the first to the last occupied point
/// contributes; negative estimates are clamped to zero.
pub fn fit_gaussian_offset_points(
    points: &[(f64, f64)],
    mu: f64,
    sigma: f64,
) -> Result<GaussianOffsetFit> {
    if !(sigma > 0.0) {
        return Err(Error::DegenerateFit(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let occupied = points.iter().filter(|p| p.1 > 0.0).count();
    if occupied < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 occupied bins, got {occupied}"
        )));
    }
    let first = points.iter().position(|p| p.1 > 0.0).unwrap_or(0);
    let last = points.iter().rposition(|p| p.1 > 0.0).unwrap_or(0);

    let (num, den) = points[first..=last]
        .iter()
        .fold((0.0, 0.0), |(num, den), &(x, c)| {
            let g = unit_gaussian(x, mu, sigma);
            (num + g * (c - 1.0), den + g * g)
        });
    if den == 0.0 {
        return Err(Error::DegenerateFit(
            "Gaussian factor vanishes on every occupied bin".into(),
        ));
    }
    Ok(GaussianOffsetFit {
        mu,
        sigma,
        f0: (num / den).max(0.0),
    })
}
