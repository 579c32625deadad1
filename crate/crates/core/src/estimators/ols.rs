use serde::Serialize;

use crate::error::{Error, Result};

/// Whether a straight-line fit carries an intercept term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMode {
    #[default]
    Intercept,
    Origin,
}

/// Result of a least-squares straight-line fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    /// Centered R² for intercept fits, uncentered for origin fits.
    pub r_squared: f64,
    pub n: usize,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares `y = intercept + slope·x`.
///
/// `stderr_slope = sqrt(SSR / (n − 2) / Sxx)`; it is zero when `n = 2`.
pub fn linear_least_squares(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "least squares needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / nf;

    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - x_mean;
        let dy = y - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateX);
    }

    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();

    Ok(FitResult {
        slope,
        intercept,
        stderr_slope: if n > 2 {
            (ssr / (nf - 2.0) / sxx).sqrt()
        } else {
            0.0
        },
        r_squared: r_squared(ssr, syy),
        n,
    })
}

/// Least squares through the origin, `y = slope·x`.
pub fn least_squares_through_origin(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "least squares needs at least 2 points, got {n}"
        )));
    }
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateX);
    }
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let syy: f64 = points.iter().map(|p| p.1 * p.1).sum();
    let slope = sxy / sxx;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y)| (y - slope * x).powi(2))
        .sum();
    Ok(FitResult {
        slope,
        intercept: 0.0,
        stderr_slope: (ssr / (n as f64 - 1.0) / sxx).sqrt(),
        r_squared: r_squared(ssr, syy),
        n,
    })
}

pub fn fit_line(points: &[(f64, f64)], mode: FitMode) -> Result<FitResult> {
    match mode {
        FitMode::Intercept => linear_least_squares(points),
        FitMode::Origin => least_squares_through_origin(points),
    }
}

fn r_squared(ssr: f64, total: f64) -> f64 {
    if total > 0.0 {
        (1.0 - ssr / total).clamp(0.0, 1.0)
    } else {
        // Constant response: any residual-free line explains it fully.
        1.0
    }
}
