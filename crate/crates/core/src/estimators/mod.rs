//! Parameter estimators: growth rates, fluctuation statistics, the
//! offset-Gaussian profile, variance decline and cross-index correlation.

mod analyze;
mod correlation;
mod fluctuation;
mod growth;
mod ols;
mod volatility;

pub use analyze::{
    analyze_index, analyze_index_detailed, Analysis, AnalysisOptions, Diagnostics, FieldError,
    RegularityReport,
};
pub use correlation::pearson_correlation;
pub use fluctuation::{
    build_histogram, daily_fluctuations, fit_gaussian_offset, fit_gaussian_offset_points,
    fluctuation_moments, GaussianOffsetFit, Histogram, DEFAULT_BIN_WIDTH,
};
pub use growth::{fit_daily_growth, fit_monthly_growth, fit_volume_growth};
pub use ols::{fit_line, least_squares_through_origin, linear_least_squares, FitMode, FitResult};
pub use volatility::{detect_variance_spike, fit_variance_decline, VarianceSpike};
