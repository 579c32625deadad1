//! Long-run regularities of stock index data.
//!
//! Given a daily closing-price series (and optionally traded volume) this
//! crate estimates:
//!
//! | parameter | meaning                                            | unit              |
//! |-----------|----------------------------------------------------|-------------------|
//! | `a`       | exponential growth rate of the price               | % per trading day |
//! | `μ`, `σ`  | mean and spread of daily percentage changes `δ`    | %                 |
//! | `f0`      | amplitude of `1 + f0·exp(−(δ−μ)²/2σ²)` on the `δ` histogram | count    |
//! | `m`       | growth of the monthly mean of `ln S`               | per month         |
//! | `w`       | trend of the monthly variance of `ln S`            | per month         |
//! | `ν`       | exponential growth rate of daily volume            | % per trading day |
//!
//! The [`simulator`] generates paths from `ΔS/S = a·Δt + b·ΔW` with known
//! parameters, and [`selftest`] checks every estimator against it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod ingest;
pub mod plots;
pub mod report;
pub mod selftest;
pub mod series;
pub mod simulator;

pub use error::{Error, Result};
pub use estimators::{analyze_index, AnalysisOptions, FitMode, FitResult, RegularityReport};
pub use series::{DailyRecord, DailySeries, FluctuationSeries, MonthlyAggregate};
