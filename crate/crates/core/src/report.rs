//! `report.json` assembly.
//!
//! Fields follow the column order of the classic summary table (a, μ, σ,
//! m, w, ν) with units listed once under `"units"`. Numbers are written
//! with [`format_number`] so identical inputs give byte-identical files.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use crate::estimators::{pearson_correlation, FitMode, FitResult, RegularityReport};

/// Minimum number of indices before the cross-index a–m correlation is
/// reported.
pub const MIN_INDICES_FOR_CORRELATION: usize = 3;

/// Shortest round-trip decimal, switching to scientific notation for
/// nonzero `|x| < 1e−3`. Non-finite values have no representation.
pub fn format_number(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some("0".into());
    }
    if x.abs() < 1e-3 {
        Some(format!("{x:e}"))
    } else {
        Some(format!("{x}"))
    }
}

fn num(x: f64) -> Value {
    format_number(x)
        .and_then(|s| Number::from_str(&s).ok())
        .map_or(Value::Null, Value::Number)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn fit_json(fit: &FitResult) -> Value {
    json!({
        "slope": num(fit.slope),
        "intercept": num(fit.intercept),
        "stderr_slope": num(fit.stderr_slope),
        "r_squared": num(fit.r_squared),
        "n": fit.n,
    })
}

/// Values rounded to the precision of the printed summary table; `"-"`
/// marks a missing ν.
pub fn table_row(report: &RegularityReport) -> Value {
    json!({
        "a": format!("{:.2}", report.a),
        "mu": format!("{:.3}", report.mu),
        "sigma": format!("{:.3}", report.sigma),
        "m": format!("{:.3}", report.m),
        "w": format!("{:.2e}", report.w),
        "nu": report.nu.map_or_else(|| "-".to_owned(), |nu| format!("{nu:.2}")),
    })
}

pub fn report_json(report: &RegularityReport) -> Value {
    let d = &report.diagnostics;
    let errors: Map<String, Value> = d
        .errors
        .iter()
        .map(|e| (e.field.to_owned(), Value::String(e.message.clone())))
        .collect();
    json!({
        "index": report.index_name,
        "a": num(report.a),
        "mu": num(report.mu),
        "sigma": num(report.sigma),
        "m": num(report.m),
        "w": num(report.w),
        "nu": opt_num(report.nu),
        "f0": opt_num(report.f0),
        "variance_spike": {
            "tau": report.spike.tau,
            "month": format!("{:04}-{:02}", report.spike.year, report.spike.month),
            "variance": num(report.spike.variance),
        },
        "table_row": table_row(report),
        "diagnostics": {
            "first_date": d.first_date.to_string(),
            "last_date": d.last_date.to_string(),
            "n_days": d.n_days,
            "n_months": d.n_months,
            "a_fraction_per_day": num(d.a_fraction),
            "nu_fraction_per_day": opt_num(d.nu_fraction),
            "b_hat_per_sqrt_day": num(d.b_hat),
            "bin_width": num(d.options.bin_width),
            "variance_fit_mode": match d.options.variance_fit {
                FitMode::Intercept => "intercept",
                FitMode::Origin => "origin",
            },
            "fits": {
                "daily_growth": fit_json(&d.daily_growth),
                "monthly_growth": fit_json(&d.monthly_growth),
                "variance_decline": fit_json(&d.variance_decline),
                "volume_growth": d.volume_growth.as_ref().map_or(Value::Null, fit_json),
            },
            "errors": errors,
        },
    })
}

/// Pearson r between the `a` and `m` columns, when enough indices exist.
pub fn a_m_correlation(reports: &[RegularityReport]) -> Option<f64> {
    if reports.len() < MIN_INDICES_FOR_CORRELATION {
        return None;
    }
    let a: Vec<f64> = reports.iter().map(|r| r.a).collect();
    let m: Vec<f64> = reports.iter().map(|r| r.m).collect();
    pearson_correlation(&a, &m).ok()
}

pub fn document(reports: &[RegularityReport]) -> Value {
    json!({
        "units": {
            "a": "percent per trading day",
            "mu": "percent",
            "sigma": "percent",
            "m": "ln units per month",
            "w": "ln units squared per month",
            "nu": "percent per trading day",
            "f0": "count",
        },
        "indices": reports.iter().map(report_json).collect::<Vec<_>>(),
        "a_m_correlation": opt_num(a_m_correlation(reports)),
    })
}

/// Pretty-printed document with a trailing newline.
pub fn render(reports: &[RegularityReport]) -> String {
    let mut text = serde_json::to_string_pretty(&document(reports))
        .expect("serializing a JSON value cannot fail");
    text.push('\n');
    text
}
