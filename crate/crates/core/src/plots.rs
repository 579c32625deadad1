//! Tab-separated plot data, one file per figure-style view of an index.
//!
//! Every file opens with `#` comment lines naming the axes and units, and
//! the fitted parameter printed with the same formatting as `report.json`.

use std::fmt::Write as _;

use crate::estimators::{Analysis, FitResult};
use crate::report::format_number;

pub struct PlotFile {
    pub name: &'static str,
    pub contents: String,
}

fn fmt(x: f64) -> String {
    format_number(x).unwrap_or_else(|| "NA".into())
}

fn header(out: &mut String, index: &str, lines: &[String], columns: &[&str]) {
    let _ = writeln!(out, "# index: {index}");
    for line in lines {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{}", columns.join("\t"));
}

fn fitted_line_file(
    name: &'static str,
    index: &str,
    lines: &[String],
    columns: &[&str],
    points: &[(f64, f64)],
    fit: &FitResult,
) -> PlotFile {
    let mut contents = String::new();
    header(&mut contents, index, lines, columns);
    for &(x, y) in points {
        let _ = writeln!(contents, "{}\t{}\t{}", fmt(x), fmt(y), fmt(fit.predict(x)));
    }
    PlotFile { name, contents }
}

pub fn plot_files(analysis: &Analysis) -> Vec<PlotFile> {
    let report = &analysis.report;
    let d = &report.diagnostics;
    let index = report.index_name.as_str();
    let origin = d.first_date;
    let mut files = Vec::with_capacity(6);

    files.push(fitted_line_file(
        "daily_log_price.tsv",
        index,
        &[
            format!("x: t, trading days since {origin}; y: ln S"),
            format!("a = {} percent per day", fmt(report.a)),
        ],
        &["t", "ln_close", "fit"],
        &analysis.log_prices,
        &d.daily_growth,
    ));

    let mut contents = String::new();
    header(
        &mut contents,
        index,
        &[
            format!("x: t, trading days since {origin}; y: delta, percent"),
            format!("mu = {} percent; sigma = {} percent", fmt(report.mu), fmt(report.sigma)),
        ],
        &["t", "delta", "mu"],
    );
    for (k, &delta) in analysis.fluctuations.values.iter().enumerate() {
        let _ = writeln!(contents, "{}\t{}\t{}", k + 1, fmt(delta), fmt(report.mu));
    }
    files.push(PlotFile {
        name: "fluctuation_series.tsv",
        contents,
    });

    let mut contents = String::new();
    header(
        &mut contents,
        index,
        &[
            "x: delta bin, percent; y: unnormalized count".into(),
            format!(
                "model: 1 + f0 exp(-(delta - mu)^2 / (2 sigma^2)); f0 = {}",
                report.f0.map_or_else(|| "NA".into(), fmt)
            ),
        ],
        &["bin_left", "bin_center", "count", "model"],
    );
    if let Some(hist) = &analysis.histogram {
        let model = report.f0.map(|f0| crate::estimators::GaussianOffsetFit {
            mu: report.mu,
            sigma: report.sigma,
            f0,
        });
        for (i, &count) in hist.counts.iter().enumerate() {
            let center = hist.center(i);
            let fitted = model.map_or_else(|| "NA".into(), |m| fmt(m.model(center)));
            let _ = writeln!(contents, "{}\t{}\t{count}\t{fitted}", fmt(hist.edge(i)), fmt(center));
        }
    }
    files.push(PlotFile {
        name: "fluctuation_histogram.tsv",
        contents,
    });

    let monthly = |y: fn(&crate::series::MonthlyAggregate) -> f64| -> Vec<(f64, f64)> {
        analysis.aggregates.iter().map(|a| (a.tau as f64, y(a))).collect()
    };
    files.push(fitted_line_file(
        "monthly_mean_log.tsv",
        index,
        &[
            "x: tau, months; y: monthly mean of ln S".into(),
            format!("m = {} per month", fmt(report.m)),
        ],
        &["tau", "mean_log", "fit"],
        &monthly(|a| a.mean_log),
        &d.monthly_growth,
    ));
    files.push(fitted_line_file(
        "monthly_variance.tsv",
        index,
        &[
            "x: tau, months; y: monthly variance of ln S".into(),
            format!("w = {} per month", fmt(report.w)),
        ],
        &["tau", "variance", "fit"],
        &monthly(|a| a.variance()),
        &d.variance_decline,
    ));

    if let (Some(nu), Some(fit)) = (report.nu, d.volume_growth.as_ref()) {
        files.push(fitted_line_file(
            "daily_log_volume.tsv",
            index,
            &[
                format!("x: t, trading days since {origin}; y: ln N"),
                format!("nu = {} percent per day", fmt(nu)),
            ],
            &["t", "ln_volume", "fit"],
            &analysis.log_volumes,
            fit,
        ));
    }
    files
}
