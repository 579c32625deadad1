use marketreg::estimators::{analyze_index_detailed, AnalysisOptions, FitMode};
use marketreg::ingest::{parse_daily_file, validate_series, write_canonical, IngestConfig};
use marketreg::plots::plot_files;
use marketreg::report::{document, format_number, render};
use marketreg::series::monthly_aggregates;
use marketreg::simulator::{simulate_gbm, simulate_volume, GbmParams, VolatilitySchedule};

fn gbm(a: f64, b: f64, n_days: usize, seed: u64) -> GbmParams {
    GbmParams {
        a,
        b,
        s0: 1000.0,
        n_days,
        seed,
        dt: 1.0,
    }
}

#[test]
fn monthly_dispersion_matches_brute_force_and_random_walk_law() {
    let b = 0.015;
    let series = simulate_gbm(&gbm(0.0005, b, 24 * 21, 404), &VolatilitySchedule::Constant).unwrap();
    let aggs = monthly_aggregates(&series).unwrap();
    assert_eq!(aggs.len(), 24);

    // Brute force: every month recomputed from the raw path.
    let closes: Vec<f64> = series.closes().collect();
    for (i, agg) in aggs.iter().enumerate() {
        let month: Vec<f64> = closes[i * 21..(i + 1) * 21].iter().map(|c| c.ln()).collect();
        let mean = month.iter().sum::<f64>() / 21.0;
        let var = month.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 21.0;
        assert!((agg.mean_log - mean).abs() < 1e-12);
        assert!((agg.std_log - var.sqrt()).abs() < 1e-12);
    }

    // A random walk with step variance v, observed at n points, has expected
    // population variance v(n² − 1)/(6n); for n = 21 that is 3.492·v.
    let expected = b * b * (21.0 * 21.0 - 1.0) / (6.0 * 21.0);
    let v: Vec<f64> = aggs.iter().map(|a| a.variance()).collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)).sqrt();
    let se = sd / (v.len() as f64).sqrt();
    assert!((mean - expected).abs() < 3.0 * se, "{mean} vs {expected} ± {}", 3.0 * se);
}

#[test]
fn simulate_file_parse_analyze() {
    let n = 3000;
    let series = simulate_gbm(&gbm(0.0004, 0.011, n, 9), &VolatilitySchedule::Constant).unwrap();
    let volumes = simulate_volume(0.0004, 2e6, 0.15, n, 10).unwrap();
    let series = series.with_volumes(&volumes).unwrap();

    let mut file = Vec::new();
    write_canonical(&series, &mut file).unwrap();
    let text = String::from_utf8(file.clone()).unwrap();
    assert!(text.starts_with("Date,Close,Volume\n2000-01-01,1000,"));

    let parsed = parse_daily_file(file.as_slice(), "SIM", &IngestConfig::default()).unwrap();
    assert_eq!(parsed, series);
    let summary = validate_series(&parsed);
    assert_eq!((summary.n_records, summary.bad_prices, summary.missing_volumes), (n, 0, 0));

    let analysis = analyze_index_detailed(&parsed, &AnalysisOptions::default()).unwrap();
    let r = &analysis.report;
    assert!(r.nu.is_some() && r.f0.is_some());
    assert!(r.diagnostics.errors.is_empty());
    assert_eq!(analysis.aggregates.len(), r.diagnostics.n_months);
}

#[test]
fn plot_slopes_match_report_text() {
    let n = 2000;
    let series = simulate_gbm(&gbm(0.0003, 0.01, n, 12), &VolatilitySchedule::Constant).unwrap();
    let series = series.with_volumes(&simulate_volume(0.0004, 1e6, 0.2, n, 13).unwrap()).unwrap();
    let analysis = analyze_index_detailed(&series, &AnalysisOptions::default()).unwrap();
    let doc = document(std::slice::from_ref(&analysis.report));
    let index = &doc["indices"][0];

    let files = plot_files(&analysis);
    let names: Vec<_> = files.iter().map(|f| f.name).collect();
    assert_eq!(
        names,
        [
            "daily_log_price.tsv",
            "fluctuation_series.tsv",
            "fluctuation_histogram.tsv",
            "monthly_mean_log.tsv",
            "monthly_variance.tsv",
            "daily_log_volume.tsv",
        ]
    );
    for (file, key) in [
        ("daily_log_price.tsv", "a"),
        ("monthly_mean_log.tsv", "m"),
        ("monthly_variance.tsv", "w"),
        ("daily_log_volume.tsv", "nu"),
    ] {
        let contents = &files.iter().find(|f| f.name == file).unwrap().contents;
        let embedded = contents
            .lines()
            .find_map(|l| l.strip_prefix(&format!("# {key} = ")))
            .and_then(|rest| rest.split_whitespace().next())
            .unwrap();
        assert_eq!(embedded, index[key].to_string(), "{file}");
    }

    // Fitted column of the daily plot is the report's line.
    let daily = &files[0].contents;
    let first_row: Vec<&str> = daily.lines().find(|l| l.starts_with("0\t")).unwrap().split('\t').collect();
    let fit = analysis.report.diagnostics.daily_growth;
    assert_eq!(first_row[2], format_number(fit.intercept).unwrap());
}

#[test]
fn no_volume_report_uses_null_and_dash() {
    let series = simulate_gbm(&gbm(0.0003, 0.01, 400, 3), &VolatilitySchedule::Constant).unwrap();
    let analysis = analyze_index_detailed(&series, &AnalysisOptions::default()).unwrap();
    let doc = document(std::slice::from_ref(&analysis.report));
    assert!(doc["indices"][0]["nu"].is_null());
    assert_eq!(doc["indices"][0]["table_row"]["nu"], "-");
    assert!(doc["a_m_correlation"].is_null());
    assert_eq!(plot_files(&analysis).len(), 5);
}

#[test]
fn correlation_appears_with_three_indices() {
    let reports: Vec<_> = [(0.0002, 1), (0.0004, 2), (0.0006, 3)]
        .iter()
        .map(|&(a, seed)| {
            let s = simulate_gbm(&gbm(a, 0.002, 1500, seed), &VolatilitySchedule::Constant).unwrap();
            analyze_index_detailed(&s, &AnalysisOptions::default()).unwrap().report
        })
        .collect();
    let doc = document(&reports);
    let r = doc["a_m_correlation"].as_f64().unwrap();
    assert!(r > 0.9, "{r}");
}

#[test]
fn origin_mode_is_recorded() {
    let series = simulate_gbm(&gbm(0.0003, 0.01, 600, 4), &VolatilitySchedule::Constant).unwrap();
    let opts = AnalysisOptions {
        variance_fit: FitMode::Origin,
        ..AnalysisOptions::default()
    };
    let analysis = analyze_index_detailed(&series, &opts).unwrap();
    assert_eq!(analysis.report.diagnostics.variance_decline.intercept, 0.0);
    let text = render(&[analysis.report]);
    assert!(text.contains("\"variance_fit_mode\": \"origin\""));
}
