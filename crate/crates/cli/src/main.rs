#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use marketreg::estimators::{analyze_index_detailed, Analysis, AnalysisOptions, FitMode};
use marketreg::ingest::{parse_daily_file, write_canonical, IngestConfig};
use marketreg::plots::plot_files;
use marketreg::report;
use marketreg::selftest::{run_selftest, SelftestConfig, DEFAULT_SEED};
use marketreg::simulator::{simulate_gbm, simulate_volume, GbmParams, VolatilitySchedule};
use marketreg::{DailySeries, Error};

const EXIT_INPUT: u8 = 2;
const EXIT_ESTIMATION: u8 = 3;
const EXIT_SELFTEST: u8 = 4;

/// Below this many trading days the fitted rates drift noticeably with the
/// window; analysis proceeds with a warning.
const SHORT_HISTORY_DAYS: usize = 1000;

#[derive(Parser)]
#[command(name = "marketreg", version, about = "Growth, fluctuation and volatility regularities of stock indices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a, mu, sigma, f0, m, w and nu for each input file.
    Analyze(AnalyzeArgs),
    /// Write a simulated daily series in the canonical file format.
    Simulate(SimulateArgs),
    /// Run the simulator-oracle suite.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceFit {
    Intercept,
    Origin,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Histogram bin width, percent.
    #[arg(long, default_value_t = 0.1)]
    bin_width: f64,
    #[arg(long, value_enum, default_value = "intercept")]
    variance_fit: VarianceFit,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write tab-separated plot data per index.
    #[arg(long)]
    plots: bool,
    #[command(flatten)]
    ingest: IngestArgs,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long, default_value = "Date")]
    date_column: String,
    #[arg(long, default_value = "Close")]
    price_column: String,
    /// Volume column; required to exist when given. Without it a `Volume`
    /// column is used if present.
    #[arg(long)]
    volume_column: Option<String>,
    #[arg(long, default_value = "%Y-%m-%d")]
    date_format: String,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    #[arg(long)]
    decimal_comma: bool,
}

impl IngestArgs {
    fn config(&self) -> IngestConfig {
        let defaults = IngestConfig::default();
        IngestConfig {
            date_column: self.date_column.clone(),
            price_column: self.price_column.clone(),
            require_volume: self.volume_column.is_some(),
            volume_column: self.volume_column.clone().or(defaults.volume_column),
            date_format: self.date_format.clone(),
            delimiter: self.delimiter,
            decimal_comma: self.decimal_comma,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Drift, fraction per day.
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Volatility, fraction per sqrt(day).
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 1000.0)]
    s0: f64,
    #[arg(long)]
    days: usize,
    #[arg(long)]
    seed: u64,
    /// Let b fall linearly to this value over the path.
    #[arg(long)]
    decay_to: Option<f64>,
    /// Add a volume column growing at this fraction per day.
    #[arg(long, allow_negative_numbers = true)]
    volume_growth: Option<f64>,
    #[arg(long, default_value_t = 1e6)]
    volume_start: f64,
    /// Standard deviation of the log-volume noise.
    #[arg(long, default_value_t = 0.2)]
    volume_noise: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SelftestArgs {
    /// Shrink every statistical tolerance tenfold.
    #[arg(long)]
    strict: bool,
    #[arg(long, env = "MARKETREG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Shift the expected drift by this fraction per day.
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    inject_drift: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn from_error(context: &str, err: &Error) -> Self {
        Self {
            code: if err.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_ESTIMATION
            },
            message: format!("{context}: {err}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Selftest(args) => run_selftest_command(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load(path: &Path, name: &str, config: &IngestConfig) -> Result<DailySeries, Failure> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_daily_file(std::io::BufReader::new(file), name, config)
        .map_err(|e| Failure::from_error(&path.display().to_string(), &e))
}

/// File stems, suffixed with `-2`, `-3`, ... where they collide.
fn index_names(paths: &[PathBuf]) -> Vec<String> {
    let mut seen = HashSet::new();
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "index".into());
            let mut name = stem.clone();
            let mut k = 2;
            while !seen.insert(name.clone()) {
                name = format!("{stem}-{k}");
                k += 1;
            }
            name
        })
        .collect()
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let config = args.ingest.config();
    config
        .validate()
        .map_err(|e| Failure::from_error("ingest configuration", &e))?;
    if !(args.bin_width > 0.0) {
        return Err(Failure::input(format!("--bin-width must be positive, got {}", args.bin_width)));
    }
    let options = AnalysisOptions {
        bin_width: args.bin_width,
        variance_fit: match args.variance_fit {
            VarianceFit::Intercept => FitMode::Intercept,
            VarianceFit::Origin => FitMode::Origin,
        },
    };
    let names = index_names(&args.input);

    // Every file is parsed and analyzed before anything is written.
    let results: Vec<Result<Analysis, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .input
            .iter()
            .zip(&names)
            .map(|(path, name)| {
                let config = &config;
                scope.spawn(move || {
                    let series = load(path, name, config)?;
                    if series.len() < SHORT_HISTORY_DAYS {
                        eprintln!(
                            "warning: {} has {} trading days; estimates from short histories vary with the window",
                            path.display(),
                            series.len()
                        );
                    }
                    analyze_index_detailed(&series, &options)
                        .map_err(|e| Failure::from_error(&path.display().to_string(), &e))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });
    let analyses = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let write_failure = |path: &Path, e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    fs::create_dir_all(&args.out).map_err(|e| write_failure(&args.out, e))?;
    if args.plots {
        for analysis in &analyses {
            let dir = args.out.join(&analysis.report.index_name);
            fs::create_dir_all(&dir).map_err(|e| write_failure(&dir, e))?;
            for file in plot_files(analysis) {
                let path = dir.join(file.name);
                write_atomically(&path, file.contents.as_bytes()).map_err(|e| write_failure(&path, e))?;
            }
        }
    }

    let reports: Vec<_> = analyses.into_iter().map(|a| a.report).collect();
    let path = args.out.join("report.json");
    write_atomically(&path, report::render(&reports).as_bytes()).map_err(|e| write_failure(&path, e))?;

    for r in &reports {
        println!(
            "{}\ta={}\tmu={}\tsigma={}\tm={}\tw={}\tnu={}",
            r.index_name,
            fmt(r.a),
            fmt(r.mu),
            fmt(r.sigma),
            fmt(r.m),
            fmt(r.w),
            r.nu.map_or_else(|| "-".into(), fmt)
        );
    }
    if let Some(r) = report::a_m_correlation(&reports) {
        println!("r(a, m) = {}", fmt(r));
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn fmt(x: f64) -> String {
    report::format_number(x).unwrap_or_else(|| "NA".into())
}

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed run never leaves a truncated file behind.
fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(bytes).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let params = GbmParams {
        a: args.a,
        b: args.b,
        s0: args.s0,
        n_days: args.days,
        seed: args.seed,
        dt: 1.0,
    };
    let schedule = match args.decay_to {
        Some(b_end) => VolatilitySchedule::LinearDecay { b_end },
        None => VolatilitySchedule::Constant,
    };
    let mut series =
        simulate_gbm(&params, &schedule).map_err(|e| Failure::from_error("simulate", &e))?;
    if let Some(nu) = args.volume_growth {
        let volumes = simulate_volume(nu, args.volume_start, args.volume_noise, args.days, args.seed.wrapping_add(1))
            .map_err(|e| Failure::from_error("simulate volume", &e))?;
        series = series
            .with_volumes(&volumes)
            .map_err(|e| Failure::from_error("simulate volume", &e))?;
    }

    let mut buf = Vec::new();
    write_canonical(&series, &mut buf).map_err(|e| Failure::from_error("serialize", &e))?;
    write_atomically(&args.out, &buf).map_err(|e| Failure::input(format!("{}: {e}", args.out.display())))?;

    println!("a={}", fmt(args.a));
    println!("b={}", fmt(args.b));
    if let Some(b_end) = args.decay_to {
        println!("b_end={}", fmt(b_end));
    }
    println!("s0={}", fmt(args.s0));
    println!("days={}", args.days);
    println!("seed={}", args.seed);
    if let Some(nu) = args.volume_growth {
        println!("volume_growth={}", fmt(nu));
    }
    println!("out={}", args.out.display());
    Ok(())
}

fn run_selftest_command(args: &SelftestArgs) -> Result<(), Failure> {
    let config = SelftestConfig {
        seed: args.seed,
        tolerance_scale: if args.strict { 0.1 } else { 1.0 },
        drift_offset: args.inject_drift,
    };
    let outcomes = run_selftest(&config);
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    println!("seed {}{}", config.seed, if args.strict { " (strict)" } else { "" });
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", o.name, o.detail);
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    if failed.is_empty() {
        println!("all {} checks passed", outcomes.len());
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_SELFTEST,
            message: format!("{} of {} checks failed: {}", failed.len(), outcomes.len(), failed.join(", ")),
        })
    }
}
