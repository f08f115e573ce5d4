//! `emh` - weak-form market-efficiency tests on a daily CSV price series.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use emh_core::acf::SeMode;
use emh_core::ingest::{self, CsvSpec, DEFAULT_DATE_FORMAT};
use emh_core::report::{self, AnalysisOptions, AnalysisReport, PlotStyle};
use emh_core::runs::ZeroPolicy;
use emh_core::simulate::{generate, Model, SimulationSpec};
use emh_core::{EmhError, PriceSeries};

const EXIT_CODES_HELP: &str = "Exit codes:
  0  success
  2  usage error (bad flags or argument values)
  3  input/output error (unreadable or unwritable file)
  4  malformed input data (CSV structure, cells, duplicate dates)
  5  statistical preconditions not met (degenerate or constant series, ...)

The environment variable EMH_DATE_FORMAT overrides the default date
pattern (%Y-%m-%d) for reading and writing CSV.";

#[derive(Parser)]
#[command(
    name = "emh",
    version,
    about = "Weak-form market-efficiency tests (runs, autocorrelation, autoregression)",
    after_help = EXIT_CODES_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs test on the signs of day-to-day changes
    Runs(RunsArgs),
    /// Autocorrelation function over the first K lags
    Acf(AcfArgs),
    /// Autoregression on lagged values by least squares
    Ar(ArArgs),
    /// All three tests in one report
    All(AllArgs),
    /// Generate a synthetic series and write it as CSV
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroPolicyArg {
    /// drop zero changes
    Exclude,
    /// a zero change carries the previous change's sign
    Carry,
}

impl From<ZeroPolicyArg> for ZeroPolicy {
    fn from(z: ZeroPolicyArg) -> Self {
        match z {
            ZeroPolicyArg::Exclude => ZeroPolicy::Exclude,
            ZeroPolicyArg::Carry => ZeroPolicy::TreatAsPrevious,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SeModeArg {
    /// per-lag 1/sqrt(n - k)
    Exact,
    /// single 1/sqrt(n), requires n >= 50
    LargeN,
}

impl From<SeModeArg> for SeMode {
    fn from(m: SeModeArg) -> Self {
        match m {
            SeModeArg::Exact => SeMode::Exact,
            SeModeArg::LargeN => SeMode::LargeN,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotArg {
    Ascii,
    Svg,
}

impl From<PlotArg> for PlotStyle {
    fn from(p: PlotArg) -> Self {
        match p {
            PlotArg::Ascii => PlotStyle::Ascii,
            PlotArg::Svg => PlotStyle::Svg,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// CSV file with a header row
    #[arg(long)]
    input: PathBuf,
    /// Series label; defaults to the input file stem
    #[arg(long)]
    label: Option<String>,
    /// Name of the date column
    #[arg(long, default_value = "Date")]
    date_column: String,
    /// Name of the closing-value column
    #[arg(long, default_value = "Close")]
    value_column: String,
    /// Strip ',' thousands separators from value cells
    #[arg(long)]
    thousands: bool,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Significance level for decisions, in (0, 1)
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    alpha: f64,
    /// Analyze simple returns instead of raw levels
    #[arg(long)]
    returns: bool,
    /// Embed a generation timestamp in the output
    #[arg(long)]
    stamp: bool,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Handling of zero (no-change) days
    #[arg(long, value_enum, default_value_t = ZeroPolicyArg::Exclude)]
    zero_policy: ZeroPolicyArg,
}

#[derive(Args)]
struct AcfArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of lags
    #[arg(long, default_value_t = 20, value_parser = parse_lags)]
    lags: usize,
    /// Standard-error formula
    #[arg(long, value_enum, default_value_t = SeModeArg::LargeN)]
    se_mode: SeModeArg,
    /// Append a correlogram plot
    #[arg(long, value_enum)]
    plot: Option<PlotArg>,
}

#[derive(Args)]
struct ArArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Autoregressive order
    #[arg(long, default_value_t = 2, value_parser = parse_lags)]
    ar_lags: usize,
}

#[derive(Args)]
struct AllArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of ACF lags
    #[arg(long, default_value_t = 20, value_parser = parse_lags)]
    lags: usize,
    /// Autoregressive order
    #[arg(long, default_value_t = 2, value_parser = parse_lags)]
    ar_lags: usize,
    /// Handling of zero (no-change) days
    #[arg(long, value_enum, default_value_t = ZeroPolicyArg::Exclude)]
    zero_policy: ZeroPolicyArg,
    /// Standard-error formula for the ACF
    #[arg(long, value_enum, default_value_t = SeModeArg::LargeN)]
    se_mode: SeModeArg,
    /// Append a correlogram plot
    #[arg(long, value_enum)]
    plot: Option<PlotArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    RandomWalk,
    Ar,
    IidNoise,
}

#[derive(Args)]
struct SimulateArgs {
    /// Process to generate
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Series length
    #[arg(long)]
    n: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random-walk drift per step
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    drift: f64,
    /// Random-walk step standard deviation
    #[arg(long, default_value_t = 1.0)]
    step_sd: f64,
    /// AR intercept
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    intercept: f64,
    /// AR coefficients, oldest lag last (repeat the flag per lag)
    #[arg(long = "coef", allow_hyphen_values = true)]
    coefficients: Vec<f64>,
    /// AR innovation standard deviation
    #[arg(long, default_value_t = 1.0)]
    noise_sd: f64,
    /// i.i.d.-noise standard deviation
    #[arg(long, default_value_t = 1.0)]
    sd: f64,
    /// Initial values, oldest first (repeat the flag; default all 100)
    #[arg(long = "initial", allow_hyphen_values = true)]
    initial_values: Vec<f64>,
    /// Name of the date column in the CSV output
    #[arg(long, default_value = "Date")]
    date_column: String,
    /// Name of the closing-value column in the CSV output
    #[arg(long, default_value = "Close")]
    value_column: String,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("significance level must lie strictly between 0 and 1".to_string())
    }
}

fn parse_lags(s: &str) -> Result<usize, String> {
    let v: usize = s
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("at least one lag is required".to_string())
    }
}

enum CliError {
    Io(std::io::Error),
    Core(EmhError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                EmhError::Io(_) => 3,
                EmhError::MissingColumn(_)
                | EmhError::BadCell { .. }
                | EmhError::DuplicateDate { .. }
                | EmhError::TooShort { .. }
                | EmhError::NonPositiveClose { .. }
                | EmhError::InvalidSyntheticClose { .. }
                | EmhError::UnorderedDates { .. }
                | EmhError::InvalidDateFormat(_)
                | EmhError::Csv(_) => 4,
                _ => 5,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(e) => e.to_string(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<EmhError> for CliError {
    fn from(e: EmhError) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Runs(args) => {
            let opts = AnalysisOptions {
                runs: true,
                acf: false,
                ar: false,
                zero_policy: args.zero_policy.into(),
                ..analysis_base(&args.input)
            };
            analyze_and_emit(&args.input, opts, None)
        }
        Command::Acf(args) => {
            let opts = AnalysisOptions {
                runs: false,
                acf: true,
                ar: false,
                max_lag: args.lags,
                se_mode: args.se_mode.into(),
                ..analysis_base(&args.input)
            };
            analyze_and_emit(&args.input, opts, args.plot.map(Into::into))
        }
        Command::Ar(args) => {
            let opts = AnalysisOptions {
                runs: false,
                acf: false,
                ar: true,
                ar_lags: args.ar_lags,
                ..analysis_base(&args.input)
            };
            analyze_and_emit(&args.input, opts, None)
        }
        Command::All(args) => {
            let opts = AnalysisOptions {
                runs: true,
                acf: true,
                ar: true,
                max_lag: args.lags,
                ar_lags: args.ar_lags,
                zero_policy: args.zero_policy.into(),
                se_mode: args.se_mode.into(),
                ..analysis_base(&args.input)
            };
            analyze_and_emit(&args.input, opts, args.plot.map(Into::into))
        }
        Command::Simulate(args) => simulate_and_emit(args),
    }
}

fn date_format_from_env() -> String {
    std::env::var("EMH_DATE_FORMAT").unwrap_or_else(|_| DEFAULT_DATE_FORMAT.to_string())
}

fn analysis_base(input: &InputArgs) -> AnalysisOptions {
    AnalysisOptions {
        alpha: input.alpha,
        on_returns: input.returns,
        ..AnalysisOptions::default()
    }
}

fn load_series(input: &InputArgs) -> Result<PriceSeries, CliError> {
    let spec = CsvSpec {
        date_column: input.date_column.clone(),
        value_column: input.value_column.clone(),
        date_format: date_format_from_env(),
        strip_thousands: input.thousands,
    };
    let file = std::fs::File::open(&input.input).map_err(CliError::Io)?;
    let label = match &input.label {
        Some(l) => l.clone(),
        None => input
            .input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "series".to_string()),
    };
    let parsed = ingest::parse_csv_reader(&label, file, &spec)?;
    Ok(parsed.series)
}

fn analyze_and_emit(
    input: &InputArgs,
    opts: AnalysisOptions,
    plot: Option<PlotStyle>,
) -> Result<(), CliError> {
    let series = load_series(input)?;
    let mut report: AnalysisReport = report::analyze(&series, &opts)?;
    if input.stamp {
        report.generated_at = Some(chrono::Utc::now().to_rfc3339());
    }
    let text = match input.format {
        FormatArg::Json => report::render_json(&report)?,
        FormatArg::Markdown => report::render_markdown(&report, plot)?,
    };
    emit(&input.out, &text)
}

fn simulate_and_emit(args: SimulateArgs) -> Result<(), CliError> {
    let model = match args.model {
        ModelArg::RandomWalk => Model::RandomWalk {
            drift: args.drift,
            step_sd: args.step_sd,
        },
        ModelArg::Ar => Model::Ar {
            intercept: args.intercept,
            coefficients: args.coefficients.clone(),
            noise_sd: args.noise_sd,
        },
        ModelArg::IidNoise => Model::IidNoise { sd: args.sd },
    };
    let mut spec = SimulationSpec::new(model, args.n, args.seed);
    if !args.initial_values.is_empty() {
        spec.initial_values = args.initial_values.clone();
    }
    let series = generate(&spec)?;
    let csv_spec = CsvSpec {
        date_column: args.date_column.clone(),
        value_column: args.value_column.clone(),
        date_format: date_format_from_env(),
        strip_thousands: false,
    };
    let text = ingest::to_csv_string(&series, &csv_spec)?;
    emit(&args.out, &text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(CliError::Io)
        }
    }
}
