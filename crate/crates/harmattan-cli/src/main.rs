//! The `harmattan` command-line tool: CSV in, reports and plots out.
//!
//! Exit codes: 0 on success, 1 on data errors (unreadable files, schema
//! violations, bad arguments), 2 on numerical failures (non-convergence,
//! degenerate likelihoods, training divergence).

mod commands;
mod config;
mod ingest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use harmattan::arima::ArimaOrder;
use harmattan::neural::RecurrentKind;

use config::RunConfig;

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    fn data(message: String) -> Self {
        Self { message, code: 1 }
    }

    fn numerical(message: String) -> Self {
        Self { message, code: 2 }
    }
}

impl From<harmattan::Error> for CliError {
    fn from(error: harmattan::Error) -> Self {
        let code = if error.is_data_error() { 1 } else { 2 };
        Self {
            message: error.to_string(),
            code,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NnKind {
    Rnn,
    Lstm,
}

impl From<NnKind> for RecurrentKind {
    fn from(kind: NnKind) -> Self {
        match kind {
            NnKind::Rnn => RecurrentKind::SimpleRnn,
            NnKind::Lstm => RecurrentKind::Lstm,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "harmattan",
    version,
    about = "Time-series forecasting toolkit: unit-root tests, ARIMA by exact maximum likelihood, stepwise order selection, and recurrent neural forecasters"
)]
struct Cli {
    /// Config file (JSON); defaults to $HARMATTAN_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,

    /// Directory for plots and saved models (overrides config).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct DataArg {
    /// Dataset CSV with header "period,value" and consecutive
    /// YYYY-MM months.
    data: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ADF and KPSS tests at a chosen differencing order.
    Stationarity {
        #[command(flatten)]
        data: DataArg,
        /// Differencing order applied before testing.
        #[arg(long, default_value_t = 0)]
        d: usize,
        /// Fixed ADF lag order (default: AIC selection).
        #[arg(long)]
        adf_lag: Option<usize>,
        /// Fixed KPSS bandwidth (default: automatic rule).
        #[arg(long)]
        kpss_bandwidth: Option<usize>,
    },
    /// ACF and PACF values with the 95% confidence band.
    Correlogram {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 0)]
        d: usize,
        #[arg(long)]
        max_lag: Option<usize>,
    },
    /// Fit a fixed-order ARIMA by exact maximum likelihood.
    FitArima {
        #[command(flatten)]
        data: DataArg,
        /// Order as "p,d,q", e.g. --order 1,0,1.
        #[arg(long, value_parser = parse_order)]
        order: ArimaOrder,
        /// Drop the intercept (mean) term.
        #[arg(long)]
        no_intercept: bool,
        /// Ljung-Box lag count for residual diagnostics.
        #[arg(long)]
        lb_lags: Option<usize>,
    },
    /// Stepwise AIC search over (p, q, intercept) with KPSS-chosen d.
    AutoArima {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long)]
        max_q: Option<usize>,
        #[arg(long)]
        max_d: Option<usize>,
        /// Skip KPSS selection and force this differencing order.
        #[arg(long)]
        fixed_d: Option<usize>,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Point forecasts with symmetric prediction intervals.
    Forecast {
        #[command(flatten)]
        data: DataArg,
        /// Fixed order "p,d,q"; omitted = stepwise search.
        #[arg(long, value_parser = parse_order)]
        order: Option<ArimaOrder>,
        #[arg(long)]
        no_intercept: bool,
        #[arg(long)]
        horizon: Option<usize>,
        /// Interval confidence level in (0, 1).
        #[arg(long)]
        level: Option<f64>,
    },
    /// Train a recurrent forecaster and save its weights.
    TrainNn {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum)]
        kind: NnKind,
        /// Hold out this many final observations and score them
        /// (0 = train on everything).
        #[arg(long)]
        test_length: Option<usize>,
        /// Where to write the weight container (JSON).
        #[arg(long)]
        model_out: Option<PathBuf>,
        #[arg(long)]
        look_back: Option<usize>,
        #[arg(long)]
        hidden_size: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit ARIMA (stepwise), RNN, and LSTM on a training span and rank
    /// them on the held-out span.
    Evaluate {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        test_length: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render a static SVG figure.
    Plot {
        #[command(subcommand)]
        style: PlotStyle,
    },
    /// The whole workflow in one pass: stationarity, correlograms,
    /// stepwise selection, diagnostics, forecasts, neural training, and
    /// the model comparison, with all figures rendered.
    RunPaperPipeline {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        test_length: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum PlotStyle {
    /// Line plot of the raw series.
    Series {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        svg_out: Option<PathBuf>,
    },
    /// History, point forecast, and one interval segment per step.
    Forecast {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_parser = parse_order)]
        order: Option<ArimaOrder>,
        #[arg(long)]
        no_intercept: bool,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        svg_out: Option<PathBuf>,
    },
    /// Actual vs teacher-forced predictions over the held-out span.
    Overlay {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum)]
        kind: NnKind,
        #[arg(long)]
        test_length: Option<usize>,
        #[arg(long)]
        svg_out: Option<PathBuf>,
    },
}

fn parse_order(text: &str) -> Result<ArimaOrder, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected \"p,d,q\"".to_string());
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("{s:?} is not a non-negative integer"))
    };
    Ok(ArimaOrder::new(
        parse(parts[0])?,
        parse(parts[1])?,
        parse(parts[2])?,
    ))
}

/// Report envelope: every output embeds the resolved configuration. The
/// meta block is static, so identical (config, seed, dataset) runs emit
/// byte-identical JSON.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    meta: Meta,
    config: &'a RunConfig,
    report: T,
}

#[derive(Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
}

fn emit<T: Serialize>(
    format: OutputFormat,
    command: &str,
    config: &RunConfig,
    report: T,
    text: String,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Text => print!("{text}"),
        OutputFormat::Json => {
            let envelope = Envelope {
                command,
                meta: Meta {
                    tool: "harmattan",
                    version: env!("CARGO_PKG_VERSION"),
                },
                config,
                report,
            };
            let json = serde_json::to_string_pretty(&envelope)
                .map_err(|e| CliError::numerical(format!("report serialization failed: {e}")))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    if let Some(dir) = &cli.out_dir {
        config.output_dir = dir.clone();
    }
    let format = cli.output;

    match cli.command {
        Command::Stationarity {
            data,
            d,
            adf_lag,
            kpss_bandwidth,
        } => {
            if let Some(lag) = adf_lag {
                config.adf_max_lag = Some(lag);
            }
            if let Some(bw) = kpss_bandwidth {
                config.kpss_bandwidth = Some(bw);
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::stationarity(&series, d, &config)?;
            let text = commands::stationarity_text(&report);
            emit(format, "stationarity", &config, report, text)
        }
        Command::Correlogram { data, d, max_lag } => {
            if let Some(lag) = max_lag {
                config.max_lag = Some(lag);
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::correlogram(&series, d, &config)?;
            let text = commands::correlogram_text(&report);
            emit(format, "correlogram", &config, report, text)
        }
        Command::FitArima {
            data,
            order,
            no_intercept,
            lb_lags,
        } => {
            if let Some(lags) = lb_lags {
                config.ljung_box_lags = Some(lags);
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::fit_arima(&series, order, !no_intercept, &config)?;
            let text = commands::fit_text(&report);
            emit(format, "fit-arima", &config, report, text)
        }
        Command::AutoArima {
            data,
            max_p,
            max_q,
            max_d,
            fixed_d,
            max_steps,
        } => {
            if let Some(v) = max_p {
                config.search.max_p = v;
            }
            if let Some(v) = max_q {
                config.search.max_q = v;
            }
            if let Some(v) = max_d {
                config.search.max_d = v;
            }
            if fixed_d.is_some() {
                config.search.fixed_d = fixed_d;
            }
            if let Some(v) = max_steps {
                config.search.max_steps = v;
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::auto_arima(&series, &config)?;
            let text = commands::auto_arima_text(&report);
            emit(format, "auto-arima", &config, report, text)
        }
        Command::Forecast {
            data,
            order,
            no_intercept,
            horizon,
            level,
        } => {
            if let Some(h) = horizon {
                config.horizon = h;
            }
            if let Some(l) = level {
                config.level = l;
            }
            let series = ingest::ingest(&data.data)?;
            let order = order.map(|o| (o, !no_intercept));
            let report = commands::forecast_cmd(&series, order, &config)?;
            let text = commands::forecast_text(&report);
            emit(format, "forecast", &config, report, text)
        }
        Command::TrainNn {
            data,
            kind,
            test_length,
            model_out,
            look_back,
            hidden_size,
            epochs,
            learning_rate,
            seed,
        } => {
            if let Some(v) = look_back {
                config.train.look_back = v;
            }
            if let Some(v) = hidden_size {
                config.train.hidden_size = v;
            }
            if let Some(v) = epochs {
                config.train.epochs = v;
            }
            if let Some(v) = learning_rate {
                config.train.learning_rate = v;
            }
            if let Some(v) = seed {
                config.train.seed = v;
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::train_nn(
                &series,
                kind.into(),
                test_length.unwrap_or(0),
                model_out,
                &config,
            )?;
            let text = commands::train_nn_text(&report);
            emit(format, "train-nn", &config, report, text)
        }
        Command::Evaluate {
            data,
            test_length,
            seed,
        } => {
            if let Some(v) = test_length {
                config.test_length = v;
            }
            if let Some(v) = seed {
                config.train.seed = v;
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::evaluate(&series, &config)?;
            let text = commands::evaluate_text(&report);
            emit(format, "evaluate", &config, report, text)
        }
        Command::Plot { style } => match style {
            PlotStyle::Series { data, svg_out } => {
                let series = ingest::ingest(&data.data)?;
                let report = commands::plot_series(&series, svg_out, &config)?;
                let text = commands::plot_text(&report);
                emit(format, "plot series", &config, report, text)
            }
            PlotStyle::Forecast {
                data,
                order,
                no_intercept,
                horizon,
                svg_out,
            } => {
                if let Some(h) = horizon {
                    config.horizon = h;
                }
                let series = ingest::ingest(&data.data)?;
                let order = order.map(|o| (o, !no_intercept));
                let report = commands::plot_forecast(&series, order, svg_out, &config)?;
                let text = commands::plot_text(&report);
                emit(format, "plot forecast", &config, report, text)
            }
            PlotStyle::Overlay {
                data,
                kind,
                test_length,
                svg_out,
            } => {
                if let Some(v) = test_length {
                    config.test_length = v;
                }
                let series = ingest::ingest(&data.data)?;
                let report = commands::plot_overlay(&series, kind.into(), svg_out, &config)?;
                let text = commands::plot_text(&report);
                emit(format, "plot overlay", &config, report, text)
            }
        },
        Command::RunPaperPipeline {
            data,
            test_length,
            horizon,
            seed,
        } => {
            if let Some(v) = test_length {
                config.test_length = v;
            }
            if let Some(v) = horizon {
                config.horizon = v;
            }
            if let Some(v) = seed {
                config.train.seed = v;
            }
            let series = ingest::ingest(&data.data)?;
            let report = commands::run_pipeline(&series, &config)?;
            let text = commands::pipeline_text(&report);
            emit(format, "run-paper-pipeline", &config, report, text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            use clap::error::ErrorKind;
            let code = match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message);
            ExitCode::from(error.code)
        }
    }
}
