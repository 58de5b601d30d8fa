//! Command implementations. Each returns a serializable report struct
//! plus a text rendering; `main` wraps them in the output envelope.

use std::path::{Path, PathBuf};

use serde::Serialize;

use harmattan::arima::{
    diagnose, fit, stepwise_search, ArimaFit, ArimaOrder, Forecast, SearchTrace,
};
use harmattan::diagnostics::{acf, adf_test, kpss_test, pacf, CorrelationSequence, TestReport};
use harmattan::evaluation::{compare, ComparisonReport, MetricReport, ModelSpec, ModelSpecKind};
use harmattan::neural::{
    predict_series, train, PredictionMode, RecurrentKind, SavedModel, TrainReport,
};
use harmattan::series::{difference, split_train_test, TimeSeries};

use crate::config::RunConfig;
use crate::plot;
use crate::CliError;

fn apply_differencing(series: &TimeSeries, d: usize) -> Result<TimeSeries, CliError> {
    if d == 0 {
        return Ok(series.clone());
    }
    let (differenced, _) = difference(series, d)?;
    Ok(differenced)
}

fn default_max_lag(n: usize, configured: Option<usize>) -> usize {
    configured.unwrap_or_else(|| 24.min(n / 2 - 1).max(1))
}

fn ljung_box_lags(fit: &ArimaFit, configured: Option<usize>) -> usize {
    let fitted_params = fit.order.p + fit.order.q;
    configured
        .unwrap_or_else(|| 24.min(fit.n_obs / 5).max(10))
        .max(fitted_params + 1)
}

// ---------------------------------------------------------------------
// stationarity
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct StationarityReport {
    pub d: usize,
    pub n: usize,
    pub adf: TestReport,
    pub kpss: TestReport,
}

pub fn stationarity(
    series: &TimeSeries,
    d: usize,
    config: &RunConfig,
) -> Result<StationarityReport, CliError> {
    let working = apply_differencing(series, d)?;
    let adf = adf_test(&working, config.adf_max_lag)?;
    let kpss = kpss_test(&working, config.kpss_bandwidth)?;
    Ok(StationarityReport {
        d,
        n: working.len(),
        adf,
        kpss,
    })
}

pub fn stationarity_text(report: &StationarityReport) -> String {
    let mut out = format!(
        "Stationarity at d={} (n={})\n",
        report.d, report.n
    );
    for test in [&report.adf, &report.kpss] {
        out.push_str(&format!(
            "  {:<10} statistic {:>9.4}   p {:>10}   lags {:<3} {}\n",
            test.test,
            test.statistic,
            test.p_value_display(),
            test.lags_used,
            if test.reject_null {
                "reject null at 5%"
            } else {
                "fail to reject null at 5%"
            }
        ));
        let cvs: Vec<String> = test
            .critical_values
            .entries()
            .iter()
            .map(|(l, v)| format!("{}%: {:.3}", l * 100.0, v))
            .collect();
        out.push_str(&format!("  {:<10} critical values: {}\n", "", cvs.join(", ")));
    }
    out
}

// ---------------------------------------------------------------------
// correlogram
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct CorrelogramReport {
    pub d: usize,
    pub max_lag: usize,
    pub acf: CorrelationSequence,
    pub pacf: CorrelationSequence,
}

pub fn correlogram(
    series: &TimeSeries,
    d: usize,
    config: &RunConfig,
) -> Result<CorrelogramReport, CliError> {
    let working = apply_differencing(series, d)?;
    let max_lag = default_max_lag(working.len(), config.max_lag);
    let acf_seq = acf(&working, max_lag)?;
    let pacf_seq = pacf(&working, max_lag)?;
    Ok(CorrelogramReport {
        d,
        max_lag,
        acf: acf_seq,
        pacf: pacf_seq,
    })
}

pub fn correlogram_text(report: &CorrelogramReport) -> String {
    let mut out = format!(
        "Correlogram at d={} (band +-{:.4})\n  lag    acf      pacf\n",
        report.d, report.acf.confidence_band
    );
    for lag in 0..=report.max_lag {
        out.push_str(&format!(
            "  {:>3} {:>8.4} {:>8.4}\n",
            lag, report.acf.values[lag], report.pacf.values[lag]
        ));
    }
    out
}

// ---------------------------------------------------------------------
// fit-arima / auto-arima
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct FitArimaReport {
    pub fit: ArimaFit,
    pub ljung_box: TestReport,
    pub residual_acf: CorrelationSequence,
}

pub fn fit_arima(
    series: &TimeSeries,
    order: ArimaOrder,
    with_intercept: bool,
    config: &RunConfig,
) -> Result<FitArimaReport, CliError> {
    let fitted = fit(series, order, with_intercept)?;
    let lags = ljung_box_lags(&fitted, config.ljung_box_lags);
    let (ljung_box, residual_acf) = diagnose(&fitted, lags)?;
    Ok(FitArimaReport {
        fit: fitted,
        ljung_box,
        residual_acf,
    })
}

pub fn fit_text(report: &FitArimaReport) -> String {
    let fit = &report.fit;
    let mut out = format!(
        "ARIMA{} {} intercept  n={}\n",
        fit.order,
        if fit.with_intercept() { "with" } else { "without" },
        fit.n_obs
    );
    out.push_str(&format!(
        "  ar: {:?}\n  ma: {:?}\n  intercept: {:.6}  sigma2: {:.6}\n",
        fit.ar_coeffs, fit.ma_coeffs, fit.intercept, fit.sigma2
    ));
    out.push_str(&format!(
        "  log-likelihood: {:.4}  aic: {:.4}  bic: {:.4}\n",
        fit.log_likelihood, fit.aic, fit.bic
    ));
    out.push_str(&format!(
        "  converged: {} in {} iterations\n",
        fit.convergence.converged, fit.convergence.iterations
    ));
    out.push_str(&format!(
        "  ljung-box({}): Q={:.4} p={} -> {}\n",
        report.ljung_box.lags_used,
        report.ljung_box.statistic,
        report.ljung_box.p_value_display(),
        if report.ljung_box.reject_null {
            "residual autocorrelation detected"
        } else {
            "residuals look like white noise"
        }
    ));
    out
}

#[derive(Debug, Serialize)]
pub struct AutoArimaReport {
    pub best: ArimaFit,
    pub trace: SearchTrace,
    pub ljung_box: TestReport,
}

pub fn auto_arima(series: &TimeSeries, config: &RunConfig) -> Result<AutoArimaReport, CliError> {
    let (best, trace) = stepwise_search(series, &config.search)?;
    let lags = ljung_box_lags(&best, config.ljung_box_lags);
    let (ljung_box, _) = diagnose(&best, lags)?;
    Ok(AutoArimaReport {
        best,
        trace,
        ljung_box,
    })
}

pub fn auto_arima_text(report: &AutoArimaReport) -> String {
    let mut out = String::from("Stepwise search\n");
    for entry in &report.trace.evaluated {
        let verdict = match (&entry.aic, &entry.failure) {
            (Some(aic), _) => format!("aic {aic:.3}"),
            (None, Some(reason)) => format!("failed: {reason}"),
            (None, None) => "failed".to_string(),
        };
        out.push_str(&format!(
            "  ARIMA{}{}  {}\n",
            entry.order,
            if entry.with_intercept { "+c" } else { "" },
            verdict
        ));
    }
    for line in &report.trace.step_log {
        out.push_str(&format!("  # {line}\n"));
    }
    out.push_str(&format!(
        "Selected ARIMA{}{} with aic {:.3}\n",
        report.best.order,
        if report.best.with_intercept() { "+c" } else { "" },
        report.best.aic
    ));
    out.push_str(&format!(
        "Ljung-Box({}): p={} ({})\n",
        report.ljung_box.lags_used,
        report.ljung_box.p_value_display(),
        if report.ljung_box.reject_null {
            "residual autocorrelation detected"
        } else {
            "residuals look like white noise"
        }
    ));
    out
}

// ---------------------------------------------------------------------
// forecast
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ForecastReport {
    pub fit: ArimaFit,
    pub forecast: Forecast,
    /// Calendar periods for the forecast steps.
    pub periods: Vec<String>,
}

pub fn forecast_cmd(
    series: &TimeSeries,
    order: Option<(ArimaOrder, bool)>,
    config: &RunConfig,
) -> Result<ForecastReport, CliError> {
    let fitted = match order {
        Some((order, with_intercept)) => fit(series, order, with_intercept)?,
        None => stepwise_search(series, &config.search)?.0,
    };
    let forecast = fitted.forecast(config.horizon, config.level)?;
    let last = series.end_period();
    let periods = (1..=config.horizon)
        .map(|h| last.plus_months(h).to_string())
        .collect();
    Ok(ForecastReport {
        fit: fitted,
        forecast,
        periods,
    })
}

pub fn forecast_text(report: &ForecastReport) -> String {
    let mut out = format!(
        "Forecast from ARIMA{} at level {:.0}%\n  period     point     lower     upper\n",
        report.fit.order,
        report.forecast.level * 100.0
    );
    for h in 0..report.forecast.horizon {
        out.push_str(&format!(
            "  {}  {:>8.4}  {:>8.4}  {:>8.4}\n",
            report.periods[h],
            report.forecast.point[h],
            report.forecast.lower[h],
            report.forecast.upper[h]
        ));
    }
    out
}

// ---------------------------------------------------------------------
// train-nn
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct TrainNnReport {
    pub kind: RecurrentKind,
    pub model_path: String,
    pub train: TrainReport,
    /// Present when a test split was held out.
    pub test_metrics: Option<MetricReport>,
    pub test_predictions: Option<Vec<f64>>,
}

pub fn train_nn(
    series: &TimeSeries,
    kind: RecurrentKind,
    test_length: usize,
    model_out: Option<PathBuf>,
    config: &RunConfig,
) -> Result<TrainNnReport, CliError> {
    let (train_span, test_span) = if test_length > 0 {
        let (a, b) = split_train_test(series, test_length)?;
        (a, Some(b))
    } else {
        (series.clone(), None)
    };

    let (model, scaler, train_report) = train(&train_span, &config.train, kind)?;

    let (test_metrics, test_predictions) = match &test_span {
        Some(test_span) => {
            let predictions = predict_series(
                &model,
                &scaler,
                series,
                test_span.len(),
                PredictionMode::TeacherForced,
            )?;
            let metrics = harmattan::evaluation::score(test_span.values(), &predictions)?;
            (Some(metrics), Some(predictions))
        }
        None => (None, None),
    };

    let path = model_out
        .unwrap_or_else(|| config.output_dir.join(format!("{kind}-model.json")));
    let saved = SavedModel::pack(&model, &scaler, &config.train);
    let json = serde_json::to_string_pretty(&saved)
        .map_err(|e| CliError::numerical(format!("cannot serialize model: {e}")))?;
    write_file(&path, &json)?;

    Ok(TrainNnReport {
        kind,
        model_path: path.display().to_string(),
        train: train_report,
        test_metrics,
        test_predictions,
    })
}

pub fn train_nn_text(report: &TrainNnReport) -> String {
    let mut out = format!(
        "Trained {} for {} epochs: final scaled MSE {:.6}\n  weights saved to {}\n",
        report.kind, report.train.epochs_run, report.train.final_loss, report.model_path
    );
    if let Some(metrics) = &report.test_metrics {
        out.push_str(&format!(
            "  test span: rmse {:.4}  mae {:.4}  mape {:.2}%\n",
            metrics.rmse, metrics.mae, metrics.mape
        ));
    }
    out
}

// ---------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------

pub fn evaluate(series: &TimeSeries, config: &RunConfig) -> Result<ComparisonReport, CliError> {
    let specs = vec![
        ModelSpec {
            id: "auto_arima".into(),
            kind: ModelSpecKind::AutoArima {
                config: config.search,
            },
        },
        ModelSpec {
            id: "rnn".into(),
            kind: ModelSpecKind::Recurrent {
                kind: RecurrentKind::SimpleRnn,
                config: config.train,
            },
        },
        ModelSpec {
            id: "lstm".into(),
            kind: ModelSpecKind::Recurrent {
                kind: RecurrentKind::Lstm,
                config: config.train,
            },
        },
    ];
    Ok(compare(series, config.test_length, &specs)?)
}

pub fn evaluate_text(report: &ComparisonReport) -> String {
    let mut out = format!(
        "Comparison over the last {} observations (rank by RMSE, MAE tiebreak)\n",
        report.test_length
    );
    for (rank, entry) in report.ranking.iter().enumerate() {
        out.push_str(&format!(
            "  {}. {:<12} rmse {:>8.4}  mae {:>8.4}  mape {:>7.2}%  [{}]\n",
            rank + 1,
            entry.id,
            entry.metrics.rmse,
            entry.metrics.mae,
            entry.metrics.mape,
            match entry.mode {
                harmattan::evaluation::EvaluationMode::OutOfSampleForecast =>
                    "multi-step forecast",
                harmattan::evaluation::EvaluationMode::TeacherForcedOneStep =>
                    "one-step teacher forced",
            }
        ));
    }
    for failure in &report.failures {
        out.push_str(&format!("  failed: {} ({})\n", failure.id, failure.error));
    }
    out
}

// ---------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct PlotReport {
    pub style: String,
    pub path: String,
    /// Interval segments for forecast plots, polyline count otherwise.
    pub elements: usize,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn plot_series(
    series: &TimeSeries,
    out: Option<PathBuf>,
    config: &RunConfig,
) -> Result<PlotReport, CliError> {
    let path = out.unwrap_or_else(|| config.output_dir.join("series.svg"));
    let svg = plot::render_series(
        series,
        &format!("Series {} .. {}", series.start_period(), series.end_period()),
    );
    write_file(&path, &svg)?;
    Ok(PlotReport {
        style: "series".into(),
        path: path.display().to_string(),
        elements: 1,
    })
}

pub fn plot_forecast(
    series: &TimeSeries,
    order: Option<(ArimaOrder, bool)>,
    out: Option<PathBuf>,
    config: &RunConfig,
) -> Result<PlotReport, CliError> {
    let report = forecast_cmd(series, order, config)?;
    let path = out.unwrap_or_else(|| config.output_dir.join("forecast.svg"));
    let svg = plot::render_forecast(
        series,
        &report.forecast,
        &format!(
            "ARIMA{} forecast, {:.0}% intervals",
            report.fit.order,
            config.level * 100.0
        ),
    );
    write_file(&path, &svg)?;
    Ok(PlotReport {
        style: "forecast".into(),
        path: path.display().to_string(),
        elements: report.forecast.horizon,
    })
}

pub fn plot_overlay(
    series: &TimeSeries,
    kind: RecurrentKind,
    out: Option<PathBuf>,
    config: &RunConfig,
) -> Result<PlotReport, CliError> {
    let (train_span, test_span) = split_train_test(series, config.test_length)?;
    let (model, scaler, _) = train(&train_span, &config.train, kind)?;
    let predictions = predict_series(
        &model,
        &scaler,
        series,
        test_span.len(),
        PredictionMode::TeacherForced,
    )?;
    let path = out.unwrap_or_else(|| config.output_dir.join(format!("overlay-{kind}.svg")));
    let svg = plot::render_overlay(
        &test_span,
        &predictions,
        &format!("Actual vs {kind} predictions"),
    );
    write_file(&path, &svg)?;
    Ok(PlotReport {
        style: "overlay".into(),
        path: path.display().to_string(),
        elements: 2,
    })
}

pub fn plot_text(report: &PlotReport) -> String {
    format!(
        "Wrote {} plot to {} ({} elements)\n",
        report.style, report.path, report.elements
    )
}

// ---------------------------------------------------------------------
// run-paper-pipeline
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub span: String,
    pub stationarity_levels: StationarityReport,
    pub stationarity_first_difference: StationarityReport,
    pub correlogram_first_difference: CorrelogramReport,
    pub selection: AutoArimaReport,
    pub test_forecast: ForecastReport,
    pub future_forecast: ForecastReport,
    pub neural_rnn: TrainNnReport,
    pub neural_lstm: TrainNnReport,
    pub comparison: ComparisonReport,
    pub plots: Vec<PlotReport>,
}

/// Trains one recurrent model on the training span, scores it teacher
/// forced on the held-out span, saves its weights, and renders the
/// overlay figure. Used by the pipeline so each model trains exactly
/// once.
fn pipeline_neural(
    series: &TimeSeries,
    test_span: &TimeSeries,
    kind: RecurrentKind,
    config: &RunConfig,
) -> Result<(TrainNnReport, PlotReport), CliError> {
    let (train_span, _) = split_train_test(series, test_span.len())?;
    let (model, scaler, train_report) = train(&train_span, &config.train, kind)?;
    let predictions = predict_series(
        &model,
        &scaler,
        series,
        test_span.len(),
        PredictionMode::TeacherForced,
    )?;
    let metrics = harmattan::evaluation::score(test_span.values(), &predictions)?;

    let model_path = config.output_dir.join(format!("{kind}-model.json"));
    let saved = SavedModel::pack(&model, &scaler, &config.train);
    let json = serde_json::to_string_pretty(&saved)
        .map_err(|e| CliError::numerical(format!("cannot serialize model: {e}")))?;
    write_file(&model_path, &json)?;

    let svg_path = config.output_dir.join(format!("overlay-{kind}.svg"));
    let svg = plot::render_overlay(
        test_span,
        &predictions,
        &format!("Actual vs {kind} predictions"),
    );
    write_file(&svg_path, &svg)?;

    let report = TrainNnReport {
        kind,
        model_path: model_path.display().to_string(),
        train: train_report,
        test_metrics: Some(metrics),
        test_predictions: Some(predictions),
    };
    let plot = PlotReport {
        style: "overlay".into(),
        path: svg_path.display().to_string(),
        elements: 2,
    };
    Ok((report, plot))
}

/// The full workflow in one pass: stationarity checks at d=0 and d=1,
/// correlograms of the differenced series, stepwise order selection and
/// residual diagnostics on the training span, an out-of-sample forecast
/// of the held-out span, recurrent-model training with teacher-forced
/// overlays, the cross-model comparison, a refit on the full series with
/// a forward forecast, and the three figure styles as SVGs. Every model
/// is fitted exactly once.
pub fn run_pipeline(series: &TimeSeries, config: &RunConfig) -> Result<PipelineReport, CliError> {
    let stationarity_levels = stationarity(series, 0, config)?;
    let stationarity_first_difference = stationarity(series, 1, config)?;
    let correlogram_first_difference = correlogram(series, 1, config)?;

    let (train_span, test_span) = split_train_test(series, config.test_length)?;
    let selection = auto_arima(&train_span, config)?;
    let order = (selection.best.order, selection.best.with_intercept());

    // Held-out-span forecast from the training fit, no refit.
    let arima_forecast = selection.best.forecast(test_span.len(), config.level)?;
    let last_train = train_span.end_period();
    let test_forecast = ForecastReport {
        fit: selection.best.clone(),
        forecast: arima_forecast.clone(),
        periods: (1..=test_span.len())
            .map(|h| last_train.plus_months(h).to_string())
            .collect(),
    };

    let (neural_rnn, rnn_overlay) =
        pipeline_neural(series, &test_span, RecurrentKind::SimpleRnn, config)?;
    let (neural_lstm, lstm_overlay) =
        pipeline_neural(series, &test_span, RecurrentKind::Lstm, config)?;

    // Assemble the comparison from the predictions already in hand.
    use harmattan::evaluation::{EvaluationMode, RankedModel};
    let mut ranking = vec![
        RankedModel {
            id: "auto_arima".into(),
            mode: EvaluationMode::OutOfSampleForecast,
            metrics: harmattan::evaluation::score(test_span.values(), &arima_forecast.point)?,
            predictions: arima_forecast.point.clone(),
        },
        RankedModel {
            id: "rnn".into(),
            mode: EvaluationMode::TeacherForcedOneStep,
            metrics: neural_rnn.test_metrics.clone().expect("scored above"),
            predictions: neural_rnn.test_predictions.clone().expect("scored above"),
        },
        RankedModel {
            id: "lstm".into(),
            mode: EvaluationMode::TeacherForcedOneStep,
            metrics: neural_lstm.test_metrics.clone().expect("scored above"),
            predictions: neural_lstm.test_predictions.clone().expect("scored above"),
        },
    ];
    ranking.sort_by(|a, b| {
        (a.metrics.rmse, a.metrics.mae)
            .partial_cmp(&(b.metrics.rmse, b.metrics.mae))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let comparison = ComparisonReport {
        test_length: test_span.len(),
        ranking,
        failures: Vec::new(),
    };

    let future_forecast = forecast_cmd(series, Some(order), config)?;
    let plots = vec![
        plot_series(series, None, config)?,
        {
            let path = config.output_dir.join("forecast.svg");
            let svg = plot::render_forecast(
                series,
                &future_forecast.forecast,
                &format!(
                    "ARIMA{} forecast, {:.0}% intervals",
                    future_forecast.fit.order,
                    config.level * 100.0
                ),
            );
            write_file(&path, &svg)?;
            PlotReport {
                style: "forecast".into(),
                path: path.display().to_string(),
                elements: future_forecast.forecast.horizon,
            }
        },
        rnn_overlay,
        lstm_overlay,
    ];

    Ok(PipelineReport {
        n: series.len(),
        span: format!("{} .. {}", series.start_period(), series.end_period()),
        stationarity_levels,
        stationarity_first_difference,
        correlogram_first_difference,
        selection,
        test_forecast,
        future_forecast,
        neural_rnn,
        neural_lstm,
        comparison,
        plots,
    })
}

pub fn pipeline_text(report: &PipelineReport) -> String {
    let mut out = format!("Pipeline over {} observations ({})\n\n", report.n, report.span);
    out.push_str(&stationarity_text(&report.stationarity_levels));
    out.push_str(&stationarity_text(&report.stationarity_first_difference));
    out.push('\n');
    out.push_str(&auto_arima_text(&report.selection));
    out.push('\n');
    out.push_str(&forecast_text(&report.future_forecast));
    out.push('\n');
    out.push_str(&train_nn_text(&report.neural_rnn));
    out.push_str(&train_nn_text(&report.neural_lstm));
    out.push('\n');
    out.push_str(&evaluate_text(&report.comparison));
    for plot in &report.plots {
        out.push_str(&plot_text(plot));
    }
    out
}
