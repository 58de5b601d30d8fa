//! ARIMA(p,d,q) modeling: exact Gaussian maximum likelihood through a
//! state-space Kalman filter, stepwise AIC order search, residual
//! diagnostics, and multi-step forecasting with prediction intervals.
//!
//! Estimation differences the series `d` times, then maximizes the exact
//! likelihood of the ARMA(p,q)-plus-mean model. The optimizer works in an
//! unconstrained space (partial-autocorrelation transform, so every
//! iterate is stationary and invertible), is warm-started from
//! conditional-sum-of-squares estimates, and refines with a simplex
//! search to relative tolerance 1e-8.

mod estimate;
mod forecast;
mod kalman;
mod optimizer;
mod search;
mod simulate;
mod state_space;
mod transform;

pub use forecast::{psi_weights, Forecast};
pub use kalman::exact_loglikelihood;
pub use search::{stepwise_search, CandidateResult, SearchConfig, SearchTrace};
pub use simulate::{simulate_arma, simulate_random_walk};
pub use transform::{ma_roots_outside, roots_outside};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{acf_from_values, ljung_box, CorrelationSequence, TestReport};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

use optimizer::NelderMead;
use state_space::StateSpace;

/// The (p, d, q) specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArimaOrder {
    /// Autoregressive order.
    pub p: usize,
    /// Number of differences.
    pub d: usize,
    /// Moving-average order.
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        Self { p, d, q }
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

/// Optimizer convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergence {
    pub converged: bool,
    pub iterations: usize,
}

/// Controls for the likelihood optimizer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: 1e-8,
        }
    }
}

/// A fitted ARIMA model.
///
/// Serialized fields carry the published estimation results; the filter
/// state needed for forecasting is internal and not part of the wire
/// format (a deserialized fit cannot forecast).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArimaFit {
    pub order: ArimaOrder,
    /// AR coefficients, `phi_1..phi_p`.
    pub ar_coeffs: Vec<f64>,
    /// MA coefficients, `theta_1..theta_q`.
    pub ma_coeffs: Vec<f64>,
    /// Mean of the differenced series (0 when fitted without intercept).
    pub intercept: f64,
    /// Innovation variance MLE (divisor n).
    pub sigma2: f64,
    pub log_likelihood: f64,
    /// `-2 ll + 2k` with `k = p + q + intercept + 1` (variance counted).
    pub aic: f64,
    /// `-2 ll + k ln(n_obs)`.
    pub bic: f64,
    /// One-step-ahead standardized innovations.
    pub residuals: Vec<f64>,
    /// Effective sample size after differencing.
    pub n_obs: usize,
    pub convergence: Convergence,
    #[serde(skip)]
    pub(crate) with_intercept: bool,
    /// Filtered state at the end of the sample (forecast seed).
    #[serde(skip)]
    pub(crate) final_state: Vec<f64>,
    /// Last value of each partially differenced series, innermost last;
    /// seeds for integrating forecasts back to the original scale.
    #[serde(skip)]
    pub(crate) integration_tail: Vec<f64>,
}

impl ArimaFit {
    pub fn with_intercept(&self) -> bool {
        self.with_intercept
    }

    /// Parameter count entering the information criteria.
    pub fn parameter_count(&self) -> usize {
        self.order.p + self.order.q + usize::from(self.with_intercept) + 1
    }

    /// Re-filters `series` at this fit's coefficients: same parameters,
    /// fresh innovations, state, variance, and likelihood. Useful for
    /// rolling-origin forecasting with a model estimated once.
    pub fn reapply(&self, series: &TimeSeries) -> Result<ArimaFit> {
        fit_at(
            series,
            self.order,
            self.with_intercept,
            &self.ar_coeffs,
            &self.ma_coeffs,
            self.intercept,
            self.convergence,
        )
    }
}

/// Differences `d` times, also returning the last value of each partial
/// difference (the integration seeds for forecasting).
fn difference_with_tails(series: &TimeSeries, d: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut tails = Vec::with_capacity(d);
    let mut current = series.values().to_vec();
    for _ in 0..d {
        if current.len() < 2 {
            return Err(Error::TooShort {
                operation: "difference",
                required: d + 1,
                actual: series.len(),
            });
        }
        tails.push(*current.last().expect("non-empty"));
        current = current.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok((current, tails))
}

struct ParamLayout {
    p: usize,
    q: usize,
    with_intercept: bool,
}

impl ParamLayout {
    fn dim(&self) -> usize {
        self.p + self.q + usize::from(self.with_intercept)
    }

    fn unpack(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let ar = transform::unconstrained_to_ar(&z[..self.p]);
        let ma = transform::unconstrained_to_ma(&z[self.p..self.p + self.q]);
        let mean = if self.with_intercept {
            z[self.p + self.q]
        } else {
            0.0
        };
        (ar, ma, mean)
    }
}

/// Fits ARIMA(p,d,q) by exact maximum likelihood with default optimizer
/// settings.
pub fn fit(series: &TimeSeries, order: ArimaOrder, with_intercept: bool) -> Result<ArimaFit> {
    fit_with_options(series, order, with_intercept, &FitOptions::default())
}

/// Fits ARIMA(p,d,q) by exact maximum likelihood.
pub fn fit_with_options(
    series: &TimeSeries,
    order: ArimaOrder,
    with_intercept: bool,
    options: &FitOptions,
) -> Result<ArimaFit> {
    let required = order.d + order.p + order.q + 10;
    if series.len() < required {
        return Err(Error::TooShort {
            operation: "arima fit",
            required,
            actual: series.len(),
        });
    }

    let (w, _) = difference_with_tails(series, order.d)?;
    let layout = ParamLayout {
        p: order.p,
        q: order.q,
        with_intercept,
    };

    // White noise has a closed-form MLE; skip the optimizer entirely.
    if order.p == 0 && order.q == 0 {
        let mean = if with_intercept {
            w.iter().sum::<f64>() / w.len() as f64
        } else {
            0.0
        };
        return fit_at(
            series,
            order,
            with_intercept,
            &[],
            &[],
            mean,
            Convergence {
                converged: true,
                iterations: 0,
            },
        );
    }

    let sample_mean = w.iter().sum::<f64>() / w.len() as f64;
    let centered: Vec<f64> = if with_intercept {
        w.iter().map(|v| v - sample_mean).collect()
    } else {
        w.clone()
    };
    let (ar0, ma0) = estimate::start_values(&centered, order.p, order.q);

    let mut start = transform::ar_to_unconstrained(&ar0);
    start.extend(transform::ma_to_unconstrained(&ma0));
    if with_intercept {
        start.push(sample_mean);
    }
    debug_assert_eq!(start.len(), layout.dim());

    // Warm start: polish on the conditional sum of squares, which is
    // much cheaper than the exact likelihood per evaluation.
    let css_polisher = NelderMead {
        max_iterations: 200,
        tolerance: 1e-6,
        initial_step: 0.25,
    };
    let css_min = css_polisher.minimize(&start, |z| {
        let (ar, ma, mean) = layout.unpack(z);
        estimate::css_objective(&w, mean, &ar, &ma)
    });
    let warm = if css_min.value.is_finite() {
        css_min.point
    } else {
        start
    };

    let ml = NelderMead {
        max_iterations: options.max_iterations,
        tolerance: options.tolerance,
        initial_step: 0.1,
    };
    let minimum = ml.minimize(&warm, |z| {
        let (ar, ma, mean) = layout.unpack(z);
        let demeaned: Vec<f64> = w.iter().map(|v| v - mean).collect();
        match kalman::concentrated_loglik(&StateSpace::new(&ar, &ma), &demeaned) {
            Ok(ll) => -ll,
            Err(_) => f64::INFINITY,
        }
    });
    if !minimum.value.is_finite() {
        return Err(Error::Likelihood {
            context: "likelihood not evaluable anywhere near the start values",
        });
    }

    let (ar, ma, mean) = layout.unpack(&minimum.point);
    let convergence = Convergence {
        converged: minimum.converged,
        iterations: minimum.iterations,
    };
    let fitted = fit_at(series, order, with_intercept, &ar, &ma, mean, convergence)?;

    if !minimum.converged {
        return Err(Error::NonConvergence {
            iterations: minimum.iterations,
            best: Box::new(fitted),
        });
    }
    Ok(fitted)
}

/// Evaluates the model at fixed coefficients and assembles an
/// [`ArimaFit`] from the filter output.
fn fit_at(
    series: &TimeSeries,
    order: ArimaOrder,
    with_intercept: bool,
    ar: &[f64],
    ma: &[f64],
    mean: f64,
    convergence: Convergence,
) -> Result<ArimaFit> {
    let (w, integration_tail) = difference_with_tails(series, order.d)?;
    let demeaned: Vec<f64> = w.iter().map(|v| v - mean).collect();
    let out = kalman::filter(&StateSpace::new(ar, ma), &demeaned)?;

    let n_obs = w.len();
    let k = order.p + order.q + usize::from(with_intercept) + 1;
    let aic = -2.0 * out.log_likelihood + 2.0 * k as f64;
    let bic = -2.0 * out.log_likelihood + k as f64 * (n_obs as f64).ln();

    let residuals = out
        .innovations
        .iter()
        .zip(&out.innovation_scales)
        .map(|(v, f)| v / (out.sigma2 * f).sqrt())
        .collect();

    Ok(ArimaFit {
        order,
        ar_coeffs: ar.to_vec(),
        ma_coeffs: ma.to_vec(),
        intercept: mean,
        sigma2: out.sigma2,
        log_likelihood: out.log_likelihood,
        aic,
        bic,
        residuals,
        n_obs,
        convergence,
        with_intercept,
        final_state: out.final_state,
        integration_tail,
    })
}

/// Ljung-Box check of the fit's residuals (with `p + q` fitted
/// parameters), plus the residual ACF for plotting.
pub fn diagnose(fit: &ArimaFit, lags: usize) -> Result<(TestReport, CorrelationSequence)> {
    let fitted_params = fit.order.p + fit.order.q;
    let report = ljung_box(&fit.residuals, lags, fitted_params)?;
    let residual_acf = acf_from_values(&fit.residuals, lags)?;
    Ok((report, residual_acf))
}
