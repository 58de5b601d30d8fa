//! Augmented Dickey-Fuller unit-root test, constant-only regression.
//!
//! Fits `dy_t = alpha + gamma * y_{t-1} + sum_i beta_i * dy_{t-i} + e_t`
//! by least squares and reports the t-ratio of `gamma`. The null is a
//! unit root; the test is left-tailed. The lag order is chosen by AIC
//! over `0..=floor(12 * (n/100)^{1/4})` (the Schwert upper bound) unless
//! a fixed lag is supplied.

use crate::error::{Error, Result};
use crate::linalg::{ols, OlsFit};
use crate::series::TimeSeries;

use super::{interpolate_p, CriticalValues, TestReport};

const MIN_OBSERVATIONS: usize = 20;

/// MacKinnon (2010) response-surface coefficients for the constant-only
/// case: cv = b0 + b1/T + b2/T^2 + b3/T^3.
const CV_SURFACE: [(f64, [f64; 4]); 3] = [
    (0.01, [-3.43035, -6.5393, -16.786, -79.433]),
    (0.05, [-2.86154, -2.8903, -4.234, -40.040]),
    (0.10, [-2.56677, -1.5384, -2.809, 0.0]),
];

/// Asymptotic quantiles of the Dickey-Fuller t distribution for the
/// constant-only regression (Fuller's tabulation), used for p-value
/// interpolation. Rows are `(statistic, p)` with `p` increasing.
const P_TABLE: [(f64, f64); 8] = [
    (-3.43, 0.01),
    (-3.12, 0.025),
    (-2.86, 0.05),
    (-2.57, 0.10),
    (-0.44, 0.90),
    (-0.07, 0.95),
    (0.23, 0.975),
    (0.60, 0.99),
];

/// `floor(12 * (n/100)^{1/4})`, capped so the regression keeps at least
/// one residual degree of freedom.
pub(crate) fn schwert_max_lag(n: usize) -> usize {
    let schwert = (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;
    schwert.min((n.saturating_sub(4)) / 2)
}

/// Builds the ADF regression for lag order `k`, using observations
/// `t = start..n` of the level series (`start >= k + 1`).
fn adf_regression(y: &[f64], k: usize, start: usize) -> Result<OlsFit> {
    let n = y.len();
    debug_assert!(start > k && start >= 1);
    let mut design = Vec::with_capacity(n - start);
    let mut response = Vec::with_capacity(n - start);
    for t in start..n {
        let mut row = Vec::with_capacity(k + 2);
        row.push(1.0);
        row.push(y[t - 1]);
        for i in 1..=k {
            row.push(y[t - i] - y[t - i - 1]);
        }
        design.push(row);
        response.push(y[t] - y[t - 1]);
    }
    ols(&design, &response)
}

fn regression_aic(fit: &OlsFit, n_params: usize) -> f64 {
    -2.0 * fit.log_likelihood() + 2.0 * (n_params as f64 + 1.0)
}

/// Augmented Dickey-Fuller test. `max_lag` fixes the lag order when
/// given; otherwise the order is selected by AIC on a common sample.
pub fn adf_test(series: &TimeSeries, max_lag: Option<usize>) -> Result<TestReport> {
    let y = series.values();
    let n = y.len();
    if n < MIN_OBSERVATIONS {
        return Err(Error::TooShort {
            operation: "adf_test",
            required: MIN_OBSERVATIONS,
            actual: n,
        });
    }

    let lag = match max_lag {
        Some(k) => {
            // Fixed lag: the regression must keep a residual dof.
            let nobs = n.saturating_sub(k + 1);
            if nobs < k + 3 + 1 {
                return Err(Error::TooShort {
                    operation: "adf_test (fixed lag)",
                    required: 2 * k + 5,
                    actual: n,
                });
            }
            k
        }
        None => {
            // AIC selection over a common sample so criteria are comparable.
            let upper = schwert_max_lag(n);
            let start = upper + 1;
            let mut best = (0usize, f64::INFINITY);
            for k in 0..=upper {
                if let Ok(fit) = adf_regression(y, k, start) {
                    let aic = regression_aic(&fit, k + 2);
                    if aic < best.1 {
                        best = (k, aic);
                    }
                }
            }
            if best.1.is_infinite() {
                return Err(Error::RankDeficient {
                    context: "ADF lag selection: every candidate regression was singular",
                });
            }
            best.0
        }
    };

    let fit = adf_regression(y, lag, lag + 1)?;
    let statistic = fit.t_ratio(1);
    let t = fit.n_obs as f64;
    let entries: Vec<(f64, f64)> = CV_SURFACE
        .iter()
        .map(|&(level, [b0, b1, b2, b3])| (level, b0 + b1 / t + b2 / (t * t) + b3 / (t * t * t)))
        .collect();
    let critical_values = CriticalValues::new(&entries);
    let (p_value, p_value_bound) = interpolate_p(&P_TABLE, statistic);
    let reject_null = statistic < critical_values.at(0.05).expect("5% level tabulated");

    Ok(TestReport {
        test: "adf".to_string(),
        statistic,
        p_value,
        p_value_bound,
        critical_values,
        reject_null,
        lags_used: lag,
    })
}
