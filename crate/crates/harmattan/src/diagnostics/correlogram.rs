//! Sample autocorrelation and partial autocorrelation functions.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

use super::CorrelationSequence;

fn check_variance(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|&v| (v - mean) * (v - mean)).sum();
    if ss <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((mean, ss))
}

/// Sample autocorrelation function up to `max_lag`.
///
/// `r(k) = sum_{t=k}^{n-1} (y_t - mean)(y_{t-k} - mean) / sum (y_t - mean)^2`
/// with `r(0) = 1` exactly.
pub fn acf(series: &TimeSeries, max_lag: usize) -> Result<CorrelationSequence> {
    acf_from_values(series.values(), max_lag)
}

/// ACF on a raw slice; residual vectors are not a `TimeSeries`.
pub(crate) fn acf_from_values(values: &[f64], max_lag: usize) -> Result<CorrelationSequence> {
    let n = values.len();
    if max_lag >= n {
        return Err(Error::OutOfRange {
            name: "max_lag",
            value: max_lag.to_string(),
            expected: "less than the series length",
        });
    }
    let (mean, ss) = check_variance(values)?;

    let mut r = Vec::with_capacity(max_lag + 1);
    r.push(1.0);
    for k in 1..=max_lag {
        let num: f64 = (k..n)
            .map(|t| (values[t] - mean) * (values[t - k] - mean))
            .sum();
        r.push(num / ss);
    }
    Ok(CorrelationSequence::new(r, n))
}

/// Partial autocorrelations via the Durbin-Levinson recursion on the
/// sample ACF. Entry at lag 1 equals `r(1)` by the recursion's base case.
#[allow(clippy::needless_range_loop)] // the recursion indexes from both ends
pub fn pacf(series: &TimeSeries, max_lag: usize) -> Result<CorrelationSequence> {
    let n = series.len();
    if max_lag == 0 || 2 * max_lag >= n {
        return Err(Error::OutOfRange {
            name: "max_lag",
            value: max_lag.to_string(),
            expected: "in 1..n/2 for a stable recursion",
        });
    }
    let r = acf(series, max_lag)?;
    let mut pacf_values = Vec::with_capacity(max_lag + 1);
    pacf_values.push(1.0);

    // phi holds the order-k AR coefficients phi_{k,1..k}.
    let mut phi = vec![0.0; max_lag + 1];
    let mut prev = vec![0.0; max_lag + 1];
    phi[1] = r.values[1];
    pacf_values.push(phi[1]);

    for k in 2..=max_lag {
        prev[..k].copy_from_slice(&phi[..k]);
        let mut num = r.values[k];
        let mut den = 1.0;
        for j in 1..k {
            num -= prev[j] * r.values[k - j];
            den -= prev[j] * r.values[j];
        }
        if den.abs() < 1e-12 {
            return Err(Error::RankDeficient {
                context: "Durbin-Levinson denominator vanished",
            });
        }
        let reflection = num / den;
        phi[k] = reflection;
        for j in 1..k {
            phi[j] = prev[j] - reflection * prev[k - j];
        }
        pacf_values.push(reflection);
    }
    Ok(CorrelationSequence::new(pacf_values, n))
}
