//! KPSS stationarity test, level variant.
//!
//! The null is level-stationarity; the test is right-tailed. The
//! statistic is `eta = n^{-2} sum S_t^2 / s^2(l)` where `S_t` are partial
//! sums of the demeaned data and `s^2(l)` is the Newey-West long-run
//! variance with Bartlett weights.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

use super::{interpolate_p, CriticalValues, TestReport};

const MIN_OBSERVATIONS: usize = 20;

/// Published critical values for the level-stationary case.
const CRITICAL: [(f64, f64); 4] = [(0.01, 0.739), (0.025, 0.574), (0.05, 0.463), (0.10, 0.347)];

/// `(statistic, p)` rows with p increasing: the upper tail of the KPSS
/// level distribution. P-values outside `[0.01, 0.10]` are clipped and
/// flagged.
const P_TABLE: [(f64, f64); 4] = [(0.739, 0.01), (0.574, 0.025), (0.463, 0.05), (0.347, 0.10)];

/// Default Newey-West bandwidth, `floor(4 * (n/100)^{1/4})`.
pub(crate) fn default_bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Bartlett-kernel long-run variance of `e` with bandwidth `lags`.
fn newey_west_variance(e: &[f64], lags: usize) -> f64 {
    let n = e.len();
    let nf = n as f64;
    let gamma = |j: usize| -> f64 { (j..n).map(|t| e[t] * e[t - j]).sum::<f64>() / nf };
    let mut s2 = gamma(0);
    for j in 1..=lags.min(n - 1) {
        let weight = 1.0 - j as f64 / (lags as f64 + 1.0);
        s2 += 2.0 * weight * gamma(j);
    }
    s2
}

/// KPSS test for level stationarity. `bandwidth` overrides the default
/// Newey-West lag truncation when given.
pub fn kpss_test(series: &TimeSeries, bandwidth: Option<usize>) -> Result<TestReport> {
    let y = series.values();
    let n = y.len();
    if n < MIN_OBSERVATIONS {
        return Err(Error::TooShort {
            operation: "kpss_test",
            required: MIN_OBSERVATIONS,
            actual: n,
        });
    }

    let mean = y.iter().sum::<f64>() / n as f64;
    let e: Vec<f64> = y.iter().map(|v| v - mean).collect();
    if e.iter().map(|v| v * v).sum::<f64>() <= 0.0 {
        return Err(Error::ZeroVariance);
    }

    let mut cumulative = 0.0;
    let mut sum_s2 = 0.0;
    for &u in &e {
        cumulative += u;
        sum_s2 += cumulative * cumulative;
    }

    let lags = bandwidth.unwrap_or_else(|| default_bandwidth(n));
    let long_run = newey_west_variance(&e, lags);
    if long_run <= 0.0 {
        return Err(Error::RankDeficient {
            context: "non-positive long-run variance",
        });
    }

    let nf = n as f64;
    let statistic = sum_s2 / (nf * nf * long_run);
    let critical_values = CriticalValues::new(&CRITICAL);
    // The table covers only p in [0.01, 0.10]: a statistic below the 10%
    // value reports as "p >= 0.10", one beyond the 1% value as
    // "p <= 0.01".
    let (p_value, p_value_bound) = interpolate_p(&P_TABLE, statistic);
    let reject_null = statistic > critical_values.at(0.05).expect("5% level tabulated");

    Ok(TestReport {
        test: "kpss".to_string(),
        statistic,
        p_value,
        p_value_bound,
        critical_values,
        reject_null,
        lags_used: lags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::PValueBound;
    use crate::arima::{simulate_arma, simulate_random_walk};
    use crate::series::TimeSeries;

    fn ts(values: Vec<f64>) -> TimeSeries {
        TimeSeries::monthly(values, 2010, 1).unwrap()
    }

    #[test]
    fn white_noise_is_stationary() {
        let data = simulate_arma(&[], &[], 2.0, 1.0, 500, 13, 0);
        let report = kpss_test(&ts(data), None).unwrap();
        assert!(!report.reject_null, "statistic = {}", report.statistic);
        assert_eq!(report.p_value_bound, PValueBound::AtLeast);
        assert_eq!(report.p_value, 0.10);
    }

    #[test]
    fn random_walk_rejects_stationarity() {
        let data = simulate_random_walk(500, 13);
        let report = kpss_test(&ts(data), None).unwrap();
        assert!(report.reject_null, "statistic = {}", report.statistic);
    }

    #[test]
    fn shift_invariant_to_1e10() {
        let data = simulate_arma(&[0.5], &[], 0.0, 1.0, 400, 3, 100);
        let shifted: Vec<f64> = data.iter().map(|v| v + 1000.0).collect();
        let a = kpss_test(&ts(data), None).unwrap();
        let b = kpss_test(&ts(shifted), None).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-10);
    }

    #[test]
    fn critical_values_reverse_ordered() {
        let data = simulate_arma(&[], &[], 0.0, 1.0, 100, 1, 0);
        let report = kpss_test(&ts(data), None).unwrap();
        let entries = report.critical_values.entries();
        for pair in entries.windows(2) {
            assert!(pair[0].1 > pair[1].1, "KPSS cv must fall as level rises");
        }
    }

    #[test]
    fn default_bandwidth_matches_convention() {
        assert_eq!(default_bandwidth(100), 4);
        assert_eq!(default_bandwidth(144), 4);
        assert_eq!(default_bandwidth(500), 5);
    }

    #[test]
    fn decision_agrees_with_critical_value() {
        for seed in 0..5 {
            let data = simulate_random_walk(200, seed);
            let report = kpss_test(&ts(data), None).unwrap();
            let cv5 = report.critical_values.at(0.05).unwrap();
            assert_eq!(report.reject_null, report.statistic > cv5);
        }
    }

    #[test]
    fn rejects_short_and_constant() {
        assert!(kpss_test(&ts(vec![1.0; 10]), None).is_err());
        assert!(matches!(
            kpss_test(&ts(vec![3.0; 50]), None),
            Err(Error::ZeroVariance)
        ));
    }
}
