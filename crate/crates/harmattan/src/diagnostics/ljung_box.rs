//! Ljung-Box portmanteau test for residual autocorrelation.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

use super::{CriticalValues, PValueBound, TestReport};

/// Ljung-Box test of joint nullity of the first `lags` residual
/// autocorrelations: `Q = n(n+2) sum_{k=1}^{h} r(k)^2 / (n-k)`, compared
/// against a chi-square with `lags - fitted_params` degrees of freedom.
pub fn ljung_box(residuals: &[f64], lags: usize, fitted_params: usize) -> Result<TestReport> {
    if lags <= fitted_params {
        return Err(Error::InvalidDof {
            lags,
            fitted_params,
        });
    }
    let n = residuals.len();
    if n <= lags {
        return Err(Error::TooShort {
            operation: "ljung_box",
            required: lags + 1,
            actual: n,
        });
    }

    let nf = n as f64;
    let mean = residuals.iter().sum::<f64>() / nf;
    let centered: Vec<f64> = residuals.iter().map(|v| v - mean).collect();
    let denom: f64 = centered.iter().map(|v| v * v).sum();

    let mut q = 0.0;
    if denom > 0.0 {
        for k in 1..=lags {
            let num: f64 = (k..n).map(|t| centered[t] * centered[t - k]).sum();
            let r = num / denom;
            q += r * r / (n - k) as f64;
        }
        q *= nf * (nf + 2.0);
    }
    // denom == 0 means constant residuals: all sample autocorrelations
    // are taken as zero, so Q = 0 and p = 1.

    let dof = (lags - fitted_params) as f64;
    let chi2 = ChiSquared::new(dof).expect("dof >= 1");
    let p_value = chi2.sf(q);
    let critical_values = CriticalValues::new(&[
        (0.01, chi2.inverse_cdf(0.99)),
        (0.05, chi2.inverse_cdf(0.95)),
        (0.10, chi2.inverse_cdf(0.90)),
    ]);
    let reject_null = q > critical_values.at(0.05).expect("5% level tabulated");

    Ok(TestReport {
        test: "ljung_box".to_string(),
        statistic: q,
        p_value,
        p_value_bound: PValueBound::Exact,
        critical_values,
        reject_null,
        lags_used: lags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arima::simulate_arma;

    #[test]
    fn zero_correlation_gives_q_zero_p_one() {
        // Alternating +1/-1 has r(k) = -1 at odd lags, so build a vector
        // whose sample autocorrelations vanish by construction instead:
        // constant residuals degenerate to r(k) = 0 for every k.
        let residuals = vec![0.5; 64];
        let report = ljung_box(&residuals, 10, 0).unwrap();
        assert_eq!(report.statistic, 0.0);
        assert_eq!(report.p_value, 1.0);
        assert!(!report.reject_null);
    }

    #[test]
    fn dof_guard() {
        let residuals = vec![1.0, -1.0, 0.5, -0.5, 0.2, -0.2];
        assert!(matches!(
            ljung_box(&residuals, 2, 2),
            Err(Error::InvalidDof { .. })
        ));
        assert!(matches!(
            ljung_box(&residuals, 6, 0),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn strong_autocorrelation_rejects() {
        let data = simulate_arma(&[0.9], &[], 0.0, 1.0, 500, 17, 100);
        let report = ljung_box(&data, 10, 0).unwrap();
        assert!(report.p_value < 0.01, "p = {}", report.p_value);
        assert!(report.reject_null);
    }

    #[test]
    fn white_noise_calibration() {
        let mut rejections = 0;
        let replications = 200;
        for seed in 0..replications {
            let data = simulate_arma(&[], &[], 0.0, 1.0, 500, 1000 + seed, 0);
            let report = ljung_box(&data, 10, 0).unwrap();
            if report.p_value < 0.05 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / replications as f64;
        assert!((0.01..=0.10).contains(&rate), "rejection rate {rate}");
    }

    #[test]
    fn decision_agrees_with_critical_value() {
        for seed in 0..5 {
            let data = simulate_arma(&[0.4], &[], 0.0, 1.0, 300, seed, 50);
            let report = ljung_box(&data, 8, 0).unwrap();
            let cv5 = report.critical_values.at(0.05).unwrap();
            assert_eq!(report.reject_null, report.statistic > cv5);
            assert_eq!(report.reject_null, report.p_value < 0.05);
        }
    }

    #[test]
    fn q_monotone_in_lag_count() {
        let data = simulate_arma(&[0.3], &[], 0.0, 1.0, 300, 2, 50);
        let mut previous = 0.0;
        for h in 1..=15 {
            let report = ljung_box(&data, h, 0).unwrap();
            assert!(report.statistic >= previous - 1e-12);
            previous = report.statistic;
        }
    }
}
