//! Starting values and the conditional-sum-of-squares objective used to
//! warm-start the exact likelihood optimization.

/// Sample autocovariance at lag `k` (divisor n).
fn autocovariance(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    if k >= n {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    (k..n)
        .map(|t| (values[t] - mean) * (values[t - k] - mean))
        .sum::<f64>()
        / n as f64
}

/// Yule-Walker AR estimates via the Levinson recursion. Falls back to
/// zeros when the sample covariance is degenerate.
fn yule_walker(values: &[f64], p: usize) -> Vec<f64> {
    if p == 0 || values.len() <= p {
        return vec![0.0; p];
    }
    let gammas: Vec<f64> = (0..=p).map(|k| autocovariance(values, k)).collect();
    if gammas[0].abs() < 1e-15 {
        return vec![0.0; p];
    }
    let mut phi = vec![0.0; p];
    let mut prev = vec![0.0; p];
    let mut var = gammas[0];
    for k in 0..p {
        let mut num = gammas[k + 1];
        for j in 0..k {
            num -= phi[j] * gammas[k - j];
        }
        if var.abs() < 1e-15 {
            return vec![0.0; p];
        }
        let reflection = (num / var).clamp(-0.98, 0.98);
        prev[..p].copy_from_slice(&phi);
        phi[k] = reflection;
        for j in 0..k {
            phi[j] = prev[j] - reflection * prev[k - 1 - j];
        }
        var *= 1.0 - reflection * reflection;
    }
    phi
}

/// Hannan-Rissanen style start values on the (differenced) series:
/// Yule-Walker for the AR part, then MA coefficients from the
/// autocorrelations of the AR residuals, clamped to the interior.
pub(crate) fn start_values(w: &[f64], p: usize, q: usize) -> (Vec<f64>, Vec<f64>) {
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    let centered: Vec<f64> = w.iter().map(|v| v - mean).collect();
    let ar = yule_walker(&centered, p);

    let ma = if q == 0 {
        Vec::new()
    } else {
        let residuals: Vec<f64> = (p..centered.len())
            .map(|t| {
                let mut e = centered[t];
                for (i, &phi) in ar.iter().enumerate() {
                    e -= phi * centered[t - 1 - i];
                }
                e
            })
            .collect();
        if residuals.len() <= q {
            vec![0.0; q]
        } else {
            let g0 = autocovariance(&residuals, 0);
            if g0.abs() < 1e-15 {
                vec![0.0; q]
            } else {
                (1..=q)
                    .map(|k| (autocovariance(&residuals, k) / g0).clamp(-0.9, 0.9))
                    .collect()
            }
        }
    };
    (ar, ma)
}

/// Conditional sum of squares of the ARMA recursion, conditioning on the
/// first `p` observations and zero pre-sample innovations. Returned on a
/// log scale so the warm-start optimizer sees a well-conditioned surface.
pub(crate) fn css_objective(w: &[f64], mean: f64, ar: &[f64], ma: &[f64]) -> f64 {
    let p = ar.len();
    let n = w.len();
    if n <= p {
        return f64::INFINITY;
    }
    let x: Vec<f64> = w.iter().map(|v| v - mean).collect();
    let mut eps = vec![0.0; n];
    let mut sum_sq = 0.0;
    for t in p..n {
        let mut e = x[t];
        for (i, &phi) in ar.iter().enumerate() {
            e -= phi * x[t - 1 - i];
        }
        for (j, &theta) in ma.iter().enumerate() {
            if t > j {
                e -= theta * eps[t - 1 - j];
            }
        }
        eps[t] = e;
        sum_sq += e * e;
    }
    let n_eff = (n - p) as f64;
    if sum_sq <= 0.0 || !sum_sq.is_finite() {
        return f64::INFINITY;
    }
    n_eff * (sum_sq / n_eff).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arima::simulate_arma;

    #[test]
    fn yule_walker_near_truth_on_ar2() {
        let data = simulate_arma(&[0.5, 0.2], &[], 0.0, 1.0, 5000, 77, 200);
        let phi = yule_walker(&data, 2);
        assert!((phi[0] - 0.5).abs() < 0.06, "{phi:?}");
        assert!((phi[1] - 0.2).abs() < 0.06, "{phi:?}");
    }

    #[test]
    fn start_values_are_finite_and_sized() {
        let data = simulate_arma(&[0.4], &[0.3], 2.0, 1.0, 300, 5, 100);
        let (ar, ma) = start_values(&data, 2, 2);
        assert_eq!(ar.len(), 2);
        assert_eq!(ma.len(), 2);
        assert!(ar.iter().chain(&ma).all(|v| v.is_finite()));
    }

    #[test]
    fn css_prefers_truth_over_zero() {
        let data = simulate_arma(&[0.7], &[], 0.0, 1.0, 1000, 13, 200);
        let at_truth = css_objective(&data, 0.0, &[0.7], &[]);
        let at_zero = css_objective(&data, 0.0, &[0.0], &[]);
        assert!(at_truth < at_zero);
    }
}
