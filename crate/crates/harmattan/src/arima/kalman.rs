#![allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra

//! Kalman filter over the ARMA state-space form: exact Gaussian
//! likelihood by prediction-error decomposition.
//!
//! The filter runs with unit innovation variance; the scale is
//! concentrated out, so the variance MLE is `sum(v^2 / F) / n` and the
//! concentrated log-likelihood needs only `sum ln F` and `sum v^2 / F`.
//! The initial state covariance is the exact stationary solution of the
//! Lyapunov equation `P = T P T' + R R'`, solved in vectorized form.

use crate::error::{Error, Result};
use crate::linalg::solve;

use super::state_space::StateSpace;

const F_FLOOR: f64 = 1e-12;

/// Everything a full filter pass produces.
pub(crate) struct FilterOutput {
    pub log_likelihood: f64,
    /// Variance MLE with divisor n.
    pub sigma2: f64,
    /// Raw one-step prediction errors `v_t`.
    pub innovations: Vec<f64>,
    /// Relative innovation variances `F_t` (unit-scale filter).
    pub innovation_scales: Vec<f64>,
    /// Filtered state at the end of the sample.
    pub final_state: Vec<f64>,
}

/// Solves `P = T P T' + Q` through `(I - T (x) T) vec(P) = vec(Q)`.
pub(crate) fn stationary_covariance(ss: &StateSpace) -> Result<Vec<Vec<f64>>> {
    let r = ss.r;
    let r2 = r * r;
    let mut lhs = vec![vec![0.0; r2]; r2];
    for i in 0..r2 {
        lhs[i][i] = 1.0;
    }
    for i in 0..r {
        for j in 0..r {
            let t_ij = ss.t[i][j];
            if t_ij == 0.0 {
                continue;
            }
            for k in 0..r {
                for l in 0..r {
                    lhs[i * r + k][j * r + l] -= t_ij * ss.t[k][l];
                }
            }
        }
    }
    let mut rhs = vec![0.0; r2];
    for i in 0..r {
        for k in 0..r {
            rhs[i * r + k] = ss.rrt[i][k];
        }
    }
    let flat = solve(lhs, rhs).map_err(|_| Error::Likelihood {
        context: "stationary covariance is singular (parameters at the unit circle)",
    })?;
    let mut p = vec![vec![0.0; r]; r];
    for i in 0..r {
        for k in 0..r {
            p[i][k] = flat[i * r + k];
        }
    }
    Ok(p)
}

/// Runs the filter over `data` (already demeaned) and returns the full
/// decomposition. Errors when an innovation variance degenerates.
pub(crate) fn filter(ss: &StateSpace, data: &[f64]) -> Result<FilterOutput> {
    let r = ss.r;
    let n = data.len();
    let mut x = vec![0.0; r];
    let mut p = stationary_covariance(ss)?;

    let mut sum_ln_f = 0.0;
    let mut sum_v2_f = 0.0;
    let mut innovations = Vec::with_capacity(n);
    let mut innovation_scales = Vec::with_capacity(n);

    let mut x_pred = vec![0.0; r];
    let mut tp = vec![vec![0.0; r]; r];
    let mut p_pred = vec![vec![0.0; r]; r];
    let mut gain = vec![0.0; r];

    for &y in data {
        // x_pred = T x
        for i in 0..r {
            let mut acc = 0.0;
            for k in 0..r {
                acc += ss.t[i][k] * x[k];
            }
            x_pred[i] = acc;
        }
        // P_pred = T P T' + RR'
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0.0;
                for k in 0..r {
                    acc += ss.t[i][k] * p[k][j];
                }
                tp[i][j] = acc;
            }
        }
        for i in 0..r {
            for j in 0..r {
                let mut acc = ss.rrt[i][j];
                for k in 0..r {
                    acc += tp[i][k] * ss.t[j][k];
                }
                p_pred[i][j] = acc;
            }
        }

        let f = p_pred[0][0];
        if !f.is_finite() || f < F_FLOOR {
            return Err(Error::Likelihood {
                context: "innovation variance degenerated",
            });
        }
        let v = y - x_pred[0];
        sum_ln_f += f.ln();
        sum_v2_f += v * v / f;
        innovations.push(v);
        innovation_scales.push(f);

        for i in 0..r {
            gain[i] = p_pred[i][0] / f;
        }
        for i in 0..r {
            x[i] = x_pred[i] + gain[i] * v;
        }
        for i in 0..r {
            for j in 0..r {
                p[i][j] = p_pred[i][j] - gain[i] * p_pred[0][j];
            }
        }
    }

    let nf = n as f64;
    let sigma2 = sum_v2_f / nf;
    if sigma2 <= 0.0 || !sigma2.is_finite() {
        return Err(Error::Likelihood {
            context: "variance estimate degenerated",
        });
    }
    let log_likelihood = -0.5 * nf * (2.0 * std::f64::consts::PI).ln()
        - 0.5 * nf * sigma2.ln()
        - 0.5 * nf
        - 0.5 * sum_ln_f;

    Ok(FilterOutput {
        log_likelihood,
        sigma2,
        innovations,
        innovation_scales,
        final_state: x,
    })
}

/// Concentrated log-likelihood only; the optimizer hot path.
pub(crate) fn concentrated_loglik(ss: &StateSpace, data: &[f64]) -> Result<f64> {
    filter(ss, data).map(|out| out.log_likelihood)
}

/// Exact Gaussian log-likelihood of demeaned data at fixed parameters,
/// including a fixed innovation variance (nothing concentrated).
///
/// This is the cross-checkable quantity: for white noise it reduces to
/// the closed-form i.i.d. normal log-likelihood, and for a stationary
/// AR(p) it equals the log-density obtained from the theoretical
/// autocovariance matrix.
pub fn exact_loglikelihood(
    values: &[f64],
    ar: &[f64],
    ma: &[f64],
    mean: f64,
    sigma2: f64,
) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if sigma2 <= 0.0 {
        return Err(Error::OutOfRange {
            name: "sigma2",
            value: sigma2.to_string(),
            expected: "positive",
        });
    }
    let ss = StateSpace::new(ar, ma);
    let demeaned: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let r = ss.r;
    let n = demeaned.len();

    let mut x = vec![0.0; r];
    let mut p = stationary_covariance(&ss)?;
    let mut sum_ln_f = 0.0;
    let mut sum_v2_f = 0.0;
    let mut x_pred = vec![0.0; r];
    let mut tp = vec![vec![0.0; r]; r];
    let mut p_pred = vec![vec![0.0; r]; r];
    let mut gain = vec![0.0; r];

    for &y in &demeaned {
        for i in 0..r {
            let mut acc = 0.0;
            for k in 0..r {
                acc += ss.t[i][k] * x[k];
            }
            x_pred[i] = acc;
        }
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0.0;
                for k in 0..r {
                    acc += ss.t[i][k] * p[k][j];
                }
                tp[i][j] = acc;
            }
        }
        for i in 0..r {
            for j in 0..r {
                let mut acc = ss.rrt[i][j];
                for k in 0..r {
                    acc += tp[i][k] * ss.t[j][k];
                }
                p_pred[i][j] = acc;
            }
        }
        let f = p_pred[0][0];
        if !f.is_finite() || f < F_FLOOR {
            return Err(Error::Likelihood {
                context: "innovation variance degenerated",
            });
        }
        let v = y - x_pred[0];
        sum_ln_f += f.ln();
        sum_v2_f += v * v / f;
        for i in 0..r {
            gain[i] = p_pred[i][0] / f;
        }
        for i in 0..r {
            x[i] = x_pred[i] + gain[i] * v;
        }
        for i in 0..r {
            for j in 0..r {
                p[i][j] = p_pred[i][j] - gain[i] * p_pred[0][j];
            }
        }
    }

    let nf = n as f64;
    Ok(-0.5 * nf * (2.0 * std::f64::consts::PI * sigma2).ln()
        - 0.5 * sum_ln_f
        - 0.5 * sum_v2_f / sigma2)
}
