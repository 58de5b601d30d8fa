//! Multi-step forecasting with prediction intervals.
//!
//! Point forecasts come from iterating the Kalman prediction recursion
//! past the sample end. Forecast-error variances use the psi-weight
//! expansion, `Var(h) = sigma2 * sum_{j<h} psi_j^2`; for d > 0 the
//! weights are cumulated once per difference so the variance applies on
//! the original (integrated) scale.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

use super::state_space::StateSpace;
use super::ArimaFit;

/// Point forecasts with symmetric prediction intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub horizon: usize,
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Confidence level of the intervals, in (0, 1).
    pub level: f64,
}

/// First `count` weights of the MA(infinity) representation of an
/// ARMA(p,q): `psi_0 = 1`, `psi_j = theta_j + sum_i phi_i psi_{j-i}`.
pub fn psi_weights(ar: &[f64], ma: &[f64], count: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(count);
    if count == 0 {
        return psi;
    }
    psi.push(1.0);
    for j in 1..count {
        let mut value = if j <= ma.len() { ma[j - 1] } else { 0.0 };
        for (i, &phi) in ar.iter().enumerate() {
            if j > i {
                value += phi * psi[j - 1 - i];
            }
        }
        psi.push(value);
    }
    psi
}

impl ArimaFit {
    /// Forecasts `horizon` steps past the end of the fitted sample, with
    /// symmetric intervals at `level`, reported on the original scale.
    pub fn forecast(&self, horizon: usize, level: f64) -> Result<Forecast> {
        if horizon == 0 {
            return Err(Error::OutOfRange {
                name: "horizon",
                value: "0".into(),
                expected: "positive",
            });
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::OutOfRange {
                name: "level",
                value: level.to_string(),
                expected: "in (0, 1)",
            });
        }
        let ss = StateSpace::new(&self.ar_coeffs, &self.ma_coeffs);
        if self.final_state.len() != ss.r {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "fit carries no filter state ({} values, state dimension {}); \
                     a deserialized fit cannot forecast",
                    self.final_state.len(),
                    ss.r
                ),
            });
        }

        // Kalman prediction recursion on the differenced scale.
        let mut state = self.final_state.clone();
        let mut point = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let mut next = vec![0.0; ss.r];
            for (slot, row) in next.iter_mut().zip(&ss.t) {
                *slot = row.iter().zip(&state).map(|(t, x)| t * x).sum();
            }
            state = next;
            point.push(state[0] + self.intercept);
        }

        // Integrate point forecasts back through the d differences.
        for &seed in self.integration_tail.iter().rev() {
            let mut level_value = seed;
            for value in point.iter_mut() {
                level_value += *value;
                *value = level_value;
            }
        }

        // Psi weights of the integrated process: cumulate once per
        // difference.
        let mut psi = psi_weights(&self.ar_coeffs, &self.ma_coeffs, horizon);
        for _ in 0..self.order.d {
            for j in 1..psi.len() {
                psi[j] += psi[j - 1];
            }
        }

        let z = Normal::new(0.0, 1.0)
            .expect("standard normal")
            .inverse_cdf(0.5 + level / 2.0);
        let mut lower = Vec::with_capacity(horizon);
        let mut upper = Vec::with_capacity(horizon);
        let mut cumulative = 0.0;
        for (h, &p) in point.iter().enumerate() {
            cumulative += psi[h] * psi[h];
            let half_width = z * (self.sigma2 * cumulative).sqrt();
            lower.push(p - half_width);
            upper.push(p + half_width);
        }

        Ok(Forecast {
            horizon,
            point,
            lower,
            upper,
            level,
        })
    }
}
