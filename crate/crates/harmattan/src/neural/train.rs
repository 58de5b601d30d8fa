//! The training loop: scale, window, then per-window gradient steps with
//! global-norm clipping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{apply_scaler, fit_scaler, make_windows_from, ScalerState, TimeSeries};

use super::cells::{backward, forward};
use super::{OptimizerKind, RecurrentKind, RecurrentModel, TrainConfig};

/// Per-epoch training record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean squared error on scaled training targets, one entry per epoch.
    pub loss_history: Vec<f64>,
    pub final_loss: f64,
    pub epochs_run: usize,
}

/// Scales all gradients so their global norm is at most `max_norm`.
/// Returns the norm before clipping. Iterates on the rare float-rounding
/// overshoot so the post-condition holds exactly.
pub(crate) fn clip_global_norm(grad: &mut [f64], max_norm: f64) -> f64 {
    let norm = |g: &[f64]| g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let before = norm(grad);
    let mut current = before;
    while current > max_norm {
        let scale = max_norm / current;
        for g in grad.iter_mut() {
            *g *= scale;
        }
        current = norm(grad);
    }
    before
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPSILON: f64 = 1e-8;

    fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    fn step(&mut self, weights: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.t as i32);
        let bc2 = 1.0 - Self::BETA2.powi(self.t as i32);
        for i in 0..weights.len() {
            self.m[i] = Self::BETA1 * self.m[i] + (1.0 - Self::BETA1) * grad[i];
            self.v[i] = Self::BETA2 * self.v[i] + (1.0 - Self::BETA2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            weights[i] -= lr * m_hat / (v_hat.sqrt() + Self::EPSILON);
        }
    }
}

/// Trains a recurrent forecaster on `series`.
///
/// The scaler is fitted on the given (training) series; windows come
/// from the scaled values; the loop runs `epochs` passes of one update
/// per window in chronological order. Deterministic given the seed.
pub fn train(
    series: &TimeSeries,
    config: &TrainConfig,
    kind: RecurrentKind,
) -> Result<(RecurrentModel, ScalerState, TrainReport)> {
    config.validate()?;
    if series.len() <= config.look_back + 1 {
        return Err(Error::TooShort {
            operation: "train",
            required: config.look_back + 2,
            actual: series.len(),
        });
    }

    let scaler = fit_scaler(series)?;
    let scaled = apply_scaler(series.values(), &scaler);
    let windows = make_windows_from(&scaled, config.look_back)?;

    let mut model = RecurrentModel::initialize(kind, config);
    let mut adam = match config.optimizer {
        OptimizerKind::Adam => Some(Adam::new(model.weights.len())),
        OptimizerKind::Sgd => None,
    };

    let mut loss_history = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let mut squared_error_sum = 0.0;
        for (window, &target) in windows.inputs.iter().zip(&windows.targets) {
            let (prediction, cache) = forward(&model, window)?;
            let error = prediction - target;
            squared_error_sum += error * error;

            let mut grad = backward(&model, &cache, target)?;
            clip_global_norm(&mut grad, config.gradient_clip);

            match adam.as_mut() {
                Some(adam) => adam.step(&mut model.weights, &grad, config.learning_rate),
                None => {
                    for (w, g) in model.weights.iter_mut().zip(&grad) {
                        *w -= config.learning_rate * g;
                    }
                }
            }
            if model.weights.iter().any(|w| !w.is_finite()) {
                return Err(Error::Diverged { epoch });
            }
        }
        let epoch_loss = squared_error_sum / windows.len() as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        loss_history.push(epoch_loss);
    }

    let final_loss = *loss_history.last().expect("epochs > 0");
    let report = TrainReport {
        final_loss,
        epochs_run: loss_history.len(),
        loss_history,
    };
    Ok((model, scaler, report))
}
