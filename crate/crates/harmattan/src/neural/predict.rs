//! Prediction over a span: teacher-forced one-step overlays and
//! recursive multi-step forecasts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{ScalerState, TimeSeries};

use super::cells::forward;
use super::RecurrentModel;

/// How lagged inputs are sourced during prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionMode {
    /// Each prediction uses the true preceding observations; the
    /// predictions cover the final `steps` positions of `history`.
    TeacherForced,
    /// Predictions are fed back as inputs; the predictions cover `steps`
    /// positions after the end of `history`.
    Recursive,
}

/// Predicts `steps` values on the original scale.
///
/// Teacher-forced mode reads true lags out of `history` and therefore
/// needs `history.len() >= look_back + steps`; recursive mode needs only
/// `look_back` observations to seed the feedback loop.
pub fn predict_series(
    model: &RecurrentModel,
    scaler: &ScalerState,
    history: &TimeSeries,
    steps: usize,
    mode: PredictionMode,
) -> Result<Vec<f64>> {
    let look_back = model.look_back;
    if history.len() < look_back {
        return Err(Error::TooShort {
            operation: "predict_series",
            required: look_back,
            actual: history.len(),
        });
    }
    if steps == 0 {
        return Ok(Vec::new());
    }

    let scaled: Vec<f64> = history.values().iter().map(|&v| scaler.apply_one(v)).collect();
    let mut out = Vec::with_capacity(steps);

    match mode {
        PredictionMode::TeacherForced => {
            if history.len() < look_back + steps {
                return Err(Error::TooShort {
                    operation: "predict_series (teacher forced)",
                    required: look_back + steps,
                    actual: history.len(),
                });
            }
            let first_target = scaled.len() - steps;
            for t in first_target..scaled.len() {
                let (prediction, _) = forward(model, &scaled[t - look_back..t])?;
                out.push(scaler.invert_one(prediction));
            }
        }
        PredictionMode::Recursive => {
            let mut buffer: Vec<f64> = scaled[scaled.len() - look_back..].to_vec();
            for _ in 0..steps {
                let (prediction, _) = forward(model, &buffer)?;
                out.push(scaler.invert_one(prediction));
                buffer.remove(0);
                buffer.push(prediction);
            }
        }
    }
    Ok(out)
}
