//! From-scratch recurrent forecasters: a simple RNN and an LSTM with
//! full backpropagation through time, one-step-ahead training on scaled
//! look-back windows, and deterministic seeded initialization.
//!
//! Training is single-threaded and sequential by contract: the seed
//! fully determines initialization and the order of updates, so a
//! `(seed, config, data)` triple always reproduces identical weights.

mod cells;
mod io;
mod predict;
mod train;

pub use cells::{backward, forward, Cache};
pub use io::SavedModel;
pub use predict::{predict_series, PredictionMode};
pub use train::{train, TrainReport};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which recurrent architecture a model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrentKind {
    SimpleRnn,
    Lstm,
}

impl std::fmt::Display for RecurrentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecurrentKind::SimpleRnn => f.write_str("rnn"),
            RecurrentKind::Lstm => f.write_str("lstm"),
        }
    }
}

/// Gradient-descent flavor. Adam uses the fixed constants
/// `beta1 = 0.9`, `beta2 = 0.999`, `epsilon = 1e-8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

/// Training configuration. The seed fully determines initialization and
/// update order; updates happen once per window per epoch, windows
/// visited in chronological order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub look_back: usize,
    pub hidden_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Global-norm threshold applied to each window's gradients.
    pub gradient_clip: f64,
    pub optimizer: OptimizerKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            look_back: 12,
            hidden_size: 32,
            epochs: 300,
            learning_rate: 0.001,
            seed: 42,
            gradient_clip: 5.0,
            optimizer: OptimizerKind::Adam,
        }
    }
}

impl TrainConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        let checks: [(&'static str, bool); 5] = [
            ("look_back", self.look_back > 0),
            ("hidden_size", self.hidden_size > 0),
            ("epochs", self.epochs > 0),
            ("learning_rate", self.learning_rate > 0.0),
            ("gradient_clip", self.gradient_clip > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::OutOfRange {
                    name,
                    value: "non-positive".into(),
                    expected: "strictly positive",
                });
            }
        }
        Ok(())
    }
}

/// A recurrent forecaster: scalar input, one recurrent layer, linear
/// dense head. Weights are stored flat; see [`SavedModel`] for the named
/// serialization layout.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrentModel {
    pub kind: RecurrentKind,
    pub hidden_size: usize,
    /// Look-back window length the model was trained with.
    pub look_back: usize,
    pub(crate) weights: Vec<f64>,
}

impl RecurrentModel {
    /// Seeded initialization: every weight tensor is drawn uniformly in
    /// `+-1/sqrt(fan_in)`; biases start at zero except the LSTM forget
    /// gate, which starts at +1.
    pub fn initialize(kind: RecurrentKind, config: &TrainConfig) -> Self {
        let h = config.hidden_size;
        let mut rng = StdRng::seed_from_u64(config.seed);
        let mut draw = |count: usize, fan_in: usize, out: &mut Vec<f64>| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for _ in 0..count {
                out.push(rng.random_range(-bound..bound));
            }
        };

        let mut weights = Vec::with_capacity(cells::weight_count(kind, h));
        match kind {
            RecurrentKind::SimpleRnn => {
                draw(h, 1, &mut weights); // w_xh
                draw(h * h, h, &mut weights); // w_hh
                weights.extend(std::iter::repeat_n(0.0, h)); // b_h
                draw(h, h, &mut weights); // w_hy
                weights.push(0.0); // b_y
            }
            RecurrentKind::Lstm => {
                for _ in 0..4 {
                    draw(h, 1, &mut weights); // w_x per gate
                }
                for _ in 0..4 {
                    draw(h * h, h, &mut weights); // w_h per gate
                }
                for gate in 0..4 {
                    let bias = if gate == cells::GATE_FORGET { 1.0 } else { 0.0 };
                    weights.extend(std::iter::repeat_n(bias, h));
                }
                draw(h, h, &mut weights); // w_hy
                weights.push(0.0); // b_y
            }
        }
        debug_assert_eq!(weights.len(), cells::weight_count(kind, h));

        Self {
            kind,
            hidden_size: h,
            look_back: config.look_back,
            weights,
        }
    }

    /// Flat weight vector, layout documented in [`SavedModel`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mutable access to the flat weight vector (for custom
    /// initialization or perturbation studies); the layout is fixed by
    /// `kind` and `hidden_size`.
    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub(crate) fn check_shapes(&self) -> Result<()> {
        let expected = cells::weight_count(self.kind, self.hidden_size);
        if self.weights.len() != expected {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "{} with hidden size {} needs {expected} weights, found {}",
                    self.kind,
                    self.hidden_size,
                    self.weights.len()
                ),
            });
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::ShapeMismatch {
                context: "non-finite weight".to_string(),
            });
        }
        Ok(())
    }
}
