//! Weight serialization: a flat named-array container with the training
//! configuration and scaler embedded.
//!
//! Array names and shapes (`H` = hidden size):
//!
//! | name                         | length | meaning                          |
//! |------------------------------|--------|----------------------------------|
//! | `w_xh`                       | H      | RNN input weights                |
//! | `w_hh`                       | H*H    | RNN recurrent weights, row-major |
//! | `b_h`                        | H      | RNN hidden bias                  |
//! | `w_xi` `w_xf` `w_xg` `w_xo`  | H      | LSTM input weights per gate      |
//! | `w_hi` `w_hf` `w_hg` `w_ho`  | H*H    | LSTM recurrent weights per gate  |
//! | `b_i` `b_f` `b_g` `b_o`      | H      | LSTM gate biases                 |
//! | `w_hy`                       | H      | dense head weights               |
//! | `b_y`                        | 1      | dense head bias                  |
//!
//! Gate order everywhere is input, forget, cell candidate, output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::ScalerState;

use super::cells::{weight_count, LstmLayout, RnnLayout, GATE_NAMES};
use super::{RecurrentKind, RecurrentModel, TrainConfig};

/// Serializable model container.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub kind: RecurrentKind,
    pub config: TrainConfig,
    pub scaler: ScalerState,
    /// Named weight tensors, flattened row-major.
    pub arrays: BTreeMap<String, Vec<f64>>,
}

fn segments(kind: RecurrentKind, h: usize) -> Vec<(String, usize, usize)> {
    match kind {
        RecurrentKind::SimpleRnn => {
            let lay = RnnLayout::new(h);
            vec![
                ("w_xh".into(), lay.w_xh, h),
                ("w_hh".into(), lay.w_hh, h * h),
                ("b_h".into(), lay.b_h, h),
                ("w_hy".into(), lay.w_hy, h),
                ("b_y".into(), lay.b_y, 1),
            ]
        }
        RecurrentKind::Lstm => {
            let lay = LstmLayout::new(h);
            let mut out = Vec::with_capacity(14);
            for (g, name) in GATE_NAMES.iter().enumerate() {
                out.push((format!("w_x{name}"), lay.w_x[g], h));
            }
            for (g, name) in GATE_NAMES.iter().enumerate() {
                out.push((format!("w_h{name}"), lay.w_h[g], h * h));
            }
            for (g, name) in GATE_NAMES.iter().enumerate() {
                out.push((format!("b_{name}"), lay.b[g], h));
            }
            out.push(("w_hy".into(), lay.w_hy, h));
            out.push(("b_y".into(), lay.b_y, 1));
            out
        }
    }
}

impl SavedModel {
    /// Packs a trained model (with its scaler and config) for storage.
    pub fn pack(model: &RecurrentModel, scaler: &ScalerState, config: &TrainConfig) -> Self {
        let mut arrays = BTreeMap::new();
        for (name, offset, len) in segments(model.kind, model.hidden_size) {
            arrays.insert(name, model.weights[offset..offset + len].to_vec());
        }
        Self {
            kind: model.kind,
            config: *config,
            scaler: *scaler,
            arrays,
        }
    }

    /// Rebuilds the model, validating every array against the configured
    /// hidden size.
    pub fn unpack(&self) -> Result<(RecurrentModel, ScalerState)> {
        let h = self.config.hidden_size;
        let mut weights = vec![0.0; weight_count(self.kind, h)];
        for (name, offset, len) in segments(self.kind, h) {
            let array = self.arrays.get(&name).ok_or_else(|| Error::ShapeMismatch {
                context: format!("missing array {name}"),
            })?;
            if array.len() != len {
                return Err(Error::ShapeMismatch {
                    context: format!("array {name}: expected {len} values, found {}", array.len()),
                });
            }
            weights[offset..offset + len].copy_from_slice(array);
        }
        let model = RecurrentModel {
            kind: self.kind,
            hidden_size: h,
            look_back: self.config.look_back,
            weights,
        };
        model.check_shapes()?;
        Ok((model, self.scaler))
    }
}
