#![allow(clippy::needless_range_loop)] // index loops mirror the cell algebra

//! Recurrent cell arithmetic: forward passes and exact backpropagation
//! through time for the simple RNN and the LSTM.
//!
//! Weights live in one flat vector per model; the layout structs below
//! give every named tensor its offset. Gradients use the same layout, so
//! clipping and optimizer updates are plain vector operations.

use crate::error::{Error, Result};

use super::{RecurrentKind, RecurrentModel};

/// Offsets into the flat weight vector of a simple RNN.
///
/// `h_t = tanh(w_xh * x_t + W_hh h_{t-1} + b_h)`, prediction
/// `w_hy . h_L + b_y`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RnnLayout {
    pub w_xh: usize,
    pub w_hh: usize,
    pub b_h: usize,
    pub w_hy: usize,
    pub b_y: usize,
    pub total: usize,
}

impl RnnLayout {
    pub fn new(h: usize) -> Self {
        let w_xh = 0;
        let w_hh = w_xh + h;
        let b_h = w_hh + h * h;
        let w_hy = b_h + h;
        let b_y = w_hy + h;
        Self {
            w_xh,
            w_hh,
            b_h,
            w_hy,
            b_y,
            total: b_y + 1,
        }
    }
}

/// Offsets into the flat weight vector of an LSTM. Gate order is input,
/// forget, cell candidate, output.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LstmLayout {
    /// Input weights, one length-`h` block per gate.
    pub w_x: [usize; 4],
    /// Recurrent weights, one `h*h` block per gate.
    pub w_h: [usize; 4],
    /// Biases, one length-`h` block per gate.
    pub b: [usize; 4],
    pub w_hy: usize,
    pub b_y: usize,
    pub total: usize,
}

pub(crate) const GATE_INPUT: usize = 0;
pub(crate) const GATE_FORGET: usize = 1;
pub(crate) const GATE_CELL: usize = 2;
pub(crate) const GATE_OUTPUT: usize = 3;

/// Gate names in layout order; also the serialization suffixes.
pub(crate) const GATE_NAMES: [&str; 4] = ["i", "f", "g", "o"];

impl LstmLayout {
    pub fn new(h: usize) -> Self {
        let mut offset = 0;
        let mut w_x = [0; 4];
        for slot in w_x.iter_mut() {
            *slot = offset;
            offset += h;
        }
        let mut w_h = [0; 4];
        for slot in w_h.iter_mut() {
            *slot = offset;
            offset += h * h;
        }
        let mut b = [0; 4];
        for slot in b.iter_mut() {
            *slot = offset;
            offset += h;
        }
        let w_hy = offset;
        offset += h;
        let b_y = offset;
        offset += 1;
        Self {
            w_x,
            w_h,
            b,
            w_hy,
            b_y,
            total: offset,
        }
    }
}

/// Expected flat weight count for a model shape.
pub(crate) fn weight_count(kind: RecurrentKind, hidden_size: usize) -> usize {
    match kind {
        RecurrentKind::SimpleRnn => RnnLayout::new(hidden_size).total,
        RecurrentKind::Lstm => LstmLayout::new(hidden_size).total,
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Cheap fingerprint tying a cache to the exact weights that built it.
pub(crate) fn weight_fingerprint(weights: &[f64]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for w in weights {
        hash ^= w.to_bits();
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Intermediate activations retained by [`forward`] for BPTT.
#[derive(Debug, Clone)]
pub struct Cache {
    pub(crate) kind: RecurrentKind,
    pub(crate) hidden_size: usize,
    pub(crate) fingerprint: u64,
    pub(crate) window: Vec<f64>,
    /// Hidden states h_1..h_L, each length `hidden_size`.
    pub(crate) hidden: Vec<Vec<f64>>,
    /// LSTM only: cell states c_1..c_L.
    pub(crate) cell: Vec<Vec<f64>>,
    /// LSTM only: gate activations per step, `[i, f, g, o]`.
    pub(crate) gates: Vec<[Vec<f64>; 4]>,
    pub(crate) prediction: f64,
}

/// Runs the network over `window` and returns the prediction together
/// with the activations needed by [`backward`].
pub fn forward(model: &RecurrentModel, window: &[f64]) -> Result<(f64, Cache)> {
    if window.is_empty() {
        return Err(Error::TooShort {
            operation: "forward",
            required: 1,
            actual: 0,
        });
    }
    if let Some((index, &value)) = window.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    model.check_shapes()?;

    let h = model.hidden_size;
    let weights = &model.weights;
    let mut cache = Cache {
        kind: model.kind,
        hidden_size: h,
        fingerprint: weight_fingerprint(weights),
        window: window.to_vec(),
        hidden: Vec::with_capacity(window.len()),
        cell: Vec::new(),
        gates: Vec::new(),
        prediction: 0.0,
    };

    let prediction = match model.kind {
        RecurrentKind::SimpleRnn => {
            let lay = RnnLayout::new(h);
            let mut state = vec![0.0; h];
            for &x in window {
                let mut next = vec![0.0; h];
                for i in 0..h {
                    let mut pre = weights[lay.w_xh + i] * x + weights[lay.b_h + i];
                    let row = lay.w_hh + i * h;
                    for j in 0..h {
                        pre += weights[row + j] * state[j];
                    }
                    next[i] = pre.tanh();
                }
                cache.hidden.push(next.clone());
                state = next;
            }
            let mut out = weights[lay.b_y];
            for i in 0..h {
                out += weights[lay.w_hy + i] * state[i];
            }
            out
        }
        RecurrentKind::Lstm => {
            let lay = LstmLayout::new(h);
            let mut hidden = vec![0.0; h];
            let mut cell = vec![0.0; h];
            for &x in window {
                let mut gates: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; h]);
                for (g, gate) in gates.iter_mut().enumerate() {
                    for i in 0..h {
                        let mut pre = weights[lay.w_x[g] + i] * x + weights[lay.b[g] + i];
                        let row = lay.w_h[g] + i * h;
                        for j in 0..h {
                            pre += weights[row + j] * hidden[j];
                        }
                        gate[i] = if g == GATE_CELL {
                            pre.tanh()
                        } else {
                            sigmoid(pre)
                        };
                    }
                }
                let mut next_cell = vec![0.0; h];
                let mut next_hidden = vec![0.0; h];
                for i in 0..h {
                    next_cell[i] =
                        gates[GATE_FORGET][i] * cell[i] + gates[GATE_INPUT][i] * gates[GATE_CELL][i];
                    next_hidden[i] = gates[GATE_OUTPUT][i] * next_cell[i].tanh();
                }
                cache.gates.push(gates);
                cache.cell.push(next_cell.clone());
                cache.hidden.push(next_hidden.clone());
                cell = next_cell;
                hidden = next_hidden;
            }
            let mut out = weights[lay.b_y];
            for i in 0..h {
                out += weights[lay.w_hy + i] * hidden[i];
            }
            out
        }
    };

    cache.prediction = prediction;
    Ok((prediction, cache))
}

/// Exact gradients of `0.5 * (prediction - target)^2` with respect to
/// every weight, backpropagated through all time steps. The returned
/// vector shares the model's flat layout.
pub fn backward(model: &RecurrentModel, cache: &Cache, target: f64) -> Result<Vec<f64>> {
    model.check_shapes()?;
    if cache.kind != model.kind
        || cache.hidden_size != model.hidden_size
        || cache.fingerprint != weight_fingerprint(&model.weights)
    {
        return Err(Error::ShapeMismatch {
            context: "stale cache: produced by a different model or weight state".to_string(),
        });
    }

    let h = model.hidden_size;
    let steps = cache.window.len();
    let weights = &model.weights;
    let mut grad = vec![0.0; weights.len()];
    let d_pred = cache.prediction - target;

    match model.kind {
        RecurrentKind::SimpleRnn => {
            let lay = RnnLayout::new(h);
            grad[lay.b_y] = d_pred;
            let last = &cache.hidden[steps - 1];
            for i in 0..h {
                grad[lay.w_hy + i] = d_pred * last[i];
            }

            let mut d_hidden: Vec<f64> = (0..h).map(|i| d_pred * weights[lay.w_hy + i]).collect();
            for t in (0..steps).rev() {
                let h_t = &cache.hidden[t];
                let x_t = cache.window[t];
                // d pre-activation through tanh.
                let d_pre: Vec<f64> = (0..h)
                    .map(|i| d_hidden[i] * (1.0 - h_t[i] * h_t[i]))
                    .collect();
                let prev: Option<&Vec<f64>> = if t > 0 { Some(&cache.hidden[t - 1]) } else { None };
                for i in 0..h {
                    grad[lay.w_xh + i] += d_pre[i] * x_t;
                    grad[lay.b_h + i] += d_pre[i];
                    if let Some(prev) = prev {
                        let row = lay.w_hh + i * h;
                        for j in 0..h {
                            grad[row + j] += d_pre[i] * prev[j];
                        }
                    }
                }
                if t > 0 {
                    let mut d_prev = vec![0.0; h];
                    for i in 0..h {
                        let row = lay.w_hh + i * h;
                        for (j, slot) in d_prev.iter_mut().enumerate() {
                            *slot += weights[row + j] * d_pre[i];
                        }
                    }
                    d_hidden = d_prev;
                }
            }
        }
        RecurrentKind::Lstm => {
            let lay = LstmLayout::new(h);
            grad[lay.b_y] = d_pred;
            let last = &cache.hidden[steps - 1];
            for i in 0..h {
                grad[lay.w_hy + i] = d_pred * last[i];
            }

            let mut d_hidden: Vec<f64> = (0..h).map(|i| d_pred * weights[lay.w_hy + i]).collect();
            let mut d_cell = vec![0.0; h];
            for t in (0..steps).rev() {
                let gates = &cache.gates[t];
                let c_t = &cache.cell[t];
                let x_t = cache.window[t];
                let prev_h: Option<&Vec<f64>> =
                    if t > 0 { Some(&cache.hidden[t - 1]) } else { None };
                let prev_c: Option<&Vec<f64>> = if t > 0 { Some(&cache.cell[t - 1]) } else { None };

                // One d-pre-activation vector per gate, layout order.
                let mut d_pre: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; h]);
                for i in 0..h {
                    let tanh_c = c_t[i].tanh();
                    let o = gates[GATE_OUTPUT][i];
                    let dc = d_cell[i] + d_hidden[i] * o * (1.0 - tanh_c * tanh_c);

                    let d_o = d_hidden[i] * tanh_c;
                    d_pre[GATE_OUTPUT][i] = d_o * o * (1.0 - o);

                    let g = gates[GATE_CELL][i];
                    let input = gates[GATE_INPUT][i];
                    d_pre[GATE_INPUT][i] = dc * g * input * (1.0 - input);
                    d_pre[GATE_CELL][i] = dc * input * (1.0 - g * g);

                    let f = gates[GATE_FORGET][i];
                    let c_prev = prev_c.map_or(0.0, |c| c[i]);
                    d_pre[GATE_FORGET][i] = dc * c_prev * f * (1.0 - f);

                    d_cell[i] = dc * f;
                }

                let mut d_prev_hidden = vec![0.0; h];
                for (g, d_pre_gate) in d_pre.iter().enumerate() {
                    for i in 0..h {
                        grad[lay.w_x[g] + i] += d_pre_gate[i] * x_t;
                        grad[lay.b[g] + i] += d_pre_gate[i];
                        let row = lay.w_h[g] + i * h;
                        if let Some(prev) = prev_h {
                            for j in 0..h {
                                grad[row + j] += d_pre_gate[i] * prev[j];
                            }
                        }
                        for (j, slot) in d_prev_hidden.iter_mut().enumerate() {
                            *slot += weights[row + j] * d_pre_gate[i];
                        }
                    }
                }
                d_hidden = d_prev_hidden;
                if t == 0 {
                    d_cell = vec![0.0; h];
                }
            }
        }
    }

    Ok(grad)
}
