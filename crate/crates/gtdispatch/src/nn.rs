//! Minimal feedforward function approximator with exact reverse-mode
//! gradients and an Adam optimizer.
//!
//! Parameters live in one flat vector (weights row-major, then biases, per
//! layer; a Gaussian head appends one global log-std per output). This is
//! all the agents need: 6-input networks with small hidden layers.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Tanh,
    Relu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputHead {
    Linear,
    Softmax,
    /// Linear means plus a state-independent learnable log-std per output
    /// dimension. Forward output is `[means..., log_stds...]`.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden_layers: Vec<usize>,
    pub activation: Activation,
    pub output_dim: usize,
    pub output_head: OutputHead,
}

impl NetworkSpec {
    pub fn new(
        input_dim: usize,
        hidden_layers: Vec<usize>,
        activation: Activation,
        output_dim: usize,
        output_head: OutputHead,
    ) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 || hidden_layers.iter().any(|&w| w == 0) {
            return Err(Error::Config("network dimensions must be positive".into()));
        }
        Ok(Self {
            input_dim,
            hidden_layers,
            activation,
            output_dim,
            output_head,
        })
    }

    /// Layer widths including input and output.
    pub fn dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden_layers.len() + 2);
        dims.push(self.input_dim);
        dims.extend_from_slice(&self.hidden_layers);
        dims.push(self.output_dim);
        dims
    }

    pub fn param_count(&self) -> usize {
        let dims = self.dims();
        let mut n = 0;
        for w in dims.windows(2) {
            n += w[1] * w[0] + w[1];
        }
        if self.output_head == OutputHead::Gaussian {
            n += self.output_dim;
        }
        n
    }

    /// Forward output length (`2 * output_dim` for the Gaussian head).
    pub fn output_len(&self) -> usize {
        match self.output_head {
            OutputHead::Gaussian => 2 * self.output_dim,
            _ => self.output_dim,
        }
    }
}

/// Xavier-uniform initialization; Gaussian log-stds start at -0.5.
pub fn init_params(spec: &NetworkSpec, rng: &mut impl Rng) -> Vec<f64> {
    let dims = spec.dims();
    let mut params = Vec::with_capacity(spec.param_count());
    for w in dims.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for _ in 0..fan_out * fan_in {
            params.push(rng.gen_range(-bound..bound));
        }
        params.extend(std::iter::repeat(0.0).take(fan_out));
    }
    if spec.output_head == OutputHead::Gaussian {
        params.extend(std::iter::repeat(-0.5).take(spec.output_dim));
    }
    params
}

fn check_shapes(spec: &NetworkSpec, params: &[f64], input: &[f64]) -> Result<()> {
    if params.len() != spec.param_count() {
        return Err(Error::Domain(format!(
            "parameter vector length {} does not match spec ({})",
            params.len(),
            spec.param_count()
        )));
    }
    if input.len() != spec.input_dim {
        return Err(Error::Domain(format!(
            "input length {} does not match input_dim {}",
            input.len(),
            spec.input_dim
        )));
    }
    Ok(())
}

fn activate(a: Activation, x: f64) -> f64 {
    match a {
        Activation::Tanh => x.tanh(),
        Activation::Relu => x.max(0.0),
    }
}

/// Derivative of the activation expressed via its output value.
fn activate_grad(a: Activation, y: f64) -> f64 {
    match a {
        Activation::Tanh => 1.0 - y * y,
        Activation::Relu => {
            if y > 0.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

/// Activations of every layer (post-activation), ending with the pre-head
/// output of the final affine layer.
fn forward_cache(spec: &NetworkSpec, params: &[f64], input: &[f64]) -> Vec<Vec<f64>> {
    let dims = spec.dims();
    let mut layers = Vec::with_capacity(dims.len());
    layers.push(input.to_vec());
    let mut offset = 0;
    for (li, w) in dims.windows(2).enumerate() {
        let (n_in, n_out) = (w[0], w[1]);
        let weights = &params[offset..offset + n_out * n_in];
        let biases = &params[offset + n_out * n_in..offset + n_out * n_in + n_out];
        offset += n_out * n_in + n_out;
        let prev = layers.last().unwrap();
        let last_layer = li == dims.len() - 2;
        let mut out = Vec::with_capacity(n_out);
        for j in 0..n_out {
            let mut z = biases[j];
            let row = &weights[j * n_in..(j + 1) * n_in];
            for (wji, xi) in row.iter().zip(prev.iter()) {
                z += wji * xi;
            }
            out.push(if last_layer {
                z
            } else {
                activate(spec.activation, z)
            });
        }
        layers.push(out);
    }
    layers
}

/// Evaluate the network. Softmax heads return a probability vector;
/// Gaussian heads return `[means..., log_stds...]`.
pub fn forward(spec: &NetworkSpec, params: &[f64], input: &[f64]) -> Result<Vec<f64>> {
    check_shapes(spec, params, input)?;
    let layers = forward_cache(spec, params, input);
    let pre_head = layers.last().unwrap();
    Ok(match spec.output_head {
        OutputHead::Linear => pre_head.clone(),
        OutputHead::Softmax => softmax(pre_head),
        OutputHead::Gaussian => {
            let mut out = pre_head.clone();
            out.extend_from_slice(&params[params.len() - spec.output_dim..]);
            out
        }
    })
}

/// Exact reverse-mode gradient of `output . output_gradient` with respect
/// to the flat parameter vector.
pub fn backward(
    spec: &NetworkSpec,
    params: &[f64],
    input: &[f64],
    output_gradient: &[f64],
) -> Result<Vec<f64>> {
    check_shapes(spec, params, input)?;
    if output_gradient.len() != spec.output_len() {
        return Err(Error::Domain(format!(
            "output gradient length {} does not match output length {}",
            output_gradient.len(),
            spec.output_len()
        )));
    }

    let layers = forward_cache(spec, params, input);
    let pre_head = layers.last().unwrap();
    let mut grad = vec![0.0; params.len()];

    // Gradient at the pre-head affine output.
    let mut delta: Vec<f64> = match spec.output_head {
        OutputHead::Linear => output_gradient.to_vec(),
        OutputHead::Softmax => {
            // dL/dz_j = p_j * (g_j - sum_k g_k p_k)
            let p = softmax(pre_head);
            let dot: f64 = output_gradient.iter().zip(&p).map(|(g, pi)| g * pi).sum();
            p.iter()
                .zip(output_gradient)
                .map(|(pi, g)| pi * (g - dot))
                .collect()
        }
        OutputHead::Gaussian => {
            let od = spec.output_dim;
            let tail = params.len() - od;
            for k in 0..od {
                grad[tail + k] = output_gradient[od + k];
            }
            output_gradient[..od].to_vec()
        }
    };

    // Per-layer parameter offsets.
    let dims = spec.dims();
    let mut offsets = Vec::with_capacity(dims.len() - 1);
    let mut offset = 0;
    for w in dims.windows(2) {
        offsets.push(offset);
        offset += w[1] * w[0] + w[1];
    }

    for li in (0..dims.len() - 1).rev() {
        let (n_in, n_out) = (dims[li], dims[li + 1]);
        let base = offsets[li];
        let prev = &layers[li];
        for j in 0..n_out {
            let dj = delta[j];
            let wrow = base + j * n_in;
            for i in 0..n_in {
                grad[wrow + i] += dj * prev[i];
            }
            grad[base + n_out * n_in + j] += dj;
        }
        if li > 0 {
            let mut next_delta = vec![0.0; n_in];
            for j in 0..n_out {
                let dj = delta[j];
                let wrow = base + j * n_in;
                for i in 0..n_in {
                    next_delta[i] += dj * params[wrow + i];
                }
            }
            // Through the activation of layer li.
            for (nd, y) in next_delta.iter_mut().zip(prev.iter()) {
                *nd *= activate_grad(spec.activation, *y);
            }
            delta = next_delta;
        }
    }
    Ok(grad)
}

/// Adam hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamHyper {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamHyper {
    pub fn with_lr(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            ..Self::default()
        }
    }
}

/// First/second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// One bias-corrected Adam step (descent direction). Pure: returns the
/// updated parameters and moments.
pub fn adam_update(
    params: &[f64],
    gradient: &[f64],
    state: &AdamState,
    hyper: &AdamHyper,
) -> Result<(Vec<f64>, AdamState)> {
    if gradient.len() != params.len() || state.m.len() != params.len() {
        return Err(Error::Domain("adam shape mismatch".into()));
    }
    if gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::Training("non-finite gradient in adam_update".into()));
    }
    let t = state.t + 1;
    let bc1 = 1.0 - hyper.beta1.powi(t as i32);
    let bc2 = 1.0 - hyper.beta2.powi(t as i32);
    let mut new = AdamState {
        m: Vec::with_capacity(params.len()),
        v: Vec::with_capacity(params.len()),
        t,
    };
    let mut out = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let m = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * gradient[i];
        let v = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * gradient[i] * gradient[i];
        let m_hat = m / bc1;
        let v_hat = v / bc2;
        out.push(params[i] - hyper.learning_rate * m_hat / (v_hat.sqrt() + hyper.epsilon));
        new.m.push(m);
        new.v.push(v);
    }
    Ok((out, new))
}

/// Convenience wrapper owning parameters and optimizer state.
#[derive(Debug, Clone)]
pub struct Network {
    pub spec: NetworkSpec,
    pub params: Vec<f64>,
    adam: AdamState,
    hyper: AdamHyper,
}

impl Network {
    pub fn new(spec: NetworkSpec, hyper: AdamHyper, rng: &mut impl Rng) -> Self {
        let params = init_params(&spec, rng);
        let n = params.len();
        Self {
            spec,
            params,
            adam: AdamState::new(n),
            hyper,
        }
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        forward(&self.spec, &self.params, input)
    }

    pub fn backward(&self, input: &[f64], output_gradient: &[f64]) -> Result<Vec<f64>> {
        backward(&self.spec, &self.params, input, output_gradient)
    }

    /// Apply one Adam descent step with the given loss gradient.
    pub fn apply_gradient(&mut self, gradient: &[f64]) -> Result<()> {
        let (params, adam) = adam_update(&self.params, gradient, &self.adam, &self.hyper)?;
        self.params = params;
        self.adam = adam;
        Ok(())
    }

    pub fn zero_gradient(&self) -> Vec<f64> {
        vec![0.0; self.params.len()]
    }
}

// --- Checkpoints ------------------------------------------------------------

/// Save parameters with their spec header. Text format: one JSON header
/// line, then one parameter per line.
pub fn save_checkpoint(path: &Path, spec: &NetworkSpec, params: &[f64]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let header = serde_json::to_string(spec)
        .map_err(|e| Error::Config(format!("cannot serialize network spec: {e}")))?;
    writeln!(file, "{header}")?;
    for p in params {
        writeln!(file, "{p}")?;
    }
    file.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<(NetworkSpec, Vec<f64>)> {
    let file = BufReader::new(std::fs::File::open(path)?);
    let mut lines = file.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("empty checkpoint {}", path.display())))??;
    let spec: NetworkSpec = serde_json::from_str(&header)
        .map_err(|e| Error::Config(format!("bad checkpoint header: {e}")))?;
    let mut params = Vec::with_capacity(spec.param_count());
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        params.push(line.trim().parse::<f64>().map_err(|_| Error::Parse {
            file: path.display().to_string(),
            line: i + 2,
            message: format!("bad parameter value '{line}'"),
        })?);
    }
    if params.len() != spec.param_count() {
        return Err(Error::Config(format!(
            "checkpoint has {} parameters, spec needs {}",
            params.len(),
            spec.param_count()
        )));
    }
    Ok((spec, params))
}
