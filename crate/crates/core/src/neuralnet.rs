//! Small fully connected feedforward networks.
//!
//! Parameters live in one flat vector. Layer `l` stores its `out × in` weight
//! matrix row-major, followed by its `out` biases; [`Network::gradient`]
//! returns gradients in the same layout.
//!
//! Inputs and outputs pass through per-dimension affine scalers: the input
//! scaler standardizes `x` before the first layer and the output scaler maps
//! the last layer's activation back to target units.

use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng as _;

use crate::rng::{self, stream};
use crate::{Error, Result};

/// Divergence threshold relative to the initial training MSE.
const DIVERGENCE_FACTOR: f64 = 1e6;

/// Scaler spreads below this are treated as constant dimensions.
const MIN_SCALE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// `tanh(z)`.
    TanSigmoid,
    Linear,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::TanSigmoid => z.tanh(),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the activation value `a`.
    #[inline]
    fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::TanSigmoid => 1.0 - a * a,
            Activation::Linear => 1.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Activation::TanSigmoid => "tansig",
            Activation::Linear => "linear",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "tansig" => Ok(Activation::TanSigmoid),
            "linear" => Ok(Activation::Linear),
            other => Err(Error::Parse { row: 0, column: None, message: format!("unknown activation `{other}`") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    layer_sizes: Vec<usize>,
    activations: Vec<Activation>,
}

impl Architecture {
    pub fn new(layer_sizes: Vec<usize>, activations: Vec<Activation>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Dimension("an architecture needs at least input and output layers".into()));
        }
        if activations.len() != layer_sizes.len() - 1 {
            return Err(Error::dimension(layer_sizes.len() - 1, activations.len(), "activation count"));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::Dimension("layer sizes must be at least 1".into()));
        }
        Ok(Architecture { layer_sizes, activations })
    }

    /// `inputs-7-3-1`: tanh into the first hidden layer, linear afterwards.
    pub fn prediction(inputs: usize) -> Self {
        use Activation::*;
        Architecture::new(vec![inputs, 7, 3, 1], vec![TanSigmoid, Linear, Linear])
            .expect("valid prediction architecture")
    }

    /// `1-2-1`: tanh hidden layer, linear output.
    pub fn inversion() -> Self {
        Architecture::new(vec![1, 2, 1], vec![Activation::TanSigmoid, Activation::Linear])
            .expect("valid inversion architecture")
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    pub fn inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn outputs(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn layers(&self) -> usize {
        self.activations.len()
    }

    pub fn param_count(&self) -> usize {
        self.layer_sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.layers());
        let mut at = 0;
        for w in self.layer_sizes.windows(2) {
            offsets.push(at);
            at += w[1] * w[0] + w[1];
        }
        offsets
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.layer_sizes.iter().map(|s| s.to_string()).collect();
        f.write_str(&sizes.join("-"))
    }
}

/// Per-dimension affine map `x ↦ (x − shift) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    shift: Vec<f64>,
    scale: Vec<f64>,
}

impl Scaler {
    pub fn identity(dim: usize) -> Self {
        Scaler { shift: vec![0.0; dim], scale: vec![1.0; dim] }
    }

    pub fn new(shift: Vec<f64>, scale: Vec<f64>) -> Result<Self> {
        if shift.len() != scale.len() {
            return Err(Error::dimension(shift.len(), scale.len(), "scaler scale length"));
        }
        if scale.iter().any(|s| !s.is_finite() || *s <= 0.0) || shift.iter().any(|s| !s.is_finite()) {
            return Err(Error::Numerical("scaler parameters must be finite with positive scale".into()));
        }
        Ok(Scaler { shift, scale })
    }

    /// Standardizes with the column mean and population standard deviation;
    /// constant columns get scale 1.
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let n = rows.len().max(1) as f64;
        let mut shift = vec![0.0; dim];
        for r in rows {
            for (m, v) in shift.iter_mut().zip(r.as_ref()) {
                *m += v;
            }
        }
        shift.iter_mut().for_each(|m| *m /= n);
        let mut scale = vec![0.0; dim];
        for r in rows {
            for ((s, v), m) in scale.iter_mut().zip(r.as_ref()).zip(&shift) {
                *s += (v - m) * (v - m);
            }
        }
        for s in scale.iter_mut() {
            let sd = (*s / n).sqrt();
            *s = if sd > MIN_SCALE { sd } else { 1.0 };
        }
        Scaler { shift, scale }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(self.shift.iter().zip(&self.scale)).map(|(v, (m, s))| (v - m) / s).collect()
    }

    pub fn invert(&self, z: &[f64]) -> Vec<f64> {
        z.iter().zip(self.shift.iter().zip(&self.scale)).map(|(v, (m, s))| v * s + m).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    arch: Architecture,
    params: Vec<f64>,
    offsets: Vec<usize>,
    input_scaler: Scaler,
    output_scaler: Scaler,
}

/// Uniform Glorot initialization, zero biases, identity scalers.
pub fn init_network(arch: &Architecture, seed: u64) -> Network {
    let mut rng = rng::rng(seed, stream::INIT);
    let mut params = vec![0.0; arch.param_count()];
    let offsets = arch.offsets();
    for (l, w) in arch.layer_sizes.windows(2).enumerate() {
        let (fan_in, fan_out) = (w[0], w[1]);
        let r = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for p in &mut params[offsets[l]..offsets[l] + fan_in * fan_out] {
            *p = rng.gen_range(-r..=r);
        }
    }
    Network {
        arch: arch.clone(),
        params,
        offsets,
        input_scaler: Scaler::identity(arch.inputs()),
        output_scaler: Scaler::identity(arch.outputs()),
    }
}

impl Network {
    /// Builds a network from explicit parameters in the flat layout.
    pub fn from_parts(
        arch: Architecture,
        params: Vec<f64>,
        input_scaler: Scaler,
        output_scaler: Scaler,
    ) -> Result<Self> {
        if params.len() != arch.param_count() {
            return Err(Error::dimension(arch.param_count(), params.len(), "parameter count"));
        }
        if input_scaler.dim() != arch.inputs() || output_scaler.dim() != arch.outputs() {
            return Err(Error::Dimension("scaler dimensions do not match the architecture".into()));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Numerical("non-finite parameter".into()));
        }
        let offsets = arch.offsets();
        Ok(Network { arch, params, offsets, input_scaler, output_scaler })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn input_scaler(&self) -> &Scaler {
        &self.input_scaler
    }

    pub fn output_scaler(&self) -> &Scaler {
        &self.output_scaler
    }

    pub fn set_scalers(&mut self, input: Scaler, output: Scaler) -> Result<()> {
        if input.dim() != self.arch.inputs() || output.dim() != self.arch.outputs() {
            return Err(Error::Dimension("scaler dimensions do not match the architecture".into()));
        }
        self.input_scaler = input;
        self.output_scaler = output;
        Ok(())
    }

    /// Row-major `out × in` weights of `layer`.
    pub fn weights(&self, layer: usize) -> &[f64] {
        let (i, o) = (self.arch.layer_sizes[layer], self.arch.layer_sizes[layer + 1]);
        &self.params[self.offsets[layer]..self.offsets[layer] + i * o]
    }

    pub fn biases(&self, layer: usize) -> &[f64] {
        let (i, o) = (self.arch.layer_sizes[layer], self.arch.layer_sizes[layer + 1]);
        let start = self.offsets[layer] + i * o;
        &self.params[start..start + o]
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.arch.inputs() {
            return Err(Error::dimension(self.arch.inputs(), x.len(), "network input"));
        }
        let mut acts = Activations::new(&self.arch);
        self.propagate(&self.input_scaler.apply(x), &mut acts);
        let out = self.output_scaler.invert(acts.output());
        if out.iter().any(|v| !v.is_finite()) || acts.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite value in forward pass".into()));
        }
        Ok(out)
    }

    /// Gradient of `(1/|batch|) Σ ‖forward(x) − t‖²` with respect to every
    /// parameter, in the flat parameter layout.
    pub fn gradient(&self, batch: &[(Vec<f64>, Vec<f64>)]) -> Result<Vec<f64>> {
        if batch.is_empty() {
            return Err(Error::Size("gradient of an empty batch".into()));
        }
        let scaled = self.scaled_batch(batch)?;
        let weights: Vec<f64> = self.output_scaler.scale.iter().map(|s| s * s).collect();
        let mut grad = vec![0.0; self.params.len()];
        self.loss_and_gradient(&scaled, &weights, &self.params, Some(&mut grad));
        Ok(grad)
    }

    /// Mean squared error in target units.
    pub fn mse(&self, batch: &[(Vec<f64>, Vec<f64>)]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::Size("mse of an empty batch".into()));
        }
        let scaled = self.scaled_batch(batch)?;
        let weights: Vec<f64> = self.output_scaler.scale.iter().map(|s| s * s).collect();
        Ok(self.loss_and_gradient(&scaled, &weights, &self.params, None))
    }

    fn scaled_batch(&self, batch: &[(Vec<f64>, Vec<f64>)]) -> Result<ScaledBatch> {
        let (n_in, n_out) = (self.arch.inputs(), self.arch.outputs());
        let mut out = ScaledBatch { inputs: Vec::with_capacity(batch.len() * n_in), targets: Vec::new(), n_in, n_out };
        out.targets.reserve(batch.len() * n_out);
        for (x, t) in batch {
            if x.len() != n_in {
                return Err(Error::dimension(n_in, x.len(), "network input"));
            }
            if t.len() != n_out {
                return Err(Error::dimension(n_out, t.len(), "network target"));
            }
            out.inputs.extend(self.input_scaler.apply(x));
            out.targets.extend(self.output_scaler.apply(t));
        }
        Ok(out)
    }

    fn propagate_with(&self, params: &[f64], x: &[f64], acts: &mut Activations) {
        acts.values[0].copy_from_slice(x);
        for l in 0..self.arch.layers() {
            let (n_in, n_out) = (self.arch.layer_sizes[l], self.arch.layer_sizes[l + 1]);
            let act = self.arch.activations[l];
            let w = &params[self.offsets[l]..self.offsets[l] + n_in * n_out];
            let b = &params[self.offsets[l] + n_in * n_out..self.offsets[l] + n_in * n_out + n_out];
            let (prev, next) = acts.values.split_at_mut(l + 1);
            let input = &prev[l];
            for (o, out) in next[0].iter_mut().enumerate() {
                let row = &w[o * n_in..(o + 1) * n_in];
                let z: f64 = b[o] + row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>();
                *out = act.apply(z);
            }
        }
    }

    fn propagate(&self, x: &[f64], acts: &mut Activations) {
        self.propagate_with(&self.params, x, acts)
    }

    /// Weighted loss `(1/N) Σ_i Σ_d w_d (z_id − t_id)²` over scaled data,
    /// optionally accumulating its gradient with respect to `params`.
    fn loss_and_gradient(
        &self,
        batch: &ScaledBatch,
        weights: &[f64],
        params: &[f64],
        mut grad: Option<&mut [f64]>,
    ) -> f64 {
        let n = batch.len();
        let inv_n = 1.0 / n as f64;
        let mut acts = Activations::new(&self.arch);
        let mut deltas: Vec<Vec<f64>> = self.arch.layer_sizes.iter().map(|&s| vec![0.0; s]).collect();
        if let Some(g) = grad.as_deref_mut() {
            g.iter_mut().for_each(|v| *v = 0.0);
        }
        let mut loss = 0.0;
        let last = self.arch.layers();

        for i in 0..n {
            let x = &batch.inputs[i * batch.n_in..(i + 1) * batch.n_in];
            let t = &batch.targets[i * batch.n_out..(i + 1) * batch.n_out];
            self.propagate_with(params, x, &mut acts);
            let out_act = self.arch.activations[last - 1];
            for d in 0..batch.n_out {
                let r = acts.values[last][d] - t[d];
                loss += weights[d] * r * r * inv_n;
                deltas[last][d] = 2.0 * weights[d] * r * inv_n * out_act.derivative(acts.values[last][d]);
            }
            let Some(g) = grad.as_deref_mut() else { continue };

            for l in (0..last).rev() {
                let (n_in, n_out) = (self.arch.layer_sizes[l], self.arch.layer_sizes[l + 1]);
                let w_off = self.offsets[l];
                let b_off = w_off + n_in * n_out;
                let (lower, upper) = deltas.split_at_mut(l + 1);
                let delta = &upper[0];
                let input = &acts.values[l];
                for o in 0..n_out {
                    let d = delta[o];
                    g[b_off + o] += d;
                    let row = &mut g[w_off + o * n_in..w_off + (o + 1) * n_in];
                    for (gw, a) in row.iter_mut().zip(input) {
                        *gw += d * a;
                    }
                }
                if l > 0 {
                    let below = self.arch.activations[l - 1];
                    let w = &params[w_off..b_off];
                    for (j, dj) in lower[l].iter_mut().enumerate() {
                        let mut s = 0.0;
                        for o in 0..n_out {
                            s += w[o * n_in + j] * delta[o];
                        }
                        *dj = s * below.derivative(input[j]);
                    }
                }
            }
        }
        loss
    }
}

struct Activations {
    values: Vec<Vec<f64>>,
}

impl Activations {
    fn new(arch: &Architecture) -> Self {
        Activations { values: arch.layer_sizes.iter().map(|&s| vec![0.0; s]).collect() }
    }

    fn output(&self) -> &[f64] {
        self.values.last().unwrap()
    }
}

/// Flattened batch already mapped through the network's scalers.
struct ScaledBatch {
    inputs: Vec<f64>,
    targets: Vec<f64>,
    n_in: usize,
    n_out: usize,
}

impl ScaledBatch {
    fn len(&self) -> usize {
        self.inputs.len() / self.n_in
    }

    fn select(&self, rows: &[usize]) -> ScaledBatch {
        let mut out = ScaledBatch { inputs: Vec::new(), targets: Vec::new(), n_in: self.n_in, n_out: self.n_out };
        for &r in rows {
            out.inputs.extend_from_slice(&self.inputs[r * self.n_in..(r + 1) * self.n_in]);
            out.targets.extend_from_slice(&self.targets[r * self.n_out..(r + 1) * self.n_out]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub early_stop_patience: usize,
    pub holdout_fraction: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 100,
            learning_rate: 0.05,
            momentum: 0.9,
            early_stop_patience: 15,
            holdout_fraction: 0.2,
            seed: 0,
        }
    }
}

impl TrainConfig {
    /// Settings for the committee members.
    pub fn prediction() -> Self {
        TrainConfig::default()
    }

    /// Settings for the uncertainty inversion network (20-epoch cap).
    pub fn inversion() -> Self {
        TrainConfig { max_epochs: 20, ..TrainConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::State(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::State(format!("momentum {} must lie in [0, 1)", self.momentum)));
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return Err(Error::State(format!("holdout fraction {} must lie in (0, 1)", self.holdout_fraction)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub epochs_run: usize,
    /// Training-part MSE of the returned parameters, in target units.
    pub final_train_mse: f64,
    /// Holdout MSE of the returned parameters, in target units.
    pub final_holdout_mse: f64,
    pub stopped_early: bool,
    /// Epoch whose parameters were returned (0 = initialization).
    pub best_epoch: usize,
    /// Holdout MSE after each epoch in standardized target units; entry 0 is
    /// the initialization.
    pub holdout_trace: Vec<f64>,
}

/// Trains a copy of `net` by full-batch gradient descent with momentum on
/// standardized data, keeping the parameters of the best holdout epoch.
pub fn train(net: &Network, data: &[(Vec<f64>, Vec<f64>)], config: &TrainConfig) -> Result<(Network, TrainReport)> {
    config.validate()?;
    if data.len() < 4 {
        return Err(Error::Size(format!("training needs at least 4 examples, got {}", data.len())));
    }
    let mut net = net.clone();
    let inputs: Vec<&[f64]> = data.iter().map(|(x, _)| x.as_slice()).collect();
    let targets: Vec<&[f64]> = data.iter().map(|(_, t)| t.as_slice()).collect();
    net.set_scalers(Scaler::fit(&inputs), Scaler::fit(&targets))?;
    let all = net.scaled_batch(data)?;

    let n = data.len();
    let n_hold = ((config.holdout_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng::rng(config.seed, stream::HOLDOUT);
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let (hold_rows, fit_rows) = order.split_at(n_hold);
    let holdout = all.select(hold_rows);
    let fit = all.select(fit_rows);

    let unit = vec![1.0; net.arch.outputs()];
    let mut grad = vec![0.0; net.params.len()];
    let mut velocity = vec![0.0; net.params.len()];
    let mut params = net.params.clone();

    let initial_loss = net.loss_and_gradient(&fit, &unit, &params, None);
    let mut best = net.loss_and_gradient(&holdout, &unit, &params, None);
    let mut best_params = params.clone();
    let mut best_epoch = 0;
    let mut holdout_trace = vec![best];
    let mut since_best = 0;
    let mut stopped_early = false;
    let mut epochs_run = 0;

    for epoch in 1..=config.max_epochs {
        let loss = net.loss_and_gradient(&fit, &unit, &params, Some(&mut grad));
        if !loss.is_finite() || loss > DIVERGENCE_FACTOR * initial_loss.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!("training diverged at epoch {epoch} (mse {loss:e})")));
        }
        for ((p, v), g) in params.iter_mut().zip(velocity.iter_mut()).zip(&grad) {
            *v = config.momentum * *v - config.learning_rate * g;
            *p += *v;
        }
        epochs_run = epoch;

        let h = net.loss_and_gradient(&holdout, &unit, &params, None);
        if !h.is_finite() {
            return Err(Error::Numerical(format!("training diverged at epoch {epoch} (holdout mse {h})")));
        }
        holdout_trace.push(h);
        if h < best {
            best = h;
            best_params.copy_from_slice(&params);
            best_epoch = epoch;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.early_stop_patience {
                stopped_early = true;
                break;
            }
        }
    }

    net.params = best_params;
    let target_weights: Vec<f64> = net.output_scaler.scale.iter().map(|s| s * s).collect();
    let final_train_mse = net.loss_and_gradient(&fit, &target_weights, &net.params, None);
    let final_holdout_mse = net.loss_and_gradient(&holdout, &target_weights, &net.params, None);

    Ok((net, TrainReport { epochs_run, final_train_mse, final_holdout_mse, stopped_early, best_epoch, holdout_trace }))
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" ")
}

/// Writes the plain-text network format: architecture, scalers, then
/// row-major weights and biases per layer with 17 significant digits.
pub fn write_network<W: Write>(net: &Network, mut sink: W) -> Result<()> {
    let sizes: Vec<String> = net.arch.layer_sizes.iter().map(|s| s.to_string()).collect();
    let acts: Vec<&str> = net.arch.activations.iter().map(|a| a.name()).collect();
    writeln!(sink, "layers {}", sizes.join(" "))?;
    writeln!(sink, "activations {}", acts.join(" "))?;
    writeln!(sink, "input_shift {}", join(&net.input_scaler.shift))?;
    writeln!(sink, "input_scale {}", join(&net.input_scaler.scale))?;
    writeln!(sink, "output_shift {}", join(&net.output_scaler.shift))?;
    writeln!(sink, "output_scale {}", join(&net.output_scaler.scale))?;
    for l in 0..net.arch.layers() {
        writeln!(sink, "weights {l} {}", join(net.weights(l)))?;
        writeln!(sink, "biases {l} {}", join(net.biases(l)))?;
    }
    Ok(())
}

pub fn read_network<R: BufRead>(source: R) -> Result<Network> {
    let mut fields: std::collections::VecDeque<(usize, String, Vec<String>)> = Default::default();
    for (index, line) in source.lines().enumerate() {
        let line = line?;
        let mut parts = line.split_whitespace().map(String::from);
        let Some(key) = parts.next() else { continue };
        fields.push_back((index + 1, key, parts.collect()));
    }
    let mut row = 0;
    let mut next = |want: &str| -> Result<(usize, Vec<String>)> {
        let Some((line, key, values)) = fields.pop_front() else {
            return Err(Error::Parse { row: row + 1, column: None, message: format!("missing `{want}` line") });
        };
        row = line;
        if key != want {
            return Err(Error::Parse { row, column: Some(key), message: format!("expected `{want}`") });
        }
        Ok((row, values))
    };
    let numbers = |(row, values): (usize, Vec<String>)| -> Result<Vec<f64>> {
        values
            .iter()
            .map(|v| {
                v.parse::<f64>().map_err(|_| Error::Parse { row, column: None, message: format!("bad number `{v}`") })
            })
            .collect()
    };

    let (row, sizes) = next("layers")?;
    let sizes = sizes.iter().map(|v| v.parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|e| Error::Parse {
        row,
        column: Some("layers".into()),
        message: e.to_string(),
    })?;
    let acts = next("activations")?.1.iter().map(|a| Activation::parse(a)).collect::<Result<Vec<_>>>()?;
    let arch = Architecture::new(sizes, acts)?;
    let input_scaler = Scaler::new(numbers(next("input_shift")?)?, numbers(next("input_scale")?)?)?;
    let output_scaler = Scaler::new(numbers(next("output_shift")?)?, numbers(next("output_scale")?)?)?;
    let mut params = Vec::with_capacity(arch.param_count());
    for l in 0..arch.layers() {
        for key in ["weights", "biases"] {
            let (row, mut values) = next(key)?;
            if values.first().map(String::as_str) != Some(l.to_string().as_str()) {
                return Err(Error::Parse { row, column: Some(key.into()), message: format!("expected layer {l}") });
            }
            values.remove(0);
            params.extend(numbers((row, values))?);
        }
    }
    Network::from_parts(arch, params, input_scaler, output_scaler)
}
