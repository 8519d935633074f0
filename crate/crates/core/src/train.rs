//! Mini-batch training with hand-derived backpropagation.
//!
//! The activations `|z|` and `1/(1+e^{-|z|})` are not holomorphic, so
//! complex weights are optimized as pairs of real parameters. Writing
//! `f(z) = g(|z|)` and `delta = dL/da * g'(r)/r * z` (zero at `r = 0`),
//! the gradient of a complex weight is `delta * conj(x)` and the gradient
//! flowing to a (real) input activation is `Re(delta * conj(w))` summed
//! over fan-out. Since layer inputs are real, the complex matrix products
//! split into two real GEMMs on the weight planes.
//!
//! Training is single-threaded and touches data in a fixed order, so a
//! given `(spec, config, dataset)` triple always produces the same
//! parameters on a given machine.

use std::time::Instant;

use crate::error::Error;
use crate::gemm::{gemm, gemm_at, gemm_bt};
use crate::idx::Dataset;
use crate::model_file;
use crate::network::{
    magnitude_activation, magnitude_activation_deriv, real_activation, real_activation_deriv,
    LayerParams, NetworkParams, NetworkSpec,
};
use crate::rng::RngStream;
use crate::tensor::RealTensor;
use crate::Result;

/// Optimizer choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    Sgd,
    Adam {
        beta1: f64,
        beta2: f64,
        epsilon: f64,
    },
}

impl Optimizer {
    /// The default Adam parameterization.
    pub fn adam_default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub epochs: u32,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
    /// Evaluate test accuracy after every epoch (true) or skip per-epoch
    /// test passes and leave `test_acc = NaN` in the report (false).
    pub eval_test_each_epoch: bool,
}

impl TrainConfig {
    pub fn new(epochs: u32, seed: u64) -> Self {
        TrainConfig {
            epochs,
            batch_size: 64,
            learning_rate: 1e-3,
            optimizer: Optimizer::adam_default(),
            seed,
            eval_test_each_epoch: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::config("epochs must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch_size must be >= 1"));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::config("learning_rate must be finite and > 0"));
        }
        if let Optimizer::Adam {
            beta1,
            beta2,
            epsilon,
        } = self.optimizer
        {
            if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) || !(epsilon > 0.0) {
                return Err(Error::config("invalid adam parameters"));
            }
        }
        Ok(())
    }
}

/// Per-epoch training statistics.
#[derive(Debug, Clone, Copy)]
pub struct EpochStats {
    pub epoch: u32,
    pub train_loss: f64,
    pub train_acc: f64,
    /// NaN when per-epoch test evaluation is disabled.
    pub test_acc: f64,
}

/// Result of a training run.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub epochs: Vec<EpochStats>,
    pub wall_seconds: f64,
    pub final_checksum: String,
}

/// Gradient of the mean cross-entropy loss, shaped like the parameters.
#[derive(Debug, Clone)]
pub struct GradSet {
    pub layers: Vec<LayerGrads>,
}

#[derive(Debug, Clone)]
pub enum LayerGrads {
    Real {
        weights: RealTensor,
        bias: Option<Vec<f64>>,
    },
    Complex {
        /// Gradients for both weight planes, laid out like
        /// [`ComplexTensor::stacked_planes`]: all d/d(Re w) entries
        /// row-major, then all d/d(Im w) entries.
        stacked: Vec<f64>,
    },
}

impl LayerGrads {
    /// Real-plane slice of a complex layer's gradient.
    pub fn complex_re(&self) -> &[f64] {
        match self {
            LayerGrads::Complex { stacked } => &stacked[..stacked.len() / 2],
            LayerGrads::Real { .. } => panic!("not a complex layer"),
        }
    }

    /// Imaginary-plane slice of a complex layer's gradient.
    pub fn complex_im(&self) -> &[f64] {
        match self {
            LayerGrads::Complex { stacked } => &stacked[stacked.len() / 2..],
            LayerGrads::Real { .. } => panic!("not a complex layer"),
        }
    }
}

/// Loss, accuracy, and sample count for one batch.
#[derive(Debug, Clone, Copy)]
pub struct BatchStats {
    pub mean_loss: f64,
    pub correct: usize,
    pub samples: usize,
}

// ---------------------------------------------------------------------------
// Batched forward/backward
// ---------------------------------------------------------------------------

/// Per-layer buffers for one batch; all matrices are row-major with `b`
/// columns.
struct LayerBuf {
    /// Preactivations: `m x b` for real layers, or the stacked `2m x b`
    /// planes `[Re(z); Im(z)]` for complex layers.
    z: Vec<f64>,
    /// |z| (`m x b`); empty for real layers.
    r: Vec<f64>,
    /// Real activations (`m x b`).
    a: Vec<f64>,
}

/// Gathers dataset samples into a `features x b` column-per-sample matrix.
fn gather_input(dataset: &Dataset, indices: &[usize]) -> Vec<f64> {
    let d = dataset.pixels_per_image();
    let b = indices.len();
    let mut x = vec![0.0; d * b];
    for (col, &idx) in indices.iter().enumerate() {
        let img = dataset.image(idx);
        for (row, &v) in img.iter().enumerate() {
            x[row * b + col] = v;
        }
    }
    x
}

fn forward_batch(
    spec: &NetworkSpec,
    params: &NetworkParams,
    x0: &[f64],
    b: usize,
) -> Vec<LayerBuf> {
    let mut bufs: Vec<LayerBuf> = Vec::with_capacity(spec.layers.len());
    for (k, (layer, lp)) in spec.layers.iter().zip(params.layers.iter()).enumerate() {
        let m = layer.fan_out;
        let fan_in = layer.fan_in;
        let x: &[f64] = if k == 0 { x0 } else { &bufs[k - 1].a };
        match lp {
            LayerParams::Real { weights, bias } => {
                let mut z = vec![0.0; m * b];
                gemm(m, fan_in, b, 1.0, weights.data(), x, 0.0, &mut z);
                if let Some(bias) = bias {
                    for j in 0..m {
                        let bj = bias[j];
                        for s in 0..b {
                            z[j * b + s] += bj;
                        }
                    }
                }
                let a: Vec<f64> = z
                    .iter()
                    .map(|&v| real_activation(layer.activation, v))
                    .collect();
                bufs.push(LayerBuf {
                    z,
                    r: Vec::new(),
                    a,
                });
            }
            LayerParams::Complex { weights, .. } => {
                // One GEMM computes both planes: [Wr; Wi] (2m x k) times x.
                let mut z = vec![0.0; 2 * m * b];
                gemm(2 * m, fan_in, b, 1.0, weights.stacked_planes(), x, 0.0, &mut z);
                let (zr, zi) = z.split_at(m * b);
                let r: Vec<f64> = zr
                    .iter()
                    .zip(zi.iter())
                    .map(|(&re, &im)| (re * re + im * im).sqrt())
                    .collect();
                let a: Vec<f64> = r
                    .iter()
                    .map(|&rv| magnitude_activation(layer.activation, rv))
                    .collect();
                bufs.push(LayerBuf { z, r, a });
            }
        }
    }
    bufs
}

/// Mean cross-entropy and number of correct argmax predictions over the
/// batch, from the final activation plane (`classes x b`).
fn batch_loss_from_logits(logits: &[f64], labels: &[u8], classes: usize, b: usize) -> (f64, usize) {
    let mut total = 0.0;
    let mut correct = 0;
    for s in 0..b {
        let mut max = f64::NEG_INFINITY;
        let mut arg = 0;
        for j in 0..classes {
            let v = logits[j * b + s];
            if v > max {
                max = v;
                arg = j;
            }
        }
        let mut sum_exp = 0.0;
        for j in 0..classes {
            sum_exp += (logits[j * b + s] - max).exp();
        }
        let label = labels[s] as usize;
        total += sum_exp.ln() + max - logits[label * b + s];
        if arg == label {
            correct += 1;
        }
    }
    (total / b as f64, correct)
}

/// Computes the gradient of the mean cross-entropy loss over the batch
/// given by `indices`.
///
/// Complex weights are treated as two real parameters each; the subgradient
/// at `|z| = 0` is zero.
pub fn gradients(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
    indices: &[usize],
) -> Result<(GradSet, BatchStats)> {
    if indices.is_empty() {
        return Err(Error::config("gradient batch must be nonempty"));
    }
    if dataset.pixels_per_image() != spec.input_dim {
        return Err(Error::shape(
            "gradients input",
            format!("{}", spec.input_dim),
            format!("{}", dataset.pixels_per_image()),
        ));
    }
    params.validate_against(spec)?;
    for lp in &params.layers {
        if let LayerParams::Complex { bias: Some(_), .. } = lp {
            return Err(Error::config(
                "complex networks are modeled without biases; cannot train complex bias terms",
            ));
        }
    }

    let b = indices.len();
    let classes = spec.output_dim();
    let x0 = gather_input(dataset, indices);
    let labels: Vec<u8> = indices.iter().map(|&i| dataset.label(i)).collect();

    let bufs = forward_batch(spec, params, &x0, b);
    let logits = &bufs.last().expect("at least one layer").a;
    let (mean_loss, correct) = batch_loss_from_logits(logits, &labels, classes, b);

    // dL/d(logits): softmax minus one-hot, divided by the batch size so the
    // loss is a mean.
    let mut upstream = vec![0.0; classes * b];
    for s in 0..b {
        let mut max = f64::NEG_INFINITY;
        for j in 0..classes {
            max = max.max(logits[j * b + s]);
        }
        let mut sum_exp = 0.0;
        for j in 0..classes {
            sum_exp += (logits[j * b + s] - max).exp();
        }
        for j in 0..classes {
            let p = (logits[j * b + s] - max).exp() / sum_exp;
            let y = if labels[s] as usize == j { 1.0 } else { 0.0 };
            upstream[j * b + s] = (p - y) / b as f64;
        }
    }

    let n_layers = spec.layers.len();
    let mut grads: Vec<Option<LayerGrads>> = (0..n_layers).map(|_| None).collect();

    let mut s_plane = upstream;
    for k in (0..n_layers).rev() {
        let layer = &spec.layers[k];
        let m = layer.fan_out;
        let fan_in = layer.fan_in;
        let x: &[f64] = if k == 0 { &x0 } else { &bufs[k - 1].a };
        let buf = &bufs[k];

        match &params.layers[k] {
            LayerParams::Real { weights, bias } => {
                // delta = dL/da * f'(z)
                let mut delta = vec![0.0; m * b];
                for i in 0..m * b {
                    delta[i] = s_plane[i] * real_activation_deriv(layer.activation, buf.z[i]);
                }
                let mut gw = RealTensor::zeros(m, fan_in);
                gemm_bt(m, b, fan_in, 1.0, &delta, x, 0.0, gw.data_mut());
                let gb = bias.as_ref().map(|_| {
                    (0..m)
                        .map(|j| delta[j * b..(j + 1) * b].iter().sum())
                        .collect()
                });
                if k > 0 {
                    let mut s_prev = vec![0.0; fan_in * b];
                    gemm_at(fan_in, m, b, 1.0, weights.data(), &delta, 0.0, &mut s_prev);
                    s_plane = s_prev;
                }
                grads[k] = Some(LayerGrads::Real {
                    weights: gw,
                    bias: gb,
                });
            }
            LayerParams::Complex { weights, .. } => {
                // delta = dL/da * g'(r)/r * z over both planes, stacked the
                // same way as the weights.
                let mut delta = vec![0.0; 2 * m * b];
                {
                    let (zr, zi) = buf.z.split_at(m * b);
                    let (dr, di) = delta.split_at_mut(m * b);
                    for i in 0..m * b {
                        let r = buf.r[i];
                        if r > 0.0 {
                            let coef =
                                s_plane[i] * magnitude_activation_deriv(layer.activation, r) / r;
                            dr[i] = coef * zr[i];
                            di[i] = coef * zi[i];
                        }
                    }
                }
                // [dWr; dWi] = [delta_r; delta_i] x^T in one call.
                let mut gw = vec![0.0; 2 * m * fan_in];
                gemm_bt(2 * m, b, fan_in, 1.0, &delta, x, 0.0, &mut gw);
                if k > 0 {
                    // dL/dx = Wr^T delta_r + Wi^T delta_i; the stacked
                    // transpose product sums both plane contributions.
                    let mut s_prev = vec![0.0; fan_in * b];
                    gemm_at(
                        fan_in,
                        2 * m,
                        b,
                        1.0,
                        weights.stacked_planes(),
                        &delta,
                        0.0,
                        &mut s_prev,
                    );
                    s_plane = s_prev;
                }
                grads[k] = Some(LayerGrads::Complex { stacked: gw });
            }
        }
    }

    Ok((
        GradSet {
            layers: grads.into_iter().map(|g| g.expect("filled")).collect(),
        },
        BatchStats {
            mean_loss,
            correct,
            samples: b,
        },
    ))
}

/// Mean cross-entropy loss over the given samples, via the same batched
/// path the gradients differentiate.
pub fn batch_loss(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
    indices: &[usize],
) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::config("loss batch must be nonempty"));
    }
    let b = indices.len();
    let x0 = gather_input(dataset, indices);
    let labels: Vec<u8> = indices.iter().map(|&i| dataset.label(i)).collect();
    let bufs = forward_batch(spec, params, &x0, b);
    let (loss, _) = batch_loss_from_logits(&bufs.last().unwrap().a, &labels, spec.output_dim(), b);
    Ok(loss)
}

/// Fraction of correctly classified samples, using the batched forward
/// path (training-side accuracy).
pub fn batched_accuracy(spec: &NetworkSpec, params: &NetworkParams, dataset: &Dataset) -> f64 {
    let n = dataset.len();
    if n == 0 {
        return 0.0;
    }
    let chunk = 256;
    let mut correct = 0usize;
    let mut idx = 0;
    while idx < n {
        let b = chunk.min(n - idx);
        let indices: Vec<usize> = (idx..idx + b).collect();
        let x0 = gather_input(dataset, &indices);
        let bufs = forward_batch(spec, params, &x0, b);
        let logits = &bufs.last().unwrap().a;
        let classes = spec.output_dim();
        for s in 0..b {
            let mut max = f64::NEG_INFINITY;
            let mut arg = 0;
            for j in 0..classes {
                let v = logits[j * b + s];
                if v > max {
                    max = v;
                    arg = j;
                }
            }
            if arg == dataset.label(idx + s) as usize {
                correct += 1;
            }
        }
        idx += b;
    }
    correct as f64 / n as f64
}

// ---------------------------------------------------------------------------
// Optimizers
// ---------------------------------------------------------------------------

struct AdamState {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: u64,
}

/// Applies `f` to each (parameter plane, gradient plane) pair, in a fixed
/// canonical order: per layer, weights then bias for real layers, or the
/// stacked complex planes as one block.
fn for_each_plane(
    params: &mut NetworkParams,
    grads: &GradSet,
    mut f: impl FnMut(&mut [f64], &[f64]),
) {
    for (lp, lg) in params.layers.iter_mut().zip(grads.layers.iter()) {
        match (lp, lg) {
            (
                LayerParams::Real { weights, bias },
                LayerGrads::Real {
                    weights: gw,
                    bias: gb,
                },
            ) => {
                f(weights.data_mut(), gw.data());
                if let (Some(b), Some(gb)) = (bias.as_mut(), gb.as_ref()) {
                    f(b.as_mut_slice(), gb.as_slice());
                }
            }
            (LayerParams::Complex { weights, .. }, LayerGrads::Complex { stacked }) => {
                f(weights.stacked_planes_mut(), stacked);
            }
            _ => unreachable!("gradient/parameter layer kind mismatch"),
        }
    }
}

fn plane_sizes(params: &NetworkParams) -> Vec<usize> {
    let mut sizes = Vec::new();
    for lp in &params.layers {
        match lp {
            LayerParams::Real { weights, bias } => {
                sizes.push(weights.len());
                if let Some(b) = bias {
                    sizes.push(b.len());
                }
            }
            LayerParams::Complex { weights, .. } => {
                sizes.push(2 * weights.len());
            }
        }
    }
    sizes
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

/// Trains a network from scratch.
///
/// Initialization draws from stream `(seed, 0)` and the per-epoch shuffle
/// from `(seed, 1)`. Aborts with a numeric error (naming the epoch and
/// batch) if the loss stops being finite.
pub fn train(
    spec: &NetworkSpec,
    config: &TrainConfig,
    train_set: &Dataset,
    test_set: &Dataset,
) -> Result<(NetworkParams, TrainReport)> {
    spec.validate()?;
    config.validate()?;
    if train_set.is_empty() {
        return Err(Error::config("training set is empty"));
    }
    if train_set.pixels_per_image() != spec.input_dim {
        return Err(Error::shape(
            "train input",
            format!("{}", spec.input_dim),
            format!("{}", train_set.pixels_per_image()),
        ));
    }
    if train_set.labels().iter().any(|&l| l as usize >= spec.output_dim()) {
        return Err(Error::config(format!(
            "label outside network output range 0..{}",
            spec.output_dim()
        )));
    }

    let started = Instant::now();
    let mut init_rng = RngStream::new(config.seed, 0);
    let mut params = NetworkParams::init(spec, &mut init_rng);
    let mut shuffle_rng = RngStream::new(config.seed, 1);

    let mut adam = match config.optimizer {
        Optimizer::Adam { .. } => Some(AdamState {
            m: plane_sizes(&params).iter().map(|&n| vec![0.0; n]).collect(),
            v: plane_sizes(&params).iter().map(|&n| vec![0.0; n]).collect(),
            t: 0,
        }),
        Optimizer::Sgd => None,
    };

    let n = train_set.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut epochs_out = Vec::with_capacity(config.epochs as usize);

    for epoch in 0..config.epochs {
        shuffle_rng.shuffle(&mut order);
        let mut loss_sum = 0.0;
        let mut correct = 0usize;

        for (batch_idx, batch) in order.chunks(config.batch_size).enumerate() {
            let (grads, stats) = gradients(spec, &params, train_set, batch)?;
            if !stats.mean_loss.is_finite() {
                return Err(Error::Numeric(format!(
                    "loss diverged at epoch {epoch}, batch {batch_idx}"
                )));
            }
            loss_sum += stats.mean_loss * stats.samples as f64;
            correct += stats.correct;

            let lr = config.learning_rate;
            match (&config.optimizer, adam.as_mut()) {
                (Optimizer::Sgd, _) => {
                    for_each_plane(&mut params, &grads, |p, g| {
                        for (pv, gv) in p.iter_mut().zip(g.iter()) {
                            *pv -= lr * gv;
                        }
                    });
                }
                (
                    Optimizer::Adam {
                        beta1,
                        beta2,
                        epsilon,
                    },
                    Some(state),
                ) => {
                    state.t += 1;
                    let bc1 = 1.0 - beta1.powi(state.t as i32);
                    let bc2 = 1.0 - beta2.powi(state.t as i32);
                    let mut plane = 0;
                    let (b1, b2, eps) = (*beta1, *beta2, *epsilon);
                    let (ms, vs) = (&mut state.m, &mut state.v);
                    for_each_plane(&mut params, &grads, |p, g| {
                        let m = &mut ms[plane][..p.len()];
                        let v = &mut vs[plane][..p.len()];
                        let g = &g[..p.len()];
                        for (((pv, &gv), mv), vv) in
                            p.iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut())
                        {
                            *mv = b1 * *mv + (1.0 - b1) * gv;
                            *vv = b2 * *vv + (1.0 - b2) * gv * gv;
                            let mhat = *mv / bc1;
                            let vhat = *vv / bc2;
                            *pv -= lr * mhat / (vhat.sqrt() + eps);
                        }
                        plane += 1;
                    });
                }
                _ => unreachable!(),
            }
        }

        let test_acc = if config.eval_test_each_epoch {
            batched_accuracy(spec, &params, test_set)
        } else {
            f64::NAN
        };
        epochs_out.push(EpochStats {
            epoch,
            train_loss: loss_sum / n as f64,
            train_acc: correct as f64 / n as f64,
            test_acc,
        });
    }

    let report = TrainReport {
        epochs: epochs_out,
        wall_seconds: started.elapsed().as_secs_f64(),
        final_checksum: model_file::checksum(spec, &params)?,
    };
    Ok((params, report))
}
