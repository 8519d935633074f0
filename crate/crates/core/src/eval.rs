//! Deterministic and Monte-Carlo (noisy) test-set evaluation.
//!
//! The noiseless path walks samples sequentially with fixed-order
//! summation, so repeated calls are bit-identical. Noisy evaluation runs
//! independent trials, each with its own random streams: trial `t` uses
//! stream `2t` of the disorder seed for the static realization and stream
//! `2t + 1` of the shot-noise seed for per-sample quadrature noise. Trials
//! may execute in parallel; results are reduced in trial order, so the
//! report does not depend on the thread count.
//!
//! Disorder perturbs hidden neurons only (the output layer stays clean);
//! shot noise applies to every layer, including the output layer's
//! weighted inputs.

use rayon::prelude::*;

use crate::error::Error;
use crate::idx::Dataset;
use crate::network::{
    forward, magnitude_activation, ActivationKind, LayerParams, NetworkParams, NetworkSpec,
    NumericField,
};
use crate::noise::{
    disordered_activation, sample_disorder, shot_noise_perturb_sum, DisorderRealization,
    NoiseConfig,
};
use crate::rng::RngStream;
use crate::tensor::matvec_real_input;
use crate::Result;

/// Evaluation outcome. For noiseless runs `trials = 1` and the spread
/// fields are zero.
#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Mean accuracy over trials.
    pub accuracy: f64,
    /// Mean error rate over trials (`1 - accuracy`).
    pub error_rate: f64,
    /// Sample standard deviation of the per-trial error rates.
    pub std_dev: f64,
    /// Standard error of the mean error rate (`std_dev / sqrt(trials)`).
    pub std_error: f64,
    pub trials: u32,
    pub trial_errors: Vec<f64>,
    /// Count of degenerate-denominator clamps across all trials.
    pub clamp_events: u64,
}

/// Evaluates accuracy, optionally under noise.
///
/// Without noise this is a single deterministic pass. With noise, each
/// trial resamples its disorder realization and/or shot noise from its own
/// streams and evaluates the full dataset.
pub fn evaluate(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
    noise: Option<&NoiseConfig>,
) -> Result<EvalReport> {
    spec.validate()?;
    params.validate_against(spec)?;
    if dataset.is_empty() {
        return Err(Error::config("evaluation dataset is empty"));
    }
    if dataset.pixels_per_image() != spec.input_dim {
        return Err(Error::shape(
            "evaluate input",
            format!("{}", spec.input_dim),
            format!("{}", dataset.pixels_per_image()),
        ));
    }

    let Some(noise) = noise else {
        let accuracy = clean_accuracy(spec, params, dataset)?;
        return Ok(EvalReport {
            accuracy,
            error_rate: 1.0 - accuracy,
            std_dev: 0.0,
            std_error: 0.0,
            trials: 1,
            trial_errors: vec![1.0 - accuracy],
            clamp_events: 0,
        });
    };

    noise.validate()?;
    if spec.numeric_field != NumericField::Complex {
        return Err(Error::config(
            "noise models apply to complex-valued (optical) networks only",
        ));
    }
    if noise.disorder.is_some() {
        let n = spec.layers.len();
        for (idx, layer) in spec.layers[..n - 1].iter().enumerate() {
            if layer.activation != ActivationKind::ComplexSigmoid {
                return Err(Error::config(format!(
                    "disorder perturbs the sigmoid neuron response; hidden layer {idx} uses {}",
                    layer.activation
                )));
            }
        }
    }

    let trials = noise.trials();
    let outcomes: Result<Vec<(f64, u64)>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(spec, params, dataset, noise, t))
        .collect();
    let outcomes = outcomes?;

    let trial_errors: Vec<f64> = outcomes.iter().map(|&(e, _)| e).collect();
    let clamp_events: u64 = outcomes.iter().map(|&(_, c)| c).sum();

    // Mean of identical values is that value; take it directly so a
    // zero-strength noise run reproduces the noiseless error bit for bit.
    let all_same = trial_errors
        .windows(2)
        .all(|w| w[0].to_bits() == w[1].to_bits());
    let mean_error = if all_same {
        trial_errors[0]
    } else {
        trial_errors.iter().sum::<f64>() / trials as f64
    };
    let std_dev = if trials > 1 {
        let var = trial_errors
            .iter()
            .map(|e| (e - mean_error) * (e - mean_error))
            .sum::<f64>()
            / (trials as f64 - 1.0);
        var.sqrt()
    } else {
        0.0
    };

    Ok(EvalReport {
        accuracy: 1.0 - mean_error,
        error_rate: mean_error,
        std_dev,
        std_error: std_dev / (trials as f64).sqrt(),
        trials,
        trial_errors,
        clamp_events,
    })
}

/// Noiseless accuracy via the per-sample fixed-order path.
pub fn clean_accuracy(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
) -> Result<f64> {
    let mut correct = 0usize;
    for idx in 0..dataset.len() {
        let trace = forward(spec, params, dataset.image(idx))?;
        if argmax(trace.logits()) == dataset.label(idx) as usize {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.len() as f64)
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > max {
            max = v;
            best = i;
        }
    }
    best
}

fn run_trial(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
    noise: &NoiseConfig,
    trial: u32,
) -> Result<(f64, u64)> {
    let realization = match &noise.disorder {
        Some(cfg) => {
            let mut rng = RngStream::new(cfg.seed, 2 * trial as u64);
            Some(sample_disorder(
                spec.hidden_neuron_count(),
                cfg.sigma,
                &mut rng,
            )?)
        }
        None => None,
    };
    let mut shot_rng = noise
        .shot
        .as_ref()
        .map(|cfg| (cfg.beta, RngStream::new(cfg.seed, 2 * trial as u64 + 1)));

    let mut correct = 0usize;
    let mut clamps = 0u64;
    for idx in 0..dataset.len() {
        let logits = noisy_forward(
            spec,
            params,
            dataset.image(idx),
            realization.as_ref(),
            shot_rng.as_mut().map(|(b, r)| (*b, r)),
            &mut clamps,
        )?;
        if argmax(&logits) == dataset.label(idx) as usize {
            correct += 1;
        }
    }
    Ok((1.0 - correct as f64 / dataset.len() as f64, clamps))
}

/// Forward pass with noise injection, complex networks only.
fn noisy_forward(
    spec: &NetworkSpec,
    params: &NetworkParams,
    x: &[f64],
    disorder: Option<&DisorderRealization>,
    mut shot: Option<(f64, &mut RngStream)>,
    clamps: &mut u64,
) -> Result<Vec<f64>> {
    let n_layers = spec.layers.len();
    let mut activation: Vec<f64> = Vec::new();
    let mut hidden_offset = 0usize;

    for (k, (layer, lp)) in spec.layers.iter().zip(params.layers.iter()).enumerate() {
        let input: &[f64] = if k == 0 { x } else { &activation };
        let weights = match lp {
            LayerParams::Complex { weights, .. } => weights,
            LayerParams::Real { .. } => {
                return Err(Error::config(
                    "noise models apply to complex-valued networks only",
                ))
            }
        };
        let mut z = matvec_real_input(weights, input)?;
        if let Some((beta, rng)) = shot.as_mut() {
            for zj in z.iter_mut() {
                *zj = shot_noise_perturb_sum(*zj, *beta, layer.fan_in, rng);
            }
        }

        let is_hidden = k + 1 < n_layers;
        let mut out = Vec::with_capacity(z.len());
        if is_hidden {
            if let Some(real) = disorder {
                for (j, zj) in z.iter().enumerate() {
                    let (v, clamped) = disordered_activation(*zj, &real.triples[hidden_offset + j]);
                    if clamped {
                        *clamps += 1;
                    }
                    out.push(v);
                }
            } else {
                for zj in z.iter() {
                    out.push(magnitude_activation(layer.activation, zj.norm()));
                }
            }
            hidden_offset += layer.fan_out;
        } else {
            for zj in z.iter() {
                out.push(magnitude_activation(layer.activation, zj.norm()));
            }
        }
        activation = out;
    }

    Ok(activation)
}
