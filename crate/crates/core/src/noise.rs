//! Physical imperfection models: static fabrication disorder of the neuron
//! response, coherent-state shot noise on weighted inputs, and the photon
//! budget of an inference.
//!
//! Disorder replaces each hidden neuron's sigmoid response by
//! `a / (b + c e^{-|z|})` with `(a, b, c)` drawn once per realization from
//! `N(1, sigma^2)`; the realization then stays fixed across the whole test
//! set. Shot noise perturbs every weighted synaptic term with a complex
//! Gaussian of per-quadrature variance `1/(4 beta^2)`, the quadrature
//! uncertainty of a coherent state of amplitude `beta * w * x`.

use num_complex::Complex64;

use crate::error::Error;
use crate::idx::Dataset;
use crate::network::{forward, NetworkParams, NetworkSpec};
use crate::rng::RngStream;
use crate::Result;

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Vacuum speed of light (m/s).
pub const LIGHT_SPEED: f64 = 299_792_458.0;
/// Default optical wavelength (m).
pub const DEFAULT_WAVELENGTH: f64 = 1550e-9;

/// Static disorder sweep parameters.
#[derive(Debug, Clone, Copy)]
pub struct DisorderConfig {
    /// Relative width of the `N(1, sigma^2)` parameter distribution.
    pub sigma: f64,
    pub trials: u32,
    pub seed: u64,
}

impl DisorderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::config(format!(
                "disorder sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("disorder trials must be >= 1"));
        }
        Ok(())
    }
}

/// Shot-noise sweep parameters.
#[derive(Debug, Clone, Copy)]
pub struct ShotNoiseConfig {
    /// Scale relating a neuron-input amplitude to the coherent-state
    /// amplitude; pulse energy grows as `beta^2`.
    pub beta: f64,
    pub trials: u32,
    pub seed: u64,
}

impl ShotNoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::config(format!(
                "shot-noise beta must be finite and > 0, got {}",
                self.beta
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("shot-noise trials must be >= 1"));
        }
        Ok(())
    }
}

/// Per-neuron response parameters `(a, b, c)` of one disorder realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// One static disorder realization: a triple per hidden neuron, ordered
/// layer by layer.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub triples: Vec<DisorderTriple>,
}

/// Draws `3 * n_neurons` i.i.d. values from `N(1, sigma^2)`.
///
/// A realization is sampled once per trial and held fixed over the whole
/// evaluation (static disorder).
pub fn sample_disorder(
    n_neurons: usize,
    sigma: f64,
    rng: &mut RngStream,
) -> Result<DisorderRealization> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::config(format!(
            "disorder sigma must be finite and >= 0, got {sigma}"
        )));
    }
    let mut triples = Vec::with_capacity(n_neurons);
    for _ in 0..n_neurons {
        let a = rng.gaussian_real(1.0, sigma)?;
        let b = rng.gaussian_real(1.0, sigma)?;
        let c = rng.gaussian_real(1.0, sigma)?;
        triples.push(DisorderTriple { a, b, c });
    }
    Ok(DisorderRealization { triples })
}

/// Threshold below which the response denominator counts as degenerate.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;
/// Saturation magnitude for degenerate realizations.
pub const CLAMP_MAGNITUDE: f64 = 1e12;

/// Disordered neuron response `a / (b + c e^{-|z|})`.
///
/// Returns the response and whether the denominator was degenerate (in
/// which case the value saturates at `±1e12` and the event should be
/// recorded in trial metadata).
pub fn disordered_activation(z: Complex64, triple: &DisorderTriple) -> (f64, bool) {
    let den = triple.b + triple.c * (-z.norm()).exp();
    if den.abs() < DENOMINATOR_FLOOR {
        if triple.a == 0.0 {
            (0.0, true)
        } else {
            ((triple.a.signum() * den.signum()) * CLAMP_MAGNITUDE, true)
        }
    } else {
        (triple.a / den, false)
    }
}

/// Perturbs one weighted synaptic term `a_i = w_i x_i` with coherent-state
/// shot noise: each quadrature gains variance `1/(4 beta^2)`.
pub fn shot_noise_perturb(a_i: Complex64, beta: f64, rng: &mut RngStream) -> Result<Complex64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::config(format!(
            "shot-noise beta must be finite and > 0, got {beta}"
        )));
    }
    rng.gaussian_complex(a_i, 1.0 / (4.0 * beta * beta))
}

/// Perturbs a summed preactivation with the aggregate of `fan_in`
/// independent per-term noises.
///
/// Each of the `fan_in` weighted-input pulses contributes an independent
/// complex Gaussian of per-quadrature variance `1/(4 beta^2)`; their sum
/// is a single complex Gaussian of per-quadrature variance
/// `fan_in/(4 beta^2)`, which is what gets drawn here. Distributionally
/// exact, and O(neurons) instead of O(connections) per sample.
pub fn shot_noise_perturb_sum(
    z: Complex64,
    beta: f64,
    fan_in: usize,
    rng: &mut RngStream,
) -> Complex64 {
    let sigma = (fan_in as f64).sqrt() / (2.0 * beta);
    let (g_re, g_im) = rng.standard_normal_pair();
    Complex64::new(z.re + sigma * g_re, z.im + sigma * g_im)
}

/// Photon budget of an inference at a given `beta`.
#[derive(Debug, Clone, Copy)]
pub struct PhotonReport {
    pub beta: f64,
    /// Mean photon count per operation (2 ops per connection + 1 per
    /// neuron).
    pub photons_per_op: f64,
    /// Mean photon count per synaptic pulse, i.e. per MAC.
    pub photons_per_mac: f64,
    pub ops_per_inference: u64,
    pub connections_per_inference: u64,
    /// Optical energy per operation at the configured wavelength (J).
    pub energy_per_op: f64,
    pub wavelength: f64,
}

/// Dataset- and parameter-dependent part of the photon budget, independent
/// of `beta`. Reusable across a `beta` sweep.
#[derive(Debug, Clone, Copy)]
pub struct PhotonQuotient {
    /// Mean over samples of the summed squared pulse amplitudes at
    /// `beta = 1`: `sum over layers, connections of |w_ji * x_i|^2`.
    pub mean_sum_sq: f64,
    pub ops_per_inference: u64,
    pub connections_per_inference: u64,
}

impl PhotonQuotient {
    /// Scales the quotient to a concrete `beta` and wavelength.
    pub fn report(&self, beta: f64, wavelength: f64) -> PhotonReport {
        let total_photons = beta * beta * self.mean_sum_sq;
        let photons_per_op = total_photons / self.ops_per_inference as f64;
        PhotonReport {
            beta,
            photons_per_op,
            photons_per_mac: total_photons / self.connections_per_inference as f64,
            ops_per_inference: self.ops_per_inference,
            connections_per_inference: self.connections_per_inference,
            energy_per_op: photons_per_op * PLANCK * LIGHT_SPEED / wavelength,
            wavelength,
        }
    }

    /// The `beta` whose photons-per-op equals `target`.
    pub fn beta_for_photons_per_op(&self, target: f64) -> f64 {
        (target * self.ops_per_inference as f64 / self.mean_sum_sq).sqrt()
    }
}

/// Accumulates the photon quotient over a dataset using clean (noiseless)
/// activations: pulse energies are set by the encoded signal, not by the
/// realized noise.
pub fn photon_quotient(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
) -> Result<PhotonQuotient> {
    if dataset.is_empty() {
        return Err(Error::config("photon accounting needs a nonempty dataset"));
    }
    spec.validate()?;
    params.validate_against(spec)?;

    // Per layer, per input column i: sum over rows j of |w_ji|^2. Then
    // sum_sq for a sample is sum_i |x_i|^2 * colsum_i, layer by layer.
    let col_sums: Vec<Vec<f64>> = params
        .layers
        .iter()
        .map(|lp| match lp {
            crate::network::LayerParams::Real { weights, .. } => {
                let mut out = vec![0.0; weights.cols()];
                for r in 0..weights.rows() {
                    for c in 0..weights.cols() {
                        let v = weights.get(r, c);
                        out[c] += v * v;
                    }
                }
                out
            }
            crate::network::LayerParams::Complex { weights, .. } => weights.column_norms_sq(),
        })
        .collect();

    let mut total = 0.0;
    for idx in 0..dataset.len() {
        let x = dataset.image(idx);
        let trace = forward(spec, params, x)?;
        let mut sample_sum = 0.0;
        for (k, cols) in col_sums.iter().enumerate() {
            let input: &[f64] = if k == 0 { x } else { &trace.activations[k - 1] };
            let mut layer_sum = 0.0;
            for (xi, ci) in input.iter().zip(cols.iter()) {
                layer_sum += xi * xi * ci;
            }
            sample_sum += layer_sum;
        }
        total += sample_sum;
    }

    Ok(PhotonQuotient {
        mean_sum_sq: total / dataset.len() as f64,
        ops_per_inference: spec.ops_per_inference(),
        connections_per_inference: spec.connection_count() as u64,
    })
}

/// Full photon report for one `beta`.
pub fn photons_per_operation(
    spec: &NetworkSpec,
    params: &NetworkParams,
    dataset: &Dataset,
    beta: f64,
    wavelength: f64,
) -> Result<PhotonReport> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::config(format!(
            "photon accounting beta must be finite and > 0, got {beta}"
        )));
    }
    if !(wavelength > 0.0) {
        return Err(Error::config("wavelength must be > 0"));
    }
    Ok(photon_quotient(spec, params, dataset)?.report(beta, wavelength))
}

/// Monte-Carlo noise setup for evaluation: optional static disorder,
/// optional shot noise. When both are present they share the trial count.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    pub disorder: Option<DisorderConfig>,
    pub shot: Option<ShotNoiseConfig>,
}

impl NoiseConfig {
    pub fn disorder_only(cfg: DisorderConfig) -> Self {
        NoiseConfig {
            disorder: Some(cfg),
            shot: None,
        }
    }

    pub fn shot_only(cfg: ShotNoiseConfig) -> Self {
        NoiseConfig {
            disorder: None,
            shot: Some(cfg),
        }
    }

    pub fn trials(&self) -> u32 {
        match (&self.disorder, &self.shot) {
            (Some(d), _) => d.trials,
            (None, Some(s)) => s.trials,
            (None, None) => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.disorder.is_none() && self.shot.is_none() {
            return Err(Error::config(
                "noise config must enable disorder, shot noise, or both",
            ));
        }
        if let Some(d) = &self.disorder {
            d.validate()?;
        }
        if let Some(s) = &self.shot {
            s.validate()?;
        }
        if let (Some(d), Some(s)) = (&self.disorder, &self.shot) {
            if d.trials != s.trials {
                return Err(Error::config(format!(
                    "disorder trials ({}) and shot-noise trials ({}) must match",
                    d.trials, s.trials
                )));
            }
        }
        Ok(())
    }
}
