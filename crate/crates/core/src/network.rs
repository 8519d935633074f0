//! Feedforward network definition and deterministic forward evaluation.
//!
//! Networks are plain fully connected stacks. Every activation returns a
//! real value: optically, a neuron's output is an intensity-like quantity
//! handed to the next stage, while weights (and hence preactivations) may
//! be complex-valued to carry amplitude and phase. Real networks use
//! biases on every layer; complex networks use none, since a constant
//! optical bias term is hard to realize.

use num_complex::Complex64;

use crate::error::Error;
use crate::rng::RngStream;
use crate::tensor::{matvec_real, matvec_real_input, Complex, ComplexTensor, RealTensor};
use crate::Result;

/// Numeric field a network computes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericField {
    Real,
    Complex,
}

impl NumericField {
    pub fn as_str(&self) -> &'static str {
        match self {
            NumericField::Real => "real",
            NumericField::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(NumericField::Real),
            "complex" => Ok(NumericField::Complex),
            other => Err(Error::config(format!(
                "unknown numeric field {other:?} (expected \"real\" or \"complex\")"
            ))),
        }
    }
}

impl std::fmt::Display for NumericField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four activation functions under study.
///
/// `ReluReal` and `SigmoidReal` act on real preactivations; `Modulus` and
/// `ComplexSigmoid` act on the magnitude of complex preactivations. All
/// four return real values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationKind {
    ReluReal,
    SigmoidReal,
    Modulus,
    ComplexSigmoid,
}

impl ActivationKind {
    /// Field this activation is legal in.
    pub fn field(&self) -> NumericField {
        match self {
            ActivationKind::ReluReal | ActivationKind::SigmoidReal => NumericField::Real,
            ActivationKind::Modulus | ActivationKind::ComplexSigmoid => NumericField::Complex,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ActivationKind::ReluReal => "relu",
            ActivationKind::SigmoidReal => "sigmoid",
            ActivationKind::Modulus => "modulus",
            ActivationKind::ComplexSigmoid => "csigmoid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(ActivationKind::ReluReal),
            "sigmoid" => Ok(ActivationKind::SigmoidReal),
            "modulus" => Ok(ActivationKind::Modulus),
            "csigmoid" => Ok(ActivationKind::ComplexSigmoid),
            other => Err(Error::config(format!(
                "unknown activation {other:?} (expected relu, sigmoid, modulus, or csigmoid)"
            ))),
        }
    }

    pub(crate) fn tag(&self) -> u8 {
        match self {
            ActivationKind::ReluReal => 0,
            ActivationKind::SigmoidReal => 1,
            ActivationKind::Modulus => 2,
            ActivationKind::ComplexSigmoid => 3,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(ActivationKind::ReluReal),
            1 => Ok(ActivationKind::SigmoidReal),
            2 => Ok(ActivationKind::Modulus),
            3 => Ok(ActivationKind::ComplexSigmoid),
            other => Err(Error::ModelFormat(format!(
                "unknown activation tag {other}"
            ))),
        }
    }
}

impl std::fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A preactivation value, real or complex depending on the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preact {
    Real(f64),
    Complex(Complex),
}

/// Applies an activation to a single preactivation value.
///
/// Fails if the activation and the value belong to different fields.
pub fn activate(kind: ActivationKind, z: Preact) -> Result<f64> {
    match (kind, z) {
        (ActivationKind::ReluReal, Preact::Real(x)) => Ok(x.max(0.0)),
        (ActivationKind::SigmoidReal, Preact::Real(x)) => Ok(sigmoid(x)),
        (ActivationKind::Modulus, Preact::Complex(z)) => Ok(z.norm()),
        (ActivationKind::ComplexSigmoid, Preact::Complex(z)) => Ok(sigmoid(z.norm())),
        (kind, z) => {
            let got = match z {
                Preact::Real(_) => NumericField::Real,
                Preact::Complex(_) => NumericField::Complex,
            };
            Err(Error::config(format!(
                "activation {kind} expects a {} argument, got {got}",
                kind.field()
            )))
        }
    }
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Activation of a real preactivation (real-field kinds only).
#[inline]
pub(crate) fn real_activation(kind: ActivationKind, x: f64) -> f64 {
    match kind {
        ActivationKind::ReluReal => x.max(0.0),
        ActivationKind::SigmoidReal => sigmoid(x),
        _ => unreachable!("complex activation applied to real preactivation"),
    }
}

/// Activation of a complex preactivation as a function of `r = |z|`.
#[inline]
pub(crate) fn magnitude_activation(kind: ActivationKind, r: f64) -> f64 {
    match kind {
        ActivationKind::Modulus => r,
        ActivationKind::ComplexSigmoid => sigmoid(r),
        _ => unreachable!("real activation applied to complex preactivation"),
    }
}

/// Derivative of a real-field activation at `x`.
#[inline]
pub(crate) fn real_activation_deriv(kind: ActivationKind, x: f64) -> f64 {
    match kind {
        ActivationKind::ReluReal => {
            if x > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        ActivationKind::SigmoidReal => {
            let s = sigmoid(x);
            s * (1.0 - s)
        }
        _ => unreachable!(),
    }
}

/// Derivative of `g` in `f(z) = g(|z|)` evaluated at `r = |z|`.
#[inline]
pub(crate) fn magnitude_activation_deriv(kind: ActivationKind, r: f64) -> f64 {
    match kind {
        ActivationKind::Modulus => 1.0,
        ActivationKind::ComplexSigmoid => {
            let s = sigmoid(r);
            s * (1.0 - s)
        }
        _ => unreachable!(),
    }
}

/// One fully connected layer: `fan_in` inputs, `fan_out` neurons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub fan_in: usize,
    pub fan_out: usize,
    pub activation: ActivationKind,
    pub has_bias: bool,
}

/// Architecture of a feedforward network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub layers: Vec<LayerSpec>,
    pub numeric_field: NumericField,
}

impl NetworkSpec {
    /// Builds a standard fully connected classifier spec.
    ///
    /// Real networks get biases on every layer; complex networks get none.
    /// Every layer uses the same activation.
    pub fn mlp(
        field: NumericField,
        input_dim: usize,
        hidden: &[usize],
        n_classes: usize,
        activation: ActivationKind,
    ) -> Result<Self> {
        let has_bias = field == NumericField::Real;
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut fan_in = input_dim;
        for &width in hidden {
            layers.push(LayerSpec {
                fan_in,
                fan_out: width,
                activation,
                has_bias,
            });
            fan_in = width;
        }
        layers.push(LayerSpec {
            fan_in,
            fan_out: n_classes,
            activation,
            has_bias,
        });
        let spec = NetworkSpec {
            input_dim,
            layers,
            numeric_field: field,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks internal consistency: dimension chaining, field/activation
    /// agreement, and the no-bias rule for complex networks.
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::config("input_dim must be >= 1"));
        }
        if self.layers.is_empty() {
            return Err(Error::config("network must have at least one layer"));
        }
        let mut expected_in = self.input_dim;
        for (idx, layer) in self.layers.iter().enumerate() {
            if layer.fan_in == 0 || layer.fan_out == 0 {
                return Err(Error::config(format!(
                    "layer {idx}: fan_in and fan_out must be >= 1"
                )));
            }
            if layer.fan_in != expected_in {
                return Err(Error::config(format!(
                    "layer {idx}: fan_in {} does not chain with previous width {}",
                    layer.fan_in, expected_in
                )));
            }
            if layer.activation.field() != self.numeric_field {
                return Err(Error::config(format!(
                    "layer {idx}: activation {} is illegal in a {} network",
                    layer.activation, self.numeric_field
                )));
            }
            if self.numeric_field == NumericField::Complex && layer.has_bias {
                return Err(Error::config(format!(
                    "layer {idx}: complex networks are modeled without biases"
                )));
            }
            expected_in = layer.fan_out;
        }
        Ok(())
    }

    /// Network output dimension (class count for classifiers).
    pub fn output_dim(&self) -> usize {
        self.layers.last().map(|l| l.fan_out).unwrap_or(0)
    }

    /// Number of neurons in hidden layers (all but the last).
    pub fn hidden_neuron_count(&self) -> usize {
        let n = self.layers.len();
        self.layers[..n.saturating_sub(1)]
            .iter()
            .map(|l| l.fan_out)
            .sum()
    }

    /// Count of real-valued trainable scalars: a complex weight contributes
    /// two, a real weight or bias one.
    pub fn param_count(&self) -> usize {
        let per_value = match self.numeric_field {
            NumericField::Real => 1,
            NumericField::Complex => 2,
        };
        self.layers
            .iter()
            .map(|l| {
                let mut n = l.fan_in * l.fan_out;
                if l.has_bias {
                    n += l.fan_out;
                }
                n * per_value
            })
            .sum()
    }

    /// Count of weight entries, with a complex weight counted once.
    pub fn entry_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.fan_in * l.fan_out + if l.has_bias { l.fan_out } else { 0 })
            .sum()
    }

    /// Total synaptic connections (weight entries, biases excluded).
    pub fn connection_count(&self) -> usize {
        self.layers.iter().map(|l| l.fan_in * l.fan_out).sum()
    }

    /// Operations per inference under the 2-per-connection + 1-per-neuron
    /// convention, counted from the actual layer dimensions.
    pub fn ops_per_inference(&self) -> u64 {
        self.layers
            .iter()
            .map(|l| l.fan_out as u64 * (2 * l.fan_in as u64 + 1))
            .sum()
    }
}

/// Parameters of one layer, matching the network's numeric field.
#[derive(Debug, Clone, PartialEq)]
pub enum LayerParams {
    Real {
        /// `fan_out x fan_in`.
        weights: RealTensor,
        bias: Option<Vec<f64>>,
    },
    Complex {
        /// `fan_out x fan_in`.
        weights: ComplexTensor,
        bias: Option<Vec<Complex>>,
    },
}

/// Full parameter set of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub layers: Vec<LayerParams>,
}

impl NetworkParams {
    /// All-zero parameters shaped for `spec`.
    pub fn zeros(spec: &NetworkSpec) -> Self {
        let layers = spec
            .layers
            .iter()
            .map(|l| match spec.numeric_field {
                NumericField::Real => LayerParams::Real {
                    weights: RealTensor::zeros(l.fan_out, l.fan_in),
                    bias: l.has_bias.then(|| vec![0.0; l.fan_out]),
                },
                NumericField::Complex => LayerParams::Complex {
                    weights: ComplexTensor::zeros(l.fan_out, l.fan_in),
                    bias: l.has_bias.then(|| vec![Complex::new(0.0, 0.0); l.fan_out]),
                },
            })
            .collect();
        NetworkParams { layers }
    }

    /// Random initialization.
    ///
    /// Real weights are Glorot-uniform with zero biases. Complex weights
    /// draw each quadrature from `N(0, 1/(2 fan_in))`, so `E|w|^2 = 1/fan_in`
    /// and the magnitude fed to the sigmoid starts in its responsive range.
    pub fn init(spec: &NetworkSpec, rng: &mut RngStream) -> Self {
        let layers = spec
            .layers
            .iter()
            .map(|l| match spec.numeric_field {
                NumericField::Real => {
                    let limit = (6.0 / (l.fan_in + l.fan_out) as f64).sqrt();
                    let weights = RealTensor::from_fn(l.fan_out, l.fan_in, |_, _| {
                        (2.0 * rng.uniform() - 1.0) * limit
                    });
                    LayerParams::Real {
                        weights,
                        bias: l.has_bias.then(|| vec![0.0; l.fan_out]),
                    }
                }
                NumericField::Complex => {
                    let sigma = (1.0 / (2.0 * l.fan_in as f64)).sqrt();
                    let weights = ComplexTensor::from_fn(l.fan_out, l.fan_in, |_, _| {
                        let (re, im) = rng.standard_normal_pair();
                        Complex::new(sigma * re, sigma * im)
                    });
                    LayerParams::Complex {
                        weights,
                        bias: l.has_bias.then(|| vec![Complex::new(0.0, 0.0); l.fan_out]),
                    }
                }
            })
            .collect();
        NetworkParams { layers }
    }

    /// Verifies that shapes and field match `spec`.
    pub fn validate_against(&self, spec: &NetworkSpec) -> Result<()> {
        if self.layers.len() != spec.layers.len() {
            return Err(Error::config(format!(
                "params have {} layers, spec has {}",
                self.layers.len(),
                spec.layers.len()
            )));
        }
        for (idx, (lp, ls)) in self.layers.iter().zip(spec.layers.iter()).enumerate() {
            let (shape, has_bias, field) = match lp {
                LayerParams::Real { weights, bias } => {
                    (weights.shape(), bias.is_some(), NumericField::Real)
                }
                LayerParams::Complex { weights, bias } => {
                    (weights.shape(), bias.is_some(), NumericField::Complex)
                }
            };
            if field != spec.numeric_field {
                return Err(Error::config(format!(
                    "layer {idx}: params are {field}, spec is {}",
                    spec.numeric_field
                )));
            }
            if shape != (ls.fan_out, ls.fan_in) {
                return Err(Error::shape(
                    format!("layer {idx} weights"),
                    format!("{}x{}", ls.fan_out, ls.fan_in),
                    format!("{}x{}", shape.0, shape.1),
                ));
            }
            if has_bias != ls.has_bias {
                return Err(Error::config(format!(
                    "layer {idx}: bias presence {} does not match spec {}",
                    has_bias, ls.has_bias
                )));
            }
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.layers.iter().all(|lp| match lp {
            LayerParams::Real { weights, bias } => {
                weights.all_finite()
                    && bias
                        .as_ref()
                        .map_or(true, |b| b.iter().all(|x| x.is_finite()))
            }
            LayerParams::Complex { weights, bias } => {
                weights.all_finite()
                    && bias.as_ref().map_or(true, |b| {
                        b.iter().all(|z| z.re.is_finite() && z.im.is_finite())
                    })
            }
        })
    }
}

/// Everything the forward pass produces: per-layer preactivations and
/// (real) activations. The last activation vector is the logits.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// Preactivation vector per layer.
    pub preactivations: Vec<PreactVec>,
    /// Real activation vector per layer.
    pub activations: Vec<Vec<f64>>,
}

/// A layer's preactivation vector.
#[derive(Debug, Clone)]
pub enum PreactVec {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl ForwardTrace {
    pub fn logits(&self) -> &[f64] {
        self.activations.last().expect("trace has layers")
    }
}

/// Evaluates the network on one input vector.
///
/// Real networks consume `x` directly; complex networks treat `x` as
/// complex amplitudes with zero imaginary part. Intermediates are retained
/// for backpropagation and noise injection.
pub fn forward(spec: &NetworkSpec, params: &NetworkParams, x: &[f64]) -> Result<ForwardTrace> {
    if x.len() != spec.input_dim {
        return Err(Error::shape(
            "forward input",
            format!("{}", spec.input_dim),
            format!("{}", x.len()),
        ));
    }
    params.validate_against(spec)?;

    let mut preactivations = Vec::with_capacity(spec.layers.len());
    let mut activations: Vec<Vec<f64>> = Vec::with_capacity(spec.layers.len());

    for (idx, (layer, lp)) in spec.layers.iter().zip(params.layers.iter()).enumerate() {
        let input: &[f64] = if idx == 0 { x } else { &activations[idx - 1] };
        match lp {
            LayerParams::Real { weights, bias } => {
                let mut z = matvec_real(weights, input)?;
                if let Some(b) = bias {
                    for (zj, bj) in z.iter_mut().zip(b.iter()) {
                        *zj += bj;
                    }
                }
                let a: Vec<f64> = z
                    .iter()
                    .map(|&zj| real_activation(layer.activation, zj))
                    .collect();
                check_finite(&a, idx)?;
                preactivations.push(PreactVec::Real(z));
                activations.push(a);
            }
            LayerParams::Complex { weights, bias } => {
                let mut z = matvec_real_input(weights, input)?;
                if let Some(b) = bias {
                    for (zj, bj) in z.iter_mut().zip(b.iter()) {
                        *zj += bj;
                    }
                }
                let a: Vec<f64> = z
                    .iter()
                    .map(|zj| magnitude_activation(layer.activation, zj.norm()))
                    .collect();
                check_finite(&a, idx)?;
                preactivations.push(PreactVec::Complex(z));
                activations.push(a);
            }
        }
    }

    Ok(ForwardTrace {
        preactivations,
        activations,
    })
}

fn check_finite(values: &[f64], layer: usize) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(format!(
            "non-finite activation in layer {layer}"
        )))
    }
}

/// Max-shifted softmax; probabilities sum to one for any finite logits.
pub fn softmax_probs(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activation_definition_cases() {
        assert_eq!(
            activate(ActivationKind::ReluReal, Preact::Real(-1.0)).unwrap(),
            0.0
        );
        assert_eq!(
            activate(ActivationKind::ReluReal, Preact::Real(2.0)).unwrap(),
            2.0
        );
        assert_eq!(
            activate(ActivationKind::Modulus, Preact::Complex(Complex::new(3.0, 4.0))).unwrap(),
            5.0
        );
        assert_eq!(
            activate(
                ActivationKind::ComplexSigmoid,
                Preact::Complex(Complex::new(0.0, 0.0))
            )
            .unwrap(),
            0.5
        );
    }

    #[test]
    fn activation_field_mismatch_is_an_error() {
        assert!(
            activate(ActivationKind::ReluReal, Preact::Complex(Complex::new(1.0, 0.0))).is_err()
        );
        assert!(activate(ActivationKind::Modulus, Preact::Real(1.0)).is_err());
    }

    #[test]
    fn complex_sigmoid_range() {
        // Strictly inside (0.5, 1) wherever e^{-r} is representable; for
        // very large r the value saturates at 1.0 in double precision.
        for r in [1e-12, 0.1, 1.0, 10.0, 30.0] {
            let v = magnitude_activation(ActivationKind::ComplexSigmoid, r);
            assert!(v > 0.5 && v < 1.0, "csigmoid({r}) = {v}");
        }
        assert_eq!(magnitude_activation(ActivationKind::ComplexSigmoid, 0.0), 0.5);
        assert!(magnitude_activation(ActivationKind::ComplexSigmoid, 700.0) <= 1.0);
    }

    #[test]
    fn modulus_equals_relu_on_nonnegative_reals() {
        for x in [0.0, 0.5, 2.0, 100.0] {
            let m =
                activate(ActivationKind::Modulus, Preact::Complex(Complex::new(x, 0.0))).unwrap();
            let r = activate(ActivationKind::ReluReal, Preact::Real(x)).unwrap();
            assert_eq!(m, r);
        }
    }

    #[test]
    fn param_count_examples() {
        let real = NetworkSpec::mlp(NumericField::Real, 784, &[100], 10, ActivationKind::ReluReal)
            .unwrap();
        assert_eq!(real.param_count(), 784 * 100 + 100 + 100 * 10 + 10);
        assert_eq!(real.param_count(), 79_510);

        let complex = NetworkSpec::mlp(
            NumericField::Complex,
            784,
            &[100],
            10,
            ActivationKind::ComplexSigmoid,
        )
        .unwrap();
        assert_eq!(complex.param_count(), 2 * (784 * 100 + 100 * 10));
        assert_eq!(complex.param_count(), 158_800);
        assert_eq!(complex.entry_count(), 79_400);

        let direct =
            NetworkSpec::mlp(NumericField::Real, 784, &[], 10, ActivationKind::SigmoidReal)
                .unwrap();
        assert_eq!(direct.param_count(), 7_850);
    }

    #[test]
    fn spec_validation_catches_mismatches() {
        // Real activation in a complex network.
        let bad = NetworkSpec {
            input_dim: 4,
            layers: vec![LayerSpec {
                fan_in: 4,
                fan_out: 2,
                activation: ActivationKind::ReluReal,
                has_bias: false,
            }],
            numeric_field: NumericField::Complex,
        };
        assert!(bad.validate().is_err());

        // Complex layer with a bias.
        let bad = NetworkSpec {
            input_dim: 4,
            layers: vec![LayerSpec {
                fan_in: 4,
                fan_out: 2,
                activation: ActivationKind::Modulus,
                has_bias: true,
            }],
            numeric_field: NumericField::Complex,
        };
        assert!(bad.validate().is_err());

        // Broken dimension chain.
        let bad = NetworkSpec {
            input_dim: 4,
            layers: vec![
                LayerSpec {
                    fan_in: 4,
                    fan_out: 3,
                    activation: ActivationKind::ReluReal,
                    has_bias: true,
                },
                LayerSpec {
                    fan_in: 5,
                    fan_out: 2,
                    activation: ActivationKind::ReluReal,
                    has_bias: true,
                },
            ],
            numeric_field: NumericField::Real,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn forward_zero_weights_csigmoid_gives_half() {
        let spec = NetworkSpec::mlp(
            NumericField::Complex,
            3,
            &[],
            4,
            ActivationKind::ComplexSigmoid,
        )
        .unwrap();
        let params = NetworkParams::zeros(&spec);
        let trace = forward(&spec, &params, &[0.3, 0.7, 0.1]).unwrap();
        for &l in trace.logits() {
            assert_eq!(l, 0.5);
        }
    }

    #[test]
    fn forward_modulus_hand_case() {
        // 2-input, 1-output modulus layer, w = (1, i), x = (1, 1) -> |1 + i| = sqrt(2).
        let spec = NetworkSpec {
            input_dim: 2,
            layers: vec![LayerSpec {
                fan_in: 2,
                fan_out: 1,
                activation: ActivationKind::Modulus,
                has_bias: false,
            }],
            numeric_field: NumericField::Complex,
        };
        spec.validate().unwrap();
        let weights =
            ComplexTensor::from_entries(1, 2, &[Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)])
                .unwrap();
        let params = NetworkParams {
            layers: vec![LayerParams::Complex {
                weights,
                bias: None,
            }],
        };
        let trace = forward(&spec, &params, &[1.0, 1.0]).unwrap();
        assert!((trace.logits()[0] - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn forward_rejects_wrong_input_length() {
        let spec =
            NetworkSpec::mlp(NumericField::Real, 4, &[3], 2, ActivationKind::ReluReal).unwrap();
        let params = NetworkParams::zeros(&spec);
        assert!(forward(&spec, &params, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn softmax_uniform_and_closed_form() {
        let p = softmax_probs(&[0.7; 10]);
        for &v in &p {
            assert!((v - 0.1).abs() < 1e-15);
        }
        let p = softmax_probs(&[0.0, 3.0_f64.ln()]);
        assert!((p[0] - 0.25).abs() < 1e-15);
        assert!((p[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax_probs(&[-700.0, 0.0, 700.0, 3.0]);
        let s: f64 = p.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&v| v.is_finite()));
    }

    #[test]
    fn init_is_deterministic_per_stream() {
        let spec = NetworkSpec::mlp(
            NumericField::Complex,
            8,
            &[5],
            3,
            ActivationKind::ComplexSigmoid,
        )
        .unwrap();
        let a = NetworkParams::init(&spec, &mut RngStream::new(7, 0));
        let b = NetworkParams::init(&spec, &mut RngStream::new(7, 0));
        assert_eq!(a, b);
        let c = NetworkParams::init(&spec, &mut RngStream::new(8, 0));
        assert_ne!(a, c);
    }
}
