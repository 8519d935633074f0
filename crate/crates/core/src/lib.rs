//! Simulation and analysis library for all-optical neural networks.
//!
//! The crate covers the full pipeline for studying optically implementable
//! classifiers:
//!
//! - [`tensor`] / [`rng`] — dense complex linear algebra and reproducible
//!   counter-based random streams,
//! - [`network`] — real- and complex-valued feedforward models with
//!   optically realizable activation functions,
//! - [`train`] — MNIST ingestion, hand-derived backpropagation for the
//!   non-holomorphic activations, and mini-batch optimization,
//! - [`eval`] — deterministic and Monte-Carlo (noisy) inference,
//! - [`noise`] — static fabrication disorder and coherent-state shot noise,
//!   with photon/energy accounting,
//! - [`energy`] — closed-form energy, footprint, and latency estimates for
//!   electronic, optoelectronic, and all-optical implementations,
//! - [`model_file`] / [`idx`] — binary model persistence and IDX dataset
//!   parsing.

pub mod energy;
pub mod error;
pub mod eval;
pub mod idx;
pub mod model_file;
pub mod network;
pub mod noise;
pub mod rng;
pub mod tensor;
pub mod train;

mod gemm;

pub use error::Error;
pub use network::{ActivationKind, LayerSpec, NetworkParams, NetworkSpec, NumericField};
pub use rng::RngStream;
pub use tensor::{Complex, ComplexTensor, RealTensor};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
