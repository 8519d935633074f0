//! Seeded random streams for reproducible Monte-Carlo runs.
//!
//! Every stochastic component of the library draws from an [`RngStream`],
//! which couples a 64-bit seed with a 64-bit stream id. ChaCha8 is a
//! counter-based generator, so streams with distinct ids are statistically
//! independent and can be handed to parallel workers without coordination:
//! the sample sequence depends only on `(seed, stream_id, draw index)`.
//!
//! Gaussian variates use the Box-Muller transform rather than a
//! rejection-based method, so each draw consumes a fixed number of raw
//! words from the stream.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::Result;

const TWO_PI: f64 = std::f64::consts::TAU;
/// 2^-53, the spacing of doubles in [0.5, 1).
const U53: f64 = 1.0 / ((1u64 << 53) as f64);

/// A seeded, stream-addressable random number generator.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Creates the stream identified by `(seed, stream_id)`.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Next raw 64-bit word.
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform double in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * U53
    }

    /// Uniform double in `(0, 1]`; safe as a logarithm argument.
    fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * U53
    }

    /// Uniform integer in `[0, bound)` via the widening-multiply map.
    ///
    /// The tiny modulo bias (< 2^-64 relative) is irrelevant here; what
    /// matters is that exactly one word is consumed per draw.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// One standard-normal variate (consumes one Box-Muller pair).
    pub fn standard_normal(&mut self) -> f64 {
        self.standard_normal_pair().0
    }

    /// Two independent standard-normal variates from one Box-Muller pair.
    pub fn standard_normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = TWO_PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Sample from `N(mean, sigma^2)`.
    pub fn gaussian_real(&mut self, mean: f64, sigma: f64) -> Result<f64> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::config(format!(
                "gaussian_real: sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(mean + sigma * self.standard_normal())
    }

    /// Sample `mean + delta` where `Re(delta)` and `Im(delta)` are
    /// independent zero-mean Gaussians, each of variance `var_q`.
    pub fn gaussian_complex(&mut self, mean: Complex64, var_q: f64) -> Result<Complex64> {
        if !(var_q >= 0.0) || !var_q.is_finite() {
            return Err(Error::config(format!(
                "gaussian_complex: variance must be finite and >= 0, got {var_q}"
            )));
        }
        let sigma = var_q.sqrt();
        let (g_re, g_im) = self.standard_normal_pair();
        Ok(Complex64::new(
            mean.re + sigma * g_re,
            mean.im + sigma * g_im,
        ))
    }

    /// Fisher-Yates shuffle driven by this stream.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            slice.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seed_and_stream_give_identical_sequences() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(
                a.gaussian_real(0.5, 2.0).unwrap().to_bits(),
                b.gaussian_real(0.5, 2.0).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn zero_variance_returns_mean_exactly() {
        let mut rng = RngStream::new(1, 0);
        assert_eq!(rng.gaussian_real(3.25, 0.0).unwrap(), 3.25);
        let mean = Complex64::new(-1.5, 2.75);
        let got = rng.gaussian_complex(mean, 0.0).unwrap();
        assert_eq!(got, mean);
    }

    #[test]
    fn negative_width_is_rejected() {
        let mut rng = RngStream::new(1, 0);
        assert!(rng.gaussian_real(0.0, -1.0).is_err());
        assert!(rng.gaussian_complex(Complex64::new(0.0, 0.0), -0.1).is_err());
        assert!(rng.gaussian_real(0.0, f64::NAN).is_err());
    }

    #[test]
    fn uniform_stays_in_unit_interval() {
        let mut rng = RngStream::new(9, 3);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = RngStream::new(5, 0);
        let mut v: Vec<u32> = (0..100).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_ne!(v, (0..100).collect::<Vec<_>>());
    }
}
