//! Monte-Carlo statistics of the random samplers at 10^6 draws. All
//! bounds sit at roughly 3-4 standard errors of the respective estimator,
//! and the streams are seeded, so these are deterministic checks.

use onn_core::noise::{sample_disorder, shot_noise_perturb};
use onn_core::tensor::Complex;
use onn_core::RngStream;

const N: usize = 1_000_000;

#[test]
fn complex_gaussian_quadrature_variance() {
    let mut rng = RngStream::new(2024, 0);
    let var_q = 0.25;
    let mut sum_re = 0.0;
    let mut sum_im = 0.0;
    let mut sq_re = 0.0;
    let mut sq_im = 0.0;
    let mut cross = 0.0;
    for _ in 0..N {
        let z = rng
            .gaussian_complex(Complex::new(0.0, 0.0), var_q)
            .unwrap();
        sum_re += z.re;
        sum_im += z.im;
        sq_re += z.re * z.re;
        sq_im += z.im * z.im;
        cross += z.re * z.im;
    }
    let n = N as f64;
    let var_re = sq_re / n - (sum_re / n).powi(2);
    let var_im = sq_im / n - (sum_im / n).powi(2);
    assert!((0.2485..=0.2515).contains(&var_re), "Var(Re) = {var_re}");
    assert!((0.2485..=0.2515).contains(&var_im), "Var(Im) = {var_im}");

    // Quadratures are uncorrelated.
    let cov = cross / n - (sum_re / n) * (sum_im / n);
    assert!(cov.abs() <= 0.003 * var_q, "Cov = {cov}");
}

#[test]
fn real_gaussian_mean() {
    let mut rng = RngStream::new(2025, 0);
    let mut sum = 0.0;
    for _ in 0..N {
        sum += rng.gaussian_real(1.0, 0.1).unwrap();
    }
    let mean = sum / N as f64;
    assert!((mean - 1.0).abs() <= 0.001, "mean = {mean}");
}

#[test]
fn shot_noise_variance_and_mean() {
    // beta = 1: per-quadrature variance 1/(4 beta^2) = 0.25, within 0.6%.
    let mut rng = RngStream::new(2026, 0);
    let a = Complex::new(0.8, -0.3);
    let beta = 1.0;
    let mut sum_re = 0.0;
    let mut sum_im = 0.0;
    let mut sq_re = 0.0;
    let mut sq_im = 0.0;
    for _ in 0..N {
        let out = shot_noise_perturb(a, beta, &mut rng).unwrap();
        let d = out - a;
        sum_re += d.re;
        sum_im += d.im;
        sq_re += d.re * d.re;
        sq_im += d.im * d.im;
    }
    let n = N as f64;
    let truth = 1.0 / (4.0 * beta * beta);
    let var_re = sq_re / n - (sum_re / n).powi(2);
    let var_im = sq_im / n - (sum_im / n).powi(2);
    for (label, v) in [("Re", var_re), ("Im", var_im)] {
        assert!(
            (v - truth).abs() <= 0.006 * truth,
            "Var({label}) = {v}, expected {truth} +- 0.6%"
        );
    }

    // E[a'] = a within CLT bounds (4 standard errors = 4*0.5/sqrt(N)).
    let bound = 4.0 * 0.5 / n.sqrt();
    assert!((sum_re / n).abs() <= bound);
    assert!((sum_im / n).abs() <= bound);
}

#[test]
fn disorder_parameter_mean() {
    let mut rng = RngStream::new(2027, 0);
    let real = sample_disorder(100_000, 0.3, &mut rng).unwrap();
    let mean_a: f64 =
        real.triples.iter().map(|t| t.a).sum::<f64>() / real.triples.len() as f64;
    assert!((mean_a - 1.0).abs() <= 0.003, "mean a = {mean_a}");
}
