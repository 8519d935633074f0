//! Property-based invariants for the math kernels.

use onn_core::network::softmax_probs;
use onn_core::tensor::{matvec, Complex, ComplexTensor};
use proptest::prelude::*;

fn complex_strategy() -> impl Strategy<Value = Complex> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// matvec(W, a x + b y) = a matvec(W, x) + b matvec(W, y).
    #[test]
    fn matvec_is_linear(
        rows in 1usize..6,
        cols in 1usize..6,
        seed in 0u64..1000,
        a in complex_strategy(),
        b in complex_strategy(),
    ) {
        let mut rng = onn_core::RngStream::new(seed, 7);
        let w = ComplexTensor::from_fn(rows, cols, |_, _| {
            Complex::new(rng.standard_normal(), rng.standard_normal())
        });
        let x: Vec<Complex> = (0..cols)
            .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
            .collect();
        let y: Vec<Complex> = (0..cols)
            .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
            .collect();

        let combo: Vec<Complex> = x.iter().zip(y.iter()).map(|(&xi, &yi)| a * xi + b * yi).collect();
        let lhs = matvec(&w, &combo).unwrap();
        let wx = matvec(&w, &x).unwrap();
        let wy = matvec(&w, &y).unwrap();

        for ((l, &wx_j), &wy_j) in lhs.iter().zip(wx.iter()).zip(wy.iter()) {
            let rhs = a * wx_j + b * wy_j;
            let scale = rhs.norm().max(1.0);
            prop_assert!((l - rhs).norm() <= 1e-10 * scale, "{l} vs {rhs}");
        }
    }

    /// Softmax outputs are a probability vector for any finite logits.
    #[test]
    fn softmax_is_normalized(logits in proptest::collection::vec(-300.0..300.0f64, 1..12)) {
        let p = softmax_probs(&logits);
        prop_assert_eq!(p.len(), logits.len());
        let sum: f64 = p.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    /// Photon counts scale exactly as beta^2 when beta doubles.
    #[test]
    fn photon_count_beta_scaling(exp in -3i32..10) {
        use onn_core::noise::PhotonQuotient;
        let q = PhotonQuotient {
            mean_sum_sq: 0.37,
            ops_per_inference: 9,
            connections_per_inference: 4,
        };
        let beta = 2.0f64.powi(exp);
        let r1 = q.report(beta, 1550e-9);
        let r2 = q.report(2.0 * beta, 1550e-9);
        prop_assert_eq!(r2.photons_per_op, 4.0 * r1.photons_per_op);
        prop_assert_eq!(r2.photons_per_mac, 4.0 * r1.photons_per_mac);
    }
}
