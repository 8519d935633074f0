//! `onn eval`: accuracy of a saved model, clean or under noise.

use onn_core::eval::evaluate;
use onn_core::idx::{load_mnist_test, load_mnist_train};
use onn_core::model_file;
use onn_core::noise::{DisorderConfig, NoiseConfig, ShotNoiseConfig};
use onn_core::{Error, Result};

use super::{resolve_data_dir, EvalArgs};

pub fn run(args: EvalArgs) -> Result<()> {
    let (spec, params) = model_file::load(&args.model)?;
    let data_dir = resolve_data_dir(&args.data_dir);
    let dataset = match args.split.as_str() {
        "test" => load_mnist_test(&data_dir)?,
        "train" => load_mnist_train(&data_dir)?,
        other => {
            return Err(Error::Config(format!(
                "unknown split {other:?} (expected test or train)"
            )))
        }
    };

    let noise = match (args.sigma, args.beta) {
        (None, None) => None,
        (sigma, beta) => Some(NoiseConfig {
            disorder: sigma.map(|sigma| DisorderConfig {
                sigma,
                trials: args.trials,
                seed: args.noise_seed,
            }),
            shot: beta.map(|beta| ShotNoiseConfig {
                beta,
                trials: args.trials,
                seed: args.noise_seed.wrapping_add(1),
            }),
        }),
    };

    let report = evaluate(&spec, &params, &dataset, noise.as_ref())?;
    if report.trials == 1 && noise.is_none() {
        println!(
            "samples {} accuracy {:.6} error_rate {:.6}",
            dataset.len(),
            report.accuracy,
            report.error_rate
        );
    } else {
        println!(
            "samples {} trials {} mean_error {:.6} std_error {:.6} mean_accuracy {:.6} clamp_events {}",
            dataset.len(),
            report.trials,
            report.error_rate,
            report.std_error,
            report.accuracy,
            report.clamp_events
        );
    }
    Ok(())
}
