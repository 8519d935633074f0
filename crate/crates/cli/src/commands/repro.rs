//! `onn repro-paper`: one-command run of the whole experiment pipeline.
//!
//! Produces, under `--out-dir`:
//!
//! - `fig3_accuracy.csv` — test accuracy of real- and complex-valued
//!   classifiers versus trainable parameter count (both countings),
//! - `fig4_disorder.csv` — error rate versus static disorder strength for
//!   several network sizes and depths,
//! - `fig5_photons.csv`  — error rate versus photons per operation,
//! - `energy_table1.csv`, `energy_sec2d.csv` — cost-model tables,
//! - trained models under `models/`, and a manifest.
//!
//! `--scale ci` uses reduced epochs/trials (minutes); `--scale full` runs
//! the complete protocol (hours).

use rayon::prelude::*;

use onn_core::eval::evaluate;
use onn_core::idx::{load_mnist_test, load_mnist_train, Dataset};
use onn_core::model_file;
use onn_core::noise::{photon_quotient, DisorderConfig, NoiseConfig, ShotNoiseConfig};
use onn_core::train::{train, TrainConfig};
use onn_core::{ActivationKind, Error, NetworkParams, NetworkSpec, NumericField, Result};

use crate::csvio::{CsvFile, CsvValue};
use crate::manifest::Manifest;

use super::{point_seed, resolve_data_dir, ReproArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Ci,
    Full,
}

struct Protocol {
    fig3_epochs: u32,
    fig3_seeds: u64,
    fig3_real_widths: &'static [usize],
    fig3_complex_widths: &'static [usize],
    sweep_epochs: u32,
    sweep_trials: u32,
    sigmas: Vec<f64>,
    photon_targets: Vec<f64>,
    sweep_networks: &'static [(&'static str, &'static [usize])],
}

fn protocol(scale: Scale) -> Protocol {
    match scale {
        Scale::Ci => Protocol {
            fig3_epochs: 3,
            fig3_seeds: 1,
            fig3_real_widths: &[100],
            fig3_complex_widths: &[50],
            sweep_epochs: 2,
            sweep_trials: 3,
            sigmas: vec![0.0, 0.25, 0.5],
            photon_targets: vec![1.0, 100.0],
            sweep_networks: &[("1hl-100n", &[100])],
        },
        Scale::Full => Protocol {
            fig3_epochs: 150,
            fig3_seeds: 5,
            fig3_real_widths: &[50, 100, 200, 400],
            fig3_complex_widths: &[25, 50, 100, 200],
            sweep_epochs: 15,
            sweep_trials: 10,
            sigmas: (0..=10).map(|i| i as f64 / 10.0).collect(),
            photon_targets: vec![0.01, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4],
            sweep_networks: &[
                ("1hl-100n", &[100]),
                ("1hl-1000n", &[1000]),
                ("2hl-100n", &[100, 100]),
                ("2hl-1000n", &[1000, 1000]),
            ],
        },
    }
}

pub fn run(args: ReproArgs) -> Result<()> {
    let scale = match args.scale.as_str() {
        "ci" => Scale::Ci,
        "full" => Scale::Full,
        other => {
            return Err(Error::Config(format!(
                "unknown scale {other:?} (expected ci or full)"
            )))
        }
    };
    let proto = protocol(scale);

    let data_dir = resolve_data_dir(&args.data_dir);
    let train_set = load_mnist_train(&data_dir)?;
    let test_set = load_mnist_test(&data_dir)?;
    let models_dir = args.out_dir.join("models");
    std::fs::create_dir_all(&models_dir)
        .map_err(|e| Error::io(models_dir.display().to_string(), e))?;

    let mut manifest = Manifest::start("repro-paper");
    manifest.config("scale", &args.scale);
    manifest.config("seed", args.seed);
    manifest.config("data_dir", data_dir.display());
    manifest.config("fig3_epochs", proto.fig3_epochs);
    manifest.config("fig3_training_repetitions", proto.fig3_seeds);
    manifest.config("sweep_trials", proto.sweep_trials);

    // ---- accuracy vs parameter count --------------------------------
    let mut runs: Vec<(NumericField, ActivationKind, usize, u64)> = Vec::new();
    for seed_idx in 0..proto.fig3_seeds {
        let seed = point_seed(args.seed, 1000 + seed_idx);
        for &w in proto.fig3_real_widths {
            runs.push((NumericField::Real, ActivationKind::ReluReal, w, seed));
            runs.push((NumericField::Real, ActivationKind::SigmoidReal, w, seed));
        }
        for &w in proto.fig3_complex_widths {
            runs.push((NumericField::Complex, ActivationKind::Modulus, w, seed));
            runs.push((
                NumericField::Complex,
                ActivationKind::ComplexSigmoid,
                w,
                seed,
            ));
        }
    }
    eprintln!(
        "accuracy-vs-parameters: {} training runs x {} epochs",
        runs.len(),
        proto.fig3_epochs
    );

    let results: Result<Vec<_>> = runs
        .par_iter()
        .map(|&(field, activation, width, seed)| {
            let spec = NetworkSpec::mlp(field, 784, &[width], 10, activation)?;
            let config = TrainConfig {
                eval_test_each_epoch: false,
                ..TrainConfig::new(proto.fig3_epochs, seed)
            };
            let (params, report) = train(&spec, &config, &train_set, &test_set)?;
            let clean = evaluate(&spec, &params, &test_set, None)?;
            eprintln!(
                "  {field} {activation} h{width} seed {seed}: test_acc {:.4} ({:.0}s)",
                clean.accuracy, report.wall_seconds
            );
            Ok((field, activation, width, seed, spec, params, report, clean))
        })
        .collect();
    let results = results?;

    let fig3_path = args.out_dir.join("fig3_accuracy.csv");
    let mut fig3 = CsvFile::create(
        &fig3_path,
        &[
            "field",
            "activation",
            "hidden",
            "params_real_scalars",
            "params_weight_entries",
            "seed",
            "epochs",
            "test_acc",
            "train_acc",
        ],
    )?;
    for (field, activation, width, seed, spec, params, report, clean) in &results {
        fig3.row(&[
            CsvValue::Text(field.to_string()),
            CsvValue::Text(activation.to_string()),
            CsvValue::Int(*width as u64),
            CsvValue::Int(spec.param_count() as u64),
            CsvValue::Int(spec.entry_count() as u64),
            CsvValue::Int(*seed),
            CsvValue::Int(proto.fig3_epochs as u64),
            CsvValue::Float(clean.accuracy),
            CsvValue::Float(report.epochs.last().map(|e| e.train_acc).unwrap_or(f64::NAN)),
        ])?;
        // Keep one representative model per configuration (first seed).
        let name = format!("fig3-{field}-{activation}-h{width}-seed{seed}.onnm");
        let path = models_dir.join(name);
        if !path.exists() {
            model_file::save(spec, params, &path)?;
        }
    }
    let fig3_path = fig3.finish()?;
    manifest.file(&fig3_path);

    // ---- disorder and photon sweeps ----------------------------------
    let mut sweep_models: Vec<(String, NetworkSpec, NetworkParams)> = Vec::new();
    for (name, hidden) in proto.sweep_networks {
        let spec = NetworkSpec::mlp(
            NumericField::Complex,
            784,
            hidden,
            10,
            ActivationKind::ComplexSigmoid,
        )?;
        let config = TrainConfig {
            eval_test_each_epoch: false,
            ..TrainConfig::new(proto.sweep_epochs, point_seed(args.seed, 2000))
        };
        eprintln!("training sweep network {name} ({} epochs)", proto.sweep_epochs);
        let (params, _) = train(&spec, &config, &train_set, &test_set)?;
        let path = models_dir.join(format!("sweep-{name}.onnm"));
        model_file::save(&spec, &params, &path)?;
        sweep_models.push((name.to_string(), spec, params));
    }

    let fig4_path = args.out_dir.join("fig4_disorder.csv");
    let mut fig4 = CsvFile::create(
        &fig4_path,
        &[
            "network",
            "sigma",
            "mean_error",
            "std_error",
            "trials",
            "clamp_events",
        ],
    )?;
    for (net_idx, (name, spec, params)) in sweep_models.iter().enumerate() {
        for (i, &sigma) in proto.sigmas.iter().enumerate() {
            let noise = NoiseConfig::disorder_only(DisorderConfig {
                sigma,
                trials: proto.sweep_trials,
                seed: point_seed(args.seed, 3000 + (net_idx as u64) * 100 + i as u64),
            });
            let report = evaluate(spec, params, &test_set, Some(&noise))?;
            eprintln!(
                "  {name} sigma {sigma}: error {:.4} +- {:.4}",
                report.error_rate, report.std_error
            );
            fig4.row(&[
                CsvValue::Text(name.clone()),
                CsvValue::Float(sigma),
                CsvValue::Float(report.error_rate),
                CsvValue::Float(report.std_error),
                CsvValue::Int(report.trials as u64),
                CsvValue::Int(report.clamp_events),
            ])?;
        }
    }
    let fig4_path = fig4.finish()?;
    manifest.file(&fig4_path);

    let fig5_path = args.out_dir.join("fig5_photons.csv");
    let mut fig5 = CsvFile::create(
        &fig5_path,
        &[
            "network",
            "beta",
            "photons_per_op",
            "photons_per_mac",
            "mean_error",
            "std_error",
            "trials",
        ],
    )?;
    for (net_idx, (name, spec, params)) in sweep_models.iter().enumerate() {
        let quotient = photon_quotient(spec, params, &test_set)?;
        for (i, &target) in proto.photon_targets.iter().enumerate() {
            let beta = quotient.beta_for_photons_per_op(target);
            let photon = quotient.report(beta, onn_core::noise::DEFAULT_WAVELENGTH);
            let noise = NoiseConfig::shot_only(ShotNoiseConfig {
                beta,
                trials: proto.sweep_trials,
                seed: point_seed(args.seed, 4000 + (net_idx as u64) * 100 + i as u64),
            });
            let report = evaluate(spec, params, &test_set, Some(&noise))?;
            eprintln!(
                "  {name} {target} photons/op: error {:.4} +- {:.4}",
                report.error_rate, report.std_error
            );
            fig5.row(&[
                CsvValue::Text(name.clone()),
                CsvValue::Float(beta),
                CsvValue::Float(photon.photons_per_op),
                CsvValue::Float(photon.photons_per_mac),
                CsvValue::Float(report.error_rate),
                CsvValue::Float(report.std_error),
                CsvValue::Int(report.trials as u64),
            ])?;
        }
    }
    let fig5_path = fig5.finish()?;
    manifest.file(&fig5_path);

    // ---- energy tables ------------------------------------------------
    for preset in ["table1", "sec2d"] {
        super::energy_table::run(super::EnergyTableArgs {
            preset: Some(preset.to_string()),
            scenario: None,
            out_dir: args.out_dir.clone(),
        })?;
        manifest.file(&args.out_dir.join(format!("energy_{preset}.csv")));
    }

    manifest.write(&args.out_dir)?;
    println!("repro artifacts written to {}", args.out_dir.display());
    Ok(())
}
