//! `onn sweep-photons`: error rate versus shot-noise strength, indexed by
//! the photon budget per operation.

use onn_core::eval::evaluate;
use onn_core::idx::load_mnist_test;
use onn_core::model_file;
use onn_core::noise::{photon_quotient, NoiseConfig, ShotNoiseConfig};
use onn_core::{Error, Result};

use crate::csvio::{CsvFile, CsvValue};
use crate::manifest::Manifest;

use super::{parse_f64_list, point_seed, resolve_data_dir, SweepPhotonsArgs};

pub fn run(args: SweepPhotonsArgs) -> Result<()> {
    if args.trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    if !(args.wavelength_nm > 0.0) {
        return Err(Error::Config("wavelength must be > 0".into()));
    }
    let (spec, params) = model_file::load(&args.model)?;
    let data_dir = resolve_data_dir(&args.data_dir);
    let dataset = load_mnist_test(&data_dir)?;

    // One clean pass fixes the photon budget; beta then scales it
    // quadratically.
    let quotient = photon_quotient(&spec, &params, &dataset)?;
    let wavelength = args.wavelength_nm * 1e-9;

    let betas: Vec<f64> = match (&args.betas, &args.photons) {
        (Some(betas), None) => {
            let list = parse_f64_list(betas, "beta")?;
            for &b in &list {
                if !(b > 0.0) {
                    return Err(Error::Config(format!("beta must be > 0, got {b}")));
                }
            }
            list
        }
        (None, Some(photons)) => {
            let targets = parse_f64_list(photons, "photons-per-op")?;
            targets
                .iter()
                .map(|&p| {
                    if !(p > 0.0) {
                        return Err(Error::Config(format!(
                            "photons-per-op target must be > 0, got {p}"
                        )));
                    }
                    Ok(quotient.beta_for_photons_per_op(p))
                })
                .collect::<Result<Vec<f64>>>()?
        }
        (None, None) => {
            return Err(Error::Config(
                "provide either --betas or --photons".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let mut manifest = Manifest::start("sweep-photons");
    manifest.config("model", args.model.display());
    if let Some(b) = &args.betas {
        manifest.config("betas", b);
    }
    if let Some(p) = &args.photons {
        manifest.config("photons", p);
    }
    manifest.config("trials", args.trials);
    manifest.config("seed", args.seed);
    manifest.config("wavelength_nm", args.wavelength_nm);
    manifest.config("data_dir", data_dir.display());
    manifest.config("ops_per_inference", quotient.ops_per_inference);

    let mut csv = CsvFile::create(
        &args.out,
        &[
            "beta",
            "photons_per_op",
            "photons_per_mac",
            "mean_error",
            "std_error",
            "trials",
        ],
    )?;
    for (i, &beta) in betas.iter().enumerate() {
        let report = quotient.report(beta, wavelength);
        let noise = NoiseConfig::shot_only(ShotNoiseConfig {
            beta,
            trials: args.trials,
            seed: point_seed(args.seed, i as u64),
        });
        let eval = evaluate(&spec, &params, &dataset, Some(&noise))?;
        eprintln!(
            "beta {beta:.6e} ({:.3e} photons/op, {}): mean_error {:.5} +- {:.5}",
            report.photons_per_op,
            onn_core::energy::format_energy(report.energy_per_op, 2),
            eval.error_rate,
            eval.std_error
        );
        csv.row(&[
            CsvValue::Float(beta),
            CsvValue::Float(report.photons_per_op),
            CsvValue::Float(report.photons_per_mac),
            CsvValue::Float(eval.error_rate),
            CsvValue::Float(eval.std_error),
            CsvValue::Int(eval.trials as u64),
        ])?;
    }
    let csv_path = csv.finish()?;
    println!("wrote {}", csv_path.display());

    manifest.file(&csv_path);
    let manifest_dir = csv_path
        .parent()
        .map(std::path::Path::to_path_buf)
        .unwrap_or_else(|| std::path::PathBuf::from("."));
    manifest.write(&manifest_dir)?;
    Ok(())
}
