//! `onn sweep-disorder`: error rate versus static disorder strength.

use onn_core::eval::evaluate;
use onn_core::idx::load_mnist_test;
use onn_core::model_file;
use onn_core::noise::{DisorderConfig, NoiseConfig};
use onn_core::{Error, Result};

use crate::csvio::{CsvFile, CsvValue};
use crate::manifest::Manifest;

use super::{parse_f64_list, point_seed, resolve_data_dir, SweepDisorderArgs};

pub fn run(args: SweepDisorderArgs) -> Result<()> {
    if args.trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    let sigmas = parse_f64_list(&args.sigmas, "sigma")?;
    let (spec, params) = model_file::load(&args.model)?;
    let data_dir = resolve_data_dir(&args.data_dir);
    let dataset = load_mnist_test(&data_dir)?;

    let mut manifest = Manifest::start("sweep-disorder");
    manifest.config("model", args.model.display());
    manifest.config("sigmas", &args.sigmas);
    manifest.config("trials", args.trials);
    manifest.config("seed", args.seed);
    manifest.config("data_dir", data_dir.display());

    let mut csv = CsvFile::create(
        &args.out,
        &["sigma", "mean_error", "std_error", "trials", "clamp_events"],
    )?;
    for (i, &sigma) in sigmas.iter().enumerate() {
        let noise = NoiseConfig::disorder_only(DisorderConfig {
            sigma,
            trials: args.trials,
            seed: point_seed(args.seed, i as u64),
        });
        let report = evaluate(&spec, &params, &dataset, Some(&noise))?;
        eprintln!(
            "sigma {sigma}: mean_error {:.5} +- {:.5} (clamps {})",
            report.error_rate, report.std_error, report.clamp_events
        );
        csv.row(&[
            CsvValue::Float(sigma),
            CsvValue::Float(report.error_rate),
            CsvValue::Float(report.std_error),
            CsvValue::Int(report.trials as u64),
            CsvValue::Int(report.clamp_events),
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
