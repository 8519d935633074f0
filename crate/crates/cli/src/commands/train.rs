//! `onn train`: fit a classifier on MNIST, write the model, the per-epoch
//! CSV, and the run manifest.

use onn_core::idx::{load_mnist_test, load_mnist_train};
use onn_core::model_file;
use onn_core::train::{train, Optimizer, TrainConfig};
use onn_core::{ActivationKind, Error, NetworkSpec, NumericField, Result};

use crate::csvio::{CsvFile, CsvValue};
use crate::manifest::Manifest;

use super::{parse_hidden_list, resolve_data_dir, TrainArgs};

pub fn run(args: TrainArgs) -> Result<()> {
    let field = NumericField::parse(&args.field)?;
    let activation = ActivationKind::parse(&args.activation)?;
    let hidden = parse_hidden_list(&args.hidden)?;
    let spec = NetworkSpec::mlp(field, 784, &hidden, 10, activation)?;

    let optimizer = match args.optimizer.as_str() {
        "adam" => Optimizer::adam_default(),
        "sgd" => Optimizer::Sgd,
        other => {
            return Err(Error::Config(format!(
                "unknown optimizer {other:?} (expected adam or sgd)"
            )))
        }
    };
    let config = TrainConfig {
        epochs: args.epochs,
        batch_size: args.batch,
        learning_rate: args.lr,
        optimizer,
        seed: args.seed,
        eval_test_each_epoch: true,
    };
    config.validate()?;

    let data_dir = resolve_data_dir(&args.data_dir);
    let train_set = load_mnist_train(&data_dir)?;
    let test_set = load_mnist_test(&data_dir)?;

    let tag = args.tag.clone().unwrap_or_else(|| {
        format!(
            "{}-{}-h{}-seed{}",
            field,
            activation,
            hidden
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>()
                .join("x"),
            args.seed
        )
    });
    let run_dir = args.out_dir.join(&tag);
    std::fs::create_dir_all(&run_dir).map_err(|e| Error::io(run_dir.display().to_string(), e))?;

    eprintln!(
        "training {field} {activation} 784-{}-10 ({} real parameters, {} entries) for {} epochs",
        hidden
            .iter()
            .map(|h| h.to_string())
            .collect::<Vec<_>>()
            .join("-"),
        spec.param_count(),
        spec.entry_count(),
        args.epochs
    );

    let mut manifest = Manifest::start("train");
    manifest.config("field", field);
    manifest.config("activation", activation);
    manifest.config("hidden", &args.hidden);
    manifest.config("epochs", args.epochs);
    manifest.config("batch", args.batch);
    manifest.config("lr", args.lr);
    manifest.config("optimizer", &args.optimizer);
    manifest.config("seed", args.seed);
    manifest.config("data_dir", data_dir.display());
    manifest.config("params_real_scalars", spec.param_count());
    manifest.config("params_weight_entries", spec.entry_count());

    let (params, report) = train(&spec, &config, &train_set, &test_set)?;

    let csv_path = run_dir.join("training.csv");
    let mut csv = CsvFile::create(&csv_path, &["epoch", "train_loss", "train_acc", "test_acc"])?;
    for e in &report.epochs {
        csv.row(&[
            CsvValue::Int(e.epoch as u64),
            CsvValue::Float(e.train_loss),
            CsvValue::Float(e.train_acc),
            CsvValue::Float(e.test_acc),
        ])?;
    }
    let csv_path = csv.finish()?;

    let model_path = run_dir.join("model.onnm");
    model_file::save(&spec, &params, &model_path)?;

    let last = report.epochs.last().expect("at least one epoch");
    println!(
        "final: train_loss {:.6} train_acc {:.4} test_acc {:.4} ({:.1}s, checksum {})",
        last.train_loss,
        last.train_acc,
        last.test_acc,
        report.wall_seconds,
        &report.final_checksum[..16]
    );
    println!("model: {}", model_path.display());

    manifest.config("wall_seconds", format!("{:.3}", report.wall_seconds));
    manifest.config("final_checksum", &report.final_checksum);
    manifest.file(&csv_path);
    manifest.file(&model_path);
    manifest.write(&run_dir)?;
    Ok(())
}
