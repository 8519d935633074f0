//! `onn info`: describe a saved model or a dataset directory.

use onn_core::idx::{load_mnist_test, load_mnist_train};
use onn_core::model_file;
use onn_core::{Error, Result};

use super::{resolve_data_dir, InfoArgs};

pub fn run(args: InfoArgs) -> Result<()> {
    let mut did_something = false;

    if let Some(model) = &args.model {
        let (spec, params) = model_file::load(model)?;
        println!("model: {}", model.display());
        println!("field: {}", spec.numeric_field);
        println!("input_dim: {}", spec.input_dim);
        for (i, layer) in spec.layers.iter().enumerate() {
            println!(
                "layer {i}: {} -> {} {} bias={}",
                layer.fan_in, layer.fan_out, layer.activation, layer.has_bias
            );
        }
        // Both parameter countings: a complex weight as two real scalars,
        // or as one entry.
        println!("params_real_scalars: {}", spec.param_count());
        println!("params_weight_entries: {}", spec.entry_count());
        println!("ops_per_inference: {}", spec.ops_per_inference());
        println!("checksum: {}", model_file::checksum(&spec, &params)?);
        did_something = true;
    }

    if args.data_dir.is_some() || !did_something {
        let dir = resolve_data_dir(&args.data_dir);
        match (load_mnist_train(&dir), load_mnist_test(&dir)) {
            (Ok(train), Ok(test)) => {
                println!("data_dir: {}", dir.display());
                println!(
                    "train: {} samples x {} pixels",
                    train.len(),
                    train.pixels_per_image()
                );
                println!(
                    "test: {} samples x {} pixels",
                    test.len(),
                    test.pixels_per_image()
                );
                did_something = true;
            }
            (r1, r2) => {
                if args.data_dir.is_some() {
                    r1?;
                    r2?;
                }
            }
        }
    }

    if !did_something {
        return Err(Error::Config(
            "nothing to describe: pass --model and/or --data-dir".into(),
        ));
    }
    Ok(())
}
