use onn_core::idx::{load_mnist_test, load_mnist_train};
use onn_core::train::{train, TrainConfig};
use onn_core::{ActivationKind, NetworkSpec, NumericField};
use std::path::Path;
use std::time::Instant;

fn main() {
    let dir = Path::new("data/mnist");
    let t = Instant::now();
    let train_set = load_mnist_train(dir).unwrap();
    let test_set = load_mnist_test(dir).unwrap();
    println!("loaded {} train / {} test in {:.1}s", train_set.len(), test_set.len(), t.elapsed().as_secs_f64());

    let args: Vec<String> = std::env::args().collect();
    let field = args.get(1).map(|s| s.as_str()).unwrap_or("complex");
    let hidden: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100);
    let epochs: u32 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3);

    let (spec, label) = match field {
        "real" => (NetworkSpec::mlp(NumericField::Real, 784, &[hidden], 10, ActivationKind::SigmoidReal).unwrap(), "real sigmoid"),
        "relu" => (NetworkSpec::mlp(NumericField::Real, 784, &[hidden], 10, ActivationKind::ReluReal).unwrap(), "real relu"),
        _ => (NetworkSpec::mlp(NumericField::Complex, 784, &[hidden], 10, ActivationKind::ComplexSigmoid).unwrap(), "complex csigmoid"),
    };
    let mut config = TrainConfig::new(epochs, 1);
    config.eval_test_each_epoch = false;
    if args.get(4).map(|s| s.as_str()) == Some("sgd") {
        config.optimizer = onn_core::train::Optimizer::Sgd;
    }
    let t = Instant::now();
    let (_params, report) = train(&spec, &config, &train_set, &test_set).unwrap();
    for e in &report.epochs {
        println!("{label} h{hidden} epoch {}: loss {:.4} train_acc {:.4} test_acc {:.4}", e.epoch, e.train_loss, e.train_acc, e.test_acc);
    }
    println!("total {:.1}s ({:.2}s/epoch)", t.elapsed().as_secs_f64(), t.elapsed().as_secs_f64() / epochs as f64);
}
