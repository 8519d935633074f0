//! `onn`: train and evaluate optically realizable neural networks, sweep
//! their robustness to fabrication disorder and quantum shot noise, and
//! tabulate implementation energy costs.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error (missing or
//! corrupt files), 4 numeric failure.

use clap::Parser;

mod commands;
mod csvio;
mod manifest;

use commands::Cli;

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not configure {threads} threads: {e}");
            std::process::exit(2);
        }
    }
    match commands::run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &onn_core::Error) -> i32 {
    use onn_core::Error::*;
    match err {
        Config(_) | Shape { .. } => 2,
        Numeric(_) => 4,
        IdxMagic { .. }
        | IdxTruncated { .. }
        | CountMismatch { .. }
        | ModelMagic { .. }
        | ModelVersion { .. }
        | ModelEof { .. }
        | ModelFormat(_)
        | Io { .. } => 3,
    }
}
