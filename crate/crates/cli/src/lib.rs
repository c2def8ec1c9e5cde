//! Declarative experiment runner: one flat JSON config in, CSV files plus a
//! JSON metadata sidecar out.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod experiments;
mod output;

use std::path::Path;
use std::time::Instant;

use serde_json::json;
use skagree_core::rng::RNG_ALGORITHM;

pub use config::{Kind, Params};
pub use output::Artifacts;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

/// Runs one experiment and returns its artifacts without touching the disk.
pub fn run(params: &Params) -> Result<Artifacts, CliError> {
    let start = Instant::now();
    let stem = params.output()?;
    let mut out = experiments::run(params, &stem)?;
    let seed = params.u64("seed")?;
    let mut meta = json!({
        "kind": params.kind().name(),
        "params": params.as_json(),
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "threads": rayon::current_num_threads(),
        "version": env!("CARGO_PKG_VERSION"),
        "outputs": out.names(),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    meta.as_object_mut().unwrap().append(out.take_meta().as_object_mut().unwrap());
    out.push_json(format!("{stem}.meta.json"), &meta);
    Ok(out)
}

/// Reads a config file, runs the experiment and writes every artifact into
/// `out_dir` atomically.
pub fn run_file(kind: Kind, config: &Path, out_dir: &Path) -> Result<Artifacts, CliError> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", config.display())))?;
    let params = Params::parse(kind, &text)?;
    let artifacts = run(&params)?;
    artifacts.write_to(out_dir)?;
    Ok(artifacts)
}
