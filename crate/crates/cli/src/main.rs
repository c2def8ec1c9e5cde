use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use skagree::{CliError, Kind};

/// Secret-key agreement over OFDM: experiment runner.
#[derive(Debug, Parser)]
#[command(
    version,
    after_help = "Kinds: diag-check, threshold, fer-sim, security-gap, sk-cdf, outage-analytic.\n\
                  Use `skagree describe <kind>` for the config keys of a kind.\n\
                  Exit codes: 0 success, 1 config error, 2 numerical or i/o failure."
)]
struct Args {
    /// Experiment kind, or `describe`.
    kind: String,
    /// Kind to describe (only with `describe`).
    target: Option<String>,
    /// Flat JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(args: Args) -> Result<(), CliError> {
    if args.kind == "describe" {
        let target = args.target.ok_or_else(|| CliError::Config("describe needs a kind".into()))?;
        print!("{}", target.parse::<Kind>()?.describe());
        return Ok(());
    }
    if let Some(extra) = args.target {
        return Err(CliError::Config(format!("unexpected argument `{extra}`")));
    }
    let kind: Kind = args.kind.parse()?;
    let config = args.config.ok_or_else(|| CliError::Config("--config is required".into()))?;
    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let artifacts = skagree::run_file(kind, &config, &args.out)?;
    for name in artifacts.names() {
        println!("{}", args.out.join(name).display());
    }
    Ok(())
}
