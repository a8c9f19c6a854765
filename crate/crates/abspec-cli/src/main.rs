use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use abspec_cli::config::load_config;
use abspec_cli::run::{run, RunError};

/// Vibrational absorption spectra of a diatomic gas in the vector potential
/// of a toroidal coil: truncated-oscillator eigenvalues, orientation-averaged
/// line profiles, on-axis coil potentials, and drive-current design.
#[derive(Debug, Parser)]
#[command(name = "abspec", version)]
struct Args {
    /// Computation to run: eigen | spectrum | coil | design | converge
    command: String,
    /// Path to the JSON run configuration
    config: PathBuf,
    /// Override a configuration key after parsing, e.g.
    /// --set coupling.ratio=2 (dotted keys descend into nested objects;
    /// repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Override the output CSV path
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match real_main(&args) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn real_main(args: &Args) -> Result<String, RunError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| RunError::Io(format!("reading `{}`: {e}", args.config.display())))?;
    let out = args.out.as_ref().map(|p| p.to_string_lossy().into_owned());
    let config = load_config(&args.command, &text, &args.set, out.as_deref())?;
    let artifacts = run(&config)?;
    for w in &artifacts.warnings {
        eprintln!("{w}");
    }
    Ok(artifacts.summary)
}
