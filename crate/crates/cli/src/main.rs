mod config;
mod error;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};
use error::RunError;
use run::Command;

/// Quasi-local mass and center functionals on asymptotically flat metrics.
#[derive(Parser)]
#[command(name = "admtool", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// ADM and intrinsic mass sweeps and their difference.
    Mass(RunArgs),
    /// Hamiltonian and intrinsic center sweeps and their difference.
    Center(RunArgs),
    /// Mass and center differences.
    Compare(RunArgs),
    /// Integration-by-parts identity residuals.
    Identities(RunArgs),
    /// Decay-rate checks on the metric perturbation.
    Decay(RunArgs),
    /// Every functional listed in the config.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Quadrature order (overrides the config).
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated radii (overrides the config, keeps the surface shape).
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn execute(command: Command, args: RunArgs) -> Result<bool, RunError> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(order) = args.order {
        config.order = order;
    }
    if let Some(radii) = args.radii {
        config.schedule.set_radii(radii);
    }
    if let Some(out) = args.out {
        config.output.path = out;
    }
    if let Some(format) = args.format {
        config.output.format = format;
    }
    let outcome = run::run(&config, command)?;
    output::write_outcome(&config.output.path, &outcome, config.output.format)?;
    for check in &outcome.checks {
        println!("{}", output::describe(check));
    }
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Mass(a) => (Command::Mass, a),
        Sub::Center(a) => (Command::Center, a),
        Sub::Compare(a) => (Command::Compare, a),
        Sub::Identities(a) => (Command::Identities, a),
        Sub::Decay(a) => (Command::Decay, a),
        Sub::Sweep(a) => (Command::Sweep, a),
    };
    match execute(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("admtool: certification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("admtool: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
