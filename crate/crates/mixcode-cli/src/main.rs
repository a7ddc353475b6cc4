//! Command-line harness around the mixcode library: build and validate
//! mixing codes, run keyed ARQ sessions over a noisy wire, distill
//! eavesdropped transcripts into LPN instances, and sweep the folded
//! noise formula against Monte-Carlo estimates.

mod cmd;
mod fail;
mod fileio;
mod manifest;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "mixcode", version, about = "Homophonic coding experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a mixing code for the given parameters and write its matrices.
    Build(cmd::build::Args),
    /// Evaluate the construction criteria for an existing code.
    Validate(cmd::validate::Args),
    /// Run a keyed ARQ session over a binary symmetric channel.
    Simulate(cmd::simulate::Args),
    /// Distill an eavesdropped transcript into an LPN instance.
    Attack(cmd::attack::Args),
    /// Tabulate formula vs Monte-Carlo folded noise over a parameter grid.
    NoiseCurve(cmd::noise_curve::Args),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd::build::run(args),
        Command::Validate(args) => cmd::validate::run(args),
        Command::Simulate(args) => cmd::simulate::run(args),
        Command::Attack(args) => cmd::attack::run(args),
        Command::NoiseCurve(args) => cmd::noise_curve::run(args),
    };
    if let Err(failure) = result {
        eprintln!("error: {failure}");
        std::process::exit(failure.exit_code());
    }
}
