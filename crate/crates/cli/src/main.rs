//! Command-line front end: classify declaratively specified reproducing kernels and
//! run numerical probes against the verdicts, emitting JSON reports and CSV curves.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kernelscope_cli::runner::{self, Invocation, Mode};

#[derive(Parser)]
#[command(
    name = "kernelscope",
    version,
    about = "Classify reproducing kernels and verify the verdicts numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the configured kernel and write the verdict report.
    Classify(RunArgs),
    /// Run the probe actions declared in the config.
    Probe(RunArgs),
    /// Run every action declared in the config, classification included.
    Report(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to a TOML run configuration.
    config: PathBuf,
    /// Output directory for reports (default: $KERNELSCOPE_OUT, then the working
    /// directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the RNG seed declared in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the evaluation grid size of every configured probe.
    #[arg(long)]
    grid: Option<usize>,
    /// Suppress the stdout summary.
    #[arg(long)]
    quiet: bool,
}

impl RunArgs {
    fn into_invocation(self, mode: Mode) -> Invocation {
        Invocation {
            mode,
            config_path: self.config,
            out: self.out,
            seed: self.seed,
            grid: self.grid,
            quiet: self.quiet,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = match cli.command {
        Command::Classify(args) => args.into_invocation(Mode::Classify),
        Command::Probe(args) => args.into_invocation(Mode::Probe),
        Command::Report(args) => args.into_invocation(Mode::Report),
    };
    match runner::execute(&invocation) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
