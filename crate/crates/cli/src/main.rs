use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use seti_onoff_cli::{execute, Invocation, Verb};

#[derive(Parser)]
#[command(name = "seti-onoff", version, about = "ON/OFF detector laws, simulations and ROC analysis")]
struct Cli {
    #[command(subcommand)]
    verb: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ROC curves and summary table for every sweep point.
    Roc(Common),
    /// As `roc`, plus Monte Carlo histograms and KS distances against the laws.
    McValidate(Common),
    /// Spectrogram of a synthetic chirp in noise.
    Spectrogram(Common),
    /// F-ratio vs ON−OFF AUC across RFI gains.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `[experiment].seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `[experiment].output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `[experiment].trials`.
    #[arg(long)]
    trials: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, c) = match cli.verb {
        Command::Roc(c) => (Verb::Roc, c),
        Command::McValidate(c) => (Verb::McValidate, c),
        Command::Spectrogram(c) => (Verb::Spectrogram, c),
        Command::Compare(c) => (Verb::Compare, c),
    };
    let inv = Invocation {
        verb,
        config: c.config,
        seed: c.seed,
        out: c.out,
        trials: c.trials,
    };
    match execute(&inv) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            println!("wrote {} files to {}", report.files.len(), report.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
