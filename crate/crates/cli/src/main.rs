use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ris_secrecy_cli::{run_experiment, ConfigBuilder, ExperimentKind, RunError};

/// Secrecy-performance experiments for a RIS-aided downlink with randomly
/// placed aerial eavesdroppers. Each experiment writes CSV curves plus a
/// manifest.txt that reproduces the run byte-for-byte via --config.
#[derive(Parser)]
#[command(name = "ris-secrecy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key=value config file (e.g. an emitted manifest.txt).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed for the Monte-Carlo trials.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo trials per grid point (the distribution figure uses 10x
    /// this for the legitimate-user curve).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Output directory for CSV files and the manifest.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Override any config key, repeatable (e.g. --set params.n_ris=256).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// SNR distribution curves of the legitimate user and the strongest
    /// eavesdropper, single- and multi-antenna modes.
    Fig1,
    /// Ergodic secrecy capacity versus transmit SNR, one curve per RIS size.
    Fig2,
    /// Ergodic secrecy capacity versus BS antenna count.
    Fig3,
    /// Ergodic secrecy capacity versus eavesdropper dispersal radius at
    /// fixed expected population, one curve per RIS size.
    Fig4,
    /// Ad-hoc capacity sweep over one parameter (sweep.variable/values).
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = match cli.command {
        Command::Fig1 => ExperimentKind::Fig1,
        Command::Fig2 => ExperimentKind::Fig2,
        Command::Fig3 => ExperimentKind::Fig3,
        Command::Fig4 => ExperimentKind::Fig4,
        Command::Sweep => ExperimentKind::Sweep,
    };

    let mut builder = ConfigBuilder::new(kind);
    if let Some(path) = &cli.config {
        if let Err(e) = builder.load_file(path) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(seed) = cli.seed {
        builder.set("seed", &seed.to_string());
    }
    if let Some(trials) = cli.trials {
        builder.set("n_trials", &trials.to_string());
    }
    if let Some(out) = &cli.out {
        builder.set("output_dir", &out.display().to_string());
    }
    for assignment in &cli.set {
        match assignment.split_once('=') {
            Some((k, v)) => builder.set(k.trim(), v.trim()),
            None => {
                eprintln!("error: --set expects KEY=VALUE, got {assignment:?}");
                return ExitCode::from(2);
            }
        }
    }

    let cfg = match builder.validate() {
        Ok(cfg) => cfg,
        Err(errors) => {
            eprintln!("invalid configuration:");
            for e in errors {
                eprintln!("  {e}");
            }
            return ExitCode::from(2);
        }
    };

    match run_experiment(&cfg) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Config(errors)) => {
            eprintln!("invalid configuration:");
            for e in errors {
                eprintln!("  {e}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
