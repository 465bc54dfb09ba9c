use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use edumine::config::load_config;
use edumine::error::Result;
use edumine::pipeline::{
    run_clean, run_cluster, run_discretize, run_evaluate, run_predict, run_report, run_synth,
    run_train, CommandOutput,
};

#[derive(Parser)]
#[command(
    name = "edumine",
    version,
    about = "Student cohort data-mining toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic raw cohort CSV
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Two-stage missing-value cleaning with an audited report
    Clean {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replace banded numeric features with categorical band labels
    Discretize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Partition records into k clusters over the chosen numeric features
    Cluster {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        features: Vec<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Fit a naive Bayes model predicting the label column
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        features: Vec<String>,
        #[arg(long)]
        label: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Classify records with a saved model
    Predict {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Confusion matrix, percentage table, and accuracy from predictions
    Evaluate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-student rankings plus per-year cohort and GPA summaries
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn run(command: Command) -> Result<CommandOutput> {
    match command {
        Command::Synth { config, out, seed } => {
            let (cfg, fingerprint) = load_config(config.as_deref())?;
            run_synth(&cfg, &fingerprint, &out, seed)
        }
        Command::Clean { input, out } => run_clean(&input, &out, "default"),
        Command::Discretize { input, out, config } => {
            let (cfg, fingerprint) = load_config(config.as_deref())?;
            run_discretize(&input, &cfg, &fingerprint, &out)
        }
        Command::Cluster {
            input,
            out,
            features,
            k,
            seed,
            config,
        } => {
            let (cfg, fingerprint) = load_config(config.as_deref())?;
            run_cluster(&input, &features, k, seed, &cfg, &fingerprint, &out)
        }
        Command::Train {
            input,
            out,
            features,
            label,
            config,
        } => {
            let (cfg, fingerprint) = load_config(config.as_deref())?;
            run_train(&input, &features, &label, &cfg, &fingerprint, &out)
        }
        Command::Predict { input, model, out } => run_predict(&input, &model, "default", &out),
        Command::Evaluate { input, out } => run_evaluate(&input, "default", &out),
        Command::Report { input, out, config } => {
            let (cfg, fingerprint) = load_config(config.as_deref())?;
            run_report(&input, &cfg, &fingerprint, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            if !output.summary.is_empty() {
                println!("{}", output.summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
