mod bench;
mod commands;
mod data;
mod manifest;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{cv, evaluate, plot, split, train};

/// Boosting for positive-unlabeled data: training, cross-validation,
/// evaluation, and benchmark reproduction.
#[derive(Parser)]
#[command(name = "adapu", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a PU boosting ensemble and write model, round log, and manifest.
    Train(train::TrainArgs),
    /// Cross-validate the shrinkage constant on PU data.
    Cv(cv::CvArgs),
    /// Evaluate a saved model on a labeled dataset.
    Evaluate(evaluate::EvaluateArgs),
    /// Shuffle a labeled dataset and split it into train and test files.
    Split(split::SplitArgs),
    /// Run a declarative benchmark grid and emit aggregate tables and curves.
    Benchmark(bench::BenchmarkArgs),
    /// Turn a curves CSV into a gnuplot script or a vega-lite spec.
    Plot(plot::PlotArgs),
}

/// Command failures, split by exit code: usage/validation problems exit 2,
/// runtime failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<adapu::Error> for CliError {
    fn from(e: adapu::Error) -> Self {
        match e {
            adapu::Error::InvalidConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl CliError {
    pub fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => train::run(args),
        Command::Cv(args) => cv::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Split(args) => split::run(args),
        Command::Benchmark(args) => bench::run(args),
        Command::Plot(args) => plot::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
