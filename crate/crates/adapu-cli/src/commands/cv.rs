use std::path::PathBuf;

use adapu::{cross_validate_beta, SplitSpec, TrainConfig, DEFAULT_BETA_GRID};
use clap::Args;
use serde_json::json;

use crate::data::{IntervalArg, ModeArg, PuInputArgs, StrategyArg};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub input: PuInputArgs,
    /// Comma-separated shrinkage candidates; defaults to the standard grid.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::PerGroup)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = IntervalArg::Widened)]
    pub threshold_interval: IntervalArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for cv.csv and manifest.json.
    #[arg(long, default_value = "adapu_cv_out")]
    pub out: PathBuf,
}

fn parse_grid(raw: &Option<String>) -> Result<Vec<f64>, CliError> {
    match raw {
        None => Ok(DEFAULT_BETA_GRID.to_vec()),
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad grid value {tok:?}")))
            })
            .collect(),
    }
}

pub fn run(args: CvArgs) -> Result<(), CliError> {
    let grid = parse_grid(&args.grid)?;
    let base = TrainConfig {
        rounds: args.rounds,
        thresholds_per_feature: args.k,
        normalization: args.mode.into(),
        strategy: args.strategy.into(),
        interval: args.threshold_interval.into(),
        seed: args.seed,
        ..TrainConfig::default()
    };
    base.validate()?;
    if args.folds < 2 {
        return Err(CliError::Usage(format!(
            "--folds must be at least 2, got {}",
            args.folds
        )));
    }
    let (pu, fingerprints) = args.input.load(args.seed)?;

    let manifest = RunManifest::new(
        json!({
            "command": "cv",
            "config": &base,
            "grid": &grid,
            "folds": args.folds,
            "prior": args.input.prior,
        }),
        fingerprints,
        vec![args.seed],
        vec!["cv.csv".into()],
    );
    manifest.write(&args.out)?;

    let spec = SplitSpec {
        fold_count: args.folds,
        seed: args.seed,
    };
    let outcome = cross_validate_beta(&pu, &grid, &base, spec)?;

    let csv_path = args.out.join("cv.csv");
    let mut w = csv::Writer::from_path(&csv_path)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    w.write_record(["beta", "mean_risk", "fold_risks"])
        .map_err(CliError::runtime)?;
    for row in &outcome.rows {
        let folds: Vec<String> = row.fold_risks.iter().map(|r| format!("{r}")).collect();
        w.write_record([
            format!("{}", row.beta),
            format!("{}", row.mean_risk),
            folds.join(";"),
        ])
        .map_err(CliError::runtime)?;
    }
    w.flush().map_err(CliError::runtime)?;

    println!("{:>10}  {:>12}", "beta", "mean risk");
    for row in &outcome.rows {
        let marker = if row.beta == outcome.best_beta {
            " <- best"
        } else {
            ""
        };
        println!("{:>10}  {:>12.6}{marker}", row.beta, row.mean_risk);
    }
    println!("selected beta = {}", outcome.best_beta);
    Ok(())
}
