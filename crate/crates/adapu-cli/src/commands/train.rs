use std::path::PathBuf;

use adapu::booster::write_round_logs_csv;
use adapu::{train_adapu, zero_one_pu_risk, TrainConfig};
use clap::Args;
use serde_json::json;

use crate::data::{IntervalArg, ModeArg, PuInputArgs, StrategyArg};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: PuInputArgs,
    /// Shrinkage constant in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Boosting rounds.
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    /// Candidate thresholds per feature per round.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Error normalization for selection.
    #[arg(long, value_enum, default_value_t = ModeArg::PerGroup)]
    pub mode: ModeArg,
    /// Threshold placement.
    #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
    pub strategy: StrategyArg,
    /// Threshold sampling interval variant.
    #[arg(long, value_enum, default_value_t = IntervalArg::Widened)]
    pub threshold_interval: IntervalArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep boosting even when the total weight goes nonpositive.
    #[arg(long)]
    pub no_early_stop: bool,
    /// Disable the per-round weight rescale.
    #[arg(long)]
    pub no_rescale: bool,
    /// Output directory for model.json, rounds.csv and manifest.json.
    #[arg(long, default_value = "adapu_out")]
    pub out: PathBuf,
}

pub fn build_config(args: &TrainArgs) -> Result<TrainConfig, CliError> {
    let config = TrainConfig {
        rounds: args.rounds,
        shrinkage: args.beta,
        thresholds_per_feature: args.k,
        normalization: args.mode.into(),
        strategy: args.strategy.into(),
        interval: args.threshold_interval.into(),
        seed: args.seed,
        stop_on_nonpositive_total: !args.no_early_stop,
        rescale_weights: !args.no_rescale,
    };
    config.validate()?;
    Ok(config)
}

pub fn run(args: TrainArgs) -> Result<(), CliError> {
    let config = build_config(&args)?;
    if !(args.input.prior > 0.0 && args.input.prior < 1.0) {
        return Err(CliError::Usage(format!(
            "--prior must lie strictly inside (0,1), got {}",
            args.input.prior
        )));
    }
    let (pu, fingerprints) = args.input.load(args.seed)?;

    let manifest = RunManifest::new(
        json!({
            "command": "train",
            "config": &config,
            "prior": args.input.prior,
            "n_positive": pu.n_positive(),
            "n_unlabeled": pu.n_unlabeled(),
        }),
        fingerprints,
        vec![args.seed],
        vec!["model.json".into(), "rounds.csv".into()],
    );
    manifest.write(&args.out)?;

    let (ensemble, logs) = train_adapu(&pu, &config)?;
    ensemble.save_json(&args.out.join("model.json"))?;
    write_round_logs_csv(&args.out.join("rounds.csv"), &logs)?;

    let abstained = logs.iter().filter(|l| l.abstained).count();
    let train_risk = zero_one_pu_risk(&pu, &ensemble, false);
    let train_risk_clamped = zero_one_pu_risk(&pu, &ensemble, true);
    println!(
        "trained {} members over {} rounds ({abstained} abstained)",
        ensemble.len(),
        ensemble.rounds_run
    );
    println!("train zero-one PU risk: {train_risk:.6} (clamped {train_risk_clamped:.6})");
    println!("model: {}", args.out.join("model.json").display());
    Ok(())
}
