use std::path::PathBuf;

use adapu::eval::{curve_rows, write_curves_csv};
use adapu::{evaluate_labeled, Ensemble};
use clap::Args;

use crate::data::LabelArgs;
use crate::CliError;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Model JSON produced by `adapu train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Labeled dataset to evaluate on.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub label: LabelArgs,
    /// Also write per-prefix metric curves to this CSV.
    #[arg(long)]
    pub sweep: Option<PathBuf>,
}

pub fn run(args: EvaluateArgs) -> Result<(), CliError> {
    let ensemble = Ensemble::load_json(&args.model)?;
    let data = args.label.load(&args.data)?;
    let evaluation = evaluate_labeled(&ensemble, &data, args.sweep.is_some())?;
    let report = evaluation.report;

    println!("members: {}", ensemble.len());
    println!("accuracy: {:.6}", report.accuracy.unwrap_or(f64::NAN));
    println!(
        "zero_one_loss: {:.6}",
        report.zero_one_loss.unwrap_or(f64::NAN)
    );
    if let Some(rate) = report.positives_as_positive_rate {
        println!("positives_as_positive_rate: {rate:.6}");
    }
    if let Some(rate) = report.unlabeled_as_negative_rate {
        println!("negatives_as_negative_rate: {rate:.6}");
    }

    if let Some(sweep_path) = &args.sweep {
        let dataset = args
            .data
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "data".into());
        let curve = evaluation.curve.expect("sweep requested");
        let rows = curve_rows(&curve, 0, &dataset, "model");
        write_curves_csv(sweep_path, &rows)?;
        println!("curves: {}", sweep_path.display());
    }
    Ok(())
}
