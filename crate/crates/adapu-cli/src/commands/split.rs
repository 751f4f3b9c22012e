use std::path::PathBuf;

use adapu::{save_csv, split_train_test};
use clap::Args;

use crate::data::LabelArgs;
use crate::CliError;

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Labeled dataset to split.
    #[arg(long)]
    pub labeled: PathBuf,
    /// Rows in the training part; the rest become the test part.
    #[arg(long)]
    pub train_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_train: PathBuf,
    #[arg(long)]
    pub out_test: PathBuf,
    #[command(flatten)]
    pub label: LabelArgs,
}

pub fn run(args: SplitArgs) -> Result<(), CliError> {
    let data = args.label.load(&args.labeled)?;
    let (train, test) = split_train_test(&data, args.train_size, args.seed)?;
    save_csv(&train, &args.out_train)?;
    save_csv(&test, &args.out_test)?;
    println!(
        "wrote {} train rows to {} and {} test rows to {}",
        train.n_examples(),
        args.out_train.display(),
        test.n_examples(),
        args.out_test.display()
    );
    Ok(())
}
