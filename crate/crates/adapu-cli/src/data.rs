//! Shared dataset-loading flags and helpers.

use std::path::{Path, PathBuf};

use adapu::{
    load_csv, load_features_csv, load_sparse_text, make_pu, ColumnSelector, LabeledDataset,
    Normalization, PUDataset, ThresholdInterval, ThresholdStrategy,
};
use clap::{Args, ValueEnum};

use crate::manifest::{fingerprint, DatasetFingerprint};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PerGroup,
    OverAll,
}

impl From<ModeArg> for Normalization {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PerGroup => Normalization::PerGroup,
            ModeArg::OverAll => Normalization::OverAll,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Random,
    Even,
}

impl From<StrategyArg> for ThresholdStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => ThresholdStrategy::Random,
            StrategyArg::Even => ThresholdStrategy::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntervalArg {
    Widened,
    Pseudocode,
}

impl From<IntervalArg> for ThresholdInterval {
    fn from(i: IntervalArg) -> Self {
        match i {
            IntervalArg::Widened => ThresholdInterval::Widened,
            IntervalArg::Pseudocode => ThresholdInterval::Pseudocode,
        }
    }
}

/// Label-column options for labeled CSV files.
#[derive(Debug, Clone, Args)]
pub struct LabelArgs {
    /// Label column, by header name or zero-based index.
    #[arg(long, default_value = "label")]
    pub label_column: String,
    /// Raw label value mapped to +1; every other value maps to -1.
    #[arg(long, default_value = "1")]
    pub positive_label: String,
    /// Treat the first row as data, not a header.
    #[arg(long)]
    pub no_header: bool,
    /// Parse the file as sparse `label idx:val ...` text with this dimension
    /// instead of CSV.
    #[arg(long)]
    pub sparse_dimension: Option<usize>,
}

impl LabelArgs {
    pub fn load(&self, path: &Path) -> Result<LabeledDataset, CliError> {
        let data = match self.sparse_dimension {
            Some(dim) => load_sparse_text(path, dim)?,
            None => load_csv(
                path,
                &ColumnSelector::parse(&self.label_column),
                &self.positive_label,
                !self.no_header,
            )?,
        };
        Ok(data)
    }
}

/// PU input selection: either a labeled file to sample from, or a pair of
/// feature-only files.
#[derive(Debug, Clone, Args)]
pub struct PuInputArgs {
    /// Labeled dataset to derive PU data from (requires --make-pu).
    #[arg(long)]
    pub labeled: Option<PathBuf>,
    /// Sample n-p positives and use every row as unlabeled.
    #[arg(long, requires = "labeled")]
    pub make_pu: bool,
    /// Number of positives to sample with --make-pu.
    #[arg(long = "n-p")]
    pub n_positive: Option<usize>,
    /// Feature-only CSV of positive examples.
    #[arg(long, conflicts_with = "labeled")]
    pub pu_positives: Option<PathBuf>,
    /// Feature-only CSV of unlabeled examples.
    #[arg(long, conflicts_with = "labeled")]
    pub pu_unlabeled: Option<PathBuf>,
    /// Known positive-class prior, strictly inside (0,1).
    #[arg(long)]
    pub prior: f64,
    #[command(flatten)]
    pub label: LabelArgs,
}

impl PuInputArgs {
    pub fn load(&self, seed: u64) -> Result<(PUDataset, Vec<DatasetFingerprint>), CliError> {
        match (&self.labeled, &self.pu_positives, &self.pu_unlabeled) {
            (Some(labeled), None, None) => {
                if !self.make_pu {
                    return Err(CliError::Usage(
                        "--labeled input requires --make-pu and --n-p".into(),
                    ));
                }
                let n_p = self.n_positive.ok_or_else(|| {
                    CliError::Usage("--make-pu requires --n-p".into())
                })?;
                let data = self.label.load(labeled)?;
                let pu = make_pu(&data, n_p, self.prior, seed)?;
                Ok((pu, vec![fingerprint(labeled)?]))
            }
            (None, Some(pos_path), Some(unl_path)) => {
                let (positives, _) = load_features_csv(pos_path, !self.label.no_header)?;
                let (unlabeled, _) = load_features_csv(unl_path, !self.label.no_header)?;
                let pu = PUDataset::new(positives, unlabeled, self.prior)?;
                Ok((pu, vec![fingerprint(pos_path)?, fingerprint(unl_path)?]))
            }
            _ => Err(CliError::Usage(
                "provide either --labeled with --make-pu/--n-p, or both --pu-positives and --pu-unlabeled"
                    .into(),
            )),
        }
    }
}
