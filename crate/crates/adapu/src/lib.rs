//! Boosted decision stumps trained directly on positive-unlabeled data.
//!
//! The training loop greedily minimizes an exponential loss estimated from
//! positives and unlabeled examples alone. The PU sample is recast as one
//! weighted, fully labeled set in which each positive also appears as a
//! negatively weighted copy with target -1; candidate stumps are screened by
//! non-negativity and better-than-random constraints before the usual argmin
//! selection. A classical fully supervised boosting baseline, PU/PN sampling
//! protocols, cross-validation for the shrinkage constant, and evaluation
//! utilities round out the crate; the `adapu` binary in the companion CLI
//! crate wires them together.

pub mod booster;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod risk;
pub mod seeds;
pub mod stump;

pub use booster::{
    cross_validate_beta, train_adaboost, train_adapu, CvOutcome, CvRow, Ensemble, EnsembleMember,
    Proposal, RoundLog, TrainConfig, Trainer, DEFAULT_BETA_GRID,
};
pub use dataset::{
    kfold_indices, load_csv, load_features_csv, load_sparse_text, make_pn_counterpart, make_pu,
    save_csv, split_train_test, ColumnSelector, LabeledDataset, PUDataset, SplitSpec,
};
pub use error::{Error, Result};
pub use eval::{
    aggregate_trials, evaluate_labeled, evaluate_pu_train, feature_usage, AggregateReport,
    EvalReport, Evaluation, FeatureUsage,
};
pub use risk::{build_view, exp_loss, zero_one_pu_risk, ErrorReport, SignedWeightedView};
pub use stump::{
    evenly_spaced_thresholds, generate_stump, sample_thresholds, DecisionStump, Normalization,
    Orientation, SearchConfig, StumpSearchResult, StumpSearcher, ThresholdInterval,
    ThresholdStrategy,
};
