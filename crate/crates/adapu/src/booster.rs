//! Boosting loops: the PU trainer, the fully supervised baseline, the
//! ensemble model with JSON persistence, and cross-validation of the
//! shrinkage constant.

use std::path::Path;
use std::time::Instant;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{kfold_indices, LabeledDataset, PUDataset, SplitSpec};
use crate::error::{Error, Result};
use crate::risk::{build_view, SignedWeightedView};
use crate::seeds;
use crate::stump::{
    DecisionStump, Normalization, Orientation, SearchConfig, StumpSearchResult, StumpSearcher,
    ThresholdInterval, ThresholdStrategy,
};

const MODEL_FORMAT_VERSION: u32 = 1;

/// Training settings. `shrinkage` scales every vote weight before it joins
/// the ensemble and the matching weight update.
#[derive(Debug, Clone, Serialize)]
pub struct TrainConfig {
    pub rounds: usize,
    pub shrinkage: f64,
    pub thresholds_per_feature: usize,
    pub normalization: Normalization,
    pub strategy: ThresholdStrategy,
    pub interval: ThresholdInterval,
    pub seed: u64,
    pub stop_on_nonpositive_total: bool,
    pub rescale_weights: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            rounds: 100,
            shrinkage: 1.0,
            thresholds_per_feature: 10,
            normalization: Normalization::PerGroup,
            strategy: ThresholdStrategy::Random,
            interval: ThresholdInterval::Widened,
            seed: 0,
            stop_on_nonpositive_total: true,
            rescale_weights: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds < 1 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if self.thresholds_per_feature < 1 {
            return Err(Error::InvalidConfig(
                "thresholds per feature must be at least 1".into(),
            ));
        }
        if !(self.shrinkage > 0.0 && self.shrinkage <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "shrinkage must lie in (0, 1], got {}",
                self.shrinkage
            )));
        }
        Ok(())
    }

    fn search_config(&self) -> SearchConfig {
        SearchConfig {
            thresholds_per_feature: self.thresholds_per_feature,
            normalization: self.normalization,
            strategy: self.strategy,
            interval: self.interval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleMember {
    pub weight: f64,
    pub stump: DecisionStump,
}

/// Weighted vote of decision stumps. The stored weight is the shrinkage
/// times the round's vote weight, so a saved model is self-contained.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub prior: f64,
    pub normalization: Normalization,
    pub shrinkage: f64,
    pub thresholds_per_feature: usize,
    pub seed: u64,
    /// Rounds the trainer actually started (abstained rounds included).
    pub rounds_run: usize,
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    pub fn empty(prior: f64) -> Self {
        Self {
            prior,
            normalization: Normalization::PerGroup,
            shrinkage: 1.0,
            thresholds_per_feature: 10,
            seed: 0,
            rounds_run: 0,
            members: Vec::new(),
        }
    }

    pub fn push(&mut self, weight: f64, stump: DecisionStump) {
        debug_assert!(weight > 0.0, "member weights must be positive");
        self.members.push(EnsembleMember { weight, stump });
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Smallest feature count a compatible instance matrix must have.
    pub fn required_features(&self) -> usize {
        self.members
            .iter()
            .map(|m| m.stump.feature + 1)
            .max()
            .unwrap_or(0)
    }

    /// Raw margin: sum of weight * h(x) over members, in member order.
    pub fn score_row(&self, row: ArrayView1<'_, f64>) -> f64 {
        let mut margin = 0.0;
        for m in &self.members {
            margin += m.weight * f64::from(m.stump.predict_row(row));
        }
        margin
    }

    /// Sign of the margin, with sign(0) = +1.
    pub fn predict_row(&self, row: ArrayView1<'_, f64>) -> i8 {
        if self.score_row(row) >= 0.0 {
            1
        } else {
            -1
        }
    }

    fn check_dim(&self, instances: &ArrayView2<'_, f64>) -> Result<()> {
        if instances.ncols() < self.required_features() {
            return Err(Error::InvalidData(format!(
                "model uses feature index {} but instances have only {} features",
                self.required_features() - 1,
                instances.ncols()
            )));
        }
        Ok(())
    }

    pub fn score(&self, instances: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        self.check_dim(&instances)?;
        Ok(instances
            .rows()
            .into_iter()
            .map(|r| self.score_row(r))
            .collect())
    }

    pub fn predict(&self, instances: ArrayView2<'_, f64>) -> Result<Vec<i8>> {
        self.check_dim(&instances)?;
        Ok(instances
            .rows()
            .into_iter()
            .map(|r| self.predict_row(r))
            .collect())
    }

    /// Deterministic JSON document for the model file.
    pub fn to_json_string(&self) -> String {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            prior: self.prior,
            mode: self.normalization,
            beta: self.shrinkage,
            k: self.thresholds_per_feature,
            seed: self.seed,
            members: self
                .members
                .iter()
                .map(|m| ModelMember {
                    weight: m.weight,
                    feature: m.stump.feature,
                    threshold: m.stump.threshold,
                    orientation: m.stump.orientation,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut deserializer = serde_json::Deserializer::from_str(&text);
        let file: ModelFile = serde_path_to_error::deserialize(&mut deserializer)
            .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported format_version {} (expected {MODEL_FORMAT_VERSION})",
                file.format_version
            )));
        }
        let mut ensemble = Ensemble {
            prior: file.prior,
            normalization: file.mode,
            shrinkage: file.beta,
            thresholds_per_feature: file.k,
            seed: file.seed,
            rounds_run: file.members.len(),
            members: Vec::with_capacity(file.members.len()),
        };
        for (i, m) in file.members.into_iter().enumerate() {
            if m.weight <= 0.0 || !m.weight.is_finite() {
                return Err(Error::Model(format!(
                    "member {i}: weight must be a positive finite number, got {}",
                    m.weight
                )));
            }
            if !m.threshold.is_finite() {
                return Err(Error::Model(format!(
                    "member {i}: threshold must be finite, got {}",
                    m.threshold
                )));
            }
            ensemble.members.push(EnsembleMember {
                weight: m.weight,
                stump: DecisionStump::new(m.feature, m.threshold, m.orientation),
            });
        }
        Ok(ensemble)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    prior: f64,
    mode: Normalization,
    beta: f64,
    #[serde(rename = "K")]
    k: usize,
    seed: u64,
    members: Vec<ModelMember>,
}

#[derive(Serialize, Deserialize)]
struct ModelMember {
    weight: f64,
    feature: usize,
    threshold: f64,
    orientation: Orientation,
}

/// Per-round training record.
#[derive(Debug, Clone)]
pub struct RoundLog {
    pub round: usize,
    pub stump: Option<DecisionStump>,
    /// Unshrunk vote weight of the round (0 when abstained).
    pub alpha: f64,
    /// Selection error the vote weight was derived from.
    pub selection_error: f64,
    /// Misclassified weight of the chosen stump, in the round's weight scale.
    pub misclassified_weight: f64,
    /// Total weight at selection time, in the round's weight scale.
    pub total_weight: f64,
    /// Cumulative rescale factor applied to the weights before this round;
    /// divide the logged weights by it to recover the unrescaled values.
    pub weight_scale: f64,
    pub abstained: bool,
    /// PU zero-one risk estimate of the ensemble after this round
    /// (plain zero-one error for the fully supervised baseline).
    pub train_risk: f64,
    pub wall_time_ms: f64,
    pub error_flag: Option<String>,
}

/// Round-log CSV, one row per round.
pub fn write_round_logs_csv(path: &Path, logs: &[RoundLog]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::InvalidData(format!("cannot write {}: {e}", path.display())))?;
    w.write_record([
        "round",
        "feature",
        "threshold",
        "orientation",
        "alpha",
        "selection_error",
        "misclassified_weight",
        "total_weight",
        "weight_scale",
        "abstained",
        "train_risk",
        "wall_time_ms",
        "error",
    ])
    .map_err(|e| Error::InvalidData(e.to_string()))?;
    for log in logs {
        let (feature, threshold, orientation) = match &log.stump {
            Some(s) => (
                s.feature.to_string(),
                format!("{}", s.threshold),
                match s.orientation {
                    Orientation::LeftPositive => "left_positive".to_string(),
                    Orientation::RightPositive => "right_positive".to_string(),
                },
            ),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            log.round.to_string(),
            feature,
            threshold,
            orientation,
            format!("{}", log.alpha),
            format!("{}", log.selection_error),
            format!("{}", log.misclassified_weight),
            format!("{}", log.total_weight),
            format!("{}", log.weight_scale),
            log.abstained.to_string(),
            format!("{}", log.train_risk),
            format!("{}", log.wall_time_ms),
            log.error_flag.clone().unwrap_or_default(),
        ])
        .map_err(|e| Error::InvalidData(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::InvalidData(e.to_string()))?;
    Ok(())
}

/// What `Trainer::propose` hands back.
pub enum Proposal {
    /// Budget exhausted, early stop, or a previous abort.
    Finished,
    /// Candidate search result for the next round, not yet applied.
    Round(StumpSearchResult),
}

/// Incremental boosting driver.
///
/// `propose` runs the candidate search for the next round without touching
/// the weights; `commit` applies a proposal (append member, update weights,
/// rescale, log). `step`/`run` chain the two. A view with a mirror group
/// trains under the PU rules; a plain labeled view trains as the classical
/// baseline (uniform weights, per-round normalization, no non-negativity
/// constraint).
pub struct Trainer<'a> {
    view: SignedWeightedView<'a>,
    searcher: StumpSearcher,
    config: TrainConfig,
    rng: ChaCha8Rng,
    ensemble: Ensemble,
    logs: Vec<RoundLog>,
    pos_margins: Vec<f64>,
    unl_margins: Vec<f64>,
    cumulative_log_scale: f64,
    rounds_started: usize,
    finished: bool,
    stopped_nonpositive: bool,
    round_start: Option<Instant>,
}

impl<'a> Trainer<'a> {
    pub fn new(view: SignedWeightedView<'a>, config: TrainConfig) -> Result<Self> {
        config.validate()?;
        let searcher = StumpSearcher::new(&view);
        let rng = seeds::rng_for(config.seed, seeds::DOMAIN_THRESHOLDS, 0);
        let ensemble = Ensemble {
            prior: view.prior(),
            normalization: config.normalization,
            shrinkage: config.shrinkage,
            thresholds_per_feature: config.thresholds_per_feature,
            seed: config.seed,
            rounds_run: 0,
            members: Vec::new(),
        };
        let pos_margins = vec![0.0; view.n_positive()];
        let unl_margins = vec![0.0; view.n_unlabeled()];
        Ok(Self {
            view,
            searcher,
            config,
            rng,
            ensemble,
            logs: Vec::new(),
            pos_margins,
            unl_margins,
            cumulative_log_scale: 0.0,
            rounds_started: 0,
            finished: false,
            stopped_nonpositive: false,
            round_start: None,
        })
    }

    pub fn view(&self) -> &SignedWeightedView<'a> {
        &self.view
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn logs(&self) -> &[RoundLog] {
        &self.logs
    }

    /// ln of the cumulative rescale factor currently applied to the weights.
    pub fn cumulative_log_scale(&self) -> f64 {
        self.cumulative_log_scale
    }

    pub fn stopped_on_nonpositive_total(&self) -> bool {
        self.stopped_nonpositive
    }

    pub fn propose(&mut self) -> Result<Proposal> {
        if self.finished || self.rounds_started >= self.config.rounds {
            self.finished = true;
            return Ok(Proposal::Finished);
        }
        if self.view.has_mirror() && self.config.stop_on_nonpositive_total {
            let total = self.view.total_weight();
            if total <= 0.0 {
                log::info!(
                    "stopping after round {}: total weight {total} is not positive",
                    self.rounds_started
                );
                self.finished = true;
                self.stopped_nonpositive = true;
                return Ok(Proposal::Finished);
            }
        }
        self.round_start = Some(Instant::now());
        match self
            .searcher
            .search(&self.view, &self.config.search_config(), &mut self.rng)
        {
            Ok(result) => Ok(Proposal::Round(result)),
            Err(Error::DegenerateTotalWeight) => {
                // over-all selection with the early stop disabled: abort,
                // leaving a flagged log row behind
                self.abort_round("degenerate total weight");
                Ok(Proposal::Finished)
            }
            Err(e) => Err(e),
        }
    }

    fn abort_round(&mut self, reason: &str) {
        self.rounds_started += 1;
        let wall = self
            .round_start
            .take()
            .map(|t| t.elapsed().as_secs_f64() * 1e3)
            .unwrap_or(0.0);
        self.logs.push(RoundLog {
            round: self.rounds_started,
            stump: None,
            alpha: 0.0,
            selection_error: 0.5,
            misclassified_weight: f64::INFINITY,
            total_weight: self.view.total_weight(),
            weight_scale: self.cumulative_log_scale.exp(),
            abstained: true,
            train_risk: self.train_risk_from_margins(),
            wall_time_ms: wall,
            error_flag: Some(reason.to_string()),
        });
        self.finished = true;
    }

    pub fn commit(&mut self, result: StumpSearchResult) -> Result<()> {
        let round = self.rounds_started + 1;
        self.rounds_started = round;
        let total_at_selection = self.view.total_weight();
        let weight_scale = self.cumulative_log_scale.exp();
        let mut error_flag = None;

        match result.stump {
            None => {
                log::warn!("round {round}: no feasible candidate stump, abstaining");
            }
            Some(stump) => {
                let effective = self.config.shrinkage * result.alpha;
                self.ensemble.push(effective, stump);
                let n_p = self.view.n_positive();
                for (i, margin) in self.pos_margins.iter_mut().enumerate() {
                    let h = stump.predict_value(self.view.instance_value(i, stump.feature));
                    *margin += effective * f64::from(h);
                }
                for (j, margin) in self.unl_margins.iter_mut().enumerate() {
                    let h = stump.predict_value(self.view.instance_value(n_p + j, stump.feature));
                    *margin += effective * f64::from(h);
                }
                match self.view.update_weights(&stump, effective) {
                    Ok(_) => {
                        // plain labeled views always renormalize (the
                        // classical recursion); PU views rescale when enabled
                        let rescale = if self.view.has_mirror() {
                            self.config.rescale_weights
                        } else {
                            true
                        };
                        if rescale {
                            let abs_sum = self.view.abs_weight_sum();
                            if abs_sum.is_finite() && abs_sum > 0.0 {
                                self.view.scale_weights(1.0 / abs_sum);
                                self.cumulative_log_scale -= abs_sum.ln();
                            }
                        }
                    }
                    Err(Error::WeightOverflow) => {
                        log::error!("round {round}: weight overflow, aborting training");
                        error_flag = Some("weight overflow".to_string());
                        self.finished = true;
                    }
                    Err(e) => return Err(e),
                }
            }
        }

        let wall = self
            .round_start
            .take()
            .map(|t| t.elapsed().as_secs_f64() * 1e3)
            .unwrap_or(0.0);
        self.logs.push(RoundLog {
            round,
            stump: result.stump,
            alpha: if result.stump.is_some() {
                result.alpha
            } else {
                0.0
            },
            selection_error: result.error,
            misclassified_weight: result.misclassified_weight,
            total_weight: total_at_selection,
            weight_scale,
            abstained: result.stump.is_none(),
            train_risk: self.train_risk_from_margins(),
            wall_time_ms: wall,
            error_flag,
        });
        Ok(())
    }

    /// Run one round; false when training is finished.
    pub fn step(&mut self) -> Result<bool> {
        match self.propose()? {
            Proposal::Finished => Ok(false),
            Proposal::Round(result) => {
                self.commit(result)?;
                Ok(true)
            }
        }
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    pub fn finish(mut self) -> (Ensemble, Vec<RoundLog>) {
        self.ensemble.rounds_run = self.rounds_started;
        (self.ensemble, self.logs)
    }

    fn train_risk_from_margins(&self) -> f64 {
        // sign(0) = +1: a margin of exactly zero predicts positive
        let pos_as_pos = self.pos_margins.iter().filter(|&&m| m >= 0.0).count();
        let n_p = self.pos_margins.len() as f64;
        if self.view.has_mirror() {
            let unl_as_pos = self.unl_margins.iter().filter(|&&m| m >= 0.0).count();
            let n_u = self.unl_margins.len() as f64;
            let frac_p_neg = (self.pos_margins.len() - pos_as_pos) as f64 / n_p;
            let frac_p_pos = pos_as_pos as f64 / n_p;
            let frac_u_pos = unl_as_pos as f64 / n_u;
            // same association as risk::zero_one_pu_risk, so the tracked and
            // standalone estimates agree bitwise
            let negative_part = frac_u_pos - self.view.prior() * frac_p_pos;
            self.view.prior() * frac_p_neg + negative_part
        } else {
            let neg_as_pos = self.unl_margins.iter().filter(|&&m| m >= 0.0).count();
            let mis = (self.pos_margins.len() - pos_as_pos) + neg_as_pos;
            mis as f64 / (n_p + self.unl_margins.len() as f64)
        }
    }
}

/// Train a PU boosting ensemble. Returns the model and one log per round
/// actually started; a weight overflow aborts with the partial ensemble and
/// a flag on the final log row.
pub fn train_adapu(pu: &PUDataset, config: &TrainConfig) -> Result<(Ensemble, Vec<RoundLog>)> {
    let view = build_view(pu);
    let mut trainer = Trainer::new(view, config.clone())?;
    trainer.run()?;
    Ok(trainer.finish())
}

/// Train the classical fully supervised baseline over the same candidate
/// generator: uniform initial weights, per-round normalization, no
/// non-negativity constraint.
pub fn train_adaboost(
    data: &LabeledDataset,
    config: &TrainConfig,
) -> Result<(Ensemble, Vec<RoundLog>)> {
    config.validate()?;
    let pos_rows = data.positive_indices();
    let neg_rows: Vec<usize> = data
        .labels
        .iter()
        .enumerate()
        .filter(|(_, &y)| y == -1)
        .map(|(i, _)| i)
        .collect();
    if pos_rows.is_empty() || neg_rows.is_empty() {
        return Err(Error::InvalidData(
            "baseline training needs both classes present".into(),
        ));
    }
    let positives: Array2<f64> = data.instances.select(Axis(0), &pos_rows);
    let negatives: Array2<f64> = data.instances.select(Axis(0), &neg_rows);
    let prior = pos_rows.len() as f64 / data.n_examples() as f64;
    let view = SignedWeightedView::plain_labeled(positives.view(), negatives.view(), prior);
    let mut trainer = Trainer::new(view, config.clone())?;
    trainer.run()?;
    Ok(trainer.finish())
}

#[derive(Debug, Clone)]
pub struct CvRow {
    pub beta: f64,
    pub mean_risk: f64,
    pub fold_risks: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub best_beta: f64,
    pub rows: Vec<CvRow>,
}

/// Paper-default shrinkage grid for cross-validation and sweeps.
pub const DEFAULT_BETA_GRID: [f64; 9] = [0.0001, 0.001, 0.01, 0.1, 0.2, 0.5, 0.7, 0.9, 1.0];

/// Choose the shrinkage constant by k-fold cross-validation.
///
/// Positives and unlabeled examples are folded independently so every fold
/// keeps roughly the same prior. Each candidate trains on the same folds
/// with the same derived seeds; the score is the clamped zero-one PU risk on
/// the held-out portion, and ties resolve toward the smaller value.
pub fn cross_validate_beta(
    pu: &PUDataset,
    grid: &[f64],
    base_config: &TrainConfig,
    spec: SplitSpec,
) -> Result<CvOutcome> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("beta grid must not be empty".into()));
    }
    let p_folds = kfold_indices(
        pu.n_positive(),
        SplitSpec {
            fold_count: spec.fold_count,
            seed: seeds::derive(spec.seed, seeds::DOMAIN_FOLDS, 1),
        },
    )?;
    let u_folds = kfold_indices(
        pu.n_unlabeled(),
        SplitSpec {
            fold_count: spec.fold_count,
            seed: seeds::derive(spec.seed, seeds::DOMAIN_FOLDS, 2),
        },
    )?;

    let mut fold_data = Vec::with_capacity(spec.fold_count);
    for ((p_train, p_val), (u_train, u_val)) in p_folds.iter().zip(&u_folds) {
        let train = PUDataset::new(
            pu.positives.select(Axis(0), p_train),
            pu.unlabeled.select(Axis(0), u_train),
            pu.prior,
        )?;
        let val = PUDataset::new(
            pu.positives.select(Axis(0), p_val),
            pu.unlabeled.select(Axis(0), u_val),
            pu.prior,
        )?;
        fold_data.push((train, val));
    }

    let mut rows = Vec::with_capacity(grid.len());
    for &beta in grid {
        let mut fold_risks = Vec::with_capacity(spec.fold_count);
        for (fold, (train, val)) in fold_data.iter().enumerate() {
            let mut config = base_config.clone();
            config.shrinkage = beta;
            config.seed = seeds::derive(base_config.seed, seeds::DOMAIN_CV_TRAIN, fold as u64);
            let (ensemble, _) = train_adapu(train, &config)?;
            fold_risks.push(crate::risk::zero_one_pu_risk(val, &ensemble, true));
        }
        let mean_risk = fold_risks.iter().sum::<f64>() / fold_risks.len() as f64;
        rows.push(CvRow {
            beta,
            mean_risk,
            fold_risks,
        });
    }

    let mut best = &rows[0];
    for row in &rows[1..] {
        if row.mean_risk < best.mean_risk
            || (row.mean_risk == best.mean_risk && row.beta < best.beta)
        {
            best = row;
        }
    }
    Ok(CvOutcome {
        best_beta: best.beta,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stump::alpha_from_error;
    use approx::assert_relative_eq;
    use ndarray::{arr2, Array2};

    fn toy_pu() -> PUDataset {
        PUDataset::new(
            arr2(&[[2.0], [3.0]]),
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            0.5,
        )
        .unwrap()
    }

    fn even_config(rounds: usize) -> TrainConfig {
        TrainConfig {
            rounds,
            strategy: ThresholdStrategy::Even,
            thresholds_per_feature: 6,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn config_validation_rejects_bad_shrinkage() {
        for beta in [0.0, -0.1, 1.5] {
            let config = TrainConfig {
                shrinkage: beta,
                ..TrainConfig::default()
            };
            assert!(config.validate().is_err(), "beta {beta} accepted");
        }
        assert!(TrainConfig {
            rounds: 0,
            ..TrainConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn single_round_hand_trace() {
        // the even K=6 grid finds the perfect separator, so the selection
        // error is zero and the stored weight is shrinkage * floored alpha
        let pu = toy_pu();
        let config = TrainConfig {
            shrinkage: 0.5,
            ..even_config(1)
        };
        let (ensemble, logs) = train_adapu(&pu, &config).unwrap();
        assert_eq!(ensemble.len(), 1);
        assert_eq!(logs.len(), 1);
        let member = ensemble.members()[0];
        assert_eq!(member.stump.threshold, 2.0);
        assert_eq!(member.stump.orientation, Orientation::RightPositive);
        assert_eq!(member.weight, 0.5 * alpha_from_error(0.0));
        assert!(!logs[0].abstained);
    }

    #[test]
    fn member_count_equals_non_abstained_rounds() {
        let pu = toy_pu();
        let (ensemble, logs) = train_adapu(&pu, &even_config(7)).unwrap();
        let non_abstained = logs.iter().filter(|l| !l.abstained).count();
        assert_eq!(ensemble.len(), non_abstained);
        assert!(ensemble.rounds_run <= 7);
        assert_eq!(ensemble.rounds_run, logs.len());
    }

    #[test]
    fn final_log_risk_matches_standalone_estimator() {
        // the incrementally tracked train risk must agree exactly with the
        // standalone estimator applied to the finished ensemble
        let pu = toy_pu();
        let (ensemble, logs) = train_adapu(&pu, &even_config(6)).unwrap();
        let direct = crate::risk::zero_one_pu_risk(&pu, &ensemble, false);
        assert_eq!(logs.last().unwrap().train_risk, direct);
    }

    #[test]
    fn empty_ensemble_predicts_positive() {
        let ensemble = Ensemble::empty(0.5);
        let x = arr2(&[[0.0], [100.0], [-3.0]]);
        assert_eq!(ensemble.predict(x.view()).unwrap(), vec![1, 1, 1]);
        assert_eq!(ensemble.score(x.view()).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn heavier_stump_wins_disagreements() {
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(2.0, DecisionStump::new(0, 1.0, Orientation::RightPositive));
        ensemble.push(1.0, DecisionStump::new(0, 1.0, Orientation::LeftPositive));
        let x = arr2(&[[0.0], [5.0]]);
        // at x=0: heavy stump says -1, light says +1 -> margin -1 -> -1
        assert_eq!(ensemble.predict(x.view()).unwrap(), vec![-1, 1]);
    }

    #[test]
    fn scores_negate_when_orientations_flip() {
        let pu = toy_pu();
        let (ensemble, _) = train_adapu(&pu, &even_config(5)).unwrap();
        let mut flipped = Ensemble::empty(ensemble.prior);
        for m in ensemble.members() {
            let orientation = match m.stump.orientation {
                Orientation::LeftPositive => Orientation::RightPositive,
                Orientation::RightPositive => Orientation::LeftPositive,
            };
            flipped.push(
                m.weight,
                DecisionStump::new(m.stump.feature, m.stump.threshold, orientation),
            );
        }
        let x = arr2(&[[0.3], [1.7], [2.9]]);
        let a = ensemble.score(x.view()).unwrap();
        let b = flipped.score(x.view()).unwrap();
        for (s, t) in a.iter().zip(&b) {
            assert_eq!(*s, -*t);
        }
    }

    #[test]
    fn score_bounded_by_weight_sum() {
        let pu = toy_pu();
        let (ensemble, _) = train_adapu(&pu, &even_config(10)).unwrap();
        let bound: f64 = ensemble.members().iter().map(|m| m.weight).sum();
        let x = arr2(&[[-5.0], [0.0], [2.5], [99.0]]);
        for s in ensemble.score(x.view()).unwrap() {
            assert!(s.abs() <= bound + 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(1.0, DecisionStump::new(3, 0.0, Orientation::LeftPositive));
        let x = arr2(&[[0.0, 1.0]]);
        assert!(ensemble.predict(x.view()).is_err());
    }

    #[test]
    fn adaboost_separates_in_one_round() {
        let data = LabeledDataset::new(
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            vec![-1, -1, 1, 1],
            None,
        )
        .unwrap();
        let (ensemble, logs) = train_adaboost(&data, &even_config(1)).unwrap();
        assert_eq!(ensemble.len(), 1);
        let preds = ensemble.predict(data.instances.view()).unwrap();
        assert_eq!(preds, data.labels);
        assert_eq!(logs[0].train_risk, 0.0);
    }

    #[test]
    fn adaboost_rejects_single_class() {
        let data = LabeledDataset::new(arr2(&[[0.0], [1.0]]), vec![1, 1], None).unwrap();
        assert!(train_adaboost(&data, &even_config(1)).is_err());
    }

    #[test]
    fn adaboost_round_two_weight_ratio() {
        // alternating labels: round 1 picks (x >= 1, right-positive) with
        // error 1/4; after the update misclassified weight is e^(2 alpha)
        // times the correctly classified weight
        let positives = arr2(&[[1.0], [3.0]]);
        let negatives = arr2(&[[0.0], [2.0]]);
        let view = SignedWeightedView::plain_labeled(positives.view(), negatives.view(), 0.5);
        let mut trainer = Trainer::new(view, even_config(2)).unwrap();
        assert!(trainer.step().unwrap());
        let log = &trainer.logs()[0];
        assert_relative_eq!(log.selection_error, 0.25, max_relative = 1e-12);
        let alpha = log.alpha;
        let view = trainer.view();
        // negatives: x=0 correct, x=2 misclassified
        let ratio = view.unl_weights()[1] / view.unl_weights()[0];
        assert_relative_eq!(ratio, (2.0 * alpha).exp(), max_relative = 1e-9);
        // both positives classified correctly: equal weights
        assert_relative_eq!(
            view.pos_weights()[0],
            view.pos_weights()[1],
            max_relative = 1e-12
        );
    }

    #[test]
    fn model_json_roundtrip_is_exact() {
        let pu = toy_pu();
        let (ensemble, _) = train_adapu(&pu, &even_config(5)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        ensemble.save_json(&path).unwrap();
        let loaded = Ensemble::load_json(&path).unwrap();
        assert_eq!(loaded.to_json_string(), ensemble.to_json_string());
        let x = arr2(&[[0.1], [1.9], [2.2], [3.3]]);
        assert_eq!(
            loaded.score(x.view()).unwrap(),
            ensemble.score(x.view()).unwrap()
        );
    }

    #[test]
    fn corrupt_model_json_names_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(&path, "{\"format_version\": 1, \"prior\": \"x\"}").unwrap();
        let err = Ensemble::load_json(&path).unwrap_err();
        assert!(err.to_string().contains("prior"), "got: {err}");
    }

    #[test]
    fn model_load_validates_members_and_version() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, body: &str| {
            let path = dir.path().join(name);
            std::fs::write(&path, body).unwrap();
            path
        };
        let header =
            "\"prior\": 0.5, \"mode\": \"per-group\", \"beta\": 0.1, \"K\": 10, \"seed\": 0";
        let member = |w: &str, t: &str| {
            format!(
                "{{\"weight\": {w}, \"feature\": 0, \"threshold\": {t}, \"orientation\": \"left_positive\"}}"
            )
        };
        let bad_version = write(
            "v.json",
            &format!("{{\"format_version\": 9, {header}, \"members\": []}}"),
        );
        assert!(Ensemble::load_json(&bad_version)
            .unwrap_err()
            .to_string()
            .contains("format_version"));
        let bad_weight = write(
            "w.json",
            &format!(
                "{{\"format_version\": 1, {header}, \"members\": [{}]}}",
                member("-0.5", "1.0")
            ),
        );
        assert!(Ensemble::load_json(&bad_weight)
            .unwrap_err()
            .to_string()
            .contains("weight"));
        let bad_threshold = write(
            "t.json",
            &format!(
                "{{\"format_version\": 1, {header}, \"members\": [{}]}}",
                member("0.5", "1e999")
            ),
        );
        assert!(Ensemble::load_json(&bad_threshold).is_err());
    }

    #[test]
    fn cv_singleton_grid() {
        let pu = PUDataset::new(
            Array2::from_shape_vec((6, 1), vec![2.0, 2.5, 3.0, 2.2, 2.8, 3.3]).unwrap(),
            Array2::from_shape_vec((12, 1), (0..12).map(|i| i as f64 / 2.0).collect()).unwrap(),
            0.5,
        )
        .unwrap();
        let config = TrainConfig {
            rounds: 5,
            ..TrainConfig::default()
        };
        let spec = SplitSpec {
            fold_count: 3,
            seed: 1,
        };
        let outcome = cross_validate_beta(&pu, &[0.1], &config, spec).unwrap();
        assert_eq!(outcome.best_beta, 0.1);
        assert_eq!(outcome.rows.len(), 1);
        assert_eq!(outcome.rows[0].fold_risks.len(), 3);
    }

    #[test]
    fn cv_is_deterministic() {
        let pu = PUDataset::new(
            Array2::from_shape_vec((6, 1), vec![2.0, 2.5, 3.0, 2.2, 2.8, 3.3]).unwrap(),
            Array2::from_shape_vec((12, 1), (0..12).map(|i| i as f64 / 2.0).collect()).unwrap(),
            0.5,
        )
        .unwrap();
        let config = TrainConfig {
            rounds: 4,
            ..TrainConfig::default()
        };
        let spec = SplitSpec {
            fold_count: 3,
            seed: 2,
        };
        let a = cross_validate_beta(&pu, &[0.01, 0.1, 1.0], &config, spec).unwrap();
        let b = cross_validate_beta(&pu, &[0.01, 0.1, 1.0], &config, spec).unwrap();
        assert_eq!(a.best_beta, b.best_beta);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.mean_risk, y.mean_risk);
        }
    }

    #[test]
    fn early_stop_on_nonpositive_total() {
        // drive the weight state to a negative total by hand, then confirm
        // the trainer refuses to start a round from it
        let pu = PUDataset::new(arr2(&[[2.0], [3.0]]), arr2(&[[0.0], [1.0]]), 0.5).unwrap();
        let mut view = build_view(&pu);
        view.update_weights(&DecisionStump::new(0, 1.5, Orientation::RightPositive), 3.0)
            .unwrap();
        assert!(view.total_weight() <= 0.0);
        let mut trainer = Trainer::new(view, even_config(50)).unwrap();
        trainer.run().unwrap();
        assert!(trainer.stopped_on_nonpositive_total());
        let (ensemble, logs) = trainer.finish();
        assert!(ensemble.is_empty());
        assert!(logs.is_empty());
        assert_eq!(ensemble.rounds_run, 0);
    }

    #[test]
    fn over_all_abort_when_stop_disabled() {
        // same degenerate state with the stop turned off: over-all selection
        // cannot proceed, so training aborts with a flagged log row
        let pu = PUDataset::new(arr2(&[[2.0], [3.0]]), arr2(&[[0.0], [1.0]]), 0.5).unwrap();
        let mut view = build_view(&pu);
        view.update_weights(&DecisionStump::new(0, 1.5, Orientation::RightPositive), 3.0)
            .unwrap();
        let config = TrainConfig {
            stop_on_nonpositive_total: false,
            normalization: Normalization::OverAll,
            ..even_config(10)
        };
        let mut trainer = Trainer::new(view, config).unwrap();
        trainer.run().unwrap();
        let (ensemble, logs) = trainer.finish();
        assert!(ensemble.is_empty());
        assert_eq!(logs.len(), 1);
        assert_eq!(
            logs[0].error_flag.as_deref(),
            Some("degenerate total weight")
        );
    }
}
