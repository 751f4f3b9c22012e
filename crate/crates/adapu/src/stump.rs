//! Decision-stump weak classifiers and the constrained candidate search.
//!
//! Each boosting round enumerates, per feature, a small set of candidate
//! thresholds (random or evenly spaced, drawn from an interval slightly wider
//! than the feature's value range) and both orientations, keeps the
//! candidates whose error estimates pass the mode's feasibility constraints,
//! and returns the feasible candidate with the smallest misclassified weight.
//!
//! The scan sorts each feature once up front; a round then costs one
//! prefix-sum pass plus a binary search per threshold, instead of a full
//! O(n) pass per candidate. The winner is re-scored from scratch so the
//! reported numbers come from the canonical per-example path.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::{assemble_report, ErrorReport, KahanSum, SignedWeightedView};

/// Smallest error fed into the vote-weight formula; a perfect candidate gets
/// a large finite weight instead of an infinite one.
pub const ERROR_FLOOR: f64 = 1e-10;

/// Which side of the threshold predicts +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    LeftPositive,
    RightPositive,
}

/// Single-feature threshold classifier: +1 iff (value < threshold) on the
/// left-positive orientation, +1 iff (value >= threshold) on the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionStump {
    pub feature: usize,
    pub threshold: f64,
    pub orientation: Orientation,
}

impl DecisionStump {
    pub fn new(feature: usize, threshold: f64, orientation: Orientation) -> Self {
        Self {
            feature,
            threshold,
            orientation,
        }
    }

    #[inline]
    pub fn predict_value(&self, value: f64) -> i8 {
        let left = value < self.threshold;
        let positive = match self.orientation {
            Orientation::LeftPositive => left,
            Orientation::RightPositive => !left,
        };
        if positive {
            1
        } else {
            -1
        }
    }

    pub fn predict_row(&self, row: ndarray::ArrayView1<'_, f64>) -> i8 {
        self.predict_value(row[self.feature])
    }
}

/// Error normalization used for feasibility and the vote weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Balance the three groups: prior * err(P+) + err(U-) - prior * err(P-).
    PerGroup,
    /// Use the grand totals: misclassified weight over total weight.
    OverAll,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Normalization::PerGroup => write!(f, "per-group"),
            Normalization::OverAll => write!(f, "over-all"),
        }
    }
}

/// How candidate thresholds are placed in a feature's sampling interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdStrategy {
    Random,
    Even,
}

/// The sampling interval for a feature with range [lo, hi], r = hi - lo and
/// u unique values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdInterval {
    /// [lo - r/(u-1), hi + r/(u-1)]: slightly wider than the value range on
    /// both sides, so all-positive and all-negative stumps stay reachable.
    Widened,
    /// [lo - r/(u-1), lo + r/(u-1)]: compatibility variant that does not
    /// cover the upper part of the range.
    Pseudocode,
}

#[derive(Debug, Clone, Copy)]
struct FeatureStats {
    min: f64,
    max: f64,
    unique: usize,
}

impl FeatureStats {
    fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("empty feature vector".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let unique = 1 + sorted.windows(2).filter(|w| w[0] != w[1]).count();
        Ok(Self {
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            unique,
        })
    }

    fn interval(&self, kind: ThresholdInterval) -> (f64, f64) {
        let margin = (self.max - self.min) / (self.unique - 1) as f64;
        let margin = if margin.is_finite() { margin } else { 0.0 };
        let (lo, hi) = match kind {
            ThresholdInterval::Widened => (self.min - margin, self.max + margin),
            ThresholdInterval::Pseudocode => (self.min - margin, self.min + margin),
        };
        // values near the f64 limits would push the endpoints to infinity
        let lo = if lo.is_finite() { lo } else { self.min };
        let hi = if hi.is_finite() { hi } else { self.max.max(lo) };
        (lo, hi)
    }
}

fn draw_thresholds<R: Rng>(
    stats: &FeatureStats,
    k: usize,
    kind: ThresholdInterval,
    rng: &mut R,
) -> Vec<f64> {
    if stats.unique == 1 {
        return vec![stats.min; k];
    }
    let (lo, hi) = stats.interval(kind);
    (0..k).map(|_| rng.gen_range(lo..=hi)).collect()
}

fn even_thresholds(stats: &FeatureStats, k: usize, kind: ThresholdInterval) -> Vec<f64> {
    if stats.unique == 1 {
        return vec![stats.min; k];
    }
    let (lo, hi) = stats.interval(kind);
    if k == 1 {
        return vec![(lo + hi) / 2.0];
    }
    let step = (hi - lo) / (k - 1) as f64;
    (0..k).map(|i| lo + i as f64 * step).collect()
}

/// K independent uniform threshold draws for one feature.
pub fn sample_thresholds<R: Rng>(
    feature_values: &[f64],
    k: usize,
    kind: ThresholdInterval,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "threshold count must be positive".into(),
        ));
    }
    let stats = FeatureStats::from_values(feature_values)?;
    Ok(draw_thresholds(&stats, k, kind, rng))
}

/// K evenly spaced thresholds across the sampling interval, endpoints
/// included; a single threshold sits at the midpoint.
pub fn evenly_spaced_thresholds(
    feature_values: &[f64],
    k: usize,
    kind: ThresholdInterval,
) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "threshold count must be positive".into(),
        ));
    }
    let stats = FeatureStats::from_values(feature_values)?;
    Ok(even_thresholds(&stats, k, kind))
}

/// Candidate search settings for one boosting round.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub thresholds_per_feature: usize,
    pub normalization: Normalization,
    pub strategy: ThresholdStrategy,
    pub interval: ThresholdInterval,
}

/// Outcome of one candidate search. `stump` is `None` when no candidate
/// passed the feasibility constraints (the round abstains, alpha = 0).
#[derive(Debug, Clone)]
pub struct StumpSearchResult {
    pub stump: Option<DecisionStump>,
    /// Vote weight: 0.5 * ln((1 - err) / err) with err floored at ERROR_FLOOR.
    pub alpha: f64,
    /// The selection error of the winner (balanced or total per the mode);
    /// 0.5 when abstaining.
    pub error: f64,
    /// Misclassified weight of the winner; +infinity when abstaining.
    pub misclassified_weight: f64,
    /// Canonical per-example report of the winner.
    pub report: Option<ErrorReport>,
    pub candidates_evaluated: usize,
    pub feasible_count: usize,
}

impl StumpSearchResult {
    fn abstain(candidates_evaluated: usize) -> Self {
        Self {
            stump: None,
            alpha: 0.0,
            error: 0.5,
            misclassified_weight: f64::INFINITY,
            report: None,
            candidates_evaluated,
            feasible_count: 0,
        }
    }
}

/// Vote weight for a selection error, with the floor applied.
pub fn alpha_from_error(err: f64) -> f64 {
    let err = err.max(ERROR_FLOOR);
    0.5 * ((1.0 - err) / err).ln()
}

#[derive(Debug, Clone, Copy)]
enum SelectionRule {
    PerGroup,
    OverAll,
    /// Plain weighted-error rule for fully supervised views (no mirror
    /// group, no non-negativity constraint).
    Plain,
}

fn feasible(rule: SelectionRule, report: &ErrorReport) -> bool {
    match rule {
        SelectionRule::PerGroup => {
            report.balanced_error >= 0.0
                && report.balanced_error < 0.5
                && report.balanced_negative_error >= 0.0
        }
        SelectionRule::OverAll => {
            report.total_error >= 0.0 && report.total_error < 0.5 && report.negative_error >= 0.0
        }
        SelectionRule::Plain => report.total_error >= 0.0 && report.total_error < 0.5,
    }
}

fn selection_error(rule: SelectionRule, report: &ErrorReport) -> f64 {
    match rule {
        SelectionRule::PerGroup => report.balanced_error,
        SelectionRule::OverAll | SelectionRule::Plain => report.total_error,
    }
}

struct FeatureBest {
    misclassified_weight: f64,
    threshold_index: usize,
    orientation: Orientation,
}

struct Scratch {
    pos_prefix: Vec<f64>,
    unl_prefix: Vec<f64>,
    mirror_prefix: Vec<f64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            pos_prefix: vec![0.0; n + 1],
            unl_prefix: vec![0.0; n + 1],
            mirror_prefix: vec![0.0; n + 1],
        }
    }
}

/// Pre-sorted per-feature instance order, built once per training run.
pub struct StumpSearcher {
    sorted_ids: Vec<Vec<u32>>,
    sorted_values: Vec<Vec<f64>>,
    stats: Vec<FeatureStats>,
    n_instances: usize,
}

impl StumpSearcher {
    pub fn new(view: &SignedWeightedView<'_>) -> Self {
        let n = view.n_instances();
        let d = view.n_features();
        let mut sorted_ids = Vec::with_capacity(d);
        let mut sorted_values = Vec::with_capacity(d);
        let mut stats = Vec::with_capacity(d);
        for f in 0..d {
            let mut pairs: Vec<(f64, u32)> = (0..n)
                .map(|i| (view.instance_value(i, f), i as u32))
                .collect();
            pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let values: Vec<f64> = pairs.iter().map(|(v, _)| *v).collect();
            let ids: Vec<u32> = pairs.iter().map(|(_, i)| *i).collect();
            let unique = 1 + values.windows(2).filter(|w| w[0] != w[1]).count();
            stats.push(FeatureStats {
                min: values[0],
                max: values[n - 1],
                unique,
            });
            sorted_ids.push(ids);
            sorted_values.push(values);
        }
        Self {
            sorted_ids,
            sorted_values,
            stats,
            n_instances: n,
        }
    }

    /// Run one candidate search against the view's current weights.
    ///
    /// Thresholds are drawn per feature in ascending feature order (the
    /// random strategy consumes the generator exactly as `sample_thresholds`
    /// would); each threshold is scored in both orientations, left-positive
    /// first. Ties in misclassified weight resolve to the lower feature,
    /// then the earlier threshold, then left-positive. The winner is
    /// re-scored from scratch for the returned report.
    pub fn search<R: Rng>(
        &self,
        view: &SignedWeightedView<'_>,
        config: &SearchConfig,
        rng: &mut R,
    ) -> Result<StumpSearchResult> {
        if view.n_features() != self.sorted_ids.len() || view.n_instances() != self.n_instances {
            return Err(Error::InvalidData(format!(
                "searcher built for {} features x {} instances, view has {} x {}",
                self.sorted_ids.len(),
                self.n_instances,
                view.n_features(),
                view.n_instances()
            )));
        }
        let rule = if view.has_mirror() {
            match config.normalization {
                Normalization::PerGroup => SelectionRule::PerGroup,
                Normalization::OverAll => SelectionRule::OverAll,
            }
        } else {
            SelectionRule::Plain
        };
        let (tot_pos, tot_unl, tot_mirror) = view.group_totals();
        let total = (tot_pos + tot_unl) + tot_mirror;
        if matches!(rule, SelectionRule::OverAll) && (!total.is_finite() || total <= 0.0) {
            return Err(Error::DegenerateTotalWeight);
        }

        let k = config.thresholds_per_feature;
        let thresholds: Vec<Vec<f64>> = match config.strategy {
            ThresholdStrategy::Random => self
                .stats
                .iter()
                .map(|s| draw_thresholds(s, k, config.interval, rng))
                .collect(),
            ThresholdStrategy::Even => self
                .stats
                .iter()
                .map(|s| even_thresholds(s, k, config.interval))
                .collect(),
        };

        let per_feature: Vec<(Option<FeatureBest>, usize)> = (0..view.n_features())
            .into_par_iter()
            .map_init(
                || Scratch::new(self.n_instances),
                |scratch, f| {
                    self.scan_feature(
                        view,
                        f,
                        &thresholds[f],
                        rule,
                        (tot_pos, tot_unl, tot_mirror),
                        scratch,
                    )
                },
            )
            .collect();

        let candidates_evaluated = 2 * k * view.n_features();
        let feasible_count: usize = per_feature.iter().map(|(_, c)| c).sum();

        let mut best: Option<(usize, FeatureBest)> = None;
        for (f, (local, _)) in per_feature.into_iter().enumerate() {
            if let Some(local) = local {
                let better = match &best {
                    None => true,
                    Some((_, b)) => local.misclassified_weight < b.misclassified_weight,
                };
                if better {
                    best = Some((f, local));
                }
            }
        }

        let Some((feature, local)) = best else {
            return Ok(StumpSearchResult::abstain(candidates_evaluated));
        };

        let stump = DecisionStump::new(
            feature,
            thresholds[feature][local.threshold_index],
            local.orientation,
        );
        let report = view.score_stump(&stump);
        if !feasible(rule, &report) {
            // The winner straddles a feasibility boundary: the prefix sums
            // put it inside, the canonical per-example sums put it outside.
            // Redo the round scoring every candidate canonically so the
            // returned report always satisfies its own constraints.
            return Ok(search_canonical(
                view,
                rule,
                &thresholds,
                candidates_evaluated,
            ));
        }
        let err = selection_error(rule, &report);
        Ok(StumpSearchResult {
            stump: Some(stump),
            alpha: alpha_from_error(err),
            error: err,
            misclassified_weight: report.misclassified_weight,
            report: Some(report),
            candidates_evaluated,
            feasible_count,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_feature(
        &self,
        view: &SignedWeightedView<'_>,
        feature: usize,
        thresholds: &[f64],
        rule: SelectionRule,
        totals: (f64, f64, f64),
        scratch: &mut Scratch,
    ) -> (Option<FeatureBest>, usize) {
        let ids = &self.sorted_ids[feature];
        let values = &self.sorted_values[feature];
        let n = ids.len();
        let n_p = view.n_positive();
        let (tot_pos, tot_unl, tot_mirror) = totals;
        let pos_w = view.pos_weights();
        let unl_w = view.unl_weights();
        let mirror_w = view.mirror_weights();
        let has_mirror = view.has_mirror();

        let mut pos_run = KahanSum::default();
        let mut unl_run = KahanSum::default();
        let mut mirror_run = KahanSum::default();
        scratch.pos_prefix[0] = 0.0;
        scratch.unl_prefix[0] = 0.0;
        scratch.mirror_prefix[0] = 0.0;
        for (k, &id) in ids.iter().enumerate() {
            let id = id as usize;
            if id < n_p {
                pos_run.add(pos_w[id]);
                if has_mirror {
                    mirror_run.add(mirror_w[id]);
                }
            } else {
                unl_run.add(unl_w[id - n_p]);
            }
            scratch.pos_prefix[k + 1] = pos_run.value();
            scratch.unl_prefix[k + 1] = unl_run.value();
            scratch.mirror_prefix[k + 1] = mirror_run.value();
        }

        // Misclassified weight of the examples in sorted positions below /
        // at-or-above the partition point. Empty and full segments use the
        // shared canonical totals so identical predictions scored on
        // different features produce identical sums.
        let below = |prefix: &[f64], total: f64, p: usize| -> f64 {
            if p == 0 {
                0.0
            } else if p == n {
                total
            } else {
                prefix[p]
            }
        };
        let at_or_above = |prefix: &[f64], total: f64, p: usize| -> f64 {
            if p == 0 {
                total
            } else if p == n {
                0.0
            } else {
                total - prefix[p]
            }
        };

        let mut best: Option<FeatureBest> = None;
        let mut feasible_count = 0usize;
        for (ti, &v) in thresholds.iter().enumerate() {
            let p = values.partition_point(|&x| x < v);
            for orientation in [Orientation::LeftPositive, Orientation::RightPositive] {
                // left-positive predicts +1 below the partition point
                let (mis_pos, mis_unl, mis_mirror) = match orientation {
                    Orientation::LeftPositive => (
                        at_or_above(&scratch.pos_prefix, tot_pos, p),
                        below(&scratch.unl_prefix, tot_unl, p),
                        below(&scratch.mirror_prefix, tot_mirror, p),
                    ),
                    Orientation::RightPositive => (
                        below(&scratch.pos_prefix, tot_pos, p),
                        at_or_above(&scratch.unl_prefix, tot_unl, p),
                        at_or_above(&scratch.mirror_prefix, tot_mirror, p),
                    ),
                };
                let report = assemble_report(
                    view.prior(),
                    mis_pos,
                    tot_pos,
                    mis_unl,
                    tot_unl,
                    mis_mirror,
                    tot_mirror,
                );
                if !feasible(rule, &report) {
                    continue;
                }
                feasible_count += 1;
                let better = match &best {
                    None => true,
                    Some(b) => report.misclassified_weight < b.misclassified_weight,
                };
                if better {
                    best = Some(FeatureBest {
                        misclassified_weight: report.misclassified_weight,
                        threshold_index: ti,
                        orientation,
                    });
                }
            }
        }
        (best, feasible_count)
    }
}

/// Slow-path search over an explicit candidate list, scoring each candidate
/// with the canonical per-example path. Used when the prefix scan's winner
/// fails its canonical feasibility re-check.
fn search_canonical(
    view: &SignedWeightedView<'_>,
    rule: SelectionRule,
    thresholds: &[Vec<f64>],
    candidates_evaluated: usize,
) -> StumpSearchResult {
    let mut best: Option<(DecisionStump, ErrorReport)> = None;
    let mut feasible_count = 0usize;
    for (feature, feature_thresholds) in thresholds.iter().enumerate() {
        for &threshold in feature_thresholds {
            for orientation in [Orientation::LeftPositive, Orientation::RightPositive] {
                let stump = DecisionStump::new(feature, threshold, orientation);
                let report = view.score_stump(&stump);
                if !feasible(rule, &report) {
                    continue;
                }
                feasible_count += 1;
                let better = match &best {
                    None => true,
                    Some((_, b)) => report.misclassified_weight < b.misclassified_weight,
                };
                if better {
                    best = Some((stump, report));
                }
            }
        }
    }
    match best {
        None => StumpSearchResult::abstain(candidates_evaluated),
        Some((stump, report)) => {
            let err = selection_error(rule, &report);
            StumpSearchResult {
                stump: Some(stump),
                alpha: alpha_from_error(err),
                error: err,
                misclassified_weight: report.misclassified_weight,
                report: Some(report),
                candidates_evaluated,
                feasible_count,
            }
        }
    }
}

/// One-off candidate search; builds the per-feature sort and runs a round.
pub fn generate_stump<R: Rng>(
    view: &SignedWeightedView<'_>,
    config: &SearchConfig,
    rng: &mut R,
) -> Result<StumpSearchResult> {
    StumpSearcher::new(view).search(view, config, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::PUDataset;
    use crate::risk::build_view;
    use approx::assert_relative_eq;
    use ndarray::arr2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stump_orientation_semantics() {
        let left = DecisionStump::new(0, 1.5, Orientation::LeftPositive);
        assert_eq!(left.predict_value(1.0), 1);
        assert_eq!(left.predict_value(1.5), -1);
        assert_eq!(left.predict_value(2.0), -1);
        let right = DecisionStump::new(0, 1.5, Orientation::RightPositive);
        assert_eq!(right.predict_value(1.0), -1);
        assert_eq!(right.predict_value(1.5), 1);
        assert_eq!(right.predict_value(2.0), 1);
    }

    #[test]
    fn sampled_thresholds_stay_in_widened_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // two unique values: interval is [-1, 2]
        let draws =
            sample_thresholds(&[0.0, 1.0, 0.0], 200, ThresholdInterval::Widened, &mut rng).unwrap();
        assert_eq!(draws.len(), 200);
        assert!(draws.iter().all(|&v| (-1.0..=2.0).contains(&v)));
        assert!(draws.iter().any(|&v| v < 0.0));
        assert!(draws.iter().any(|&v| v > 1.0));
        // three unique values: interval is [-0.5, 1.5]
        let draws =
            sample_thresholds(&[0.0, 0.5, 1.0], 200, ThresholdInterval::Widened, &mut rng).unwrap();
        assert!(draws.iter().all(|&v| (-0.5..=1.5).contains(&v)));
    }

    #[test]
    fn pseudocode_interval_hugs_the_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws =
            sample_thresholds(&[0.0, 1.0], 200, ThresholdInterval::Pseudocode, &mut rng).unwrap();
        assert!(draws.iter().all(|&v| (-1.0..=1.0).contains(&v)));
    }

    #[test]
    fn constant_feature_yields_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws =
            sample_thresholds(&[5.0, 5.0, 5.0], 4, ThresholdInterval::Widened, &mut rng).unwrap();
        assert_eq!(draws, vec![5.0; 4]);
        let even =
            evenly_spaced_thresholds(&[5.0, 5.0, 5.0], 4, ThresholdInterval::Widened).unwrap();
        assert_eq!(even, vec![5.0; 4]);
    }

    #[test]
    fn empty_feature_vector_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_thresholds(&[], 3, ThresholdInterval::Widened, &mut rng).is_err());
    }

    #[test]
    fn even_thresholds_include_endpoints() {
        let got = evenly_spaced_thresholds(&[0.0, 1.0], 4, ThresholdInterval::Widened).unwrap();
        assert_eq!(got, vec![-1.0, 0.0, 1.0, 2.0]);
        let single = evenly_spaced_thresholds(&[0.0, 1.0], 1, ThresholdInterval::Widened).unwrap();
        assert_eq!(single, vec![0.5]);
    }

    fn toy_view_data() -> PUDataset {
        // 1-D: positives at {2, 3}, unlabeled at {0, 1, 2, 3}
        PUDataset::new(
            arr2(&[[2.0], [3.0]]),
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn toy_search_selects_separating_stump() {
        // Evenly spaced K=6 over [-1, 4] gives thresholds {-1, 0, 1, 2, 3, 4};
        // v=2 right-positive separates {0,1} from {2,3}: the unlabeled copies
        // of the positives cancel against the mirrors, so E = 0.
        let pu = toy_view_data();
        let view = build_view(&pu);
        let config = SearchConfig {
            thresholds_per_feature: 6,
            normalization: Normalization::PerGroup,
            strategy: ThresholdStrategy::Even,
            interval: ThresholdInterval::Widened,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let result = generate_stump(&view, &config, &mut rng).unwrap();
        let stump = result.stump.expect("feasible stump exists");
        assert_eq!(stump.feature, 0);
        assert_eq!(stump.threshold, 2.0);
        assert_eq!(stump.orientation, Orientation::RightPositive);
        assert_eq!(result.misclassified_weight, 0.0);
        assert_eq!(result.error, 0.0);
        assert_relative_eq!(result.alpha, alpha_from_error(0.0), max_relative = 1e-15);
        assert_eq!(result.candidates_evaluated, 12);
        assert!(result.feasible_count >= 1);
    }

    #[test]
    fn infeasible_everywhere_abstains() {
        // one positive and one unlabeled example at the same point: every
        // candidate has selection error exactly 0.5 in both modes
        let pu = PUDataset::new(arr2(&[[0.0]]), arr2(&[[0.0]]), 0.5).unwrap();
        let view = build_view(&pu);
        for normalization in [Normalization::PerGroup, Normalization::OverAll] {
            let config = SearchConfig {
                thresholds_per_feature: 3,
                normalization,
                strategy: ThresholdStrategy::Even,
                interval: ThresholdInterval::Widened,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let result = generate_stump(&view, &config, &mut rng).unwrap();
            assert!(result.stump.is_none());
            assert_eq!(result.alpha, 0.0);
            assert_eq!(result.feasible_count, 0);
        }
    }

    #[test]
    fn tie_breaks_to_lower_feature() {
        // two identical feature columns: best candidates tie exactly
        let pu = PUDataset::new(
            arr2(&[[2.0, 2.0], [3.0, 3.0]]),
            arr2(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]),
            0.5,
        )
        .unwrap();
        let view = build_view(&pu);
        let config = SearchConfig {
            thresholds_per_feature: 6,
            normalization: Normalization::PerGroup,
            strategy: ThresholdStrategy::Even,
            interval: ThresholdInterval::Widened,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let result = generate_stump(&view, &config, &mut rng).unwrap();
        assert_eq!(result.stump.unwrap().feature, 0);
    }

    #[test]
    fn orientation_pair_sums_to_total_weight() {
        let pu = toy_view_data();
        let view = build_view(&pu);
        let z = view.total_weight();
        for v in [-0.5, 0.1, 1.5, 2.0, 3.7] {
            let left = view.score_stump(&DecisionStump::new(0, v, Orientation::LeftPositive));
            let right = view.score_stump(&DecisionStump::new(0, v, Orientation::RightPositive));
            assert_relative_eq!(
                left.misclassified_weight + right.misclassified_weight,
                z,
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn alpha_floor_keeps_weight_finite() {
        assert!(alpha_from_error(0.0).is_finite());
        assert_relative_eq!(
            alpha_from_error(0.0),
            0.5 * ((1.0 - 1e-10_f64) / 1e-10).ln(),
            max_relative = 1e-15
        );
        assert!(alpha_from_error(0.25) > 0.0);
        assert!(alpha_from_error(0.5 - 1e-9) > 0.0);
    }

    #[test]
    fn degenerate_total_weight_rejected_over_all() {
        // positives at {2,3}, unlabeled only at {0,1}: a strong stump drives
        // the mirror magnitudes past everything else and the total goes negative
        let pu = PUDataset::new(arr2(&[[2.0], [3.0]]), arr2(&[[0.0], [1.0]]), 0.5).unwrap();
        let mut view = build_view(&pu);
        let stump = DecisionStump::new(0, 1.5, Orientation::RightPositive);
        view.update_weights(&stump, 3.0).unwrap();
        assert!(view.total_weight() <= 0.0);
        let config = SearchConfig {
            thresholds_per_feature: 2,
            normalization: Normalization::OverAll,
            strategy: ThresholdStrategy::Even,
            interval: ThresholdInterval::Widened,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let err = generate_stump(&view, &config, &mut rng).unwrap_err();
        assert!(matches!(err, Error::DegenerateTotalWeight));
    }
}
