//! Metrics and diagnostics: labeled-set accuracy, PU-side prediction rates,
//! per-prefix curves, feature-usage histograms, and trial aggregation.

use std::path::Path;

use crate::booster::Ensemble;
use crate::dataset::{LabeledDataset, PUDataset};
use crate::error::{Error, Result};

/// Metric snapshot. Fields are present when the underlying data defines
/// them: accuracy and zero-one loss need labels, the two rates need the
/// relevant side of the sample to be non-empty.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalReport {
    pub accuracy: Option<f64>,
    pub zero_one_loss: Option<f64>,
    pub positives_as_positive_rate: Option<f64>,
    pub unlabeled_as_negative_rate: Option<f64>,
}

/// Metrics after each ensemble prefix 1..=len.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub prefix: usize,
    pub report: EvalReport,
}

/// `EvalReport` plus the optional per-prefix sweep.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: EvalReport,
    pub curve: Option<Vec<CurvePoint>>,
}

fn labeled_report(margins: &[f64], labels: &[i8]) -> EvalReport {
    let n = labels.len();
    let mut correct = 0usize;
    let mut pos_total = 0usize;
    let mut pos_as_pos = 0usize;
    let mut neg_total = 0usize;
    let mut neg_as_neg = 0usize;
    for (&m, &y) in margins.iter().zip(labels) {
        let pred: i8 = if m >= 0.0 { 1 } else { -1 };
        if pred == y {
            correct += 1;
        }
        if y == 1 {
            pos_total += 1;
            if pred == 1 {
                pos_as_pos += 1;
            }
        } else {
            neg_total += 1;
            if pred == -1 {
                neg_as_neg += 1;
            }
        }
    }
    let accuracy = correct as f64 / n as f64;
    EvalReport {
        accuracy: Some(accuracy),
        zero_one_loss: Some(1.0 - accuracy),
        positives_as_positive_rate: (pos_total > 0).then(|| pos_as_pos as f64 / pos_total as f64),
        unlabeled_as_negative_rate: (neg_total > 0).then(|| neg_as_neg as f64 / neg_total as f64),
    }
}

fn pu_report(pos_margins: &[f64], unl_margins: &[f64]) -> EvalReport {
    let pos_as_pos = pos_margins.iter().filter(|&&m| m >= 0.0).count();
    let unl_as_neg = unl_margins.iter().filter(|&&m| m < 0.0).count();
    EvalReport {
        accuracy: None,
        zero_one_loss: None,
        positives_as_positive_rate: Some(pos_as_pos as f64 / pos_margins.len() as f64),
        unlabeled_as_negative_rate: Some(unl_as_neg as f64 / unl_margins.len() as f64),
    }
}

/// Sweep margins member by member, reporting after each prefix. The final
/// report equals the full-ensemble evaluation exactly: the margins are
/// accumulated in the same member order either way.
fn sweep<F: FnMut(&[Vec<f64>]) -> EvalReport>(
    ensemble: &Ensemble,
    groups: &[ndarray::ArrayView2<'_, f64>],
    with_sweep: bool,
    mut report_from: F,
) -> Evaluation {
    let mut margins: Vec<Vec<f64>> = groups.iter().map(|g| vec![0.0; g.nrows()]).collect();
    let mut curve = with_sweep.then(Vec::new);
    for (k, member) in ensemble.members().iter().enumerate() {
        for (group, margin) in groups.iter().zip(margins.iter_mut()) {
            for (i, m) in margin.iter_mut().enumerate() {
                let h = member.stump.predict_row(group.row(i));
                *m += member.weight * f64::from(h);
            }
        }
        if let Some(curve) = curve.as_mut() {
            curve.push(CurvePoint {
                prefix: k + 1,
                report: report_from(&margins),
            });
        }
    }
    Evaluation {
        report: report_from(&margins),
        curve,
    }
}

/// Accuracy and zero-one loss of the ensemble on labeled data, optionally
/// after each ensemble prefix.
pub fn evaluate_labeled(
    ensemble: &Ensemble,
    data: &LabeledDataset,
    prefix_sweep: bool,
) -> Result<Evaluation> {
    if data.n_features() < ensemble.required_features() {
        return Err(Error::InvalidData(format!(
            "model needs {} features, data has {}",
            ensemble.required_features(),
            data.n_features()
        )));
    }
    Ok(sweep(
        ensemble,
        &[data.instances.view()],
        prefix_sweep,
        |margins| labeled_report(&margins[0], &data.labels),
    ))
}

/// Fractions of positives predicted positive and unlabeled predicted
/// negative on the PU training sample, optionally per prefix.
pub fn evaluate_pu_train(
    ensemble: &Ensemble,
    pu: &PUDataset,
    prefix_sweep: bool,
) -> Result<Evaluation> {
    if pu.n_features() < ensemble.required_features() {
        return Err(Error::InvalidData(format!(
            "model needs {} features, data has {}",
            ensemble.required_features(),
            pu.n_features()
        )));
    }
    Ok(sweep(
        ensemble,
        &[pu.positives.view(), pu.unlabeled.view()],
        prefix_sweep,
        |margins| pu_report(&margins[0], &margins[1]),
    ))
}

/// Splitting-feature histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureUsage {
    pub counts: Vec<usize>,
}

pub fn feature_usage(ensemble: &Ensemble, n_features: usize) -> Result<FeatureUsage> {
    let mut counts = vec![0usize; n_features];
    for member in ensemble.members() {
        let f = member.stump.feature;
        if f >= n_features {
            return Err(Error::InvalidData(format!(
                "member uses feature {f}, but only {n_features} features exist"
            )));
        }
        counts[f] += 1;
    }
    Ok(FeatureUsage { counts })
}

/// Sample mean and standard deviation (n-1 denominator; 0 for one value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStats {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

fn field_stats(values: &[f64]) -> Option<FieldStats> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    Some(FieldStats { mean, std, n })
}

/// Per-field mean/std over trials; a field is present when at least one
/// report carries it.
#[derive(Debug, Clone, Copy, Default)]
pub struct AggregateReport {
    pub accuracy: Option<FieldStats>,
    pub zero_one_loss: Option<FieldStats>,
    pub positives_as_positive_rate: Option<FieldStats>,
    pub unlabeled_as_negative_rate: Option<FieldStats>,
}

pub fn aggregate_trials(reports: &[EvalReport]) -> Result<AggregateReport> {
    if reports.is_empty() {
        return Err(Error::InvalidData("no reports to aggregate".into()));
    }
    let collect = |get: fn(&EvalReport) -> Option<f64>| -> Option<FieldStats> {
        let values: Vec<f64> = reports.iter().filter_map(get).collect();
        field_stats(&values)
    };
    Ok(AggregateReport {
        accuracy: collect(|r| r.accuracy),
        zero_one_loss: collect(|r| r.zero_one_loss),
        positives_as_positive_rate: collect(|r| r.positives_as_positive_rate),
        unlabeled_as_negative_rate: collect(|r| r.unlabeled_as_negative_rate),
    })
}

/// Long-format row of the metrics/curves CSV.
#[derive(Debug, Clone)]
pub struct CurveRow {
    pub round: usize,
    pub metric: String,
    pub value: f64,
    pub trial: u64,
    pub dataset: String,
    pub method: String,
}

/// Write metric curves in long format: round,metric,value,trial,dataset,method.
pub fn write_curves_csv(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::InvalidData(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(["round", "metric", "value", "trial", "dataset", "method"])
        .map_err(|e| Error::InvalidData(e.to_string()))?;
    for row in rows {
        w.write_record([
            row.round.to_string(),
            row.metric.clone(),
            format!("{}", row.value),
            row.trial.to_string(),
            row.dataset.clone(),
            row.method.clone(),
        ])
        .map_err(|e| Error::InvalidData(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::InvalidData(e.to_string()))?;
    Ok(())
}

/// Rows for one evaluation curve, ready for `write_curves_csv`.
pub fn curve_rows(curve: &[CurvePoint], trial: u64, dataset: &str, method: &str) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for point in curve {
        let mut push = |metric: &str, value: Option<f64>| {
            if let Some(value) = value {
                rows.push(CurveRow {
                    round: point.prefix,
                    metric: metric.to_string(),
                    value,
                    trial,
                    dataset: dataset.to_string(),
                    method: method.to_string(),
                });
            }
        };
        push("accuracy", point.report.accuracy);
        push("zero_one_loss", point.report.zero_one_loss);
        push(
            "positives_as_positive_rate",
            point.report.positives_as_positive_rate,
        );
        push(
            "unlabeled_as_negative_rate",
            point.report.unlabeled_as_negative_rate,
        );
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::booster::Ensemble;
    use crate::stump::{DecisionStump, Orientation};
    use approx::assert_relative_eq;
    use ndarray::arr2;

    fn all_positive_ensemble() -> Ensemble {
        let mut e = Ensemble::empty(0.5);
        e.push(
            1.0,
            DecisionStump::new(0, f64::NEG_INFINITY, Orientation::RightPositive),
        );
        e
    }

    #[test]
    fn all_positive_predictor_accuracy_is_positive_fraction() {
        let data = LabeledDataset::new(
            arr2(&[[0.0], [1.0], [2.0], [3.0], [4.0]]),
            vec![1, 1, 1, -1, -1],
            None,
        )
        .unwrap();
        let eval = evaluate_labeled(&all_positive_ensemble(), &data, false).unwrap();
        assert_eq!(eval.report.accuracy, Some(0.6));
        assert_eq!(eval.report.zero_one_loss, Some(0.4));
        assert_eq!(eval.report.positives_as_positive_rate, Some(1.0));
        assert_eq!(eval.report.unlabeled_as_negative_rate, Some(0.0));
    }

    #[test]
    fn accuracy_plus_loss_is_one_exactly() {
        // counts chosen so accuracy is not dyadic
        let data = LabeledDataset::new(
            arr2(&[[0.0], [1.0], [2.0], [3.0], [4.0], [5.0], [6.0]]),
            vec![1, -1, 1, -1, 1, -1, 1],
            None,
        )
        .unwrap();
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(1.0, DecisionStump::new(0, 2.5, Orientation::RightPositive));
        let r = evaluate_labeled(&ensemble, &data, false).unwrap().report;
        assert_eq!(r.accuracy.unwrap() + r.zero_one_loss.unwrap(), 1.0);
    }

    #[test]
    fn perfect_ensemble_scores_one() {
        let data = LabeledDataset::new(
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            vec![-1, -1, 1, 1],
            None,
        )
        .unwrap();
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(2.0, DecisionStump::new(0, 1.5, Orientation::RightPositive));
        let r = evaluate_labeled(&ensemble, &data, false).unwrap().report;
        assert_eq!(r.accuracy, Some(1.0));
        assert_eq!(r.zero_one_loss, Some(0.0));
    }

    #[test]
    fn pu_rates_for_constant_predictors() {
        let pu = PUDataset::new(arr2(&[[1.0], [2.0]]), arr2(&[[0.0], [1.0], [2.0]]), 0.5).unwrap();
        let eval = evaluate_pu_train(&all_positive_ensemble(), &pu, false).unwrap();
        assert_eq!(eval.report.positives_as_positive_rate, Some(1.0));
        assert_eq!(eval.report.unlabeled_as_negative_rate, Some(0.0));
        assert_eq!(eval.report.accuracy, None);

        let mut all_neg = Ensemble::empty(0.5);
        all_neg.push(
            1.0,
            DecisionStump::new(0, f64::NEG_INFINITY, Orientation::LeftPositive),
        );
        let eval = evaluate_pu_train(&all_neg, &pu, false).unwrap();
        assert_eq!(eval.report.positives_as_positive_rate, Some(0.0));
        assert_eq!(eval.report.unlabeled_as_negative_rate, Some(1.0));
    }

    #[test]
    fn pu_rates_hand_counted_on_toy_split() {
        // positives {2,3}, unlabeled {0,1,2,3}; stump x >= 2 predicts +1
        let pu = PUDataset::new(
            arr2(&[[2.0], [3.0]]),
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            0.5,
        )
        .unwrap();
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(1.0, DecisionStump::new(0, 2.0, Orientation::RightPositive));
        let eval = evaluate_pu_train(&ensemble, &pu, false).unwrap();
        assert_eq!(eval.report.positives_as_positive_rate, Some(1.0));
        assert_eq!(eval.report.unlabeled_as_negative_rate, Some(0.5));
    }

    #[test]
    fn prefix_sweep_final_point_matches_full_evaluation() {
        let data = LabeledDataset::new(
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            vec![-1, 1, -1, 1],
            None,
        )
        .unwrap();
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(0.7, DecisionStump::new(0, 0.5, Orientation::RightPositive));
        ensemble.push(0.3, DecisionStump::new(0, 2.5, Orientation::LeftPositive));
        ensemble.push(0.2, DecisionStump::new(0, 1.5, Orientation::RightPositive));
        let eval = evaluate_labeled(&ensemble, &data, true).unwrap();
        let curve = eval.curve.unwrap();
        assert_eq!(curve.len(), 3);
        assert_eq!(curve.last().unwrap().report, eval.report);
    }

    #[test]
    fn feature_usage_counts() {
        let mut ensemble = Ensemble::empty(0.5);
        assert_eq!(feature_usage(&ensemble, 3).unwrap().counts, vec![0, 0, 0]);
        ensemble.push(1.0, DecisionStump::new(0, 0.5, Orientation::LeftPositive));
        ensemble.push(1.0, DecisionStump::new(0, 1.5, Orientation::RightPositive));
        ensemble.push(1.0, DecisionStump::new(2, 0.0, Orientation::LeftPositive));
        let usage = feature_usage(&ensemble, 3).unwrap();
        assert_eq!(usage.counts, vec![2, 0, 1]);
        assert_eq!(usage.counts.iter().sum::<usize>(), ensemble.len());
        assert!(feature_usage(&ensemble, 2).is_err());
    }

    #[test]
    fn aggregate_two_point_formula() {
        let reports = [
            EvalReport {
                accuracy: Some(0.8),
                zero_one_loss: Some(0.2),
                ..Default::default()
            },
            EvalReport {
                accuracy: Some(0.9),
                zero_one_loss: Some(0.1),
                ..Default::default()
            },
        ];
        let agg = aggregate_trials(&reports).unwrap();
        let acc = agg.accuracy.unwrap();
        assert_relative_eq!(acc.mean, 0.85, max_relative = 1e-12);
        assert_relative_eq!(acc.std, 0.05_f64 * 2.0_f64.sqrt(), max_relative = 1e-12);
        assert!(agg.positives_as_positive_rate.is_none());
    }

    #[test]
    fn aggregate_identical_reports_zero_std() {
        let r = EvalReport {
            accuracy: Some(0.75),
            ..Default::default()
        };
        let agg = aggregate_trials(&[r, r, r]).unwrap();
        assert_eq!(agg.accuracy.unwrap().std, 0.0);
        let single = aggregate_trials(&[r]).unwrap();
        assert_eq!(single.accuracy.unwrap().std, 0.0);
        assert!(aggregate_trials(&[]).is_err());
    }
}
