//! Signed-weight view of positive-unlabeled data and the error/loss
//! estimators that drive stump selection and evaluation.
//!
//! A PU sample (positives P, unlabeled U, prior pi) is recast as one weighted
//! and fully labeled set with three groups: every positive appears once with
//! target +1 and weight pi/n_p, every unlabeled example appears with target
//! -1 and weight 1/n_u, and every positive appears a second time (the
//! "mirror" copy) with target -1 and weight -pi/n_p. Mirror weights are
//! negative and stay negative: boosting updates only ever multiply a weight
//! by a strictly positive factor.

use ndarray::ArrayView2;

use crate::booster::Ensemble;
use crate::dataset::PUDataset;
use crate::error::{Error, Result};
use crate::stump::DecisionStump;

/// The three groups of the derived weighted set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleGroup {
    /// Positives with target +1.
    Positive,
    /// Unlabeled examples with target -1.
    Unlabeled,
    /// Negative-weight copies of the positives with target -1.
    PositiveMirror,
}

/// Compensated (Kahan) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

/// Kahan sum of a slice, in slice order.
pub(crate) fn kahan_sum(values: &[f64]) -> f64 {
    let mut acc = KahanSum::default();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Per-group misclassified-weight fractions. Within a group all weights share
/// one sign, so each fraction lies in [0, 1]; a group of total weight exactly
/// zero reports 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupErrors {
    pub positive: f64,
    pub unlabeled: f64,
    pub positive_mirror: f64,
}

/// Everything a stump's performance on a weighted view reduces to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Total signed weight of misclassified examples.
    pub misclassified_weight: f64,
    /// Total signed weight of the view.
    pub total_weight: f64,
    /// misclassified_weight / total_weight (over-all normalization).
    pub total_error: f64,
    /// Misclassified weight restricted to the target -1 groups, over the total.
    pub negative_error: f64,
    /// prior-balanced combination of per-group errors (per-group normalization).
    pub balanced_error: f64,
    /// The target -1 part of `balanced_error`.
    pub balanced_negative_error: f64,
    pub group_errors: GroupErrors,
}

/// Weighted three-group view over borrowed instance storage. The positive
/// and mirror groups share the same rows of `positives`; only their targets
/// and weights differ.
#[derive(Debug, Clone)]
pub struct SignedWeightedView<'a> {
    positives: ArrayView2<'a, f64>,
    unlabeled: ArrayView2<'a, f64>,
    prior: f64,
    pos_weights: Vec<f64>,
    unl_weights: Vec<f64>,
    mirror_weights: Vec<f64>,
}

/// Initial signed-weight view of a PU dataset: pi/n_p on positives, 1/n_u on
/// unlabeled, -pi/n_p on the mirror copies.
pub fn build_view(pu: &PUDataset) -> SignedWeightedView<'_> {
    let n_p = pu.n_positive();
    let n_u = pu.n_unlabeled();
    let w_pos = pu.prior / n_p as f64;
    let w_unl = 1.0 / n_u as f64;
    SignedWeightedView {
        positives: pu.positives.view(),
        unlabeled: pu.unlabeled.view(),
        prior: pu.prior,
        pos_weights: vec![w_pos; n_p],
        unl_weights: vec![w_unl; n_u],
        mirror_weights: vec![-w_pos; n_p],
    }
}

impl<'a> SignedWeightedView<'a> {
    /// View over an ordinary labeled sample: positives with target +1,
    /// negatives with target -1, uniform weight 1/n, and no mirror group.
    /// This is the shape the fully supervised baseline trains on.
    pub fn plain_labeled(
        positives: ArrayView2<'a, f64>,
        negatives: ArrayView2<'a, f64>,
        prior: f64,
    ) -> Self {
        let n = positives.nrows() + negatives.nrows();
        let w = 1.0 / n as f64;
        SignedWeightedView {
            positives,
            unlabeled: negatives,
            prior,
            pos_weights: vec![w; positives.nrows()],
            unl_weights: vec![w; negatives.nrows()],
            mirror_weights: Vec::new(),
        }
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn n_positive(&self) -> usize {
        self.positives.nrows()
    }

    pub fn n_unlabeled(&self) -> usize {
        self.unlabeled.nrows()
    }

    /// Distinct instances (positives + unlabeled); mirror copies share rows.
    pub fn n_instances(&self) -> usize {
        self.n_positive() + self.n_unlabeled()
    }

    /// View examples including mirror copies.
    pub fn n_examples(&self) -> usize {
        self.pos_weights.len() + self.unl_weights.len() + self.mirror_weights.len()
    }

    pub fn n_features(&self) -> usize {
        self.positives.ncols()
    }

    pub fn has_mirror(&self) -> bool {
        !self.mirror_weights.is_empty()
    }

    pub fn pos_weights(&self) -> &[f64] {
        &self.pos_weights
    }

    pub fn unl_weights(&self) -> &[f64] {
        &self.unl_weights
    }

    pub fn mirror_weights(&self) -> &[f64] {
        &self.mirror_weights
    }

    /// Feature value of a distinct instance; ids below `n_positive` address
    /// the positives, the rest address the unlabeled pool.
    pub fn instance_value(&self, instance: usize, feature: usize) -> f64 {
        let n_p = self.n_positive();
        if instance < n_p {
            self.positives[[instance, feature]]
        } else {
            self.unlabeled[[instance - n_p, feature]]
        }
    }

    /// Group of a distinct instance (mirror copies are not distinct instances).
    pub fn instance_is_positive(&self, instance: usize) -> bool {
        instance < self.n_positive()
    }

    /// Replace the weight vectors, e.g. to restore a snapshot or to test a
    /// mid-training state. Lengths must match and signs must respect the
    /// group structure: positive on the +1 and unlabeled groups, negative on
    /// the mirror group.
    pub fn set_weights(
        &mut self,
        pos_weights: Vec<f64>,
        unl_weights: Vec<f64>,
        mirror_weights: Vec<f64>,
    ) -> Result<()> {
        if pos_weights.len() != self.pos_weights.len()
            || unl_weights.len() != self.unl_weights.len()
            || mirror_weights.len() != self.mirror_weights.len()
        {
            return Err(Error::InvalidData("weight vector length mismatch".into()));
        }
        if pos_weights
            .iter()
            .chain(unl_weights.iter())
            .any(|w| *w <= 0.0 || !w.is_finite())
            || mirror_weights.iter().any(|w| *w >= 0.0 || !w.is_finite())
        {
            return Err(Error::InvalidData(
                "weights must be finite, positive off the mirror group and negative on it".into(),
            ));
        }
        self.pos_weights = pos_weights;
        self.unl_weights = unl_weights;
        self.mirror_weights = mirror_weights;
        Ok(())
    }

    /// Multiply every weight by a constant. Selection, per-group errors and
    /// the sign of the weight total are invariant for any c > 0.
    pub fn scale_weights(&mut self, c: f64) {
        for w in self
            .pos_weights
            .iter_mut()
            .chain(self.unl_weights.iter_mut())
            .chain(self.mirror_weights.iter_mut())
        {
            *w *= c;
        }
    }

    /// Sum of absolute weights (always > 0 for a live view).
    pub fn abs_weight_sum(&self) -> f64 {
        let mut acc = KahanSum::default();
        for w in self
            .pos_weights
            .iter()
            .chain(self.unl_weights.iter())
            .chain(self.mirror_weights.iter())
        {
            acc.add(w.abs());
        }
        acc.value()
    }

    /// Per-group signed weight totals, Kahan-summed in storage order.
    pub fn group_totals(&self) -> (f64, f64, f64) {
        (
            kahan_sum(&self.pos_weights),
            kahan_sum(&self.unl_weights),
            kahan_sum(&self.mirror_weights),
        )
    }

    /// Total signed weight of the view.
    pub fn total_weight(&self) -> f64 {
        let (p, u, m) = self.group_totals();
        (p + u) + m
    }

    /// Score a stump against the current weights.
    ///
    /// All group sums use compensated summation in storage order; the
    /// combined errors are assembled from the group terms with the fixed
    /// expressions documented on `ErrorReport`. When the total weight is
    /// zero, the over-all ratios are not finite; callers selecting under
    /// over-all normalization must require a positive total first.
    pub fn score_stump(&self, stump: &DecisionStump) -> ErrorReport {
        let mut mis_pos = KahanSum::default();
        let mut tot_pos = KahanSum::default();
        let mut mis_unl = KahanSum::default();
        let mut tot_unl = KahanSum::default();
        let mut mis_mirror = KahanSum::default();
        let mut tot_mirror = KahanSum::default();

        for (i, &w) in self.pos_weights.iter().enumerate() {
            tot_pos.add(w);
            if stump.predict_value(self.positives[[i, stump.feature]]) != 1 {
                mis_pos.add(w);
            }
        }
        for (j, &w) in self.unl_weights.iter().enumerate() {
            tot_unl.add(w);
            if stump.predict_value(self.unlabeled[[j, stump.feature]]) == 1 {
                mis_unl.add(w);
            }
        }
        for (i, &w) in self.mirror_weights.iter().enumerate() {
            tot_mirror.add(w);
            if stump.predict_value(self.positives[[i, stump.feature]]) == 1 {
                mis_mirror.add(w);
            }
        }

        assemble_report(
            self.prior,
            mis_pos.value(),
            tot_pos.value(),
            mis_unl.value(),
            tot_unl.value(),
            mis_mirror.value(),
            tot_mirror.value(),
        )
    }

    /// Multiply every weight by e^(-effective_alpha * y * h(x)).
    ///
    /// The multiplier is strictly positive, so weight signs are preserved.
    /// Returns the new total weight. Any weight leaving the finite range
    /// aborts with `WeightOverflow`.
    pub fn update_weights(&mut self, stump: &DecisionStump, effective_alpha: f64) -> Result<f64> {
        let up = effective_alpha.exp();
        let down = (-effective_alpha).exp();
        let n_p = self.n_positive();
        for i in 0..n_p {
            let h = stump.predict_value(self.positives[[i, stump.feature]]);
            // target +1: correct predictions shrink the weight
            let (pos_factor, mirror_factor) = if h == 1 { (down, up) } else { (up, down) };
            self.pos_weights[i] *= pos_factor;
            if !self.mirror_weights.is_empty() {
                self.mirror_weights[i] *= mirror_factor;
            }
        }
        for (j, w) in self.unl_weights.iter_mut().enumerate() {
            let h = stump.predict_value(self.unlabeled[[j, stump.feature]]);
            // target -1: a +1 prediction is a miss and grows the weight
            *w *= if h == 1 { up } else { down };
        }
        if self
            .pos_weights
            .iter()
            .chain(self.unl_weights.iter())
            .chain(self.mirror_weights.iter())
            .any(|w| !w.is_finite())
        {
            return Err(Error::WeightOverflow);
        }
        Ok(self.total_weight())
    }
}

/// Build an `ErrorReport` from per-group (misclassified, total) weight sums.
pub(crate) fn assemble_report(
    prior: f64,
    mis_pos: f64,
    tot_pos: f64,
    mis_unl: f64,
    tot_unl: f64,
    mis_mirror: f64,
    tot_mirror: f64,
) -> ErrorReport {
    let group_fraction = |mis: f64, tot: f64| if tot == 0.0 { 0.0 } else { mis / tot };
    let gp = group_fraction(mis_pos, tot_pos);
    let gu = group_fraction(mis_unl, tot_unl);
    let gm = group_fraction(mis_mirror, tot_mirror);
    let misclassified_weight = (mis_pos + mis_unl) + mis_mirror;
    let total_weight = (tot_pos + tot_unl) + tot_mirror;
    ErrorReport {
        misclassified_weight,
        total_weight,
        total_error: misclassified_weight / total_weight,
        negative_error: (mis_unl + mis_mirror) / total_weight,
        balanced_error: prior * gp + gu - prior * gm,
        balanced_negative_error: gu - prior * gm,
        group_errors: GroupErrors {
            positive: gp,
            unlabeled: gu,
            positive_mirror: gm,
        },
    }
}

/// Exponential loss of an ensemble under the view's current weights:
/// sum of w(x, y) * e^(-y * H(x)) over all three groups. Called with a view
/// at its initial weights this is the PU estimate of the expected
/// exponential loss, and it can be negative.
pub fn exp_loss(view: &SignedWeightedView<'_>, ensemble: &Ensemble) -> f64 {
    let mut pos = KahanSum::default();
    let mut unl = KahanSum::default();
    let mut mirror = KahanSum::default();
    for (i, &w) in view.pos_weights.iter().enumerate() {
        let margin = ensemble.score_row(view.positives.row(i));
        pos.add(w * (-margin).exp());
        if !view.mirror_weights.is_empty() {
            mirror.add(view.mirror_weights[i] * margin.exp());
        }
    }
    for (j, &w) in view.unl_weights.iter().enumerate() {
        let margin = ensemble.score_row(view.unlabeled.row(j));
        unl.add(w * margin.exp());
    }
    (pos.value() + unl.value()) + mirror.value()
}

/// PU estimate of the zero-one risk of a classifier:
/// prior * (fraction of P predicted -1) + (fraction of U predicted +1)
/// - prior * (fraction of P predicted +1).
///
/// With `clamp_nonnegative` the last two terms (the negative-class estimate)
/// are floored at zero before the positive term is added. The clamped form
/// is the cross-validation score.
pub fn zero_one_pu_risk(pu: &PUDataset, ensemble: &Ensemble, clamp_nonnegative: bool) -> f64 {
    let n_p = pu.n_positive() as f64;
    let n_u = pu.n_unlabeled() as f64;
    let mut pos_as_pos = 0usize;
    for row in pu.positives.rows() {
        if ensemble.predict_row(row) == 1 {
            pos_as_pos += 1;
        }
    }
    let mut unl_as_pos = 0usize;
    for row in pu.unlabeled.rows() {
        if ensemble.predict_row(row) == 1 {
            unl_as_pos += 1;
        }
    }
    let frac_p_neg = (pu.n_positive() - pos_as_pos) as f64 / n_p;
    let frac_p_pos = pos_as_pos as f64 / n_p;
    let frac_u_pos = unl_as_pos as f64 / n_u;
    let negative_part = frac_u_pos - pu.prior * frac_p_pos;
    if clamp_nonnegative {
        pu.prior * frac_p_neg + negative_part.max(0.0)
    } else {
        pu.prior * frac_p_neg + negative_part
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::booster::Ensemble;
    use crate::stump::{DecisionStump, Orientation};
    use approx::assert_relative_eq;
    use ndarray::{arr2, Array2};

    fn toy_pu() -> PUDataset {
        // positives at x = 5; unlabeled at x = 0 and x = 5
        PUDataset::new(arr2(&[[5.0]]), arr2(&[[0.0], [5.0]]), 0.5).unwrap()
    }

    #[test]
    fn initial_weights_match_prior() {
        let pu = PUDataset::new(
            arr2(&[[0.0], [1.0]]),
            arr2(&[[0.0], [1.0], [2.0], [3.0]]),
            0.5,
        )
        .unwrap();
        let view = build_view(&pu);
        assert_eq!(view.pos_weights(), &[0.25, 0.25]);
        assert_eq!(view.unl_weights(), &[0.25; 4]);
        assert_eq!(view.mirror_weights(), &[-0.25, -0.25]);
        assert_eq!(view.total_weight(), 1.0);
        assert_eq!(view.n_examples(), 8);
    }

    #[test]
    fn initial_positive_weight_is_prior_over_count() {
        let pu = PUDataset::new(
            Array2::from_elem((1000, 1), 0.0),
            Array2::from_elem((175_340, 1), 0.0),
            0.68,
        )
        .unwrap();
        let view = build_view(&pu);
        assert_eq!(view.pos_weights()[0], 0.68 / 1000.0);
        assert_eq!(view.pos_weights()[0], 0.00068);
    }

    #[test]
    fn report_with_empty_misclassified_set_is_zero() {
        // an empty misclassified set zeroes every error, whatever the totals
        let r = assemble_report(0.5, 0.0, 0.5, 0.0, 0.5, 0.0, -0.5);
        assert_eq!(r.misclassified_weight, 0.0);
        assert_eq!(r.balanced_error, 0.0);
        assert_eq!(r.group_errors.positive, 0.0);
        assert_eq!(r.group_errors.unlabeled, 0.0);
        assert_eq!(r.group_errors.positive_mirror, 0.0);
    }

    #[test]
    fn report_with_full_misclassified_set_has_unit_group_errors() {
        // every group fully misclassified: group errors are all 1 and the
        // balanced error telescopes to prior + 1 - prior = 1
        let r = assemble_report(0.5, 0.5, 0.5, 1.0, 1.0, -0.5, -0.5);
        assert_eq!(r.group_errors.positive, 1.0);
        assert_eq!(r.group_errors.unlabeled, 1.0);
        assert_eq!(r.group_errors.positive_mirror, 1.0);
        assert_eq!(r.balanced_error, 1.0);
    }

    #[test]
    fn score_mirror_moves_opposite_to_positive() {
        // a stump that gets the positive right necessarily misses its mirror
        let pu = PUDataset::new(arr2(&[[5.0]]), arr2(&[[0.0], [1.0]]), 0.5).unwrap();
        let view = build_view(&pu);
        let report = view.score_stump(&DecisionStump::new(0, 3.0, Orientation::RightPositive));
        assert_eq!(report.group_errors.positive, 0.0);
        assert_eq!(report.group_errors.unlabeled, 0.0);
        assert_eq!(report.group_errors.positive_mirror, 1.0);
        let flipped = view.score_stump(&DecisionStump::new(0, 3.0, Orientation::LeftPositive));
        assert_eq!(flipped.group_errors.positive, 1.0);
        assert_eq!(flipped.group_errors.unlabeled, 1.0);
        assert_eq!(flipped.group_errors.positive_mirror, 0.0);
        assert_eq!(flipped.balanced_error, 1.5);
    }

    #[test]
    fn score_example_five_element_sum() {
        // Brute-force oracle over the five weighted examples:
        //   P+ [x=5, y=+1, w=0.5]   predicted -1 -> misclassified
        //   U- [x=0, y=-1, w=0.5]   predicted +1 -> misclassified
        //   U- [x=5, y=-1, w=0.5]   predicted -1 -> correct
        //   P- [x=5, y=-1, w=-0.5]  predicted -1 -> correct
        // E = 0.5 + 0.5 = 1.0, Z = 0.5 + 1.0 - 0.5 = 1.0
        // group errors: 1.0, 0.5, 0.0 -> balanced = 0.5*1 + 0.5 - 0.5*0 = 1.0
        let pu = toy_pu();
        let view = build_view(&pu);
        let stump = DecisionStump::new(0, 1.0, Orientation::LeftPositive);
        let report = view.score_stump(&stump);
        assert_eq!(report.misclassified_weight, 1.0);
        assert_eq!(report.total_weight, 1.0);
        assert_eq!(report.balanced_error, 1.0);
        assert_eq!(report.group_errors.positive, 1.0);
        assert_eq!(report.group_errors.unlabeled, 0.5);
        assert_eq!(report.group_errors.positive_mirror, 0.0);
        assert_eq!(report.negative_error, 0.5);
        assert_eq!(report.balanced_negative_error, 0.5);
    }

    #[test]
    fn balanced_error_uses_fixed_expression() {
        let pu = toy_pu();
        let view = build_view(&pu);
        let stump = DecisionStump::new(0, 1.0, Orientation::RightPositive);
        let r = view.score_stump(&stump);
        let g = r.group_errors;
        assert_eq!(
            r.balanced_error,
            view.prior() * g.positive + g.unlabeled - view.prior() * g.positive_mirror
        );
    }

    #[test]
    fn plain_labeled_view_starts_uniform() {
        let positives = arr2(&[[1.0], [2.0]]);
        let negatives = arr2(&[[0.0], [3.0], [4.0]]);
        let view = SignedWeightedView::plain_labeled(positives.view(), negatives.view(), 0.4);
        assert_eq!(view.pos_weights(), &[0.2, 0.2]);
        assert_eq!(view.unl_weights(), &[0.2, 0.2, 0.2]);
        assert!(view.mirror_weights().is_empty());
        assert!(!view.has_mirror());
    }

    #[test]
    fn update_with_zero_alpha_is_identity() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        let before = (
            view.pos_weights().to_vec(),
            view.unl_weights().to_vec(),
            view.mirror_weights().to_vec(),
        );
        let stump = DecisionStump::new(0, 1.0, Orientation::LeftPositive);
        view.update_weights(&stump, 0.0).unwrap();
        assert_eq!(view.pos_weights(), before.0.as_slice());
        assert_eq!(view.unl_weights(), before.1.as_slice());
        assert_eq!(view.mirror_weights(), before.2.as_slice());
    }

    #[test]
    fn update_halves_correct_positive_at_ln2() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        // positive at x=5 predicted +1 (correct): weight is halved
        let stump = DecisionStump::new(0, 1.0, Orientation::RightPositive);
        view.update_weights(&stump, std::f64::consts::LN_2).unwrap();
        assert_relative_eq!(view.pos_weights()[0], 0.25, max_relative = 1e-15);
    }

    #[test]
    fn update_grows_misclassified_mirror_more_negative() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        // mirror copy (y=-1) at x=5 predicted +1 -> misclassified -> factor e^alpha
        let stump = DecisionStump::new(0, 1.0, Orientation::RightPositive);
        let alpha = 0.7;
        view.update_weights(&stump, alpha).unwrap();
        assert_relative_eq!(
            view.mirror_weights()[0],
            -0.5 * alpha.exp(),
            max_relative = 1e-15
        );
        assert!(view.mirror_weights()[0] < -0.5);
    }

    #[test]
    fn update_signs_preserved_and_closed_form() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        let stump_a = DecisionStump::new(0, 1.0, Orientation::RightPositive);
        let stump_b = DecisionStump::new(0, 6.0, Orientation::LeftPositive);
        view.update_weights(&stump_a, 0.4).unwrap();
        view.update_weights(&stump_b, 0.9).unwrap();
        assert!(view.pos_weights().iter().all(|&w| w > 0.0));
        assert!(view.unl_weights().iter().all(|&w| w > 0.0));
        assert!(view.mirror_weights().iter().all(|&w| w < 0.0));
        // closed form w = w1 * e^(-y * H(x)) for the positive instance
        let margin: f64 = 0.4 * 1.0 + 0.9 * 1.0; // both stumps predict +1 at x=5
        assert_relative_eq!(
            view.pos_weights()[0],
            0.5 * (-margin).exp(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            view.mirror_weights()[0],
            -0.5 * margin.exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn exp_loss_of_empty_ensemble_is_total_weight() {
        let pu = toy_pu();
        let view = build_view(&pu);
        let ensemble = Ensemble::empty(0.5);
        assert_eq!(exp_loss(&view, &ensemble), 1.0);
    }

    #[test]
    fn exp_loss_can_go_negative() {
        // one positive at 1, one unlabeled at 0: push margins hard positive on P
        let pu = PUDataset::new(arr2(&[[1.0]]), arr2(&[[0.0]]), 0.5).unwrap();
        let view = build_view(&pu);
        let mut ensemble = Ensemble::empty(0.5);
        ensemble.push(5.0, DecisionStump::new(0, 0.5, Orientation::RightPositive));
        // L = 0.5 e^{-5} + 1.0 e^{-5} - 0.5 e^{5} < 0
        assert!(exp_loss(&view, &ensemble) < 0.0);
    }

    #[test]
    fn zero_one_risk_constant_predictors() {
        let pu = PUDataset::new(arr2(&[[1.0], [2.0]]), arr2(&[[0.0], [1.0], [2.0]]), 0.4).unwrap();
        let all_pos = {
            let mut e = Ensemble::empty(0.4);
            e.push(
                1.0,
                DecisionStump::new(0, -10.0, Orientation::RightPositive),
            );
            e
        };
        let all_neg = {
            let mut e = Ensemble::empty(0.4);
            e.push(1.0, DecisionStump::new(0, -10.0, Orientation::LeftPositive));
            e
        };
        assert_relative_eq!(
            zero_one_pu_risk(&pu, &all_pos, false),
            0.6,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            zero_one_pu_risk(&pu, &all_neg, false),
            0.4,
            max_relative = 1e-15
        );
        // clamping floors the negative-class estimate: 1 - 0.4 stays 0.6
        assert_relative_eq!(
            zero_one_pu_risk(&pu, &all_pos, true),
            0.6,
            max_relative = 1e-15
        );
    }

    #[test]
    fn zero_one_risk_perfect_classifier_on_mixed_unlabeled() {
        // unlabeled pool is 40% positive, prior 0.4; a perfect classifier has
        // unclamped risk 0.4 * 0 + 0.4 - 0.4 * 1 = 0
        let positives = arr2(&[[2.0], [3.0]]);
        let unlabeled = arr2(&[[2.5], [3.5], [-1.0], [-2.0], [-3.0]]);
        // 2 of 5 unlabeled are (secretly) positive = 40%
        let pu = PUDataset::new(positives, unlabeled, 0.4).unwrap();
        let mut perfect = Ensemble::empty(0.4);
        perfect.push(1.0, DecisionStump::new(0, 0.0, Orientation::RightPositive));
        let risk = zero_one_pu_risk(&pu, &perfect, false);
        assert_relative_eq!(risk, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn scale_invariance_of_error_ratios() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        let stump = DecisionStump::new(0, 1.0, Orientation::LeftPositive);
        let before = view.score_stump(&stump);
        view.scale_weights(1e6);
        let after = view.score_stump(&stump);
        assert_relative_eq!(before.total_error, after.total_error, max_relative = 1e-12);
        assert_relative_eq!(
            before.balanced_error,
            after.balanced_error,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            before.misclassified_weight * 1e6,
            after.misclassified_weight,
            max_relative = 1e-12
        );
    }

    #[test]
    fn weight_overflow_detected() {
        let pu = toy_pu();
        let mut view = build_view(&pu);
        let stump = DecisionStump::new(0, 1.0, Orientation::RightPositive);
        view.scale_weights(1e300);
        let result = view.update_weights(&stump, 700.0);
        assert!(matches!(result, Err(Error::WeightOverflow)));
    }
}
