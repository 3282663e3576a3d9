//! Vote aggregation: class-accuracy weights, per-step vote series under
//! every weighting scheme, ensemble decisions, and window-to-unit-section
//! expansion.

use crate::types::{
    AccuracyBasis, ModelMeta, MoodId, Power, PredictionMatrix, VoteSeries, WeightKind,
    WeightingScheme,
};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("interval length list is empty")]
    EmptyList,
    #[error("expected {expected} windows for interval length {interval}, got {got}")]
    WindowCountMismatch {
        interval: usize,
        expected: usize,
        got: usize,
    },
    #[error("interval length {interval} exceeds the {n} unit sections")]
    IntervalTooLarge { interval: usize, n: usize },
    #[error("metadata covers {meta} models but the matrix has {matrix}")]
    MetaMismatch { meta: usize, matrix: usize },
    #[error("metadata row {index} is for model {meta_id:?}, matrix row is {matrix_id:?}")]
    MetaOrderMismatch {
        index: usize,
        meta_id: String,
        matrix_id: String,
    },
    #[error("normalization impossible: step {step} has zero total weight")]
    ZeroTotalStep { step: usize },
    #[error(transparent)]
    Core(#[from] crate::types::CoreError),
}

/// How window-level predictions are translated to unit sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpandPolicy {
    /// Each section takes the plurality mood among the windows covering it;
    /// ties go to the window whose center is nearest the section's center,
    /// remaining ties to canonical mood order.
    #[default]
    MajorityOverlap,
    /// Section j takes the window starting at j, clamped to the last window.
    WindowStart,
    /// Section j takes the window whose center is nearest to j's center;
    /// equidistant pairs resolve to the earlier window.
    WindowCenter,
}

/// The unit-section length: greatest common divisor of all interval lengths.
pub fn unit_section_length(interval_lengths: &[u32]) -> Result<u32, AggregateError> {
    let mut iter = interval_lengths.iter();
    let first = *iter.next().ok_or(AggregateError::EmptyList)?;
    Ok(iter.fold(first, |acc, &x| gcd(acc, x)))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Expands stride-1 window predictions (one per window start) to one
/// prediction per unit section.
///
/// Windows are 1-based: window w covers sections w..w+L-1, so there must be
/// exactly n - L + 1 of them.
pub fn expand_windows(
    window_preds: &[MoodId],
    interval_len: usize,
    n: usize,
    k: usize,
    policy: ExpandPolicy,
) -> Result<Vec<MoodId>, AggregateError> {
    let l = interval_len;
    if l < 1 || l > n {
        return Err(AggregateError::IntervalTooLarge { interval: l, n });
    }
    let expected = n - l + 1;
    if window_preds.len() != expected {
        return Err(AggregateError::WindowCountMismatch {
            interval: l,
            expected,
            got: window_preds.len(),
        });
    }
    let last_window = expected; // 1-based index of the final window
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let w_lo = j.saturating_sub(l - 1).max(1);
        let w_hi = j.min(last_window);
        let section = match policy {
            ExpandPolicy::WindowStart => window_preds[j.min(last_window) - 1],
            ExpandPolicy::WindowCenter => {
                // doubled center of window w is 2w + L - 1; of section j, 2j
                let mut best = w_lo;
                let mut best_dist = dist2(w_lo, l, j);
                for w in w_lo + 1..=w_hi {
                    let d = dist2(w, l, j);
                    if d < best_dist {
                        best = w;
                        best_dist = d;
                    }
                }
                window_preds[best - 1]
            }
            ExpandPolicy::MajorityOverlap => {
                let mut counts = vec![0u32; k];
                for w in w_lo..=w_hi {
                    counts[window_preds[w - 1].index()] += 1;
                }
                let max = *counts.iter().max().expect("k >= 1");
                let tied: Vec<usize> = (0..k).filter(|&c| counts[c] == max).collect();
                if tied.len() == 1 {
                    MoodId::new(tied[0])
                } else {
                    // nearest-center votes among the tied moods only
                    let mut best_dist = u64::MAX;
                    let mut nearest = vec![false; k];
                    for w in w_lo..=w_hi {
                        let c = window_preds[w - 1].index();
                        if counts[c] != max {
                            continue;
                        }
                        let d = dist2(w, l, j);
                        if d < best_dist {
                            best_dist = d;
                            nearest.iter_mut().for_each(|f| *f = false);
                            nearest[c] = true;
                        } else if d == best_dist {
                            nearest[c] = true;
                        }
                    }
                    MoodId::new((0..k).find(|&c| nearest[c]).expect("some window is nearest"))
                }
            }
        };
        out.push(section);
    }
    Ok(out)
}

/// Doubled distance between window w's center and section j's center.
fn dist2(w: usize, l: usize, j: usize) -> u64 {
    let wc = (2 * w + l - 1) as i64;
    (wc - 2 * j as i64).unsigned_abs()
}

/// Per-class reliability of one model, read off its confusion matrix.
///
/// A zero denominator (a class the model never predicts, or that never
/// occurs) yields 0: the model contributes nothing for a class it cannot
/// assess.
pub fn class_accuracy(meta: &ModelMeta, basis: AccuracyBasis) -> Vec<f64> {
    let k = meta.confusion.k();
    (0..k)
        .map(|c| {
            let diag = meta.confusion.get(c, c) as f64;
            let denom = match basis {
                AccuracyBasis::PredictedClassPrecision => meta.confusion.col_sum(c),
                AccuracyBasis::TrueClassRecall => meta.confusion.row_sum(c),
            } as f64;
            if denom == 0.0 {
                0.0
            } else {
                diag / denom
            }
        })
        .collect()
}

/// Macro-averaged F1 score from the confusion matrix.
pub fn macro_f1(meta: &ModelMeta) -> f64 {
    let k = meta.confusion.k();
    let mut sum = 0.0;
    for c in 0..k {
        let tp = meta.confusion.get(c, c) as f64;
        let col = meta.confusion.col_sum(c) as f64;
        let row = meta.confusion.row_sum(c) as f64;
        let p = if col == 0.0 { 0.0 } else { tp / col };
        let r = if row == 0.0 { 0.0 } else { tp / row };
        if p + r > 0.0 {
            sum += 2.0 * p * r / (p + r);
        }
    }
    sum / k as f64
}

/// Per-model, per-class class-accuracy weights: `alpha` before the power,
/// `effective` after it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    m: usize,
    k: usize,
    alpha: Vec<f64>,
    effective: Vec<f64>,
    pub basis: AccuracyBasis,
    pub power: Power,
}

impl WeightTable {
    pub fn new(meta: &[ModelMeta], basis: AccuracyBasis, power: Power) -> Self {
        let k = meta.first().map(|m| m.confusion.k()).unwrap_or(0);
        let mut alpha = Vec::with_capacity(meta.len() * k);
        for m in meta {
            alpha.extend(class_accuracy(m, basis));
        }
        let effective = alpha.iter().map(|&a| power.apply(a)).collect();
        WeightTable {
            m: meta.len(),
            k,
            alpha,
            effective,
            basis,
            power,
        }
    }

    pub fn n_models(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Class-accuracy of `model` for `class`, before the power.
    pub fn alpha(&self, model: usize, class: usize) -> f64 {
        self.alpha[model * self.k + class]
    }

    /// Weight actually applied to a vote of `model` for `class`.
    pub fn effective(&self, model: usize, class: usize) -> f64 {
        self.effective[model * self.k + class]
    }
}

/// The m-by-k matrix of weights a scheme applies: entry (i, c) is the weight
/// of model i's vote when it predicts class c.
pub fn effective_weights(meta: &[ModelMeta], k: usize, scheme: &WeightingScheme) -> Vec<f64> {
    let mut weights = Vec::with_capacity(meta.len() * k);
    match scheme.kind {
        WeightKind::Unweighted => weights.resize(meta.len() * k, 1.0),
        WeightKind::ClassAccuracyPower(power) => {
            for m in meta {
                weights.extend(class_accuracy(m, scheme.basis).iter().map(|&a| power.apply(a)));
            }
        }
        WeightKind::OverallAccuracy => {
            for m in meta {
                weights.extend(std::iter::repeat(m.overall_accuracy).take(k));
            }
        }
        WeightKind::OverallAccuracySquared => {
            for m in meta {
                weights.extend(std::iter::repeat(Power::Two.apply(m.overall_accuracy)).take(k));
            }
        }
        WeightKind::MacroF1 => {
            for m in meta {
                weights.extend(std::iter::repeat(macro_f1(m)).take(k));
            }
        }
    }
    weights
}

fn step_column(pm: &PredictionMatrix, weights: &[f64], k: usize, step: usize) -> Vec<f64> {
    let mut col = vec![0.0f64; k];
    for model in 0..pm.n_models() {
        let c = pm.cell(model, step).index();
        col[c] += weights[model * k + c];
    }
    col
}

/// Per-step vote columns under an explicit weight matrix, sequential path.
///
/// Returns n columns of k values each.
pub fn raw_votes_seq(pm: &PredictionMatrix, weights: &[f64], k: usize) -> Vec<Vec<f64>> {
    (0..pm.n_steps())
        .map(|t| step_column(pm, weights, k, t))
        .collect()
}

/// Parallel twin of [`raw_votes_seq`]; steps are independent, so the result
/// is identical.
#[cfg(feature = "parallel")]
pub fn raw_votes_par(pm: &PredictionMatrix, weights: &[f64], k: usize) -> Vec<Vec<f64>> {
    (0..pm.n_steps())
        .into_par_iter()
        .map(|t| step_column(pm, weights, k, t))
        .collect()
}

/// Per-step vote columns under an explicit weight matrix.
pub fn raw_votes(pm: &PredictionMatrix, weights: &[f64], k: usize) -> Vec<Vec<f64>> {
    #[cfg(feature = "parallel")]
    {
        raw_votes_par(pm, weights, k)
    }
    #[cfg(not(feature = "parallel"))]
    {
        raw_votes_seq(pm, weights, k)
    }
}

fn check_meta(pm: &PredictionMatrix, meta: &[ModelMeta]) -> Result<(), AggregateError> {
    if meta.len() != pm.n_models() {
        return Err(AggregateError::MetaMismatch {
            meta: meta.len(),
            matrix: pm.n_models(),
        });
    }
    for (i, (m, id)) in meta.iter().zip(pm.model_ids()).enumerate() {
        if &m.model_id != id {
            return Err(AggregateError::MetaOrderMismatch {
                index: i,
                meta_id: m.model_id.clone(),
                matrix_id: id.clone(),
            });
        }
    }
    Ok(())
}

/// Sums every model's (weighted) vote per mood per step.
///
/// The result satisfies per-step conservation: the mood totals add up to the
/// summed applied weights. Normalized schemes rescale each step to total 1
/// and fail with [`AggregateError::ZeroTotalStep`] if a step carries no
/// weight at all.
pub fn aggregate_votes(
    pm: &PredictionMatrix,
    meta: &[ModelMeta],
    k: usize,
    scheme: &WeightingScheme,
) -> Result<VoteSeries, AggregateError> {
    check_meta(pm, meta)?;
    let weights = effective_weights(meta, k, scheme);
    let mut cols = raw_votes(pm, &weights, k);
    if scheme.normalized {
        for (t, col) in cols.iter_mut().enumerate() {
            let total: f64 = col.iter().sum();
            if total == 0.0 {
                return Err(AggregateError::ZeroTotalStep { step: t + 1 });
            }
            for v in col.iter_mut() {
                *v /= total;
            }
        }
    }
    let n = pm.n_steps();
    let per_mood: Vec<Vec<f64>> = (0..k).map(|c| (0..n).map(|t| cols[t][c]).collect()).collect();
    let expected = if scheme.normalized {
        Some(1.0)
    } else if scheme.kind == WeightKind::Unweighted {
        Some(pm.n_models() as f64)
    } else {
        None
    };
    Ok(VoteSeries::new(per_mood, *scheme, expected)?)
}

/// Per-step winning mood over a raw k-by-n vote matrix.
///
/// Ties prefer the previous step's decision when it is among the tied moods,
/// else the canonical mood order.
pub fn decide_all(per_mood: &[Vec<f64>]) -> Vec<MoodId> {
    let k = per_mood.len();
    let n = per_mood.first().map(|row| row.len()).unwrap_or(0);
    let mut out = Vec::with_capacity(n);
    let mut prev: Option<MoodId> = None;
    for t in 0..n {
        let max = (0..k)
            .map(|c| per_mood[c][t])
            .fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..k).filter(|&c| per_mood[c][t] == max).collect();
        let winner = match prev {
            Some(p) if tied.contains(&p.index()) => p,
            _ => MoodId::new(tied[0]),
        };
        out.push(winner);
        prev = Some(winner);
    }
    out
}

/// The ensemble's decision at 1-based step `t`: the argmax mood of the vote
/// series, with temporal-stability tie-breaking.
pub fn ensemble_decision(vs: &VoteSeries, t: usize) -> MoodId {
    assert!(t >= 1 && t <= vs.n_steps(), "step {t} out of range");
    decide_all(vs.per_mood())[t - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{ConfusionMatrix, MoodSet};

    fn meta_with_confusion(id: &str, counts: Vec<u64>, k: usize) -> ModelMeta {
        ModelMeta::new(
            id.to_string(),
            "DT".to_string(),
            1,
            0.5,
            ConfusionMatrix::new(k, counts).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn unit_section_length_single_and_range() {
        assert_eq!(unit_section_length(&[6]).unwrap(), 6);
        let all: Vec<u32> = (1..=30).collect();
        assert_eq!(unit_section_length(&all).unwrap(), 1);
        assert!(matches!(
            unit_section_length(&[]),
            Err(AggregateError::EmptyList)
        ));
    }

    #[test]
    fn unit_section_length_matches_divisor_search_oracle() {
        // independent oracle: largest d dividing every element
        let oracle = |xs: &[u32]| {
            let min = *xs.iter().min().unwrap();
            (1..=min).rev().find(|d| xs.iter().all(|x| x % d == 0)).unwrap()
        };
        let cases: [&[u32]; 4] = [&[4, 6, 10], &[9, 12], &[7, 13], &[30, 20, 10]];
        for xs in cases {
            assert_eq!(unit_section_length(xs).unwrap(), oracle(xs));
        }
        // frozen from the oracle
        assert_eq!(unit_section_length(&[4, 6, 10]).unwrap(), 2);
    }

    #[test]
    fn expand_identity_when_interval_is_one() {
        let preds = vec![MoodId(1), MoodId(3), MoodId(0)];
        for policy in [
            ExpandPolicy::MajorityOverlap,
            ExpandPolicy::WindowStart,
            ExpandPolicy::WindowCenter,
        ] {
            assert_eq!(expand_windows(&preds, 1, 3, 4, policy).unwrap(), preds);
        }
    }

    #[test]
    fn expand_single_window_fills_everything() {
        let out = expand_windows(&[MoodId(2)], 5, 5, 4, ExpandPolicy::MajorityOverlap).unwrap();
        assert_eq!(out, vec![MoodId(2); 5]);
    }

    #[test]
    fn expand_two_windows_breaks_tie_by_canonical_order() {
        // windows: w1=[angry over sections 1-2], w2=[calm over sections 2-3];
        // section 2 is a 1-1 tie with both window centers equidistant, so the
        // canonical order (angry before calm) wins.
        let out = expand_windows(
            &[MoodId(1), MoodId(3)],
            2,
            3,
            4,
            ExpandPolicy::MajorityOverlap,
        )
        .unwrap();
        assert_eq!(out, vec![MoodId(1), MoodId(1), MoodId(3)]);
    }

    #[test]
    fn expand_majority_matches_coverage_enumeration_oracle() {
        // oracle: enumerate coverage explicitly for a hand-built case
        // windows (L=3, n=6): w1..w4 predict [a, a, c, c] (ids 1 and 3)
        // coverage: s1:{w1} s2:{w1,w2} s3:{w1,w2,w3} s4:{w2,w3,w4} s5:{w3,w4} s6:{w4}
        // s3: a=2 c=1 -> a; s4: a=1 c=2 -> c
        let preds = vec![MoodId(1), MoodId(1), MoodId(3), MoodId(3)];
        let out = expand_windows(&preds, 3, 6, 4, ExpandPolicy::MajorityOverlap).unwrap();
        assert_eq!(
            out,
            vec![MoodId(1), MoodId(1), MoodId(1), MoodId(3), MoodId(3), MoodId(3)]
        );
    }

    #[test]
    fn expand_validates_window_count_and_interval() {
        assert!(matches!(
            expand_windows(&[MoodId(0)], 2, 3, 4, ExpandPolicy::MajorityOverlap),
            Err(AggregateError::WindowCountMismatch { expected: 2, got: 1, .. })
        ));
        assert!(matches!(
            expand_windows(&[MoodId(0)], 4, 3, 4, ExpandPolicy::MajorityOverlap),
            Err(AggregateError::IntervalTooLarge { interval: 4, n: 3 })
        ));
    }

    #[test]
    fn class_accuracy_perfect_classifier_is_one_everywhere() {
        let m = meta_with_confusion("m", vec![5, 0, 0, 0, 0, 5, 0, 0, 0, 0, 5, 0, 0, 0, 0, 5], 4);
        assert_eq!(
            class_accuracy(&m, AccuracyBasis::PredictedClassPrecision),
            vec![1.0; 4]
        );
        assert_eq!(class_accuracy(&m, AccuracyBasis::TrueClassRecall), vec![1.0; 4]);
    }

    #[test]
    fn class_accuracy_two_mood_example() {
        // oracle = direct arithmetic from the definition:
        // precision: diag/col = [8/11, 7/9]; recall: diag/row = [8/10, 7/10]
        let m = meta_with_confusion("m", vec![8, 2, 3, 7], 2);
        let prec = class_accuracy(&m, AccuracyBasis::PredictedClassPrecision);
        assert_eq!(prec, vec![8.0 / 11.0, 7.0 / 9.0]);
        let rec = class_accuracy(&m, AccuracyBasis::TrueClassRecall);
        assert_eq!(rec, vec![0.8, 0.7]);
    }

    #[test]
    fn class_accuracy_zero_column_yields_zero() {
        // model never predicts class 0
        let m = meta_with_confusion("m", vec![0, 5, 0, 5], 2);
        let prec = class_accuracy(&m, AccuracyBasis::PredictedClassPrecision);
        assert_eq!(prec[0], 0.0);
    }

    #[test]
    fn macro_f1_perfect_is_one() {
        let m = meta_with_confusion("m", vec![3, 0, 0, 3], 2);
        assert_eq!(macro_f1(&m), 1.0);
    }

    fn tiny_bundle(preds: &[[u16; 1]], k: usize) -> (PredictionMatrix, Vec<ModelMeta>) {
        let ids: Vec<String> = (0..preds.len()).map(|i| format!("m{i}")).collect();
        let cells: Vec<MoodId> = preds.iter().map(|row| MoodId(row[0])).collect();
        let pm = PredictionMatrix::new(ids.clone(), 1, cells, k).unwrap();
        let meta = ids
            .iter()
            .map(|id| meta_with_confusion(id, vec![1; k * k], k))
            .collect();
        (pm, meta)
    }

    #[test]
    fn aggregate_unweighted_counts_votes() {
        // 3 models voting (angry, calm, calm); oracle = direct counting
        let (pm, meta) = tiny_bundle(&[[1], [3], [3]], 4);
        let vs = aggregate_votes(&pm, &meta, 4, &WeightingScheme::unweighted()).unwrap();
        assert_eq!(vs.value(MoodId(0), 0), 0.0);
        assert_eq!(vs.value(MoodId(1), 0), 1.0);
        assert_eq!(vs.value(MoodId(2), 0), 0.0);
        assert_eq!(vs.value(MoodId(3), 0), 2.0);
        assert_eq!(vs.totals(), &[3.0]);
    }

    #[test]
    fn aggregate_normalized_sums_to_one() {
        let (pm, meta) = tiny_bundle(&[[1], [3], [3]], 4);
        let scheme = WeightingScheme::class_accuracy(Power::Two, AccuracyBasis::default())
            .with_normalized(true);
        let vs = aggregate_votes(&pm, &meta, 4, &scheme).unwrap();
        assert!((vs.totals()[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn aggregate_normalized_zero_step_fails() {
        // every model has zero class-accuracy for what it predicts
        let ids = vec!["a".to_string()];
        let pm = PredictionMatrix::new(ids, 1, vec![MoodId(0)], 2).unwrap();
        let meta = vec![meta_with_confusion("a", vec![0, 5, 0, 5], 2)];
        let scheme = WeightingScheme::class_accuracy(Power::One, AccuracyBasis::default())
            .with_normalized(true);
        assert!(matches!(
            aggregate_votes(&pm, &meta, 2, &scheme),
            Err(AggregateError::ZeroTotalStep { step: 1 })
        ));
    }

    #[test]
    fn aggregate_rejects_meta_mismatch() {
        let (pm, mut meta) = tiny_bundle(&[[1], [3]], 4);
        meta.pop();
        assert!(matches!(
            aggregate_votes(&pm, &meta, 4, &WeightingScheme::unweighted()),
            Err(AggregateError::MetaMismatch { .. })
        ));
    }

    #[test]
    fn decision_takes_argmax() {
        // oracle = linear scan max over (3, 5, 1, 1)
        let vs = VoteSeries::new(
            vec![vec![3.0], vec![5.0], vec![1.0], vec![1.0]],
            WeightingScheme::unweighted(),
            None,
        )
        .unwrap();
        assert_eq!(ensemble_decision(&vs, 1), MoodId(1));
    }

    #[test]
    fn decision_unanimous() {
        let (pm, meta) = tiny_bundle(&[[1], [1], [1]], 4);
        let vs = aggregate_votes(&pm, &meta, 4, &WeightingScheme::unweighted()).unwrap();
        assert_eq!(ensemble_decision(&vs, 1), MoodId(1));
    }

    #[test]
    fn decision_tie_prefers_previous_step() {
        let vs = VoteSeries::new(
            vec![vec![1.0, 2.0], vec![2.0, 2.0], vec![0.0, 0.0]],
            WeightingScheme::unweighted(),
            None,
        )
        .unwrap();
        // step 1: mood 1 wins outright; step 2: tie 0-1 keeps mood 1
        assert_eq!(ensemble_decision(&vs, 1), MoodId(1));
        assert_eq!(ensemble_decision(&vs, 2), MoodId(1));
    }

    #[test]
    fn precision_weights_flip_a_one_one_tie() {
        // Model A predicts delighted with precision 0.4, model B predicts
        // angry with precision 0.9. Unweighted it is a 1-1 tie resolved to
        // delighted by canonical order; precision-weighted, angry wins.
        // Oracle: brute force over both weightings by hand.
        let moods = MoodSet::default_four();
        let k = moods.len();
        let a = ModelMeta::new(
            "a".into(),
            "DT".into(),
            1,
            0.5,
            // col 0 sum = 10, diag 4 -> precision(delighted) = 0.4
            ConfusionMatrix::new(
                4,
                vec![4, 0, 0, 0, 2, 1, 0, 0, 2, 0, 1, 0, 2, 0, 0, 1],
            )
            .unwrap(),
        )
        .unwrap();
        let b = ModelMeta::new(
            "b".into(),
            "DT".into(),
            1,
            0.5,
            // col 1 sum = 10, diag 9 -> precision(angry) = 0.9
            ConfusionMatrix::new(
                4,
                vec![1, 1, 0, 0, 0, 9, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
            )
            .unwrap(),
        )
        .unwrap();
        let pm = PredictionMatrix::new(
            vec!["a".into(), "b".into()],
            1,
            vec![MoodId(0), MoodId(1)],
            k,
        )
        .unwrap();
        let meta = vec![a, b];

        let unweighted = aggregate_votes(&pm, &meta, k, &WeightingScheme::unweighted()).unwrap();
        assert_eq!(ensemble_decision(&unweighted, 1), MoodId(0));

        let weighted = aggregate_votes(
            &pm,
            &meta,
            k,
            &WeightingScheme::class_accuracy(Power::One, AccuracyBasis::PredictedClassPrecision),
        )
        .unwrap();
        assert_eq!(weighted.value(MoodId(0), 0), 0.4);
        assert_eq!(weighted.value(MoodId(1), 0), 0.9);
        assert_eq!(ensemble_decision(&weighted, 1), MoodId(1));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_votes_match_sequential_exactly() {
        let ids: Vec<String> = (0..13).map(|i| format!("m{i:02}")).collect();
        let cells: Vec<MoodId> = (0..13 * 17).map(|i| MoodId((i % 4) as u16)).collect();
        let pm = PredictionMatrix::new(ids, 17, cells, 4).unwrap();
        let weights: Vec<f64> = (0..13 * 4).map(|i| (i % 7) as f64 / 7.0).collect();
        assert_eq!(
            raw_votes_seq(&pm, &weights, 4),
            raw_votes_par(&pm, &weights, 4)
        );
    }
}
