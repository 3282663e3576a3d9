//! Deterministic synthetic-fixture generation, plus the independent
//! brute-force vote-counting oracle the test suites check against.

use crate::aggregate::{expand_windows, ExpandPolicy};
use crate::ingest::Bundle;
use crate::types::{
    AccuracyBasis, ConfusionMatrix, ModelMeta, MoodId, MoodSet, PredictionMatrix, VoteSeries,
    WeightKind, WeightingScheme, DEFAULT_MOOD_LABELS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("m, n, and k must all be at least 1, 1, and 2")]
    BadDimensions,
    #[error("noise {0} is outside [0, 1]")]
    BadNoise(f64),
    #[error("accuracy_spread {0:?} must satisfy 0 <= lo <= hi <= 1")]
    BadSpread((f64, f64)),
    #[error("mood change points must be strictly increasing within [1, n]")]
    BadChangePoints,
    #[error("segment mood id {0} is outside the mood set")]
    BadSegmentMood(u16),
    #[error(transparent)]
    Aggregate(#[from] crate::aggregate::AggregateError),
    #[error(transparent)]
    Ingest(#[from] crate::ingest::IngestError),
    #[error(transparent)]
    Core(#[from] crate::types::CoreError),
}

/// Methods assigned to generated models, cycling in this order.
pub const SYNTH_METHODS: [&str; 7] = [
    "DT", "bagging", "adaboost", "GBDT", "XGBoost", "RF", "gcForest",
];

/// Method quality ranking used to spread model accuracies: weakest first.
const QUALITY_RANK: [&str; 7] = [
    "DT", "adaboost", "bagging", "GBDT", "RF", "XGBoost", "gcForest",
];

/// Extra mood labels used when k exceeds the default four.
const EXTRA_LABELS: [&str; 4] = ["tense", "gentle", "vivid", "dark"];

/// Recipe for one reproducible synthetic bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    /// Number of models.
    pub m: usize,
    /// Number of unit sections.
    pub n: usize,
    /// Number of moods.
    pub k: usize,
    /// 1-based steps where the underlying dominant mood switches.
    #[serde(default)]
    pub mood_change_points: Vec<usize>,
    /// Mood id per segment, cycled; defaults to 1, 2, .., k-1, 0.
    #[serde(default)]
    pub segment_moods: Option<Vec<u16>>,
    /// Probability scale for a model deviating from the underlying mood.
    pub noise: f64,
    /// Range the generated per-model accuracies fall into.
    pub accuracy_spread: (f64, f64),
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.m < 1 || self.n < 1 || self.k < 2 {
            return Err(SynthError::BadDimensions);
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(SynthError::BadNoise(self.noise));
        }
        let (lo, hi) = self.accuracy_spread;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(SynthError::BadSpread(self.accuracy_spread));
        }
        let mut prev = 0usize;
        for &cp in &self.mood_change_points {
            if cp <= prev || cp < 1 || cp > self.n {
                return Err(SynthError::BadChangePoints);
            }
            prev = cp;
        }
        if let Some(moods) = &self.segment_moods {
            for &id in moods {
                if id as usize >= self.k {
                    return Err(SynthError::BadSegmentMood(id));
                }
            }
        }
        Ok(())
    }

    /// The 210-model, 30-step fixture: 7 methods by 30 interval lengths,
    /// with the dominant mood switching from angry to calm mid-piece.
    pub fn appassionata_like() -> Self {
        SynthSpec {
            seed: 57,
            m: 210,
            n: 30,
            k: 4,
            mood_change_points: vec![14],
            segment_moods: Some(vec![1, 3]),
            noise: 0.45,
            accuracy_spread: (0.35, 0.75),
        }
    }
}

/// Mood labels for a k-mood synthetic set.
fn synth_labels(k: usize) -> Vec<String> {
    let mut labels: Vec<String> = DEFAULT_MOOD_LABELS
        .iter()
        .chain(EXTRA_LABELS.iter())
        .take(k)
        .map(|s| s.to_string())
        .collect();
    for i in labels.len()..k {
        labels.push(format!("mood{i}"));
    }
    labels
}

/// The underlying dominant mood of each 1-based section.
fn truth_series(spec: &SynthSpec) -> Vec<MoodId> {
    let default_cycle: Vec<u16> = (1..spec.k as u16).chain(std::iter::once(0)).collect();
    let cycle: &[u16] = spec
        .segment_moods
        .as_deref()
        .filter(|c| !c.is_empty())
        .unwrap_or(&default_cycle);
    let mut truth = Vec::with_capacity(spec.n);
    let mut segment = 0usize;
    for j in 1..=spec.n {
        if spec.mood_change_points.contains(&j) {
            segment += 1;
        }
        truth.push(MoodId(cycle[segment % cycle.len()]));
    }
    truth
}

fn model_rng(seed: u64, model: usize) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(model as u64 + 1)))
}

struct GeneratedModel {
    meta: ModelMeta,
    row: Vec<MoodId>,
}

fn generate_model(spec: &SynthSpec, truth: &[MoodId], index: usize) -> GeneratedModel {
    let mut rng = model_rng(spec.seed, index);
    let max_interval = spec.n.min(30);
    let interval = index % max_interval + 1;
    let method = SYNTH_METHODS[(index / max_interval) % SYNTH_METHODS.len()];
    let copy = index / (max_interval * SYNTH_METHODS.len());
    let model_id = if copy == 0 {
        format!("{method}_i{interval:02}")
    } else {
        format!("{method}_i{interval:02}_c{copy}")
    };

    // method quality bands spread the accuracies across the configured range
    let (lo, hi) = spec.accuracy_spread;
    let quality = QUALITY_RANK.iter().position(|q| *q == method).unwrap_or(3) as f64;
    let accuracy = lo + (hi - lo) * ((quality + rng.gen::<f64>()) / QUALITY_RANK.len() as f64);
    let deviation = spec.noise * (1.0 - accuracy);

    // window predictions follow the truth at the window center, with noise
    let k = spec.k;
    let n_windows = spec.n - interval + 1;
    let mut windows = Vec::with_capacity(n_windows);
    for w in 1..=n_windows {
        let center = (2 * w + interval - 1) / 2;
        let truth_mood = truth[center - 1];
        let pred = if rng.gen::<f64>() < deviation {
            let other = rng.gen_range(0..k - 1);
            MoodId::new(if other >= truth_mood.index() { other + 1 } else { other })
        } else {
            truth_mood
        };
        windows.push(pred);
    }
    let row = expand_windows(&windows, interval, spec.n, k, ExpandPolicy::MajorityOverlap)
        .expect("window count is consistent by construction");

    // confusion counts consistent with the deviation rate; per-class jitter
    // keeps class-accuracies distinct while preserving diagonal dominance
    // whenever noise < 0.5
    let samples_per_class = 40u64;
    let mut counts = vec![0u64; k * k];
    for class in 0..k {
        let jitter = 0.6 + 0.4 * rng.gen::<f64>();
        let class_deviation = (deviation * jitter).min(0.95);
        let correct = ((samples_per_class as f64) * (1.0 - class_deviation)).round() as u64;
        let wrong = samples_per_class - correct;
        counts[class * k + class] = correct;
        let others = (k - 1) as u64;
        for j in 0..k - 1 {
            let target = (class + 1 + j) % k;
            counts[class * k + target] = wrong / others + u64::from((j as u64) < wrong % others);
        }
    }
    let confusion = ConfusionMatrix::new(k, counts).expect("square by construction");
    let overall = confusion56_overall(&confusion);
    let meta = ModelMeta::new(model_id, method.to_string(), interval as u32, overall, confusion)
        .expect("generated metadata is in range");
    GeneratedModel { meta, row }
}

fn confusion56_overall(cm: &ConfusionMatrix) -> f64 {
    let diag: u64 = (0..cm.k()).map(|c| cm.get(c, c)).sum();
    diag as f64 / cm.total() as f64
}

fn assemble(spec: &SynthSpec, mut models: Vec<GeneratedModel>) -> Result<Bundle, SynthError> {
    models.sort_by(|a, b| a.meta.model_id.cmp(&b.meta.model_id));
    let mood_set = MoodSet::from_labels(&synth_labels(spec.k))?;
    let model_ids: Vec<String> = models.iter().map(|g| g.meta.model_id.clone()).collect();
    let mut cells = Vec::with_capacity(spec.m * spec.n);
    for g in &models {
        cells.extend_from_slice(&g.row);
    }
    let predictions = PredictionMatrix::new(model_ids, spec.n, cells, spec.k)?;
    let meta = models.into_iter().map(|g| g.meta).collect();
    Ok(Bundle::new(mood_set, meta, predictions)?)
}

/// Generates a reproducible bundle from the spec, sequential path.
pub fn generate_seq(spec: &SynthSpec) -> Result<Bundle, SynthError> {
    spec.validate()?;
    let truth = truth_series(spec);
    let models: Vec<GeneratedModel> = (0..spec.m)
        .map(|i| generate_model(spec, &truth, i))
        .collect();
    assemble(spec, models)
}

/// Parallel twin of [`generate_seq`]; every model derives its own seeded
/// stream, so the result is identical.
#[cfg(feature = "parallel")]
pub fn generate_par(spec: &SynthSpec) -> Result<Bundle, SynthError> {
    spec.validate()?;
    let truth = truth_series(spec);
    let models: Vec<GeneratedModel> = (0..spec.m)
        .into_par_iter()
        .map(|i| generate_model(spec, &truth, i))
        .collect();
    assemble(spec, models)
}

/// Generates a reproducible bundle from the spec.
pub fn generate(spec: &SynthSpec) -> Result<Bundle, SynthError> {
    #[cfg(feature = "parallel")]
    {
        generate_par(spec)
    }
    #[cfg(not(feature = "parallel"))]
    {
        generate_seq(spec)
    }
}

/// Naive triple-loop reimplementation of vote aggregation, kept free of any
/// code shared with the aggregate module. Test suites use it as the
/// reference for `aggregate_votes`.
pub fn oracle_vote_count(
    pm: &PredictionMatrix,
    meta: &[ModelMeta],
    k: usize,
    scheme: &WeightingScheme,
) -> Result<VoteSeries, crate::aggregate::AggregateError> {
    let n = pm.n_steps();
    let m = pm.n_models();
    let weight_of = |model: usize, class: usize| -> f64 {
        let cm = &meta[model].confusion;
        match scheme.kind {
            WeightKind::Unweighted => 1.0,
            WeightKind::ClassAccuracyPower(p) => {
                let diag = cm.get(class, class) as f64;
                let denom = match scheme.basis {
                    AccuracyBasis::PredictedClassPrecision => {
                        (0..k).map(|r| cm.get(r, class)).sum::<u64>() as f64
                    }
                    AccuracyBasis::TrueClassRecall => {
                        (0..k).map(|c| cm.get(class, c)).sum::<u64>() as f64
                    }
                };
                let alpha = if denom == 0.0 { 0.0 } else { diag / denom };
                alpha.powi(p.exponent() as i32)
            }
            WeightKind::OverallAccuracy => meta[model].overall_accuracy,
            WeightKind::OverallAccuracySquared => meta[model].overall_accuracy.powi(2),
            WeightKind::MacroF1 => {
                let f1s: Vec<f64> = (0..k)
                    .map(|c| {
                        let tp = cm.get(c, c) as f64;
                        let col = (0..k).map(|r| cm.get(r, c)).sum::<u64>() as f64;
                        let row = (0..k).map(|j| cm.get(c, j)).sum::<u64>() as f64;
                        let p = if col > 0.0 { tp / col } else { 0.0 };
                        let r = if row > 0.0 { tp / row } else { 0.0 };
                        if p + r > 0.0 {
                            2.0 * p * r / (p + r)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                f1s.iter().sum::<f64>() / k as f64
            }
        }
    };
    let mut per_mood = vec![vec![0.0f64; n]; k];
    for t in 0..n {
        for (c, series) in per_mood.iter_mut().enumerate() {
            for model in 0..m {
                if pm.cell(model, t).index() == c {
                    series[t] += weight_of(model, c);
                }
            }
        }
    }
    if scheme.normalized {
        for t in 0..n {
            let total: f64 = (0..k).map(|c| per_mood[c][t]).sum();
            if total == 0.0 {
                return Err(crate::aggregate::AggregateError::ZeroTotalStep { step: t + 1 });
            }
            for series in per_mood.iter_mut() {
                series[t] /= total;
            }
        }
    }
    let expected = if scheme.normalized {
        Some(1.0)
    } else if scheme.kind == WeightKind::Unweighted {
        Some(m as f64)
    } else {
        None
    };
    Ok(VoteSeries::new(per_mood, *scheme, expected)?)
}
