//! Shared domain types: moods, model metadata, prediction matrices, vote
//! series, and weighting schemes.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Constructors validate their invariants and reject violating
//! input rather than repairing it.

use thiserror::Error;

/// Tolerance for per-step vote conservation checks.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// Colors assigned to moods by canonical index.
///
/// The first four entries are the pinned palette of the default 4-mood set
/// (delighted, angry, sad, calm); the rest cover larger sets. For more than
/// eight moods the palette cycles.
pub const DEFAULT_PALETTE: [&str; 8] = [
    "#F2C945", // delighted (yellow)
    "#D94A3D", // angry (red)
    "#4472C4", // sad (blue)
    "#5BA85B", // calm (green)
    "#8E6FAD",
    "#E08A33",
    "#4FB2B2",
    "#9A9A9A",
];

/// Labels of the default 4-mood set, in canonical order.
pub const DEFAULT_MOOD_LABELS: [&str; 4] = ["delighted", "angry", "sad", "calm"];

/// Invariant violations raised by the constructors in this module.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("a mood set needs at least 2 moods, got {0}")]
    TooFewMoods(usize),
    #[error("mood ids must be contiguous 0..k-1 in canonical order; position {index} holds id {id}")]
    NonContiguousMoodIds { index: usize, id: u16 },
    #[error("mood label {label:?} is empty or duplicated")]
    BadMoodLabel { label: String },
    #[error("interval_length must be at least 1")]
    BadIntervalLength,
    #[error("overall_accuracy {0} is outside [0, 1]")]
    BadAccuracy(f64),
    #[error("confusion matrix must hold {expected} entries ({k}x{k}), got {got}")]
    BadConfusionShape { k: usize, expected: usize, got: usize },
    #[error("prediction matrix expects {expected} cells, got {got}")]
    BadCellCount { expected: usize, got: usize },
    #[error("prediction matrix needs at least one model and one step")]
    EmptyMatrix,
    #[error("duplicate model id {0:?}")]
    DuplicateModelId(String),
    #[error("cell (model {model}, step {step}) holds invalid mood id {id}")]
    InvalidCellMood { model: usize, step: usize, id: u16 },
    #[error("vote series rows must share one positive length")]
    BadVoteShape,
    #[error("vote value {value} at step {step} is negative or not finite")]
    BadVoteValue { step: usize, value: f64 },
    #[error("step {step} total {total} differs from expected {expected} beyond tolerance")]
    BrokenConservation { step: usize, total: f64, expected: f64 },
}

/// Index of a mood within its [`MoodSet`]. The numeric order of ids is the
/// canonical order and doubles as the deterministic tie-break rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoodId(pub u16);

impl MoodId {
    pub fn new(index: usize) -> Self {
        MoodId(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One categorical class a model can assign to a unit section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mood {
    pub id: MoodId,
    pub label: String,
    pub color: String,
}

/// An ordered set of moods. The vector order is the canonical order: a strict
/// total order, fixed for one run, used for every deterministic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoodSet {
    moods: Vec<Mood>,
}

impl MoodSet {
    /// Builds a set from explicit moods, enforcing contiguous ids and unique
    /// non-empty labels.
    pub fn new(moods: Vec<Mood>) -> Result<Self, CoreError> {
        if moods.len() < 2 {
            return Err(CoreError::TooFewMoods(moods.len()));
        }
        for (i, mood) in moods.iter().enumerate() {
            if mood.id.index() != i {
                return Err(CoreError::NonContiguousMoodIds {
                    index: i,
                    id: mood.id.0,
                });
            }
            if mood.label.is_empty() || moods[..i].iter().any(|m| m.label == mood.label) {
                return Err(CoreError::BadMoodLabel {
                    label: mood.label.clone(),
                });
            }
        }
        Ok(MoodSet { moods })
    }

    /// Builds a set from labels, assigning palette colors by position.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self, CoreError> {
        let moods = labels
            .iter()
            .enumerate()
            .map(|(i, label)| Mood {
                id: MoodId::new(i),
                label: label.as_ref().to_string(),
                color: DEFAULT_PALETTE[i % DEFAULT_PALETTE.len()].to_string(),
            })
            .collect();
        Self::new(moods)
    }

    /// The default 4-mood set with its pinned palette.
    pub fn default_four() -> Self {
        Self::from_labels(&DEFAULT_MOOD_LABELS).expect("default mood set is valid")
    }

    pub fn len(&self) -> usize {
        self.moods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moods.is_empty()
    }

    pub fn moods(&self) -> &[Mood] {
        &self.moods
    }

    pub fn by_label(&self, label: &str) -> Option<MoodId> {
        self.moods.iter().find(|m| m.label == label).map(|m| m.id)
    }

    pub fn label(&self, id: MoodId) -> &str {
        &self.moods[id.index()].label
    }

    pub fn color(&self, id: MoodId) -> &str {
        &self.moods[id.index()].color
    }

    /// Replaces the color of the mood with the given label, if present.
    pub fn set_color(&mut self, label: &str, color: &str) {
        if let Some(m) = self.moods.iter_mut().find(|m| m.label == label) {
            m.color = color.to_string();
        }
    }
}

/// A k-by-k confusion matrix of non-negative counts.
///
/// Orientation is pinned: rows are the true class, columns the predicted
/// class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(k: usize, counts: Vec<u64>) -> Result<Self, CoreError> {
        if counts.len() != k * k {
            return Err(CoreError::BadConfusionShape {
                k,
                expected: k * k,
                got: counts.len(),
            });
        }
        Ok(ConfusionMatrix { k, counts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, true_class: usize, pred_class: usize) -> u64 {
        self.counts[true_class * self.k + pred_class]
    }

    pub fn row_sum(&self, true_class: usize) -> u64 {
        self.counts[true_class * self.k..(true_class + 1) * self.k]
            .iter()
            .sum()
    }

    pub fn col_sum(&self, pred_class: usize) -> u64 {
        (0..self.k).map(|r| self.get(r, pred_class)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

/// Static attributes of one trained model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub model_id: String,
    pub method: String,
    /// Window length in seconds the model's features were extracted over.
    pub interval_length: u32,
    pub overall_accuracy: f64,
    pub confusion: ConfusionMatrix,
}

impl ModelMeta {
    pub fn new(
        model_id: String,
        method: String,
        interval_length: u32,
        overall_accuracy: f64,
        confusion: ConfusionMatrix,
    ) -> Result<Self, CoreError> {
        if interval_length < 1 {
            return Err(CoreError::BadIntervalLength);
        }
        if !(0.0..=1.0).contains(&overall_accuracy) {
            return Err(CoreError::BadAccuracy(overall_accuracy));
        }
        Ok(ModelMeta {
            model_id,
            method,
            interval_length,
            overall_accuracy,
            confusion,
        })
    }
}

/// A complete m-by-n matrix of categorical predictions: one row per model,
/// one column per unit section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionMatrix {
    model_ids: Vec<String>,
    n_steps: usize,
    cells: Vec<MoodId>,
}

impl PredictionMatrix {
    /// `cells` is row-major (model-major); `k` is the size of the active
    /// mood set. Every cell must name a valid mood and the matrix must be
    /// complete.
    pub fn new(
        model_ids: Vec<String>,
        n_steps: usize,
        cells: Vec<MoodId>,
        k: usize,
    ) -> Result<Self, CoreError> {
        if model_ids.is_empty() || n_steps == 0 {
            return Err(CoreError::EmptyMatrix);
        }
        for (i, id) in model_ids.iter().enumerate() {
            if model_ids[..i].contains(id) {
                return Err(CoreError::DuplicateModelId(id.clone()));
            }
        }
        if cells.len() != model_ids.len() * n_steps {
            return Err(CoreError::BadCellCount {
                expected: model_ids.len() * n_steps,
                got: cells.len(),
            });
        }
        for (pos, cell) in cells.iter().enumerate() {
            if cell.index() >= k {
                return Err(CoreError::InvalidCellMood {
                    model: pos / n_steps,
                    step: pos % n_steps + 1,
                    id: cell.0,
                });
            }
        }
        Ok(PredictionMatrix {
            model_ids,
            n_steps,
            cells,
        })
    }

    pub fn n_models(&self) -> usize {
        self.model_ids.len()
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn model_ids(&self) -> &[String] {
        &self.model_ids
    }

    /// Prediction of model `model` at 0-based step `step`.
    pub fn cell(&self, model: usize, step: usize) -> MoodId {
        self.cells[model * self.n_steps + step]
    }

    /// The full prediction row of one model.
    pub fn row(&self, model: usize) -> &[MoodId] {
        &self.cells[model * self.n_steps..(model + 1) * self.n_steps]
    }
}

/// Exponent applied to class-accuracy or overall-accuracy weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Power {
    One,
    Two,
    Three,
}

impl Power {
    pub fn exponent(self) -> u32 {
        match self {
            Power::One => 1,
            Power::Two => 2,
            Power::Three => 3,
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Power::One => x,
            Power::Two => x * x,
            Power::Three => x * x * x,
        }
    }

    pub fn from_exponent(p: u32) -> Option<Self> {
        match p {
            1 => Some(Power::One),
            2 => Some(Power::Two),
            3 => Some(Power::Three),
            _ => None,
        }
    }
}

/// Which confusion-matrix direction the class-accuracy reading uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccuracyBasis {
    /// Diagonal over column sum: how reliable a model is when it asserts a
    /// class.
    #[default]
    PredictedClassPrecision,
    /// Diagonal over row sum: how much of a class the model recovers.
    TrueClassRecall,
}

/// The family of vote weights a [`VoteSeries`] was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Unweighted,
    /// Per-prediction class-accuracy raised to the given power.
    ClassAccuracyPower(Power),
    OverallAccuracy,
    OverallAccuracySquared,
    MacroF1,
}

/// Full description of how votes are weighted and scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightingScheme {
    pub kind: WeightKind,
    /// Rescale every step so its votes sum to 1.
    pub normalized: bool,
    pub basis: AccuracyBasis,
}

impl WeightingScheme {
    pub fn unweighted() -> Self {
        WeightingScheme {
            kind: WeightKind::Unweighted,
            normalized: false,
            basis: AccuracyBasis::default(),
        }
    }

    pub fn class_accuracy(power: Power, basis: AccuracyBasis) -> Self {
        WeightingScheme {
            kind: WeightKind::ClassAccuracyPower(power),
            normalized: false,
            basis,
        }
    }

    pub fn with_normalized(mut self, normalized: bool) -> Self {
        self.normalized = normalized;
        self
    }

    /// Short stable name, used in CLI output and error messages.
    pub fn describe(&self) -> String {
        let base = match self.kind {
            WeightKind::Unweighted => "none".to_string(),
            WeightKind::ClassAccuracyPower(p) => format!("alpha{}", p.exponent()),
            WeightKind::OverallAccuracy => "acc".to_string(),
            WeightKind::OverallAccuracySquared => "acc2".to_string(),
            WeightKind::MacroF1 => "f1".to_string(),
        };
        if self.normalized {
            format!("{base}+normalized")
        } else {
            base
        }
    }
}

/// Per-mood numeric vote series: `value(c, t)` is the summed (possibly
/// weighted) vote mass mood `c` received at step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteSeries {
    scheme: WeightingScheme,
    /// `per_mood[c][t]`, k rows of length n.
    per_mood: Vec<Vec<f64>>,
    /// Per-step totals, summed over moods in canonical order.
    totals: Vec<f64>,
}

impl VoteSeries {
    /// Validates shape, non-negativity, and conservation.
    ///
    /// `expected_total`, when given, pins every step total to a known value
    /// (m for the unweighted scheme, 1 for normalized schemes) within
    /// [`CONSERVATION_TOL`].
    pub fn new(
        per_mood: Vec<Vec<f64>>,
        scheme: WeightingScheme,
        expected_total: Option<f64>,
    ) -> Result<Self, CoreError> {
        let n = per_mood.first().map(|row| row.len()).unwrap_or(0);
        if per_mood.len() < 2 || n == 0 || per_mood.iter().any(|row| row.len() != n) {
            return Err(CoreError::BadVoteShape);
        }
        for row in &per_mood {
            for (t, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(CoreError::BadVoteValue { step: t + 1, value: v });
                }
            }
        }
        let totals: Vec<f64> = (0..n)
            .map(|t| per_mood.iter().map(|row| row[t]).sum())
            .collect();
        if let Some(expected) = expected_total {
            for (t, &total) in totals.iter().enumerate() {
                if (total - expected).abs() > CONSERVATION_TOL {
                    return Err(CoreError::BrokenConservation {
                        step: t + 1,
                        total,
                        expected,
                    });
                }
            }
        }
        Ok(VoteSeries {
            scheme,
            per_mood,
            totals,
        })
    }

    pub fn scheme(&self) -> &WeightingScheme {
        &self.scheme
    }

    pub fn k(&self) -> usize {
        self.per_mood.len()
    }

    pub fn n_steps(&self) -> usize {
        self.totals.len()
    }

    /// Vote mass for `mood` at 0-based step `step`.
    pub fn value(&self, mood: MoodId, step: usize) -> f64 {
        self.per_mood[mood.index()][step]
    }

    /// All per-mood values at 0-based step `step`, in canonical mood order.
    pub fn votes_at(&self, step: usize) -> Vec<f64> {
        self.per_mood.iter().map(|row| row[step]).collect()
    }

    /// The whole series of one mood.
    pub fn mood_series(&self, mood: MoodId) -> &[f64] {
        &self.per_mood[mood.index()]
    }

    /// Per-step totals W_t.
    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    pub fn per_mood(&self) -> &[Vec<f64>] {
        &self.per_mood
    }
}
