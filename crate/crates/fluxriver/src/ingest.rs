//! Parsing, validation, and serialization of prediction logs and model
//! metadata.
//!
//! Two interchange forms are supported: a pair of CSV documents (the primary
//! format; prediction logs are large and tabular) and a single JSON bundle.
//! Parsing is order-insensitive and canonicalizes model rows to lexicographic
//! model-id order, so parse(serialize(b)) is the identity on bundles produced
//! by this crate.

use crate::types::{ConfusionMatrix, ModelMeta, MoodId, MoodSet, PredictionMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: malformed row: {message}")]
    MalformedRow { line: usize, message: String },
    #[error("line {line}: unknown mood {label:?}")]
    UnknownMood { line: usize, label: String },
    #[error("line {line}: duplicate cell for model {model_id:?} at step {step}")]
    DuplicateCell {
        line: usize,
        model_id: String,
        step: usize,
    },
    #[error("missing cell: model {model_id:?} has no prediction for step {step}")]
    MissingCell { model_id: String, step: usize },
    #[error("line {line}: overall_accuracy {value} is outside [0, 1]")]
    BadAccuracyRange { line: usize, value: f64 },
    #[error("line {line}: {field} {value:?} is out of range")]
    BadRange {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: negative confusion count {value}")]
    NegativeCount { line: usize, value: i64 },
    #[error("line {line}: expected {expected} columns, got {got}")]
    WrongColumnCount {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: duplicate model id {model_id:?}")]
    DuplicateModel { line: usize, model_id: String },
    #[error("input holds no data rows")]
    EmptyInput,
    #[error("metadata and predictions disagree: {0}")]
    ModelSetMismatch(String),
    #[error("model {model_id:?} confusion matrix is {got}x{got}, mood set has {k} moods")]
    ConfusionSizeMismatch {
        model_id: String,
        got: usize,
        k: usize,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] crate::types::CoreError),
}

/// A validated (mood set, metadata, predictions) triple: the unit every
/// pipeline stage consumes. Metadata rows align index-for-index with the
/// prediction matrix rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub mood_set: MoodSet,
    pub meta: Vec<ModelMeta>,
    pub predictions: PredictionMatrix,
}

impl Bundle {
    pub fn new(
        mood_set: MoodSet,
        meta: Vec<ModelMeta>,
        predictions: PredictionMatrix,
    ) -> Result<Self, IngestError> {
        if meta.len() != predictions.n_models() {
            return Err(IngestError::ModelSetMismatch(format!(
                "{} metadata rows vs {} matrix rows",
                meta.len(),
                predictions.n_models()
            )));
        }
        for (m, id) in meta.iter().zip(predictions.model_ids()) {
            if &m.model_id != id {
                return Err(IngestError::ModelSetMismatch(format!(
                    "metadata row {:?} does not match matrix row {:?}",
                    m.model_id, id
                )));
            }
        }
        for m in &meta {
            if m.confusion.k() != mood_set.len() {
                return Err(IngestError::ConfusionSizeMismatch {
                    model_id: m.model_id.clone(),
                    got: m.confusion.k(),
                    k: mood_set.len(),
                });
            }
        }
        Ok(Bundle {
            mood_set,
            meta,
            predictions,
        })
    }

    pub fn k(&self) -> usize {
        self.mood_set.len()
    }
}

const PREDICTIONS_HEADER: [&str; 3] = ["model_id", "time_step", "mood"];
const META_FIXED_HEADER: [&str; 4] = ["model_id", "method", "interval_length", "overall_accuracy"];

fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

/// Parses a prediction log CSV (`model_id,time_step,mood`) into a complete
/// matrix.
///
/// Rows may arrive in any order; models are canonicalized to lexicographic
/// id order and n is the maximum time step seen. Any absent (model, step)
/// pair is an error.
pub fn parse_predictions(text: &str, moods: &MoodSet) -> Result<PredictionMatrix, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != PREDICTIONS_HEADER {
        return Err(IngestError::MalformedRow {
            line: 1,
            message: format!(
                "header must be exactly {:?}, got {:?}",
                PREDICTIONS_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut cells: BTreeMap<String, BTreeMap<usize, MoodId>> = BTreeMap::new();
    let mut n_steps = 0usize;
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(IngestError::WrongColumnCount {
                line,
                expected: 3,
                got: record.len(),
            });
        }
        let model_id = record[0].to_string();
        let step: usize = record[1].parse().map_err(|_| IngestError::MalformedRow {
            line,
            message: format!("time_step {:?} is not a positive integer", &record[1]),
        })?;
        if step < 1 {
            return Err(IngestError::MalformedRow {
                line,
                message: "time_step must be 1-based".to_string(),
            });
        }
        let mood = moods
            .by_label(&record[2])
            .ok_or_else(|| IngestError::UnknownMood {
                line,
                label: record[2].to_string(),
            })?;
        let row = cells.entry(model_id.clone()).or_default();
        if row.insert(step, mood).is_some() {
            return Err(IngestError::DuplicateCell {
                line,
                model_id,
                step,
            });
        }
        n_steps = n_steps.max(step);
    }
    if cells.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut flat = Vec::with_capacity(cells.len() * n_steps);
    for (model_id, row) in &cells {
        for step in 1..=n_steps {
            match row.get(&step) {
                Some(&mood) => flat.push(mood),
                None => {
                    return Err(IngestError::MissingCell {
                        model_id: model_id.clone(),
                        step,
                    })
                }
            }
        }
    }
    let model_ids: Vec<String> = cells.into_keys().collect();
    Ok(PredictionMatrix::new(model_ids, n_steps, flat, moods.len())?)
}

/// Splits a `cm_<label>_<label>` self-pair column into its label.
fn self_pair_label(column: &str) -> Option<&str> {
    let body = column.strip_prefix("cm_")?;
    if body.len() < 3 || body.len() % 2 == 0 {
        return None;
    }
    let half = (body.len() - 1) / 2;
    let (first, rest) = body.split_at(half);
    rest.strip_prefix('_')
        .filter(|second| *second == first)
        .map(|_| first)
}

/// Parses a model metadata CSV. The k-squared `cm_<true>_<pred>` columns
/// (in canonical mood order) both define the mood set and carry each model's
/// confusion matrix.
pub fn parse_model_meta(text: &str) -> Result<(MoodSet, Vec<ModelMeta>), IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let columns: Vec<&str> = header.iter().collect();
    if columns.len() < 4 || columns[..4] != META_FIXED_HEADER {
        return Err(IngestError::MalformedRow {
            line: 1,
            message: format!(
                "header must start with {:?}",
                META_FIXED_HEADER.join(",")
            ),
        });
    }
    let cm_cols = columns.len() - 4;
    let k = (cm_cols as f64).sqrt().round() as usize;
    if k < 2 || k * k != cm_cols {
        return Err(IngestError::WrongColumnCount {
            line: 1,
            expected: 4 + k.max(2) * k.max(2),
            got: columns.len(),
        });
    }
    let first = self_pair_label(columns[4]).ok_or_else(|| IngestError::MalformedRow {
        line: 1,
        message: format!("column {:?} is not a cm_<label>_<label> pair", columns[4]),
    })?;
    let prefix = format!("cm_{first}_");
    let mut labels = vec![first.to_string()];
    for col in &columns[5..4 + k] {
        let label = col
            .strip_prefix(&prefix)
            .ok_or_else(|| IngestError::MalformedRow {
                line: 1,
                message: format!("column {col:?} does not extend the cm_{first}_* block"),
            })?;
        labels.push(label.to_string());
    }
    for (i, expected_true) in labels.iter().enumerate() {
        for (j, expected_pred) in labels.iter().enumerate() {
            let expected = format!("cm_{expected_true}_{expected_pred}");
            let got = columns[4 + i * k + j];
            if got != expected {
                return Err(IngestError::MalformedRow {
                    line: 1,
                    message: format!("confusion column {got:?} should be {expected:?}"),
                });
            }
        }
    }
    let mood_set = MoodSet::from_labels(&labels)?;

    let mut meta = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        if record.len() != 4 + k * k {
            return Err(IngestError::WrongColumnCount {
                line,
                expected: 4 + k * k,
                got: record.len(),
            });
        }
        let model_id = record[0].to_string();
        if meta.iter().any(|m: &ModelMeta| m.model_id == model_id) {
            return Err(IngestError::DuplicateModel { line, model_id });
        }
        let method = record[1].to_string();
        let interval: u32 = record[2].parse().map_err(|_| IngestError::MalformedRow {
            line,
            message: format!("interval_length {:?} is not an integer", &record[2]),
        })?;
        if interval < 1 {
            return Err(IngestError::BadRange {
                line,
                field: "interval_length",
                value: record[2].to_string(),
            });
        }
        let accuracy: f64 = record[3].parse().map_err(|_| IngestError::MalformedRow {
            line,
            message: format!("overall_accuracy {:?} is not a number", &record[3]),
        })?;
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(IngestError::BadAccuracyRange {
                line,
                value: accuracy,
            });
        }
        let mut counts = Vec::with_capacity(k * k);
        for field in record.iter().skip(4) {
            let value: i64 = field.parse().map_err(|_| IngestError::MalformedRow {
                line,
                message: format!("confusion count {field:?} is not an integer"),
            })?;
            if value < 0 {
                return Err(IngestError::NegativeCount { line, value });
            }
            counts.push(value as u64);
        }
        let confusion = ConfusionMatrix::new(k, counts)?;
        meta.push(ModelMeta::new(model_id, method, interval, accuracy, confusion)?);
    }
    if meta.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok((mood_set, meta))
}

/// Parses the CSV pair into a validated bundle, canonicalizing both sides to
/// lexicographic model-id order.
pub fn parse_bundle_csv(predictions_text: &str, models_text: &str) -> Result<Bundle, IngestError> {
    let (mood_set, mut meta) = parse_model_meta(models_text)?;
    meta.sort_by(|a, b| a.model_id.cmp(&b.model_id));
    let predictions = parse_predictions(predictions_text, &mood_set)?;
    Bundle::new(mood_set, meta, predictions)
}

/// The two CSV documents of a serialized bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleCsv {
    pub predictions: String,
    pub models: String,
}

fn write_csv<F>(build: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    build(&mut writer).expect("writing to memory cannot fail");
    String::from_utf8(writer.into_inner().expect("flushed")).expect("csv output is utf-8")
}

/// Serializes a prediction matrix, model-major then step-major.
pub fn serialize_predictions(pm: &PredictionMatrix, moods: &MoodSet) -> String {
    write_csv(|w| {
        w.write_record(PREDICTIONS_HEADER)?;
        for (i, model_id) in pm.model_ids().iter().enumerate() {
            for t in 0..pm.n_steps() {
                w.write_record([
                    model_id.as_str(),
                    &(t + 1).to_string(),
                    moods.label(pm.cell(i, t)),
                ])?;
            }
        }
        Ok(())
    })
}

/// Serializes model metadata with the k-squared confusion columns in
/// canonical mood order.
pub fn serialize_model_meta(meta: &[ModelMeta], moods: &MoodSet) -> String {
    write_csv(|w| {
        let mut header: Vec<String> = META_FIXED_HEADER.iter().map(|s| s.to_string()).collect();
        for true_mood in moods.moods() {
            for pred_mood in moods.moods() {
                header.push(format!("cm_{}_{}", true_mood.label, pred_mood.label));
            }
        }
        w.write_record(&header)?;
        for m in meta {
            let mut row = vec![
                m.model_id.clone(),
                m.method.clone(),
                m.interval_length.to_string(),
                m.overall_accuracy.to_string(),
            ];
            row.extend(m.confusion.counts().iter().map(|c| c.to_string()));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

/// Serializes the bundle to its CSV pair. Round-trip stable:
/// `parse_bundle_csv` on the output reproduces the bundle structurally.
pub fn serialize_bundle(bundle: &Bundle) -> BundleCsv {
    BundleCsv {
        predictions: serialize_predictions(&bundle.predictions, &bundle.mood_set),
        models: serialize_model_meta(&bundle.meta, &bundle.mood_set),
    }
}

#[derive(Serialize, Deserialize)]
struct MoodDto {
    label: String,
    color: String,
}

#[derive(Serialize, Deserialize)]
struct ModelDto {
    model_id: String,
    method: String,
    interval_length: u32,
    overall_accuracy: f64,
    confusion: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct BundleDto {
    moods: Vec<MoodDto>,
    models: Vec<ModelDto>,
    predictions: Vec<(String, usize, String)>,
}

/// Serializes the whole bundle as one JSON document.
pub fn serialize_bundle_json(bundle: &Bundle) -> String {
    let dto = BundleDto {
        moods: bundle
            .mood_set
            .moods()
            .iter()
            .map(|m| MoodDto {
                label: m.label.clone(),
                color: m.color.clone(),
            })
            .collect(),
        models: bundle
            .meta
            .iter()
            .map(|m| ModelDto {
                model_id: m.model_id.clone(),
                method: m.method.clone(),
                interval_length: m.interval_length,
                overall_accuracy: m.overall_accuracy,
                confusion: (0..m.confusion.k())
                    .map(|r| (0..m.confusion.k()).map(|c| m.confusion.get(r, c)).collect())
                    .collect(),
            })
            .collect(),
        predictions: bundle
            .predictions
            .model_ids()
            .iter()
            .enumerate()
            .flat_map(|(i, id)| {
                (0..bundle.predictions.n_steps()).map(move |t| {
                    (
                        id.clone(),
                        t + 1,
                        bundle
                            .mood_set
                            .label(bundle.predictions.cell(i, t))
                            .to_string(),
                    )
                })
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("bundle serializes");
    out.push('\n');
    out
}

/// Parses a JSON bundle. Entry indexes (1-based) stand in for line numbers
/// in errors.
pub fn parse_bundle_json(text: &str) -> Result<Bundle, IngestError> {
    let dto: BundleDto = serde_json::from_str(text)?;
    let mood_set = MoodSet::new(
        dto.moods
            .iter()
            .enumerate()
            .map(|(i, m)| crate::types::Mood {
                id: MoodId::new(i),
                label: m.label.clone(),
                color: m.color.clone(),
            })
            .collect(),
    )?;
    let k = mood_set.len();
    let mut meta = Vec::with_capacity(dto.models.len());
    for (i, m) in dto.models.iter().enumerate() {
        let line = i + 1;
        if !(0.0..=1.0).contains(&m.overall_accuracy) {
            return Err(IngestError::BadAccuracyRange {
                line,
                value: m.overall_accuracy,
            });
        }
        if m.interval_length < 1 {
            return Err(IngestError::BadRange {
                line,
                field: "interval_length",
                value: m.interval_length.to_string(),
            });
        }
        let counts: Vec<u64> = m.confusion.iter().flatten().copied().collect();
        let confusion = ConfusionMatrix::new(k, counts)?;
        meta.push(ModelMeta::new(
            m.model_id.clone(),
            m.method.clone(),
            m.interval_length,
            m.overall_accuracy,
            confusion,
        )?);
    }
    meta.sort_by(|a, b| a.model_id.cmp(&b.model_id));

    let mut cells: BTreeMap<String, BTreeMap<usize, MoodId>> = BTreeMap::new();
    let mut n_steps = 0usize;
    for (i, (model_id, step, label)) in dto.predictions.iter().enumerate() {
        let line = i + 1;
        if *step < 1 {
            return Err(IngestError::MalformedRow {
                line,
                message: "time_step must be 1-based".to_string(),
            });
        }
        let mood = mood_set
            .by_label(label)
            .ok_or_else(|| IngestError::UnknownMood {
                line,
                label: label.clone(),
            })?;
        let row = cells.entry(model_id.clone()).or_default();
        if row.insert(*step, mood).is_some() {
            return Err(IngestError::DuplicateCell {
                line,
                model_id: model_id.clone(),
                step: *step,
            });
        }
        n_steps = n_steps.max(*step);
    }
    if cells.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut flat = Vec::with_capacity(cells.len() * n_steps);
    for (model_id, row) in &cells {
        for step in 1..=n_steps {
            match row.get(&step) {
                Some(&mood) => flat.push(mood),
                None => {
                    return Err(IngestError::MissingCell {
                        model_id: model_id.clone(),
                        step,
                    })
                }
            }
        }
    }
    let model_ids: Vec<String> = cells.into_keys().collect();
    let predictions = PredictionMatrix::new(model_ids, n_steps, flat, k)?;
    Bundle::new(mood_set, meta, predictions)
}
