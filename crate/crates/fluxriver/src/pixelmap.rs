//! Per-model pixel grids: prediction maps, class-accuracy weight maps, and
//! accuracy side-bars under the three row-sorting schemes.

use crate::aggregate::WeightTable;
use crate::types::{ModelMeta, MoodId, Power, PredictionMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PixelError {
    #[error("metadata covers {meta} models but the matrix has {matrix}")]
    DimensionMismatch { meta: usize, matrix: usize },
    #[error("weight table covers {table} models but the matrix has {matrix}")]
    WeightTableMismatch { table: usize, matrix: usize },
}

/// Row-ordering scheme for pixel panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortScheme {
    /// Descending overall accuracy; ties by model id.
    AccuracyDesc,
    /// Method in declared display order, then ascending interval length.
    MethodThenInterval,
    /// Ascending interval length, then descending overall accuracy.
    IntervalThenAccuracy,
}

/// Display order of methods for [`SortScheme::MethodThenInterval`].
/// Methods not listed sort after these, alphabetically.
pub const DEFAULT_METHOD_ORDER: [&str; 7] = [
    "DT", "bagging", "adaboost", "GBDT", "XGBoost", "RF", "gcForest",
];

/// Permutation of model indices under the given scheme. Deterministic: every
/// comparator chain ends at the model id.
pub fn sort_rows(meta: &[ModelMeta], scheme: SortScheme, method_order: &[&str]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..meta.len()).collect();
    match scheme {
        SortScheme::AccuracyDesc => idx.sort_by(|&a, &b| {
            meta[b]
                .overall_accuracy
                .total_cmp(&meta[a].overall_accuracy)
                .then_with(|| meta[a].model_id.cmp(&meta[b].model_id))
        }),
        SortScheme::MethodThenInterval => {
            let rank = |m: &ModelMeta| {
                method_order
                    .iter()
                    .position(|name| *name == m.method)
                    .unwrap_or(method_order.len())
            };
            idx.sort_by(|&a, &b| {
                rank(&meta[a])
                    .cmp(&rank(&meta[b]))
                    .then_with(|| meta[a].method.cmp(&meta[b].method))
                    .then_with(|| meta[a].interval_length.cmp(&meta[b].interval_length))
                    .then_with(|| meta[a].model_id.cmp(&meta[b].model_id))
            })
        }
        SortScheme::IntervalThenAccuracy => idx.sort_by(|&a, &b| {
            meta[a]
                .interval_length
                .cmp(&meta[b].interval_length)
                .then_with(|| {
                    meta[b]
                        .overall_accuracy
                        .total_cmp(&meta[a].overall_accuracy)
                })
                .then_with(|| meta[a].model_id.cmp(&meta[b].model_id))
        }),
    }
    idx
}

/// A sorted pixel grid with optional per-prediction weights and the
/// per-model accuracy side-bar.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelPanel {
    /// row_order[r] is the source model index shown in panel row r.
    pub row_order: Vec<usize>,
    pub m: usize,
    pub n: usize,
    /// Row-major m-by-n mood ids, rows permuted by `row_order`.
    pub prediction_grid: Vec<MoodId>,
    /// Row-major m-by-n weights in [0, 1]: the class-accuracy of each
    /// prediction raised to `power`.
    pub weight_grid: Option<Vec<f64>>,
    /// Per panel row: overall accuracy raised to `power`.
    pub side_bar: Vec<f64>,
    pub power: Power,
}

impl PixelPanel {
    pub fn prediction(&self, row: usize, step: usize) -> MoodId {
        self.prediction_grid[row * self.n + step]
    }

    pub fn weight(&self, row: usize, step: usize) -> Option<f64> {
        self.weight_grid.as_ref().map(|g| g[row * self.n + step])
    }
}

/// Builds the panel: rows permuted by `sort_rows`, weight grid looked up per
/// prediction from the table's class-accuracy, side-bar from overall
/// accuracy, both raised to `power`.
pub fn build_panel(
    pm: &PredictionMatrix,
    meta: &[ModelMeta],
    scheme: SortScheme,
    weights: Option<&WeightTable>,
    power: Power,
    method_order: &[&str],
) -> Result<PixelPanel, PixelError> {
    if meta.len() != pm.n_models() {
        return Err(PixelError::DimensionMismatch {
            meta: meta.len(),
            matrix: pm.n_models(),
        });
    }
    if let Some(table) = weights {
        if table.n_models() != pm.n_models() {
            return Err(PixelError::WeightTableMismatch {
                table: table.n_models(),
                matrix: pm.n_models(),
            });
        }
    }
    let row_order = sort_rows(meta, scheme, method_order);
    let m = pm.n_models();
    let n = pm.n_steps();
    let mut prediction_grid = Vec::with_capacity(m * n);
    for &src in &row_order {
        prediction_grid.extend_from_slice(pm.row(src));
    }
    let weight_grid = weights.map(|table| {
        let mut grid = Vec::with_capacity(m * n);
        for &src in &row_order {
            for t in 0..n {
                let class = pm.cell(src, t).index();
                grid.push(power.apply(table.alpha(src, class)));
            }
        }
        grid
    });
    let side_bar = row_order
        .iter()
        .map(|&src| power.apply(meta[src].overall_accuracy))
        .collect();
    Ok(PixelPanel {
        row_order,
        m,
        n,
        prediction_grid,
        weight_grid,
        side_bar,
        power,
    })
}
