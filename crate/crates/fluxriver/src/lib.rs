//! fluxriver turns time-varying ensemble-classifier prediction logs into
//! layered time-series visual designs: stacked line graph, ThemeRiver, and
//! the dual-flux ThemeRiver, plus per-model pixel comparison maps, all
//! emitted as reproducible SVG.
//!
//! The pipeline is `ingest` (CSV/JSON logs) -> `aggregate` (weighted vote
//! series) -> `layout` / `pixelmap` (geometry) -> `render` (SVG bytes).
//! `synth` produces seeded fixtures and houses the brute-force oracle the
//! test suites compare against.
//!
//! With the default `parallel` feature the per-step and per-model inner
//! loops fan out over rayon; disabling it falls back to the sequential
//! paths with bit-identical results.

pub mod aggregate;
pub mod ingest;
pub mod layout;
pub mod pixelmap;
pub mod render;
pub mod synth;
pub mod types;

pub use ingest::Bundle;
pub use types::{
    AccuracyBasis, Mood, MoodId, MoodSet, Power, VoteSeries, WeightKind, WeightingScheme,
};
