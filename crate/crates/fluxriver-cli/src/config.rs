//! Optional JSON run configuration. Flags always override config values;
//! the config supplies defaults for anything left unset.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "FLUXRIVER_CONFIG";

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub predictions: Option<PathBuf>,
    pub models: Option<PathBuf>,
    pub bundle: Option<PathBuf>,
    pub design: Option<String>,
    pub weighting: Option<String>,
    pub basis: Option<String>,
    pub normalize: Option<bool>,
    pub smoothing: Option<String>,
    pub sort: Option<String>,
    pub weights: Option<Vec<u32>>,
    pub with_river: Option<bool>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub river_height: Option<f64>,
    pub cell_w: Option<f64>,
    pub cell_h: Option<f64>,
    /// Mood label to color overrides.
    pub palette: Option<BTreeMap<String, String>>,
    /// Display order for the method-then-interval sort.
    pub method_order: Option<Vec<String>>,
}

/// Loads the config from the explicit path, else from `FLUXRIVER_CONFIG`,
/// else returns the empty default.
pub fn load(explicit: Option<&Path>) -> Result<RunConfig> {
    let path = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
    };
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))
        }
        None => Ok(RunConfig::default()),
    }
}
