//! Run configuration: defaults, config-file loading, and flag overrides.
//!
//! Every emitted report embeds the fully resolved configuration, so a
//! report is reproducible from its own contents plus the dataset.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use harmattan::arima::SearchConfig;
use harmattan::neural::TrainConfig;

use crate::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "HARMATTAN_CONFIG";

/// Everything the commands consult, with serde defaults so a config file
/// may override any subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Held-out span length for splits and evaluation.
    pub test_length: usize,
    /// Forecast horizon.
    pub horizon: usize,
    /// Prediction-interval confidence level.
    pub level: f64,
    /// Fixed ADF lag order (None = AIC selection).
    pub adf_max_lag: Option<usize>,
    /// Fixed KPSS Newey-West bandwidth (None = default rule).
    pub kpss_bandwidth: Option<usize>,
    /// Correlogram depth (None = min(24, n/2 - 1)).
    pub max_lag: Option<usize>,
    /// Ljung-Box lag count (None = rule of thumb).
    pub ljung_box_lags: Option<usize>,
    /// Stepwise search limits.
    pub search: SearchConfig,
    /// Neural training configuration (both architectures).
    pub train: TrainConfig,
    /// Where SVGs and saved models land.
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            test_length: 12,
            horizon: 12,
            level: 0.95,
            adf_max_lag: None,
            kpss_bandwidth: None,
            max_lag: None,
            ljung_box_lags: None,
            search: SearchConfig::default(),
            train: TrainConfig::default(),
            output_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    /// Loads the config file named by `--config`, else `HARMATTAN_CONFIG`,
    /// else returns defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = match explicit {
            Some(path) => Some(path.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
        };
        match path {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    CliError::data(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::data(format!("invalid config {}: {e}", path.display()))
                })
            }
            None => Ok(Self::default()),
        }
    }
}
