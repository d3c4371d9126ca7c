//! Loading the run configuration and applying command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ces_pareto::scenario::OutputFormat;
use ces_pareto::ScenarioConfig;

/// Flags that override individual config fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_n: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(seed) = self.seed {
            config.sweep.seed = seed;
        }
        if let Some(n) = self.grid_n {
            config.grid.n_k = n;
            config.grid.n_l = n;
        }
        if let Some(out) = &self.out {
            config.output.dir = out.to_string_lossy().into_owned();
        }
        if let Some(format) = self.format {
            config.output.format = format;
        }
    }
}

/// Reads `path`, or falls back to the bundled sample scenario.
pub fn load(path: Option<&Path>) -> Result<ScenarioConfig> {
    let Some(path) = path else {
        return Ok(ScenarioConfig::sample());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse config {}", path.display()))
}

/// Canonical text of a config, as written by `validate --emit-normalized`.
pub fn normalized(config: &ScenarioConfig) -> String {
    let mut text = serde_json::to_string_pretty(config).expect("config serializes");
    text.push('\n');
    text
}
