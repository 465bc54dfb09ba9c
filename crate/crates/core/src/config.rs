//! Toolkit configuration file.
//!
//! A single TOML document with optional sections; anything omitted falls back
//! to the built-in defaults. See the repository README for the grammar.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::discretize::{default_bands, BandSpec};
use crate::error::{Error, Result};
use crate::hierarchy::HierarchyConfig;
use crate::kmeans::KMeansParams;
use crate::nbayes::NaiveBayesParams;
use crate::synth::SynthConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolkitConfig {
    /// Fallback seed for commands that take randomness but no explicit seed.
    pub seed: u64,
    pub bands: BandSpec,
    pub synth: SynthConfig,
    pub hierarchy: HierarchyConfig,
    pub kmeans: KMeansParams,
    pub nbayes: NaiveBayesParams,
}

impl Default for ToolkitConfig {
    fn default() -> Self {
        ToolkitConfig {
            seed: 42,
            bands: default_bands(),
            synth: SynthConfig::default(),
            hierarchy: HierarchyConfig::default(),
            kmeans: KMeansParams::default(),
            nbayes: NaiveBayesParams::default(),
        }
    }
}

impl ToolkitConfig {
    pub fn validate(&self) -> Result<()> {
        self.synth.validate()?;
        self.hierarchy.validate()?;
        if self.kmeans.k == 0 {
            return Err(Error::InvalidConfig(
                "kmeans k must be at least 1".to_string(),
            ));
        }
        if self.kmeans.restarts == 0 {
            return Err(Error::InvalidConfig(
                "kmeans restarts must be at least 1".to_string(),
            ));
        }
        if self.kmeans.max_iter == 0 {
            return Err(Error::InvalidConfig(
                "kmeans max_iter must be at least 1".to_string(),
            ));
        }
        if self.kmeans.tol < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "kmeans tol must be >= 0, got {}",
                self.kmeans.tol
            )));
        }
        if self.nbayes.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "nbayes alpha must be >= 0, got {}",
                self.nbayes.alpha
            )));
        }
        if self.nbayes.variance_floor <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "nbayes variance_floor must be > 0, got {}",
                self.nbayes.variance_floor
            )));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ToolkitConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Loads a config file, or the defaults when no path is given. Returns the
/// config together with a fingerprint of its content for run manifests.
pub fn load_config(path: Option<&Path>) -> Result<(ToolkitConfig, String)> {
    match path {
        None => {
            let cfg = ToolkitConfig::default();
            Ok((cfg, "default".to_string()))
        }
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", p.display())))?;
            let cfg = ToolkitConfig::from_toml(&text)?;
            let mut hasher = Sha256::new();
            hasher.update(text.as_bytes());
            let fingerprint: String = hasher
                .finalize()
                .iter()
                .map(|b| format!("{b:02x}"))
                .collect();
            Ok((cfg, fingerprint))
        }
    }
}
