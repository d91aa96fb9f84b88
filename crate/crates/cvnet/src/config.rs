// Copyright 2026 The cvnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Run configuration: one JSON document describing an experiment.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "model": { "kind": "ws", "k": 5, "p": 0.2 },
//!   "n": 100,
//!   "squeezing_db": 15.0,
//!   "subtraction": "hub:10",
//!   "realizations": 20,
//!   "master_seed": 1,
//!   "exact": false,
//!   "clustering": "paper",
//!   "bootstrap_resamples": 1000
//! }
//! ```
//!
//! A run's `manifest.json` embeds the configuration under `config` and is
//! accepted wherever a configuration is.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use cvnet_core::emergent::ClusteringConvention;
use cvnet_core::ensemble::{ExperimentSpec, Subtraction};
use cvnet_core::graph::Model;
use cvnet_core::stats::DEFAULT_RESAMPLES;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Ba { m: usize },
    Ws { k: usize, p: f64 },
    Er { p: f64 },
    Complete,
}

impl From<ModelConfig> for Model {
    fn from(m: ModelConfig) -> Model {
        match m {
            ModelConfig::Ba { m } => Model::BarabasiAlbert { m },
            ModelConfig::Ws { k, p } => Model::WattsStrogatz { k, p },
            ModelConfig::Er { p } => Model::ErdosRenyi { p },
            ModelConfig::Complete => Model::Complete,
        }
    }
}

/// `none`, `hub:<n>` or `random:<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SubtractionArg(pub Subtraction);

impl FromStr for SubtractionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "none" {
            return Ok(SubtractionArg(Subtraction::None));
        }
        let (kind, count) = s
            .split_once(':')
            .ok_or_else(|| format!("expected none, hub:<n> or random:<n>, got `{s}`"))?;
        let photons: u32 = count
            .parse()
            .map_err(|_| format!("invalid photon count `{count}`"))?;
        match kind {
            "hub" => Ok(SubtractionArg(Subtraction::Hub { photons })),
            "random" => Ok(SubtractionArg(Subtraction::RandomNode { photons })),
            _ => Err(format!("unknown subtraction target `{kind}`")),
        }
    }
}

impl TryFrom<String> for SubtractionArg {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl fmt::Display for SubtractionArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Subtraction::None => f.write_str("none"),
            Subtraction::Hub { photons } => write!(f, "hub:{photons}"),
            Subtraction::RandomNode { photons } => write!(f, "random:{photons}"),
        }
    }
}

impl From<SubtractionArg> for String {
    fn from(s: SubtractionArg) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ClusteringArg {
    #[default]
    Paper,
    Strict,
}

impl From<ClusteringArg> for ClusteringConvention {
    fn from(c: ClusteringArg) -> Self {
        match c {
            ClusteringArg::Paper => ClusteringConvention::Paper,
            ClusteringArg::Strict => ClusteringConvention::Strict,
        }
    }
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_squeezing() -> f64 {
    15.0
}
fn default_subtraction() -> SubtractionArg {
    SubtractionArg(Subtraction::None)
}
fn default_realizations() -> usize {
    1
}
fn default_resamples() -> usize {
    DEFAULT_RESAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub model: ModelConfig,
    pub n: usize,
    #[serde(default = "default_squeezing")]
    pub squeezing_db: f64,
    #[serde(default = "default_subtraction")]
    pub subtraction: SubtractionArg,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub clustering: ClusteringArg,
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: usize,
    /// Worker threads. Never affects results, so manifests leave it out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Output directory; manifests leave it out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn new(model: ModelConfig, n: usize) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            model,
            n,
            squeezing_db: default_squeezing(),
            subtraction: default_subtraction(),
            realizations: default_realizations(),
            master_seed: 0,
            exact: false,
            clustering: ClusteringArg::Paper,
            bootstrap_resamples: DEFAULT_RESAMPLES,
            workers: None,
            out: None,
        }
    }

    /// Parses a configuration, or the `config` member of a manifest.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        let value = match value.get("manifest_version") {
            Some(_) => value
                .get("config")
                .cloned()
                .ok_or_else(|| CliError::Config("manifest has no `config` member".into()))?,
            None => value,
        };
        let config: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("config field `{path}`: {}", e.into_inner()))
        })?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "config field `schema_version`: unsupported version {}",
                config.schema_version
            )));
        }
        if config.workers == Some(0) {
            return Err(CliError::Config("config field `workers`: must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The configuration as recorded in a manifest.
    pub fn for_manifest(&self) -> RunConfig {
        RunConfig {
            workers: None,
            out: None,
            ..self.clone()
        }
    }

    pub fn experiment(&self) -> Result<ExperimentSpec> {
        let spec = ExperimentSpec {
            model: self.model.into(),
            n: self.n,
            squeezing_db: self.squeezing_db,
            subtraction: self.subtraction.0,
            realizations: self.realizations,
            master_seed: self.master_seed,
            exact: self.exact,
            clustering: self.clustering.into(),
        };
        spec.validate()?;
        Ok(spec)
    }
}
