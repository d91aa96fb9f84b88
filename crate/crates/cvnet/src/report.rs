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

//! Summary table for a finished run directory.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::output::{Manifest, MomentsFile, MANIFEST, MOMENTS};
use crate::{CliError, Result};

fn read_json<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<T> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))
}

pub fn load_run(dir: &Path) -> Result<(Manifest, MomentsFile)> {
    Ok((read_json(dir, MANIFEST)?, read_json(dir, MOMENTS)?))
}

fn cell(value: Option<f64>, error: Option<f64>) -> String {
    match (value, error) {
        (Some(v), Some(e)) => format!("{v:.6} ± {e:.6}"),
        (Some(v), None) => format!("{v:.6}"),
        (None, _) => "-".to_string(),
    }
}

pub fn render(manifest: &Manifest, moments: &MomentsFile) -> String {
    let c = &manifest.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} | model {} n={} | {} dB | subtraction {} | seed {} | clustering {}{}",
        manifest.tool,
        manifest.version,
        serde_json::to_string(&c.model).unwrap_or_default(),
        c.n,
        c.squeezing_db,
        c.subtraction,
        c.master_seed,
        serde_json::to_value(c.clustering)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default(),
        if c.exact { " | exact" } else { "" },
    );
    let _ = writeln!(
        out,
        "{:<12} {:<11} {:<11} {:>6}  {:<26} {:<26} {:<26} {:<26}",
        "group", "state", "measure", "count", "mean", "variance", "skewness", "kurtosis"
    );
    for g in &moments.groups {
        let _ = writeln!(
            out,
            "{:<12} {:<11} {:<11} {:>6}  {:<26} {:<26} {:<26} {:<26}",
            g.group,
            g.state,
            g.measure,
            g.count,
            cell(g.mean, g.mean_error),
            cell(g.variance, g.variance_error),
            cell(g.skewness, g.skewness_error),
            cell(g.kurtosis, g.kurtosis_error),
        );
    }
    let census = &manifest.census;
    let _ = writeln!(
        out,
        "realizations: {} requested, {} completed, {} skipped",
        census.requested, census.completed, census.skipped
    );
    for s in &manifest.skipped {
        let _ = writeln!(out, "  skipped {} (seed {}): {}", s.index, s.seed, s.reason);
    }
    out
}
