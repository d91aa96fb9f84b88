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

//! Run directory layout.
//!
//! | file | contents |
//! |---|---|
//! | `manifest.json` | configuration, tool version, seeds, networks, skip census |
//! | `samples.csv` | one row per realization × node × state |
//! | `moments.json` | moments and bootstrap errors per group × state × measure |
//! | `histograms.csv` | Freedman–Diaconis histograms per group × state × measure |
//!
//! Nothing time- or host-dependent is written, so identical configurations
//! give byte-identical directories.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cvnet_core::ensemble::{EnsembleReport, GroupSummary, Measure, NetworkState};
use cvnet_core::stats::{histogram, Binning, Histogram};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::io::{adjacency_lists, fmt_f64};
use crate::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";
pub const SAMPLES: &str = "samples.csv";
pub const MOMENTS: &str = "moments.json";
pub const HISTOGRAMS: &str = "histograms.csv";

pub const MANIFEST_VERSION: u32 = 1;

pub const SAMPLES_HEADER: &str =
    "realization,node,group_distance,nn_connectivity,state,degree,clustering";
pub const HISTOGRAMS_HEADER: &str = "group,state,measure,bin,lower,upper,count";

const SEED_MIXING: &str = "realization_seed = splitmix64(master_seed ^ splitmix64(index + 0x9E3779B97F4A7C15)); \
     realizations draw from ChaCha8 seeded with realization_seed, stream 0 for topology and 1 for the subtraction node; \
     bootstrap resampling uses ChaCha8 stream 2 seeded the same way with index = fnv1a64(\"<group>/<state>/<measure>\")";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRealization {
    pub index: usize,
    pub seed: u64,
    pub subtraction_node: Option<usize>,
    pub adjacency: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestSkip {
    pub index: usize,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkipCensus {
    pub requested: usize,
    pub completed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub seed_mixing: String,
    pub census: SkipCensus,
    pub realizations: Vec<ManifestRealization>,
    pub skipped: Vec<ManifestSkip>,
}

impl Manifest {
    pub fn new(config: &RunConfig, report: &EnsembleReport) -> Self {
        Manifest {
            manifest_version: MANIFEST_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.for_manifest(),
            seed_mixing: SEED_MIXING.to_string(),
            census: SkipCensus {
                requested: report.spec.realizations,
                completed: report.records.len(),
                skipped: report.skipped.len(),
            },
            realizations: report
                .records
                .iter()
                .map(|r| ManifestRealization {
                    index: r.index,
                    seed: r.seed,
                    subtraction_node: r.subtraction_node,
                    adjacency: adjacency_lists(&r.network),
                })
                .collect(),
            skipped: report
                .skipped
                .iter()
                .map(|s| ManifestSkip {
                    index: s.index,
                    seed: report.spec.realization_seed(s.index),
                    reason: s.reason.clone(),
                })
                .collect(),
        }
    }
}

/// One pooled sample set. Statistics are null when fewer than two samples
/// were pooled; higher moments are also null for constant samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentEntry {
    pub group: String,
    pub state: String,
    pub measure: String,
    pub count: usize,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub mean_error: Option<f64>,
    pub variance_error: Option<f64>,
    pub skewness_error: Option<f64>,
    pub kurtosis_error: Option<f64>,
}

impl From<&GroupSummary> for MomentEntry {
    fn from(g: &GroupSummary) -> Self {
        let s = g.summary.as_ref();
        MomentEntry {
            group: g.group.label(),
            state: g.state.label().to_string(),
            measure: g.measure.label().to_string(),
            count: g.count,
            mean: s.map(|s| s.mean),
            variance: s.map(|s| s.variance),
            skewness: s.and_then(|s| s.skewness),
            kurtosis: s.and_then(|s| s.kurtosis),
            mean_error: s.map(|s| s.mean_error),
            variance_error: s.map(|s| s.variance_error),
            skewness_error: s.and_then(|s| s.skewness_error),
            kurtosis_error: s.and_then(|s| s.kurtosis_error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsFile {
    pub bootstrap_resamples: usize,
    pub census: SkipCensus,
    pub groups: Vec<MomentEntry>,
}

pub fn samples_csv<W: Write>(report: &EnsembleReport, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SAMPLES_HEADER}")?;
    let states = report.states();
    for record in &report.records {
        for node in &record.nodes {
            let distance = node.distance.map(|d| d.label()).unwrap_or("");
            let nn = node.nn_connectivity.map(|k| k.to_string()).unwrap_or_default();
            for &state in &states {
                if let Some(m) = node.measures(state) {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        record.index,
                        node.node,
                        distance,
                        nn,
                        state.label(),
                        fmt_f64(m.degree),
                        fmt_f64(m.clustering)
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Histograms for one group and measure. Gaussian and subtracted samples share
/// bin edges so their counts compare bin by bin; imprinted samples get their
/// own edges.
pub fn group_histograms(
    report: &EnsembleReport,
    group: cvnet_core::ensemble::SampleGroup,
    measure: Measure,
) -> Result<Vec<(NetworkState, Histogram)>> {
    let mut out = Vec::new();
    let imprinted = report.samples(group, NetworkState::Imprinted, measure);
    if !imprinted.is_empty() {
        out.push((
            NetworkState::Imprinted,
            histogram(&imprinted, &Binning::FreedmanDiaconis)?,
        ));
    }
    let emergent: Vec<(NetworkState, Vec<f64>)> = report
        .states()
        .into_iter()
        .filter(|&s| s != NetworkState::Imprinted)
        .map(|s| (s, report.samples(group, s, measure)))
        .filter(|(_, v)| !v.is_empty())
        .collect();
    let pooled: Vec<f64> = emergent.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    if pooled.is_empty() {
        return Ok(out);
    }
    let edges = histogram(&pooled, &Binning::FreedmanDiaconis)?.edges;
    for (state, samples) in emergent {
        out.push((state, histogram(&samples, &Binning::Edges(edges.clone()))?));
    }
    Ok(out)
}

pub fn histograms_csv<W: Write>(report: &EnsembleReport, mut out: W) -> Result<()> {
    let io = |e| CliError::io(HISTOGRAMS, e);
    writeln!(out, "{HISTOGRAMS_HEADER}").map_err(io)?;
    for group in report.groups() {
        for measure in Measure::ALL {
            for (state, h) in group_histograms(report, group, measure)? {
                for (bin, count) in h.counts.iter().enumerate() {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        group.label(),
                        state.label(),
                        measure.label(),
                        bin,
                        fmt_f64(h.edges[bin]),
                        fmt_f64(h.edges[bin + 1]),
                        count
                    )
                    .map_err(io)?;
                }
            }
        }
    }
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn finish(mut w: BufWriter<File>, dir: &Path, name: &str) -> Result<()> {
    w.flush().map_err(|e| CliError::io(dir.join(name), e))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::format(dir.join(name), e.to_string()))?;
    writeln!(w).map_err(|e| CliError::io(dir.join(name), e))?;
    finish(w, dir, name)
}

/// Writes all run files into `dir`, creating it if needed.
pub fn write_run(dir: &Path, config: &RunConfig, report: &EnsembleReport) -> Result<MomentsFile> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let manifest = Manifest::new(config, report);
    let summaries = report.summaries(config.bootstrap_resamples)?;
    let moments = MomentsFile {
        bootstrap_resamples: config.bootstrap_resamples,
        census: manifest.census.clone(),
        groups: summaries.iter().map(MomentEntry::from).collect(),
    };

    write_json(dir, MANIFEST, &manifest)?;
    write_json(dir, MOMENTS, &moments)?;

    let mut w = create(dir, SAMPLES)?;
    samples_csv(report, &mut w).map_err(|e| CliError::io(dir.join(SAMPLES), e))?;
    finish(w, dir, SAMPLES)?;

    let mut w = create(dir, HISTOGRAMS)?;
    histograms_csv(report, &mut w)?;
    finish(w, dir, HISTOGRAMS)?;
    Ok(moments)
}
