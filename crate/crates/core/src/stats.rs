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

//! Distribution moments with bootstrap errors, and histograms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::seed::{self, Stream};
use crate::{Error, Result};

/// Default number of bootstrap resamples.
pub const DEFAULT_RESAMPLES: usize = 1000;

/// Population central moments, `E[(X − μ)^k]` normalised as usual.
/// Skewness and kurtosis are `None` when the variance vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralMoments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    /// Non-excess kurtosis `E[(X − μ)⁴] / Var²`.
    pub kurtosis: Option<f64>,
}

pub fn central_moments(samples: &[f64]) -> Result<CentralMoments> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // Rounding in the mean leaves a tiny spread for constant samples.
    let scale = samples.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let degenerate = m2 <= (1e-12 * scale) * (1e-12 * scale) || m2 == 0.0;
    Ok(CentralMoments {
        mean,
        variance: m2,
        skewness: (!degenerate).then(|| m3 / (m2 * libm::sqrt(m2))),
        kurtosis: (!degenerate).then(|| m4 / (m2 * m2)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(resamples: usize, seed: u64) -> Self {
        BootstrapConfig { resamples, seed }
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
        }
    }
}

/// Four moments and their bootstrap standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub mean_error: f64,
    pub variance_error: f64,
    pub skewness_error: Option<f64>,
    /// Only reported for four or more samples.
    pub kurtosis_error: Option<f64>,
}

/// Moments of `samples` with nonparametric bootstrap standard errors: the
/// standard deviation of each statistic over resamples drawn with replacement.
pub fn moments(samples: &[f64], bootstrap: &BootstrapConfig) -> Result<MomentSummary> {
    let count = samples.len();
    if count < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: count });
    }
    let point = central_moments(samples)?;
    let mut rng = seed::rng(bootstrap.seed, Stream::Bootstrap);
    let mut stats: [Vec<f64>; 4] = Default::default();
    let mut resample = vec![0.0; count];
    for _ in 0..bootstrap.resamples {
        for slot in resample.iter_mut() {
            *slot = samples[rng.random_range(0..count)];
        }
        let m = central_moments(&resample)?;
        stats[0].push(m.mean);
        stats[1].push(m.variance);
        if let Some(s) = m.skewness {
            stats[2].push(s);
        }
        if let Some(k) = m.kurtosis {
            stats[3].push(k);
        }
    }
    let spread = |v: &[f64]| -> Option<f64> {
        if v.len() < 2 {
            return None;
        }
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
        Some(libm::sqrt(ss / (v.len() - 1) as f64))
    };
    let defined = |o: Option<f64>| o.is_some();
    Ok(MomentSummary {
        count,
        mean: point.mean,
        variance: point.variance,
        skewness: point.skewness,
        kurtosis: point.kurtosis,
        mean_error: spread(&stats[0]).unwrap_or(0.0),
        variance_error: spread(&stats[1]).unwrap_or(0.0),
        skewness_error: spread(&stats[2]).filter(|_| defined(point.skewness)),
        kurtosis_error: spread(&stats[3]).filter(|_| defined(point.kurtosis) && count >= 4),
    })
}

/// How to choose histogram bins.
#[derive(Debug, Clone, PartialEq)]
pub enum Binning {
    /// Equal-width bins spanning the sample range.
    Count(usize),
    /// Bins of a fixed width starting at the sample minimum.
    Width(f64),
    /// Explicit increasing edges that must cover every sample.
    Edges(Vec<f64>),
    /// Logarithmically spaced bins over a positive sample range.
    Logarithmic(usize),
    /// Freedman–Diaconis width `2 · IQR · n^(−1/3)`.
    FreedmanDiaconis,
}

// Guards against absurd bin counts from tiny widths.
const MAX_BINS: usize = 100_000;

/// Counts per bin. Bin `i` is `[edges[i], edges[i + 1])`; the last bin also
/// contains its right edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin holding `x`, if it lies within the edges.
    pub fn bin_index(&self, x: f64) -> Option<usize> {
        let first = *self.edges.first()?;
        let last = *self.edges.last()?;
        if !(x >= first && x <= last) {
            return None;
        }
        let idx = self.edges.partition_point(|&e| e <= x);
        Some(idx.saturating_sub(1).min(self.counts.len() - 1))
    }

    /// `(log10 centre, log10 density)` for every non-empty bin with a positive
    /// centre, where density is count over bin width.
    pub fn log_log_points(&self) -> Vec<(f64, f64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .filter_map(|(i, &c)| {
                let (lo, hi) = (self.edges[i], self.edges[i + 1]);
                let centre = 0.5 * (lo + hi);
                (centre > 0.0).then(|| (libm::log10(centre), libm::log10(c as f64 / (hi - lo))))
            })
            .collect()
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut edges: Vec<f64> = (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect();
    edges[bins] = hi;
    edges
}

pub fn histogram(samples: &[f64], binning: &Binning) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("samples", "histogram samples must be finite"));
    }
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if max > min { (min, max) } else { (min - 0.5, max + 0.5) };
    let edges = match binning {
        Binning::Count(bins) => {
            if *bins == 0 || *bins > MAX_BINS {
                return Err(Error::param("bins", format!("bin count {bins} out of range")));
            }
            uniform_edges(lo, hi, *bins)
        }
        Binning::Width(width) => {
            if !(*width > 0.0) {
                return Err(Error::param("width", format!("bin width must be positive, got {width}")));
            }
            let bins = libm::ceil((hi - lo) / width).max(1.0);
            if bins > MAX_BINS as f64 {
                return Err(Error::param("width", format!("bin width {width} gives too many bins")));
            }
            let bins = bins as usize;
            let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
            if edges[bins] < hi {
                edges[bins] = hi;
            }
            edges
        }
        Binning::Edges(edges) => {
            if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::param("edges", "need at least two strictly increasing edges"));
            }
            if min < edges[0] || max > edges[edges.len() - 1] {
                return Err(Error::param(
                    "edges",
                    format!("samples span [{min}, {max}] beyond the given edges"),
                ));
            }
            edges.clone()
        }
        Binning::Logarithmic(bins) => {
            if *bins == 0 || *bins > MAX_BINS {
                return Err(Error::param("bins", format!("bin count {bins} out of range")));
            }
            if !(min > 0.0) {
                return Err(Error::param("samples", "logarithmic bins need positive samples"));
            }
            let (llo, lhi) = if max > min {
                (libm::log10(min), libm::log10(max))
            } else {
                (libm::log10(min) - 0.5, libm::log10(max) + 0.5)
            };
            let mut edges: Vec<f64> = uniform_edges(llo, lhi, *bins)
                .into_iter()
                .map(|e| libm::pow(10.0, e))
                .collect();
            edges[0] = edges[0].min(min);
            edges[*bins] = edges[*bins].max(max);
            edges
        }
        Binning::FreedmanDiaconis => {
            let mut sorted = samples.to_vec();
            sorted.sort_by(f64::total_cmp);
            let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
            let width = 2.0 * iqr / libm::cbrt(samples.len() as f64);
            let bins = if width > 0.0 {
                libm::ceil((hi - lo) / width).clamp(1.0, MAX_BINS as f64) as usize
            } else {
                // Sturges fallback when the interquartile range collapses.
                (libm::ceil(libm::log2(samples.len() as f64)) as usize + 1).max(1)
            };
            uniform_edges(lo, hi, bins)
        }
    };
    let mut hist = Histogram {
        counts: vec![0; edges.len() - 1],
        edges,
    };
    for &x in samples {
        let idx = hist.bin_index(x).ok_or_else(|| {
            Error::Inconsistent(format!("sample {x} fell outside its own histogram range"))
        })?;
        hist.counts[idx] += 1;
    }
    Ok(hist)
}
