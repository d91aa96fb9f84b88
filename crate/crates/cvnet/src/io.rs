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

//! Plain-text file formats.
//!
//! Edge lists start with a header line `n=<N>` followed by one `i j` line per
//! link, 0-indexed with `i < j`. Blank lines and lines starting with `#` are
//! ignored on input. Covariance and weight matrices are headerless row-major
//! CSV. Floating-point values are written with 17 significant digits.

use std::io::{BufRead, Write};

use cvnet_core::emergent::{EmergentNetwork, StateTag};
use cvnet_core::gaussian::CovarianceMatrix;
use cvnet_core::graph::ImprintedNetwork;
use cvnet_core::Matrix;
use serde::{Deserialize, Serialize};

/// Formats `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_edge_list<W: Write>(net: &ImprintedNetwork, mut out: W) -> std::io::Result<()> {
    writeln!(out, "n={}", net.node_count())?;
    for (i, j) in net.edges() {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<ImprintedNetwork, String> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: String| format!("line {}: {msg}", lineno + 1);
        match n {
            None => {
                let value = line
                    .strip_prefix("n=")
                    .ok_or_else(|| at("expected header `n=<N>`".into()))?;
                n = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| at(format!("bad node count: {e}")))?,
                );
            }
            Some(_) => {
                let mut parts = line.split_whitespace();
                let mut next = || -> Result<usize, String> {
                    parts
                        .next()
                        .ok_or_else(|| at("expected two node indices".into()))?
                        .parse()
                        .map_err(|e| at(format!("bad node index: {e}")))
                };
                let (i, j) = (next()?, next()?);
                if parts.next().is_some() {
                    return Err(at("trailing fields".into()));
                }
                edges.push((i, j));
            }
        }
    }
    let n = n.ok_or("missing header `n=<N>`")?;
    ImprintedNetwork::from_edges(n, edges).map_err(|e| e.to_string())
}

fn write_matrix<W: Write>(m: &Matrix, mut out: W) -> std::io::Result<()> {
    for i in 0..m.dim() {
        let row: Vec<String> = m.row(i).iter().map(|&x| fmt_f64(x)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// `2N × 2N` quadrature covariance, x block first.
pub fn write_covariance_csv<W: Write>(cov: &CovarianceMatrix, out: W) -> std::io::Result<()> {
    write_matrix(cov.matrix(), out)
}

/// Dense `N × N` weight matrix.
pub fn write_emergent_csv<W: Write>(net: &EmergentNetwork, out: W) -> std::io::Result<()> {
    write_matrix(net.weights(), out)
}

/// Reads a square headerless CSV matrix.
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<Matrix, String> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        let start = data.len();
        for field in line.split(',') {
            data.push(
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: {e}", lineno + 1))?,
            );
        }
        let width = data.len() - start;
        if *cols.get_or_insert(width) != width {
            return Err(format!("line {}: ragged row", lineno + 1));
        }
        rows += 1;
    }
    if cols.unwrap_or(0) != rows {
        return Err(format!("matrix is not square ({rows} rows)"));
    }
    Matrix::from_row_major(rows, data).ok_or_else(|| "matrix is not square".to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateTagJson {
    Gaussian,
    Subtracted { mode: usize, photons: u32 },
}

impl From<StateTag> for StateTagJson {
    fn from(t: StateTag) -> Self {
        match t {
            StateTag::Gaussian => StateTagJson::Gaussian,
            StateTag::Subtracted { mode, photons } => StateTagJson::Subtracted { mode, photons },
        }
    }
}

impl From<StateTagJson> for StateTag {
    fn from(t: StateTagJson) -> Self {
        match t {
            StateTagJson::Gaussian => StateTag::Gaussian,
            StateTagJson::Subtracted { mode, photons } => StateTag::Subtracted { mode, photons },
        }
    }
}

/// JSON form of an emergent network; `weights` is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmergentJson {
    pub n: usize,
    pub state_tag: StateTagJson,
    pub weights: Vec<f64>,
}

impl From<&EmergentNetwork> for EmergentJson {
    fn from(net: &EmergentNetwork) -> Self {
        EmergentJson {
            n: net.node_count(),
            state_tag: net.tag().into(),
            weights: net.weights().as_slice().to_vec(),
        }
    }
}

impl EmergentJson {
    pub fn into_network(self) -> Result<EmergentNetwork, String> {
        let m = Matrix::from_row_major(self.n, self.weights)
            .ok_or_else(|| format!("expected {} weights", self.n * self.n))?;
        EmergentNetwork::new(m, self.state_tag.into()).map_err(|e| e.to_string())
    }
}

/// Neighbour lists, one per node.
pub fn adjacency_lists(net: &ImprintedNetwork) -> Vec<Vec<usize>> {
    (0..net.node_count()).map(|i| net.neighbors(i).collect()).collect()
}
