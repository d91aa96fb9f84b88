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

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors produced by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A model or experiment parameter is outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("node {node} out of range for a network of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("operator references mode {mode} but the contraction table has {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("matrix is not symmetric at ({row}, {col}): {upper} vs {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },

    /// The brute-force matcher refuses words whose matching count explodes.
    #[error("operator word of length {len} exceeds the brute-force limit of {max}")]
    WordTooLong { len: usize, max: usize },

    /// `<(a†_S)^n (a_S)^n>` vanished: the state has no n-photon component in S.
    #[error("cannot subtract {photons} photon(s) from mode {mode}: normalisation {norm:e} is degenerate")]
    DegenerateSubtraction { mode: usize, photons: u32, norm: f64 },

    #[error("photon-number variance of node {node} is degenerate ({variance:e})")]
    DegenerateVariance { node: usize, variance: f64 },

    #[error("too few samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// An analytically guaranteed property failed numerically.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
