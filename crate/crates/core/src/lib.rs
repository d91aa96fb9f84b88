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

//! Simulation core for photon-subtracted continuous-variable cluster states
//! built on complex network topologies.
//!
//! The pipeline is:
//!
//! 1. [`graph`] generates the *imprinted* network, the graph of C_Z gates.
//! 2. [`gaussian`] turns it into the cluster-state covariance matrix and the
//!    table of pairwise creation/annihilation contractions.
//! 3. [`wick`] evaluates photon-number moments of the state after `n` photons
//!    were subtracted from a single mode, by summing over order-respecting
//!    perfect matchings.
//! 4. [`emergent`] normalises the photon-number covariances into the weighted
//!    *emergent* network and computes weighted degree and clustering.
//! 5. [`ensemble`] and [`stats`] run many realizations and summarise the
//!    resulting distributions.
//!
//! Quadratures follow `x = a† + a`, `p = i(a† − a)`, so the vacuum has unit
//! quadrature variance. Every closed form in this crate assumes that
//! convention; covariance matrices produced with `ħ = 1/2` scaling will give
//! wrong photon numbers.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod emergent;
pub mod ensemble;
mod error;
pub mod gaussian;
pub mod graph;
mod linalg;
pub mod seed;
pub mod stats;
pub mod wick;

pub use error::{Error, Result};
pub use linalg::Matrix;
