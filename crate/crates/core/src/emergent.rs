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

//! Emergent networks of photon-number correlations.
//!
//! The weight between two modes is the absolute Pearson correlation of their
//! photon numbers,
//!
//! ```text
//! w_ij = |⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩| / √(Var n_i · Var n_j),    w_ii = 0,
//! ```
//!
//! and the network is summarised by weighted degree and clustering.

use alloc::format;
use alloc::vec::Vec;

use crate::gaussian::PhotonCovariance;
use crate::{Error, Matrix, Result};

/// Weights up to this far above one are clipped; larger ones are an error.
pub const WEIGHT_CLIP_TOL: f64 = 1e-9;

/// Photon-number variances at or below this are treated as zero.
pub const VARIANCE_FLOOR: f64 = 1e-14;

/// Clustering denominators below this give a clustering of zero.
pub const CLUSTERING_FLOOR: f64 = 1e-12;

/// Which state an emergent network describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateTag {
    Gaussian,
    Subtracted { mode: usize, photons: u32 },
}

/// Symmetric weighted adjacency matrix with entries in `[0, 1]` and an empty
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct EmergentNetwork {
    weights: Matrix,
    tag: StateTag,
}

impl EmergentNetwork {
    /// Wraps a weight matrix. The caller guarantees the invariants.
    pub(crate) fn from_weights(weights: Matrix, tag: StateTag) -> Self {
        EmergentNetwork { weights, tag }
    }

    /// Builds a network from arbitrary weights, checking the invariants.
    pub fn new(weights: Matrix, tag: StateTag) -> Result<Self> {
        let n = weights.dim();
        if let Some((row, col)) = weights.asymmetry(0.0) {
            return Err(Error::NotSymmetric {
                row,
                col,
                upper: weights[(row, col)],
                lower: weights[(col, row)],
            });
        }
        for i in 0..n {
            for j in 0..n {
                let w = weights[(i, j)];
                let ok = if i == j { w == 0.0 } else { (0.0..=1.0).contains(&w) };
                if !ok {
                    return Err(Error::param(
                        "weights",
                        format!("entry ({i}, {j}) = {w} outside the allowed range"),
                    ));
                }
            }
        }
        Ok(EmergentNetwork { weights, tag })
    }

    pub fn node_count(&self) -> usize {
        self.weights.dim()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn tag(&self) -> StateTag {
        self.tag
    }
}

/// Normalises a photon-number covariance into an emergent network.
pub fn correlation_network(cov: &PhotonCovariance, tag: StateTag) -> Result<EmergentNetwork> {
    let n = cov.node_count();
    let mut sd = Vec::with_capacity(n);
    for i in 0..n {
        let variance = cov.variance(i);
        if !(variance > VARIANCE_FLOOR) {
            return Err(Error::DegenerateVariance { node: i, variance });
        }
        sd.push(libm::sqrt(variance));
    }
    let mut weights = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut w = cov.get(i, j).abs() / (sd[i] * sd[j]);
            if w > 1.0 {
                if w > 1.0 + WEIGHT_CLIP_TOL {
                    return Err(Error::Inconsistent(format!(
                        "correlation between nodes {i} and {j} is {w}, above one"
                    )));
                }
                w = 1.0;
            }
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
    }
    Ok(EmergentNetwork { weights, tag })
}

/// Row sums of the weight matrix.
pub fn weighted_degree(net: &EmergentNetwork) -> Vec<f64> {
    (0..net.node_count())
        .map(|i| net.weights.row(i).iter().sum())
        .collect()
}

/// Denominator of the weighted clustering coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ClusteringConvention {
    /// `(Σ_j w_ij)²`: all ordered neighbour pairs including `j = k`.
    #[default]
    Paper,
    /// `Σ_{j≠k} w_ij w_ik`: distinct neighbour pairs only.
    Strict,
}

/// Weighted clustering `Σ_{j≠k} w_ij w_jk w_ki / denominator`, where the
/// denominator follows `convention`.
pub fn weighted_clustering(net: &EmergentNetwork, convention: ClusteringConvention) -> Vec<f64> {
    let n = net.node_count();
    let w = &net.weights;
    (0..n)
        .map(|i| {
            let row = w.row(i);
            // The diagonal is zero, so j = k, j = i and k = i terms vanish.
            let mut triangles = 0.0;
            for (j, &wij) in row.iter().enumerate() {
                if wij == 0.0 {
                    continue;
                }
                let rj = w.row(j);
                let inner: f64 = rj.iter().zip(row).map(|(&wjk, &wki)| wjk * wki).sum();
                triangles += wij * inner;
            }
            let sum: f64 = row.iter().sum();
            let denominator = match convention {
                ClusteringConvention::Paper => sum * sum,
                ClusteringConvention::Strict => sum * sum - row.iter().map(|x| x * x).sum::<f64>(),
            };
            if denominator < CLUSTERING_FLOOR {
                0.0
            } else {
                triangles / denominator
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{gaussian_emergent, gaussian_photon_covariance, squeezing_from_db};
    use crate::graph::ImprintedNetwork;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn uniform(n: usize, w: f64) -> EmergentNetwork {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[(i, j)] = w;
                }
            }
        }
        EmergentNetwork::new(m, StateTag::Gaussian).unwrap()
    }

    #[test]
    fn complete_graph_gaussian_measures() {
        let s = squeezing_from_db(15.0).unwrap();
        let net = ImprintedNetwork::complete(100);
        let cov = gaussian_photon_covariance(&net, s);
        let em = correlation_network(&cov, StateTag::Gaussian).unwrap();
        let w = 125.0 * 9606.0 / 1_225_274.500_125;
        for i in 0..100 {
            for j in (0..100).filter(|&j| j != i) {
                assert_relative_eq!(em.weight(i, j), w, max_relative = 1e-12);
            }
        }
        for d in weighted_degree(&em) {
            assert_relative_eq!(d, 99.0 * w, max_relative = 1e-12);
            assert!((d - 97.018).abs() < 1e-3);
        }
        for c in weighted_clustering(&em, ClusteringConvention::Paper) {
            assert!((c - 0.970086).abs() < 5e-7, "{c}");
        }
        for c in weighted_clustering(&em, ClusteringConvention::Strict) {
            assert_relative_eq!(c, w, max_relative = 1e-12);
        }
    }

    #[test]
    fn perfectly_correlated_pair() {
        let mut cov = PhotonCovariance::zeros(2);
        cov.set(0, 0, 4.0);
        cov.set(1, 1, 9.0);
        cov.set(0, 1, -6.0);
        let em = correlation_network(&cov, StateTag::Gaussian).unwrap();
        assert_eq!(em.weight(0, 1), 1.0);
        assert_eq!(em.weight(0, 0), 0.0);
    }

    #[test]
    fn disconnected_components_do_not_correlate() {
        let net = ImprintedNetwork::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let s = squeezing_from_db(10.0).unwrap();
        let em = gaussian_emergent(&net, s);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(em.weight(i, j), 0.0);
        }
        assert!(em.weight(0, 1) > 0.0);
    }

    #[test]
    fn zero_weights() {
        let em = uniform(5, 0.0);
        assert!(weighted_degree(&em).iter().all(|&d| d == 0.0));
        assert!(weighted_clustering(&em, ClusteringConvention::Paper)
            .iter()
            .all(|&c| c == 0.0));
    }

    #[test]
    fn star_hub_has_no_clustering() {
        let mut m = Matrix::zeros(5);
        for leaf in 1..5 {
            m[(0, leaf)] = 0.7;
            m[(leaf, 0)] = 0.7;
        }
        let em = EmergentNetwork::new(m, StateTag::Gaussian).unwrap();
        assert_eq!(weighted_clustering(&em, ClusteringConvention::Paper)[0], 0.0);
        assert_eq!(weighted_clustering(&em, ClusteringConvention::Strict)[0], 0.0);
    }

    #[test]
    fn degenerate_variance() {
        let mut cov = PhotonCovariance::zeros(2);
        cov.set(0, 0, 1.0);
        assert_eq!(
            correlation_network(&cov, StateTag::Gaussian),
            Err(Error::DegenerateVariance { node: 1, variance: 0.0 })
        );
    }

    #[test]
    fn clipping() {
        let mut cov = PhotonCovariance::zeros(2);
        cov.set(0, 0, 1.0);
        cov.set(1, 1, 1.0);
        cov.set(0, 1, 1.0 + 1e-12);
        assert_eq!(correlation_network(&cov, StateTag::Gaussian).unwrap().weight(0, 1), 1.0);
        cov.set(0, 1, 1.0 + 1e-6);
        assert!(matches!(
            correlation_network(&cov, StateTag::Gaussian),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn rejects_invalid_weights() {
        let mut m = Matrix::zeros(2);
        m[(0, 1)] = 0.5;
        assert!(EmergentNetwork::new(m.clone(), StateTag::Gaussian).is_err());
        m[(1, 0)] = 0.5;
        m[(0, 0)] = 0.1;
        assert!(EmergentNetwork::new(m, StateTag::Gaussian).is_err());
    }

    proptest! {
        #[test]
        fn conventions_on_uniform_graphs(n in 3usize..40, w in 0.01..1.0f64) {
            let em = uniform(n, w);
            let paper = weighted_clustering(&em, ClusteringConvention::Paper);
            let strict = weighted_clustering(&em, ClusteringConvention::Strict);
            let ratio = (n - 2) as f64 / (n - 1) as f64;
            for (p, s) in paper.iter().zip(&strict) {
                prop_assert!((p - s * ratio).abs() < 1e-12);
            }
        }

        #[test]
        fn clustering_is_bounded(n in 2usize..15, raw in proptest::collection::vec(0.0..=1.0f64, 225)) {
            let mut m = Matrix::zeros(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    m[(i, j)] = raw[i * 15 + j];
                    m[(j, i)] = raw[i * 15 + j];
                }
            }
            let em = EmergentNetwork::new(m, StateTag::Gaussian).unwrap();
            for conv in [ClusteringConvention::Paper, ClusteringConvention::Strict] {
                for c in weighted_clustering(&em, conv) {
                    prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
                }
            }
            for d in weighted_degree(&em) {
                prop_assert!(d >= 0.0 && d <= (n - 1) as f64);
            }
        }
    }
}
