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

//! Imprinted network topologies and binary graph measures.
//!
//! An [`ImprintedNetwork`] is the undirected simple graph whose edges are the
//! C_Z gates applied to the squeezed modes. Generators cover the four models
//! used for the experiments: Barabási–Albert preferential attachment,
//! Watts–Strogatz rewiring, Erdős–Rényi and the complete graph.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::seed::{self, Stream};
use crate::{Error, Result};

/// Symmetric 0/1 adjacency matrix with an empty diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImprintedNetwork {
    n: usize,
    adjacency: Vec<u8>,
}

impl ImprintedNetwork {
    /// Network with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        ImprintedNetwork {
            n,
            adjacency: vec![0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut net = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                net.link(i, j);
            }
        }
        net
    }

    /// Builds a network from an undirected edge list. Duplicate edges are
    /// merged; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Self::empty(n);
        for (i, j) in edges {
            for node in [i, j] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if i == j {
                return Err(Error::param("edges", alloc::format!("self-loop on node {i}")));
            }
            net.link(i, j);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j] != 0
    }

    /// Adjacency entry as a number, `0` or `1`.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.adjacency[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i * self.n..(i + 1) * self.n]
            .iter()
            .enumerate()
            .filter_map(|(j, &a)| (a != 0).then_some(j))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a != 0).count() / 2
    }

    /// Row-major `A²`: entry `(i, j)` counts the walks of exactly two steps
    /// from `i` to `j`; the diagonal is the degree.
    pub fn two_step_walks(&self) -> Vec<u32> {
        let n = self.n;
        let lists: Vec<Vec<usize>> = (0..n).map(|i| self.neighbors(i).collect()).collect();
        let mut out = vec![0u32; n * n];
        for nbrs in &lists {
            for &a in nbrs {
                for &b in nbrs {
                    out[a * n + b] += 1;
                }
            }
        }
        out
    }

    fn link(&mut self, i: usize, j: usize) {
        self.adjacency[i * self.n + j] = 1;
        self.adjacency[j * self.n + i] = 1;
    }

    fn unlink(&mut self, i: usize, j: usize) {
        self.adjacency[i * self.n + j] = 0;
        self.adjacency[j * self.n + i] = 0;
    }
}

/// Random graph model and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Barabási–Albert: every new node attaches `m` edges.
    BarabasiAlbert { m: usize },
    /// Watts–Strogatz: ring lattice to the `k`-th neighbour on each side,
    /// each edge rewired with probability `p`.
    WattsStrogatz { k: usize, p: f64 },
    /// Erdős–Rényi: each pair linked independently with probability `p`.
    ErdosRenyi { p: f64 },
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        ModelSpec { model, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        match self.model {
            Model::BarabasiAlbert { m } if m < 1 || m >= n => Err(Error::param(
                "m",
                alloc::format!("BA requires 1 <= m < n, got m={m}, n={n}"),
            )),
            Model::WattsStrogatz { k, .. } if k < 1 || 2 * k >= n => Err(Error::param(
                "k",
                alloc::format!("WS requires 1 <= k < n/2, got k={k}, n={n}"),
            )),
            Model::WattsStrogatz { p, .. } | Model::ErdosRenyi { p } if !prob(p) => Err(
                Error::param("p", alloc::format!("probability must lie in [0, 1], got {p}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Generates a network from `spec`. The result depends only on `spec`.
pub fn generate(spec: &ModelSpec) -> Result<ImprintedNetwork> {
    spec.validate()?;
    let mut rng = seed::rng(spec.seed, Stream::Topology);
    let n = spec.n;
    Ok(match spec.model {
        Model::BarabasiAlbert { m } => barabasi_albert(n, m, &mut rng),
        Model::WattsStrogatz { k, p } => watts_strogatz(n, k, p, &mut rng),
        Model::ErdosRenyi { p } => erdos_renyi(n, p, &mut rng),
        Model::Complete => ImprintedNetwork::complete(n),
    })
}

// Seed clique on m+1 nodes, then preferential attachment. `pool` holds every
// node once per unit of degree, so a uniform draw from it is degree-weighted.
fn barabasi_albert<R: Rng>(n: usize, m: usize, rng: &mut R) -> ImprintedNetwork {
    let mut net = ImprintedNetwork::empty(n);
    let mut pool = Vec::with_capacity(2 * m * n);
    for i in 0..=m {
        for j in (i + 1)..=m {
            net.link(i, j);
            pool.push(i);
            pool.push(j);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = pool[rng.random_range(0..pool.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            net.link(v, t);
            pool.push(v);
            pool.push(t);
        }
    }
    net
}

fn watts_strogatz<R: Rng>(n: usize, k: usize, p: f64, rng: &mut R) -> ImprintedNetwork {
    let mut net = ImprintedNetwork::empty(n);
    for i in 0..n {
        for j in 1..=k {
            net.link(i, (i + j) % n);
        }
    }
    for j in 1..=k {
        for i in 0..n {
            let far = (i + j) % n;
            // The lattice edge may already have been rewired away.
            if !net.has_edge(i, far) || rng.random::<f64>() >= p {
                continue;
            }
            if net.degree(i) >= n - 1 {
                continue;
            }
            let target = loop {
                let w = rng.random_range(0..n);
                if w != i && !net.has_edge(i, w) {
                    break w;
                }
            };
            net.unlink(i, far);
            net.link(i, target);
        }
    }
    net
}

fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> ImprintedNetwork {
    let mut net = ImprintedNetwork::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                net.link(i, j);
            }
        }
    }
    net
}

pub fn binary_degree(net: &ImprintedNetwork) -> Vec<usize> {
    (0..net.node_count()).map(|i| net.degree(i)).collect()
}

/// Fraction of pairs of neighbours that are themselves linked. Nodes with
/// fewer than two neighbours get 0.
pub fn binary_clustering(net: &ImprintedNetwork) -> Vec<f64> {
    (0..net.node_count())
        .map(|i| {
            let nbrs: Vec<usize> = net.neighbors(i).collect();
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut closed = 0usize;
            for (a, &u) in nbrs.iter().enumerate() {
                for &v in &nbrs[a + 1..] {
                    if net.has_edge(u, v) {
                        closed += 1;
                    }
                }
            }
            closed as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

fn check_node(net: &ImprintedNetwork, node: usize) -> Result<()> {
    if node < net.node_count() {
        Ok(())
    } else {
        Err(Error::NodeOutOfRange {
            node,
            n: net.node_count(),
        })
    }
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(net: &ImprintedNetwork, source: usize) -> Result<Vec<Option<usize>>> {
    check_node(net, source)?;
    let mut dist = vec![None; net.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0);
        for v in net.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// Distance stratum of a node relative to the subtraction node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceGroup {
    Source,
    Neighbor,
    NextNeighbor,
    /// Distance three or more, including unreachable nodes.
    Far,
}

impl DistanceGroup {
    pub const ALL: [DistanceGroup; 4] = [
        DistanceGroup::Source,
        DistanceGroup::Neighbor,
        DistanceGroup::NextNeighbor,
        DistanceGroup::Far,
    ];

    pub fn from_distance(d: Option<usize>) -> Self {
        match d {
            Some(0) => DistanceGroup::Source,
            Some(1) => DistanceGroup::Neighbor,
            Some(2) => DistanceGroup::NextNeighbor,
            _ => DistanceGroup::Far,
        }
    }

    /// Label used in output files: `0`, `1`, `2` or `3+`.
    pub fn label(self) -> &'static str {
        match self {
            DistanceGroup::Source => "0",
            DistanceGroup::Neighbor => "1",
            DistanceGroup::NextNeighbor => "2",
            DistanceGroup::Far => "3+",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Partition of the nodes by distance from a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceGroups {
    pub source: usize,
    /// Group of every node, indexed by node.
    pub membership: Vec<DistanceGroup>,
}

impl DistanceGroups {
    /// Nodes of one group, in increasing order.
    pub fn members(&self, group: DistanceGroup) -> Vec<usize> {
        self.membership
            .iter()
            .enumerate()
            .filter_map(|(i, &g)| (g == group).then_some(i))
            .collect()
    }
}

pub fn distance_groups(net: &ImprintedNetwork, source: usize) -> Result<DistanceGroups> {
    let membership = bfs_distances(net, source)?
        .into_iter()
        .map(DistanceGroup::from_distance)
        .collect();
    Ok(DistanceGroups { source, membership })
}

/// The sub-network induced on the neighbours of a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSubnetwork {
    pub source: usize,
    /// Neighbours of `source`, increasing. Node `i` of `induced` is `neighbors[i]`.
    pub neighbors: Vec<usize>,
    /// For each neighbour, the number of other neighbours it is linked to.
    pub connectivity: Vec<usize>,
    pub induced: ImprintedNetwork,
}

impl NeighborSubnetwork {
    /// Connectivity of a node of the full network, if it is a neighbour.
    pub fn connectivity_of(&self, node: usize) -> Option<usize> {
        self.neighbors
            .binary_search(&node)
            .ok()
            .map(|idx| self.connectivity[idx])
    }
}

pub fn neighbor_subnetwork(net: &ImprintedNetwork, source: usize) -> Result<NeighborSubnetwork> {
    check_node(net, source)?;
    let neighbors: Vec<usize> = net.neighbors(source).collect();
    let mut induced = ImprintedNetwork::empty(neighbors.len());
    for (a, &u) in neighbors.iter().enumerate() {
        for (b, &v) in neighbors.iter().enumerate().skip(a + 1) {
            if net.has_edge(u, v) {
                induced.link(a, b);
            }
        }
    }
    let connectivity = (0..neighbors.len()).map(|a| induced.degree(a)).collect();
    Ok(NeighborSubnetwork {
        source,
        neighbors,
        connectivity,
        induced,
    })
}

/// Node of maximal degree, lowest index on ties. `None` for an empty network.
pub fn highest_degree_node(net: &ImprintedNetwork) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for i in 0..net.node_count() {
        let d = net.degree(i);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}
