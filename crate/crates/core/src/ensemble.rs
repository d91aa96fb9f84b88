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

//! Many-realization experiments.
//!
//! Every realization is an independent, pure function of the experiment spec
//! and its index: [`run_realization`] generates the imprinted network from the
//! realization's seed stream, builds the Gaussian emergent network and, if
//! requested, the emergent network after photon subtraction. An
//! [`EnsembleReport`] collects the per-node measures keyed by realization
//! index, so the order in which realizations finish never matters.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::emergent::{
    correlation_network, weighted_clustering, weighted_degree, ClusteringConvention, StateTag,
};
use crate::gaussian::{
    cluster_covariance, gaussian_photon_covariance, pair_contractions, SqueezingParam,
};
use crate::graph::{
    binary_clustering, binary_degree, distance_groups, generate, highest_degree_node,
    neighbor_subnetwork, DistanceGroup, ImprintedNetwork, Model, ModelSpec,
};
use crate::seed::{self, Stream};
use crate::stats::{moments, BootstrapConfig, MomentSummary};
use crate::wick::{locality_filter, subtracted_photon_covariance, SubtractionSpec};
use crate::{Error, Result};

/// Where photons are subtracted in each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subtraction {
    None,
    /// The node of highest imprinted degree (lowest index on ties).
    Hub { photons: u32 },
    /// A node drawn uniformly from the realization's seed stream.
    RandomNode { photons: u32 },
}

impl Subtraction {
    pub fn photons(self) -> Option<u32> {
        match self {
            Subtraction::None => None,
            Subtraction::Hub { photons } | Subtraction::RandomNode { photons } => Some(photons),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub model: Model,
    pub n: usize,
    pub squeezing_db: f64,
    pub subtraction: Subtraction,
    pub realizations: usize,
    pub master_seed: u64,
    /// Evaluate every photon-number covariance with the Wick engine instead
    /// of copying the Gaussian values the locality theorem guarantees.
    pub exact: bool,
    pub clustering: ClusteringConvention,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::param("realizations", "need at least one realization"));
        }
        if self.n == 0 {
            return Err(Error::param("n", "need at least one node"));
        }
        SqueezingParam::from_db(self.squeezing_db)?;
        ModelSpec::new(self.model, self.n, 0).validate()
    }

    /// Seed of realization `index`.
    pub fn realization_seed(&self, index: usize) -> u64 {
        seed::stream_seed(self.master_seed, index as u64)
    }

    pub fn model_spec(&self, index: usize) -> ModelSpec {
        ModelSpec::new(self.model, self.n, self.realization_seed(index))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NetworkState {
    Imprinted,
    Gaussian,
    Subtracted,
}

impl NetworkState {
    pub const ALL: [NetworkState; 3] = [
        NetworkState::Imprinted,
        NetworkState::Gaussian,
        NetworkState::Subtracted,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NetworkState::Imprinted => "imprinted",
            NetworkState::Gaussian => "gaussian",
            NetworkState::Subtracted => "subtracted",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.label() == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Degree,
    Clustering,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::Degree, Measure::Clustering];

    pub fn label(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Clustering => "clustering",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.label() == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeMeasures {
    pub degree: f64,
    pub clustering: f64,
}

impl NodeMeasures {
    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Degree => self.degree,
            Measure::Clustering => self.clustering,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub node: usize,
    /// Distance stratum from the subtraction node, if there is one.
    pub distance: Option<DistanceGroup>,
    /// For neighbours of the subtraction node: links to other neighbours.
    pub nn_connectivity: Option<usize>,
    pub imprinted: NodeMeasures,
    pub gaussian: NodeMeasures,
    pub subtracted: Option<NodeMeasures>,
}

impl NodeRecord {
    pub fn measures(&self, state: NetworkState) -> Option<NodeMeasures> {
        match state {
            NetworkState::Imprinted => Some(self.imprinted),
            NetworkState::Gaussian => Some(self.gaussian),
            NetworkState::Subtracted => self.subtracted,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRecord {
    pub index: usize,
    pub seed: u64,
    pub network: ImprintedNetwork,
    pub subtraction_node: Option<usize>,
    pub nodes: Vec<NodeRecord>,
}

/// A realization that failed, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedRealization {
    pub index: usize,
    pub reason: String,
}

fn measures(degree: &[f64], clustering: &[f64], node: usize) -> NodeMeasures {
    NodeMeasures {
        degree: degree[node],
        clustering: clustering[node],
    }
}

/// Runs realization `index` of `spec`.
pub fn run_realization(spec: &ExperimentSpec, index: usize) -> Result<RealizationRecord> {
    let seed = spec.realization_seed(index);
    let network = generate(&spec.model_spec(index))?;
    let n = network.node_count();
    let s = SqueezingParam::from_db(spec.squeezing_db)?;

    let imp_degree: Vec<f64> = binary_degree(&network).into_iter().map(|d| d as f64).collect();
    let imp_clustering = binary_clustering(&network);

    let gaussian_cov = gaussian_photon_covariance(&network, s);
    let gaussian = correlation_network(&gaussian_cov, StateTag::Gaussian)?;
    let g_degree = weighted_degree(&gaussian);
    let g_clustering = weighted_clustering(&gaussian, spec.clustering);

    let source = match spec.subtraction {
        Subtraction::None => None,
        Subtraction::Hub { .. } => highest_degree_node(&network),
        Subtraction::RandomNode { .. } => {
            Some(seed::rng(seed, Stream::SubtractionNode).random_range(0..n))
        }
    };

    let mut subtracted = None;
    let mut groups = None;
    let mut nn = None;
    if let (Some(source), Some(photons)) = (source, spec.subtraction.photons()) {
        let sub = SubtractionSpec::new(source, photons);
        let table = pair_contractions(&cluster_covariance(&network, s))?;
        let filter = if spec.exact {
            None
        } else {
            Some(locality_filter(&network, source)?)
        };
        let cov = subtracted_photon_covariance(&table, sub, &gaussian_cov, filter.as_ref())?;
        let em = correlation_network(
            &cov,
            StateTag::Subtracted {
                mode: source,
                photons,
            },
        )?;
        subtracted = Some((weighted_degree(&em), weighted_clustering(&em, spec.clustering)));
        groups = Some(distance_groups(&network, source)?);
        nn = Some(neighbor_subnetwork(&network, source)?);
    }

    let nodes = (0..n)
        .map(|node| NodeRecord {
            node,
            distance: groups.as_ref().map(|g| g.membership[node]),
            nn_connectivity: nn.as_ref().and_then(|sub| sub.connectivity_of(node)),
            imprinted: measures(&imp_degree, &imp_clustering, node),
            gaussian: measures(&g_degree, &g_clustering, node),
            subtracted: subtracted.as_ref().map(|(d, c)| measures(d, c, node)),
        })
        .collect();

    Ok(RealizationRecord {
        index,
        seed,
        network,
        subtraction_node: source,
        nodes,
    })
}

/// Subset of nodes a statistic is pooled over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SampleGroup {
    All,
    Distance(DistanceGroup),
    /// Neighbours of the subtraction node linked to this many other neighbours.
    NnConnectivity(usize),
}

impl SampleGroup {
    /// `all`, `distance:0` … `distance:3+`, or `nn:<k>`.
    pub fn label(&self) -> String {
        match self {
            SampleGroup::All => "all".to_string(),
            SampleGroup::Distance(g) => format!("distance:{}", g.label()),
            SampleGroup::NnConnectivity(k) => format!("nn:{k}"),
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        if label == "all" {
            return Some(SampleGroup::All);
        }
        if let Some(d) = label.strip_prefix("distance:") {
            return DistanceGroup::ALL
                .into_iter()
                .find(|g| g.label() == d)
                .map(SampleGroup::Distance);
        }
        label
            .strip_prefix("nn:")
            .and_then(|k| k.parse().ok())
            .map(SampleGroup::NnConnectivity)
    }

    fn contains(&self, node: &NodeRecord) -> bool {
        match self {
            SampleGroup::All => true,
            SampleGroup::Distance(g) => node.distance == Some(*g),
            SampleGroup::NnConnectivity(k) => node.nn_connectivity == Some(*k),
        }
    }
}

/// Moments of one pooled sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub group: SampleGroup,
    pub state: NetworkState,
    pub measure: Measure,
    pub count: usize,
    /// `None` when fewer than two samples were pooled.
    pub summary: Option<MomentSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub spec: ExperimentSpec,
    /// Successful realizations in increasing index order.
    pub records: Vec<RealizationRecord>,
    /// Failed realizations in increasing index order.
    pub skipped: Vec<SkippedRealization>,
}

impl EnsembleReport {
    /// Collects realization outcomes, in any order, into a report sorted by
    /// realization index.
    pub fn assemble<I>(spec: ExperimentSpec, outcomes: I) -> Self
    where
        I: IntoIterator<Item = (usize, Result<RealizationRecord>)>,
    {
        let mut records = Vec::new();
        let mut skipped = Vec::new();
        for (index, outcome) in outcomes {
            match outcome {
                Ok(record) => records.push(record),
                Err(e) => skipped.push(SkippedRealization {
                    index,
                    reason: e.to_string(),
                }),
            }
        }
        records.sort_by_key(|r| r.index);
        skipped.sort_by_key(|s| s.index);
        EnsembleReport {
            spec,
            records,
            skipped,
        }
    }

    /// Pooled samples of `measure` in `state` over the nodes of `group`, in
    /// (realization, node) order.
    pub fn samples(&self, group: SampleGroup, state: NetworkState, measure: Measure) -> Vec<f64> {
        self.records
            .iter()
            .flat_map(|r| r.nodes.iter())
            .filter(|node| group.contains(node))
            .filter_map(|node| node.measures(state).map(|m| m.get(measure)))
            .collect()
    }

    /// Samples split by distance from the subtraction node. Empty without a
    /// subtraction.
    pub fn group_by_distance(
        &self,
        state: NetworkState,
        measure: Measure,
    ) -> BTreeMap<DistanceGroup, Vec<f64>> {
        let mut out: BTreeMap<DistanceGroup, Vec<f64>> = BTreeMap::new();
        for node in self.records.iter().flat_map(|r| r.nodes.iter()) {
            if let (Some(g), Some(m)) = (node.distance, node.measures(state)) {
                out.entry(g).or_default().push(m.get(measure));
            }
        }
        out
    }

    /// Samples of the subtraction node's neighbours, bucketed by how many other
    /// neighbours each is linked to.
    pub fn group_by_nn_connectivity(
        &self,
        state: NetworkState,
        measure: Measure,
    ) -> BTreeMap<usize, Vec<f64>> {
        let mut out: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for node in self.records.iter().flat_map(|r| r.nodes.iter()) {
            if let (Some(k), Some(m)) = (node.nn_connectivity, node.measures(state)) {
                out.entry(k).or_default().push(m.get(measure));
            }
        }
        out
    }

    /// Non-empty groups in canonical order: all, distances, nn buckets.
    pub fn groups(&self) -> Vec<SampleGroup> {
        let mut distance = [false; 4];
        let mut buckets = alloc::collections::BTreeSet::new();
        for node in self.records.iter().flat_map(|r| r.nodes.iter()) {
            if let Some(g) = node.distance {
                distance[g.index()] = true;
            }
            if let Some(k) = node.nn_connectivity {
                buckets.insert(k);
            }
        }
        let mut out = Vec::new();
        if !self.records.is_empty() {
            out.push(SampleGroup::All);
        }
        out.extend(
            DistanceGroup::ALL
                .into_iter()
                .filter(|g| distance[g.index()])
                .map(SampleGroup::Distance),
        );
        out.extend(buckets.into_iter().map(SampleGroup::NnConnectivity));
        out
    }

    /// States with data in this report.
    pub fn states(&self) -> Vec<NetworkState> {
        let mut out = alloc::vec![NetworkState::Imprinted, NetworkState::Gaussian];
        if self.spec.subtraction != Subtraction::None {
            out.push(NetworkState::Subtracted);
        }
        out
    }

    /// Moments for every group × state × measure. The bootstrap seed of each
    /// set is derived from the master seed and the set's label.
    pub fn summaries(&self, resamples: usize) -> Result<Vec<GroupSummary>> {
        let mut out = Vec::new();
        for group in self.groups() {
            for state in self.states() {
                for measure in Measure::ALL {
                    let samples = self.samples(group, state, measure);
                    if samples.is_empty() {
                        continue;
                    }
                    let label = format!("{}/{}/{}", group.label(), state.label(), measure.label());
                    let cfg = BootstrapConfig::new(
                        resamples,
                        seed::stream_seed(self.spec.master_seed, seed::label_hash(&label)),
                    );
                    let summary = if samples.len() >= 2 {
                        Some(moments(&samples, &cfg)?)
                    } else {
                        None
                    };
                    out.push(GroupSummary {
                        group,
                        state,
                        measure,
                        count: samples.len(),
                        summary,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Runs every realization of `spec` in sequence.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<EnsembleReport> {
    spec.validate()?;
    let outcomes: Vec<_> = (0..spec.realizations)
        .map(|r| (r, run_realization(spec, r)))
        .collect();
    Ok(EnsembleReport::assemble(spec.clone(), outcomes))
}
