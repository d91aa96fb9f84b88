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

//! Acceptance criteria for the simulator. Each check prints one `PASS` or
//! `FAIL` line; the process exits nonzero if any check fails.

use std::collections::BTreeSet;
use std::time::Instant;

use cvnet::cli::cmd_run;
use cvnet::config::{ModelConfig, RunConfig, SubtractionArg};
use cvnet::runner::run_parallel;
use cvnet_core::emergent::{correlation_network, StateTag};
use cvnet_core::ensemble::{
    run_experiment, run_realization, ExperimentSpec, GroupSummary, Measure, NetworkState,
    SampleGroup, Subtraction,
};
use cvnet_core::gaussian::{
    cluster_covariance, gaussian_emergent, gaussian_photon_covariance, pair_contractions,
    CovarianceMatrix, PhotonCovariance, SqueezingParam,
};
use cvnet_core::graph::{
    binary_degree, bfs_distances, generate, DistanceGroup, Model, ModelSpec,
};
use cvnet_core::seed::{self, Stream};
use cvnet_core::stats::MomentSummary;
use cvnet_core::wick::{
    subtracted_photon_covariance, wick_expectation, wick_expectation_bruteforce, OperatorWord,
    SubtractionSpec, Token,
};
use cvnet_core::Matrix;
use rand::Rng;

struct Suite {
    failed: Vec<String>,
    total: usize,
}

impl Suite {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.total += 1;
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(name.to_string());
        }
    }
}

fn spec(model: Model, n: usize, subtraction: Subtraction, realizations: usize) -> ExperimentSpec {
    ExperimentSpec {
        model,
        n,
        squeezing_db: 15.0,
        subtraction,
        realizations,
        master_seed: 2024,
        exact: false,
        clustering: Default::default(),
    }
}

fn complete_graph_anchors(suite: &mut Suite) {
    let t = Instant::now();
    let record = run_realization(
        &spec(Model::Complete, 100, Subtraction::Hub { photons: 10 }, 1),
        0,
    )
    .expect("complete graph realization");
    let source = record.subtraction_node.expect("hub");
    let within = |x: f64, target: f64, tol: f64| (x - target).abs() <= tol;
    let mut worst = [0.0f64; 6];
    let mut ok = source == 0;
    for node in &record.nodes {
        let g = node.gaussian;
        let s = node.subtracted.expect("subtracted measures");
        ok &= within(g.degree, 97.019, 0.002) && within(g.clustering, 0.970086, 0.0002);
        worst[0] = worst[0].max((g.degree - 97.019).abs());
        worst[1] = worst[1].max((g.clustering - 0.970086).abs());
        let (d, c, slot) = if node.node == source {
            (97.037, 0.970649, 2)
        } else {
            (97.074, 0.970642, 4)
        };
        ok &= within(s.degree, d, 0.002) && within(s.clustering, c, 0.0002);
        worst[slot] = worst[slot].max((s.degree - d).abs());
        worst[slot + 1] = worst[slot + 1].max((s.clustering - c).abs());
    }
    let sub = record.nodes[source].subtracted.unwrap();
    let other = record.nodes[(source + 1) % 100].subtracted.unwrap();
    suite.check(
        "complete-graph anchors",
        ok,
        format!(
            "gaussian D={:.5} Cl={:.7}; node {source} D={:.5} Cl={:.7}; others D={:.5} Cl={:.7}; \
             max deviations {:?}; {:.2?}",
            record.nodes[0].gaussian.degree,
            record.nodes[0].gaussian.clustering,
            sub.degree,
            sub.clustering,
            other.degree,
            other.clustering,
            worst.map(|w| format!("{w:.1e}")),
            t.elapsed()
        ),
    );
}

fn gaussian_closed_form(suite: &mut Suite) {
    let t = Instant::now();
    let s = SqueezingParam::from_db(15.0).unwrap();
    let models = [
        Model::BarabasiAlbert { m: 2 },
        Model::WattsStrogatz { k: 2, p: 0.3 },
        Model::ErdosRenyi { p: 0.15 },
    ];
    let mut worst = 0.0f64;
    let mut ok = true;
    for i in 0..20u64 {
        let net = generate(&ModelSpec::new(models[i as usize % 3], 30, 100 + i)).unwrap();
        let closed = gaussian_emergent(&net, s);
        let table = pair_contractions(&cluster_covariance(&net, s)).unwrap();
        let cov = subtracted_photon_covariance(
            &table,
            SubtractionSpec::new(0, 0),
            &PhotonCovariance::zeros(30),
            None,
        )
        .unwrap();
        let piped = correlation_network(&cov, StateTag::Gaussian).unwrap();
        for (a, b) in closed.weights().as_slice().iter().zip(piped.weights().as_slice()) {
            let d = (a - b).abs();
            worst = worst.max(d);
            ok &= d <= 1e-9;
        }
    }
    suite.check(
        "gaussian closed form equals n=0 pipeline",
        ok,
        format!("20 networks N=30, max |Δw| = {worst:.2e} (tol 1e-9); {:.2?}", t.elapsed()),
    );
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.dim();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum();
        }
    }
    out
}

fn transpose(a: &Matrix) -> Matrix {
    let n = a.dim();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = a[(j, i)];
        }
    }
    out
}

/// Covariance of a random mixed Gaussian state: thermal modes, squeezed and
/// rotated, then coupled by a weighted controlled-phase layer.
fn random_physical_covariance(rng: &mut impl Rng, modes: usize) -> CovarianceMatrix {
    let dim = 2 * modes;
    let mut v = Matrix::zeros(dim);
    for i in 0..modes {
        let nu = rng.random_range(1.0..2.0);
        let r: f64 = rng.random_range(-1.0..1.0);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (c, s) = (theta.cos(), theta.sin());
        let (vx, vp) = (nu * (2.0 * r).exp(), nu * (-2.0 * r).exp());
        v[(i, i)] = c * c * vx + s * s * vp;
        v[(i + modes, i + modes)] = s * s * vx + c * c * vp;
        let off = c * s * (vx - vp);
        v[(i, i + modes)] = off;
        v[(i + modes, i)] = off;
    }
    let mut sym = Matrix::identity(dim);
    for i in 0..modes {
        for j in i..modes {
            let w = if rng.random_bool(0.6) {
                rng.random_range(-1.0..1.0)
            } else {
                0.0
            };
            sym[(i + modes, j)] = w;
            sym[(j + modes, i)] = w;
        }
    }
    let full = matmul(&matmul(&sym, &v), &transpose(&sym));
    let mut out = Matrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(i, j)] = 0.5 * (full[(i, j)] + full[(j, i)]);
        }
    }
    CovarianceMatrix::new(out).expect("symmetric")
}

fn wick_oracle(suite: &mut Suite) {
    let t = Instant::now();
    let mut rng = seed::rng(7, Stream::Topology);
    let (mut worst, mut ok, mut words) = (0.0f64, true, 0usize);
    for _ in 0..100 {
        let modes = rng.random_range(1..=5);
        let table = pair_contractions(&random_physical_covariance(&mut rng, modes)).unwrap();
        for _ in 0..6 {
            let len = rng.random_range(1..=12);
            let word: OperatorWord = (0..len)
                .map(|_| {
                    let m = rng.random_range(0..modes);
                    if rng.random_bool(0.5) {
                        Token::create(m)
                    } else {
                        Token::annihilate(m)
                    }
                })
                .collect();
            let dp = wick_expectation(&word, &table).unwrap();
            let bf = wick_expectation_bruteforce(&word, &table).unwrap();
            let diff = (dp - bf).norm();
            let rel = if bf.norm() > 0.0 { diff / bf.norm() } else { diff };
            worst = worst.max(rel);
            ok &= rel <= 1e-10;
            words += 1;
        }
    }
    suite.check(
        "wick dynamic program equals brute force",
        ok && words >= 500,
        format!("{words} words, max relative error {worst:.2e} (tol 1e-10); {:.2?}", t.elapsed()),
    );
}

fn locality(suite: &mut Suite) {
    let t = Instant::now();
    let s = SqueezingParam::from_db(15.0).unwrap();
    let mut worst = 0.0f64;
    let mut far_pairs = 0usize;
    let mut ok = true;
    let models = [
        Model::WattsStrogatz { k: 3, p: 0.2 },
        Model::BarabasiAlbert { m: 2 },
    ];
    for model in models {
        for r in 0..5u64 {
            let net = generate(&ModelSpec::new(model, 40, 500 + r)).unwrap();
            let source = (r as usize * 7) % 40;
            let dist = bfs_distances(&net, source).unwrap();
            let far = |i: usize| dist[i].is_none_or(|d| d > 2);
            let gaussian = gaussian_photon_covariance(&net, s);
            let table = pair_contractions(&cluster_covariance(&net, s)).unwrap();
            for photons in 1..=4 {
                let cov = subtracted_photon_covariance(
                    &table,
                    SubtractionSpec::new(source, photons),
                    &PhotonCovariance::zeros(40),
                    None,
                )
                .unwrap();
                for i in 0..40 {
                    for j in i..40 {
                        if far(i) || far(j) {
                            let d = (cov.get(i, j) - gaussian.get(i, j)).abs();
                            worst = worst.max(d);
                            ok &= d < 1e-8;
                            far_pairs += 1;
                        }
                    }
                }
            }
        }
    }
    suite.check(
        "subtraction leaves far covariances unchanged",
        ok && far_pairs > 0,
        format!(
            "10 networks N=40, n=1..4, exact mode, {far_pairs} far pairs, max |Δcov| = {worst:.2e} (tol 1e-8); {:.2?}",
            t.elapsed()
        ),
    );
}

fn ws_edge_count(suite: &mut Suite) {
    let mut bad = Vec::new();
    for k in [2usize, 5] {
        for p in [0.0, 0.05, 0.2, 0.6, 1.0] {
            for seed in 0..100u64 {
                let net = generate(&ModelSpec::new(Model::WattsStrogatz { k, p }, 100, seed)).unwrap();
                let total: usize = binary_degree(&net).iter().sum();
                if total != 2 * k * 100 {
                    bad.push((k, p, seed, total as f64 / 100.0));
                }
            }
        }
    }
    suite.check(
        "watts-strogatz mean degree is exactly 2k",
        bad.is_empty(),
        format!("1000 networks, k in {{2, 5}}, p in {{0, 0.05, 0.2, 0.6, 1}}; mismatches {bad:?}"),
    );
}

fn summary(
    group: SampleGroup,
    state: NetworkState,
    summaries: &[GroupSummary],
) -> MomentSummary {
    summaries
        .iter()
        .find(|g| g.group == group && g.state == state && g.measure == Measure::Degree)
        .and_then(|g| g.summary)
        .unwrap_or_else(|| panic!("no {} summary for {}", state.label(), group.label()))
}

fn trend_suite(suite: &mut Suite) {
    let t = Instant::now();
    let workers = 4;
    let hub = Subtraction::Hub { photons: 10 };
    let mut increase = Vec::new();
    let mut far_checks = Vec::new();
    for p in [0.05, 0.2, 0.6] {
        let report = run_parallel(&spec(Model::WattsStrogatz { k: 5, p }, 100, hub, 20), workers)
            .expect("ws ensemble");
        let sums = report.summaries(1000).unwrap();
        let g = summary(SampleGroup::All, NetworkState::Gaussian, &sums);
        let s = summary(SampleGroup::All, NetworkState::Subtracted, &sums);
        suite.check(
            &format!("trend (a) ws p={p}: mean and variance of degree increase"),
            s.mean > g.mean && s.variance > g.variance && report.skipped.is_empty(),
            format!(
                "mean {:.4} -> {:.4}, variance {:.4} -> {:.4}, {} skipped",
                g.mean,
                s.mean,
                g.variance,
                s.variance,
                report.skipped.len()
            ),
        );
        increase.push((p, s.mean - g.mean));
        far_checks.push((format!("ws p={p}"), sums));
    }
    let (lo, hi) = (increase[0].1, increase[2].1);
    suite.check(
        "trend (b) mean-degree increase larger at p=0.6 than p=0.05",
        hi > lo,
        format!("increase {lo:.4} at p=0.05, {hi:.4} at p=0.6"),
    );

    let report = run_parallel(
        &spec(Model::BarabasiAlbert { m: 1 }, 100, hub, 20),
        workers,
    )
    .expect("ba ensemble");
    let sums = report.summaries(1000).unwrap();
    let near = SampleGroup::Distance(DistanceGroup::Neighbor);
    let g = summary(near, NetworkState::Gaussian, &sums);
    let s = summary(near, NetworkState::Subtracted, &sums);
    suite.check(
        "trend (c) ba m=1: distance-1 mean degree decreases",
        s.mean < g.mean,
        format!("mean {:.4} -> {:.4}", g.mean, s.mean),
    );
    let buckets: BTreeSet<usize> = report
        .group_by_nn_connectivity(NetworkState::Subtracted, Measure::Degree)
        .into_keys()
        .collect();
    suite.check(
        "trend (e) ba m=1: only nn-connectivity bucket 0",
        buckets == BTreeSet::from([0]),
        format!("buckets {buckets:?}"),
    );
    far_checks.push(("ba m=1".to_string(), sums));

    // Within two combined standard errors, sqrt(se_g^2 + se_s^2), per moment.
    let far = SampleGroup::Distance(DistanceGroup::Far);
    for (label, sums) in &far_checks {
        let g = summary(far, NetworkState::Gaussian, sums);
        let s = summary(far, NetworkState::Subtracted, sums);
        let moments = [
            ("mean", Some(g.mean), Some(s.mean), Some(g.mean_error), Some(s.mean_error)),
            ("variance", Some(g.variance), Some(s.variance), Some(g.variance_error), Some(s.variance_error)),
            ("skewness", g.skewness, s.skewness, g.skewness_error, s.skewness_error),
            ("kurtosis", g.kurtosis, s.kurtosis, g.kurtosis_error, s.kurtosis_error),
        ];
        let mut ok = true;
        let mut detail = Vec::new();
        for (name, a, b, ea, eb) in moments {
            match (a, b, ea, eb) {
                (Some(a), Some(b), Some(ea), Some(eb)) => {
                    let se = ea.hypot(eb);
                    let z = (b - a).abs() / se;
                    ok &= z <= 2.0;
                    detail.push(format!("{name} {a:.4} vs {b:.4} ({z:.1} se)"));
                }
                _ => {
                    ok = false;
                    detail.push(format!("{name} undefined"));
                }
            }
        }
        suite.check(
            &format!("trend (d) {label}: distance>=3 degree moments match gaussian"),
            ok,
            format!("n={}; {}", g.count, detail.join(", ")),
        );
    }
    println!("     trend suite {:.2?}", t.elapsed());
}

fn determinism(suite: &mut Suite) {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::new(ModelConfig::Ws { k: 3, p: 0.2 }, 40);
    config.subtraction = SubtractionArg(Subtraction::RandomNode { photons: 3 });
    config.realizations = 6;
    config.master_seed = 99;
    config.bootstrap_resamples = 200;
    let mut csv = Vec::new();
    for (name, workers) in [("a", 1), ("b", 1), ("c", 4)] {
        let mut c = config.clone();
        c.workers = Some(workers);
        c.out = Some(dir.path().join(name).display().to_string());
        cmd_run(&c).expect("run");
        csv.push(std::fs::read(dir.path().join(name).join("samples.csv")).unwrap());
    }
    suite.check(
        "repeated runs write byte-identical samples.csv",
        csv[0] == csv[1] && csv[0] == csv[2] && !csv[0].is_empty(),
        format!("{} bytes, 1 and 4 workers", csv[0].len()),
    );

    let spec = config.experiment().unwrap();
    let serial = run_experiment(&spec).unwrap();
    let parallel = run_parallel(&spec, 4).unwrap();
    suite.check(
        "serial and parallel ensembles identical",
        serial == parallel,
        format!("{} realizations", serial.records.len()),
    );
}

fn main() {
    let mut suite = Suite {
        failed: Vec::new(),
        total: 0,
    };
    complete_graph_anchors(&mut suite);
    gaussian_closed_form(&mut suite);
    wick_oracle(&mut suite);
    locality(&mut suite);
    ws_edge_count(&mut suite);
    trend_suite(&mut suite);
    determinism(&mut suite);
    println!(
        "acceptance: {} of {} checks passed",
        suite.total - suite.failed.len(),
        suite.total
    );
    if !suite.failed.is_empty() {
        println!("failed: {}", suite.failed.join("; "));
        std::process::exit(1);
    }
}
