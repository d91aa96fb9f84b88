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

//! Gaussian cluster states: covariance matrices, pair contractions and the
//! closed-form photon-number statistics of the unsubtracted state.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::emergent::{EmergentNetwork, StateTag};
use crate::graph::ImprintedNetwork;
use crate::wick::{Kind, Token};
use crate::{Error, Matrix, Result};

/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Squeezing as a variance ratio relative to shot noise.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingParam(f64);

impl SqueezingParam {
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::param("squeezing_db", alloc::format!("not finite: {db}")));
        }
        Ok(SqueezingParam(libm::pow(10.0, db / 10.0)))
    }

    pub fn from_ratio(s: f64) -> Result<Self> {
        if s > 0.0 && s.is_finite() {
            Ok(SqueezingParam(s))
        } else {
            Err(Error::param("s", alloc::format!("squeezing must be positive, got {s}")))
        }
    }

    pub fn ratio(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * libm::log10(self.0)
    }
}

pub fn squeezing_from_db(db: f64) -> Result<SqueezingParam> {
    SqueezingParam::from_db(db)
}

/// Quadrature covariance matrix in `(x_1 … x_N, p_1 … p_N)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    v: Matrix,
}

impl CovarianceMatrix {
    /// Wraps a `2N × 2N` matrix after checking symmetry.
    pub fn new(v: Matrix) -> Result<Self> {
        if !v.dim().is_multiple_of(2) {
            return Err(Error::param("v", "dimension must be even"));
        }
        if let Some((row, col)) = v.asymmetry(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric {
                row,
                col,
                upper: v[(row, col)],
                lower: v[(col, row)],
            });
        }
        Ok(CovarianceMatrix {
            n_modes: v.dim() / 2,
            v,
        })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        CovarianceMatrix {
            n_modes,
            v: Matrix::identity(2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    /// `ln det V`; zero for pure states. `None` if `V` is not positive definite.
    pub fn log_det(&self) -> Option<f64> {
        self.v.log_det_spd()
    }
}

/// Covariance of the cluster state obtained by applying C_Z gates along the
/// edges of `net` to `N` modes squeezed by `s`:
///
/// ```text
/// V = [ s·1    s·A          ]
///     [ s·A    s·A² + 1/s·1 ]
/// ```
pub fn cluster_covariance(net: &ImprintedNetwork, s: SqueezingParam) -> CovarianceMatrix {
    let n = net.node_count();
    let s = s.ratio();
    let a2 = net.two_step_walks();
    let mut v = Matrix::zeros(2 * n);
    for i in 0..n {
        v[(i, i)] = s;
        v[(n + i, n + i)] = 1.0 / s;
        for j in 0..n {
            let a = f64::from(net.entry(i, j));
            v[(i, n + j)] = s * a;
            v[(n + i, j)] = s * a;
            v[(n + i, n + j)] += s * f64::from(a2[i * n + j]);
        }
    }
    CovarianceMatrix { n_modes: n, v }
}

/// Ordered second moments `⟨a#_j a#_k⟩` of a zero-mean Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTable {
    n: usize,
    create_create: Vec<Complex64>,
    annihilate_annihilate: Vec<Complex64>,
    create_annihilate: Vec<Complex64>,
    annihilate_create: Vec<Complex64>,
}

impl ContractionTable {
    pub fn n_modes(&self) -> usize {
        self.n
    }

    /// `⟨first · second⟩` for two operators in that order.
    pub fn get(&self, first: Token, second: Token) -> Complex64 {
        let idx = first.mode * self.n + second.mode;
        match (first.kind, second.kind) {
            (Kind::Create, Kind::Create) => self.create_create[idx],
            (Kind::Annihilate, Kind::Annihilate) => self.annihilate_annihilate[idx],
            (Kind::Create, Kind::Annihilate) => self.create_annihilate[idx],
            (Kind::Annihilate, Kind::Create) => self.annihilate_create[idx],
        }
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.n {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                modes: self.n,
            })
        }
    }
}

/// Contraction table of the Gaussian state with covariance `cov`.
///
/// With `a† = (x − ip)/2` and `a = (x + ip)/2`:
///
/// ```text
/// ⟨a†_j a†_k⟩ = ¼ [V_jk − V_{j+N,k+N} − i(V_{j,k+N} + V_{j+N,k})]
/// ⟨a_j a_k⟩   = ¼ [V_jk − V_{j+N,k+N} + i(V_{j,k+N} + V_{j+N,k})]
/// ⟨a†_j a_k⟩  = ¼ [V_jk + V_{j+N,k+N} + i(V_{j,k+N} − V_{j+N,k}) − 2δ_jk]
/// ⟨a_j a†_k⟩  = ⟨a†_k a_j⟩ + δ_jk
/// ```
pub fn pair_contractions(cov: &CovarianceMatrix) -> Result<ContractionTable> {
    let v = cov.matrix();
    if let Some((row, col)) = v.asymmetry(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric {
            row,
            col,
            upper: v[(row, col)],
            lower: v[(col, row)],
        });
    }
    let n = cov.n_modes();
    let mut cc = vec![Complex64::new(0.0, 0.0); n * n];
    let mut aa = cc.clone();
    let mut ca = cc.clone();
    let mut ac = cc.clone();
    for j in 0..n {
        for k in 0..n {
            let xx = v[(j, k)];
            let pp = v[(n + j, n + k)];
            let xp = v[(j, n + k)];
            let px = v[(n + j, k)];
            let delta = if j == k { 1.0 } else { 0.0 };
            cc[j * n + k] = Complex64::new(xx - pp, -(xp + px)) / 4.0;
            aa[j * n + k] = Complex64::new(xx - pp, xp + px) / 4.0;
            ca[j * n + k] = Complex64::new(xx + pp - 2.0 * delta, xp - px) / 4.0;
        }
    }
    for j in 0..n {
        for k in 0..n {
            let delta = if j == k { 1.0 } else { 0.0 };
            ac[j * n + k] = ca[k * n + j] + delta;
        }
    }
    Ok(ContractionTable {
        n,
        create_create: cc,
        annihilate_annihilate: aa,
        create_annihilate: ca,
        annihilate_create: ac,
    })
}

/// Connected photon-number correlations `⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩`; the
/// diagonal holds the variances.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonCovariance {
    n: usize,
    data: Vec<f64>,
}

impl PhotonCovariance {
    pub fn zeros(n: usize) -> Self {
        PhotonCovariance {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.get(i, i)
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }
}

/// Closed-form photon-number covariance of the cluster state:
///
/// ```text
/// c_ij = s²/8 · ((A²)_ij² + 2 A_ij)                      (i ≠ j)
/// c_ii = 1/8 · (s² + 1/s² + s² D_i² + 2 D_i − 2)
/// ```
pub fn gaussian_photon_covariance(net: &ImprintedNetwork, s: SqueezingParam) -> PhotonCovariance {
    let n = net.node_count();
    let s2 = s.ratio() * s.ratio();
    let a2 = net.two_step_walks();
    let mut cov = PhotonCovariance::zeros(n);
    for i in 0..n {
        let d = f64::from(a2[i * n + i]);
        cov.set(i, i, (s2 + 1.0 / s2 + s2 * d * d + 2.0 * d - 2.0) / 8.0);
        for j in (i + 1)..n {
            let w = f64::from(a2[i * n + j]);
            cov.set(i, j, s2 / 8.0 * (w * w + 2.0 * f64::from(net.entry(i, j))));
        }
    }
    cov
}

/// Emergent network of the unsubtracted cluster state, in closed form:
/// `c_ij / √(c_ii c_jj)` off the diagonal.
pub fn gaussian_emergent(net: &ImprintedNetwork, s: SqueezingParam) -> EmergentNetwork {
    let cov = gaussian_photon_covariance(net, s);
    let n = net.node_count();
    let mut weights = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = cov.get(i, j) / libm::sqrt(cov.variance(i) * cov.variance(j));
            weights[(i, j)] = w;
            weights[(j, i)] = w;
        }
    }
    EmergentNetwork::from_weights(weights, StateTag::Gaussian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Model, ModelSpec};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cr(mode: usize) -> Token {
        Token::create(mode)
    }
    fn an(mode: usize) -> Token {
        Token::annihilate(mode)
    }

    #[test]
    fn squeezing_conversions() {
        assert_relative_eq!(squeezing_from_db(15.0).unwrap().ratio(), 31.622776601683793);
        assert_eq!(squeezing_from_db(0.0).unwrap().ratio(), 1.0);
        assert_relative_eq!(squeezing_from_db(10.0).unwrap().ratio(), 10.0);
        assert_relative_eq!(SqueezingParam::from_ratio(31.6).unwrap().db(), 14.996870826184039);
        assert!(squeezing_from_db(f64::INFINITY).is_err());
        assert!(SqueezingParam::from_ratio(0.0).is_err());
    }

    #[test]
    fn single_squeezed_mode() {
        let v = cluster_covariance(&ImprintedNetwork::empty(1), SqueezingParam(10.0));
        assert_eq!(v.matrix().as_slice(), &[10.0, 0.0, 0.0, 0.1]);
    }

    #[test]
    fn edge_pair_blocks() {
        let net = ImprintedNetwork::complete(2);
        let v = cluster_covariance(&net, SqueezingParam(2.0));
        #[rustfmt::skip]
        let expected = [
            2.0, 0.0, 0.0, 2.0,
            0.0, 2.0, 2.0, 0.0,
            0.0, 2.0, 2.5, 0.0,
            2.0, 0.0, 0.0, 2.5,
        ];
        assert_eq!(v.matrix().as_slice(), &expected);
    }

    #[test]
    fn unit_squeezing_blocks() {
        let net = generate(&ModelSpec::new(Model::ErdosRenyi { p: 0.3 }, 12, 4)).unwrap();
        let v = cluster_covariance(&net, SqueezingParam(1.0));
        let a2 = net.two_step_walks();
        for i in 0..12 {
            for j in 0..12 {
                let delta = if i == j { 1.0 } else { 0.0 };
                assert_eq!(v.matrix()[(12 + i, 12 + j)], f64::from(a2[i * 12 + j]) + delta);
            }
        }
        assert!(v.log_det().unwrap().abs() < 1e-10);
    }

    #[test]
    fn vacuum_contractions() {
        let t = pair_contractions(&CovarianceMatrix::vacuum(2)).unwrap();
        for (j, k) in [(0, 0), (0, 1), (1, 1)] {
            assert_eq!(t.get(cr(j), cr(k)), Complex64::new(0.0, 0.0));
            assert_eq!(t.get(an(j), an(k)), Complex64::new(0.0, 0.0));
            assert_eq!(t.get(cr(j), an(k)), Complex64::new(0.0, 0.0));
        }
        assert_eq!(t.get(an(0), cr(0)), Complex64::new(1.0, 0.0));
        assert_eq!(t.get(an(0), cr(1)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_mode_number() {
        let v = cluster_covariance(&ImprintedNetwork::empty(1), SqueezingParam(4.0));
        let t = pair_contractions(&v).unwrap();
        assert_relative_eq!(t.get(cr(0), an(0)).re, 0.5625, epsilon = 1e-15);
    }

    #[test]
    fn cluster_contractions_match_closed_forms() {
        let net = generate(&ModelSpec::new(Model::BarabasiAlbert { m: 2 }, 20, 8)).unwrap();
        let s = 31.6;
        let t = pair_contractions(&cluster_covariance(&net, SqueezingParam(s))).unwrap();
        let a2 = net.two_step_walks();
        for i in 0..20 {
            let d = net.degree(i) as f64;
            assert_relative_eq!(
                t.get(cr(i), an(i)).re,
                (s + 1.0 / s + s * d - 2.0) / 4.0,
                max_relative = 1e-14
            );
            for j in (0..20).filter(|&j| j != i) {
                let w = f64::from(a2[i * 20 + j]);
                let a = f64::from(net.entry(i, j));
                assert_relative_eq!(t.get(cr(i), an(j)).re, s * w / 4.0, epsilon = 1e-12);
                assert_relative_eq!(t.get(an(i), cr(j)).re, s * w / 4.0, epsilon = 1e-12);
                let cc = t.get(cr(i), cr(j));
                assert_relative_eq!(cc.re, -s * w / 4.0, epsilon = 1e-12);
                assert_relative_eq!(cc.im.abs(), s * a / 2.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_covariance() {
        let mut m = Matrix::identity(2);
        m[(0, 1)] = 0.5;
        assert!(matches!(CovarianceMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn photon_covariance_examples() {
        let iso = gaussian_photon_covariance(&ImprintedNetwork::empty(1), SqueezingParam(1.0));
        assert_eq!(iso.variance(0), 0.0);
        let pair = gaussian_photon_covariance(&ImprintedNetwork::complete(2), SqueezingParam(2.0));
        assert_eq!(pair.get(0, 1), 1.0);
    }

    #[test]
    fn complete_graph_gaussian_weight() {
        let s = squeezing_from_db(15.0).unwrap();
        let g = gaussian_emergent(&ImprintedNetwork::complete(100), s);
        // s² = 1000: 125·(98² + 2) / ((1000 + 1e-3 + 1000·99² + 198 − 2)/8)
        let expected = 125.0 * 9606.0 / 1_225_274.500_125;
        for i in 0..100 {
            for j in 0..100 {
                let w = g.weight(i, j);
                if i == j {
                    assert_eq!(w, 0.0);
                } else {
                    assert_relative_eq!(w, expected, max_relative = 1e-12);
                }
            }
        }
        assert_relative_eq!(expected, 0.979984, epsilon = 5e-7);
    }

    #[test]
    fn isolated_and_pair_emergent() {
        let s = SqueezingParam(3.0);
        let g = gaussian_emergent(&ImprintedNetwork::empty(2), s);
        assert_eq!(g.weight(0, 1), 0.0);
        let g = gaussian_emergent(&ImprintedNetwork::complete(2), s);
        let var = (9.0 + 1.0 / 9.0 + 9.0 + 2.0 - 2.0) / 8.0;
        assert_relative_eq!(g.weight(0, 1), (9.0 / 4.0) / var, max_relative = 1e-14);
    }

    fn any_net() -> impl Strategy<Value = ImprintedNetwork> {
        let model = prop_oneof![
            (1usize..4).prop_map(|m| Model::BarabasiAlbert { m }),
            (1usize..4, 0.0..=1.0f64).prop_map(|(k, p)| Model::WattsStrogatz { k, p }),
            (0.0..=0.5f64).prop_map(|p| Model::ErdosRenyi { p }),
        ];
        (model, 10usize..30, any::<u64>())
            .prop_map(|(model, n, seed)| generate(&ModelSpec { model, n, seed }).unwrap())
    }

    proptest! {
        #[test]
        fn cluster_states_are_pure(net in any_net(), db in 0.0..15.0f64) {
            let v = cluster_covariance(&net, squeezing_from_db(db).unwrap());
            prop_assert!(v.matrix().asymmetry(SYMMETRY_TOL).is_none());
            prop_assert!(v.log_det().unwrap().abs() < 1e-8);
        }

        #[test]
        fn correlation_bound(net in any_net(), db in 0.0..15.0f64) {
            let c = gaussian_photon_covariance(&net, squeezing_from_db(db).unwrap());
            for i in 0..net.node_count() {
                for j in 0..net.node_count() {
                    let ratio = c.get(i, j) / (c.variance(i) * c.variance(j)).sqrt();
                    prop_assert!(ratio <= 1.0 + 1e-12);
                }
            }
        }

        #[test]
        fn hermiticity_relations(entries in proptest::collection::vec(-1.0..1.0f64, 36)) {
            // V = B Bᵀ + 1 is a valid symmetric positive matrix for 3 modes.
            let b = Matrix::from_row_major(6, entries).unwrap();
            let mut m = Matrix::identity(6);
            for i in 0..6 {
                for j in 0..6 {
                    m[(i, j)] += (0..6).map(|k| b[(i, k)] * b[(j, k)]).sum::<f64>();
                }
            }
            let t = pair_contractions(&CovarianceMatrix::new(m).unwrap()).unwrap();
            for j in 0..3 {
                for k in 0..3 {
                    let delta = if j == k { 1.0 } else { 0.0 };
                    let lhs = t.get(an(j), cr(k));
                    let rhs = t.get(cr(k), an(j)) + delta;
                    prop_assert!((lhs - rhs).norm() < 1e-12);
                    let aa = t.get(an(j), an(k));
                    prop_assert!((aa - t.get(cr(k), cr(j)).conj()).norm() < 1e-12);
                    let ca = t.get(cr(j), an(k));
                    prop_assert!((ca - t.get(cr(k), an(j)).conj()).norm() < 1e-12);
                }
            }
        }
    }
}
