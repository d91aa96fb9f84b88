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

//! Expectation values of operator products in zero-mean Gaussian states.
//!
//! For a Gaussian state every ordered product of creation and annihilation
//! operators reduces to a sum over perfect matchings of the operator
//! positions, each matching contributing the product of its pair
//! contractions `⟨a#_p a#_q⟩` taken in word order (`p < q`):
//!
//! ```text
//! ⟨a#_1 … a#_2M⟩ = Σ_P  Π_{(p,q) ∈ P}  ⟨a#_p a#_q⟩
//! ```
//!
//! [`wick_expectation`] evaluates the sum with a left-to-right dynamic program
//! whose state is the multiset of operators still waiting for a partner.
//! Operators of the same mode and kind are interchangeable, so closing a
//! pending operator of type `u` with the current one of type `t` contributes
//! `count_u · ⟨u t⟩` and the state space is the product of
//! `(occurrences + 1)` over the distinct types. Words describing photon
//! subtraction from a single mode touch at most three modes, which keeps the
//! program polynomial in the number of subtracted photons.
//!
//! [`wick_expectation_bruteforce`] enumerates every matching explicitly and
//! serves as the reference for the fast path.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gaussian::{ContractionTable, PhotonCovariance};
use crate::graph::ImprintedNetwork;
use crate::{Error, Result};

/// Longest word accepted by the brute-force matcher.
pub const BRUTEFORCE_MAX_LEN: usize = 16;

/// Normalisations below this fraction of the largest matching term are
/// treated as zero.
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Largest tolerated imaginary residue of a moment, relative to its scale.
pub const IMAGINARY_REL_TOL: f64 = 1e-9;

// Above this many dense states the engine switches to a sparse frontier.
const DENSE_STATE_LIMIT: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Create,
    Annihilate,
}

/// One creation or annihilation operator acting on `mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub mode: usize,
    pub kind: Kind,
}

impl Token {
    pub fn create(mode: usize) -> Self {
        Token {
            mode,
            kind: Kind::Create,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        Token {
            mode,
            kind: Kind::Annihilate,
        }
    }
}

/// Ordered product of creation and annihilation operators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OperatorWord {
    tokens: Vec<Token>,
}

impl OperatorWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tokens(tokens: Vec<Token>) -> Self {
        OperatorWord { tokens }
    }

    /// `a†_i a_i`.
    pub fn number(mode: usize) -> Self {
        Self::from_tokens(vec![Token::create(mode), Token::annihilate(mode)])
    }

    /// `a†_i a_i a†_j a_j`, i.e. `n_i n_j` without reordering.
    pub fn number_product(i: usize, j: usize) -> Self {
        let mut w = Self::number(i);
        w.tokens.extend(Self::number(j).tokens);
        w
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, token: Token) {
        self.tokens.push(token);
    }

    /// Appends `count` copies of `token`.
    pub fn push_repeated(&mut self, token: Token, count: usize) {
        self.tokens.extend(core::iter::repeat_n(token, count));
    }

    pub fn extend_from(&mut self, other: &OperatorWord) {
        self.tokens.extend_from_slice(&other.tokens);
    }
}

impl FromIterator<Token> for OperatorWord {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Self::from_tokens(iter.into_iter().collect())
    }
}

/// `photons` photons subtracted, one after the other, from `mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubtractionSpec {
    pub mode: usize,
    pub photons: u32,
}

impl SubtractionSpec {
    pub fn new(mode: usize, photons: u32) -> Self {
        SubtractionSpec { mode, photons }
    }
}

/// Result of a matching sum together with the magnitude of its largest
/// single-matching term.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Evaluation {
    value: Complex64,
    scale: f64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_modes(tokens: &[Token], table: &ContractionTable) -> Result<()> {
    tokens.iter().try_for_each(|t| table.check_mode(t.mode))
}

/// `⟨word⟩` in the Gaussian state described by `table`.
pub fn wick_expectation(word: &OperatorWord, table: &ContractionTable) -> Result<Complex64> {
    Ok(evaluate(word.tokens(), table)?.value)
}

/// Reference evaluation of `⟨word⟩` by explicit enumeration of all
/// `(2M − 1)!!` perfect matchings.
pub fn wick_expectation_bruteforce(
    word: &OperatorWord,
    table: &ContractionTable,
) -> Result<Complex64> {
    let tokens = word.tokens();
    if tokens.len() > BRUTEFORCE_MAX_LEN {
        return Err(Error::WordTooLong {
            len: tokens.len(),
            max: BRUTEFORCE_MAX_LEN,
        });
    }
    check_modes(tokens, table)?;
    if tokens.len() % 2 == 1 {
        return Ok(ZERO);
    }
    let mut used = vec![false; tokens.len()];
    Ok(enumerate_matchings(tokens, &mut used, table))
}

fn enumerate_matchings(tokens: &[Token], used: &mut [bool], table: &ContractionTable) -> Complex64 {
    let Some(first) = used.iter().position(|&u| !u) else {
        return ONE;
    };
    used[first] = true;
    let mut total = ZERO;
    for partner in (first + 1)..tokens.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        let pair = table.get(tokens[first], tokens[partner]);
        total += pair * enumerate_matchings(tokens, used, table);
        used[partner] = false;
    }
    used[first] = false;
    total
}

/// Pending states of the dynamic program for one word position.
trait Frontier {
    fn add(&mut self, state: usize, value: Complex64, scale: f64);
    /// Moves all states into `out`, leaving the frontier empty.
    fn drain_into(&mut self, out: &mut Vec<(usize, Complex64, f64)>);
}

struct DenseFrontier {
    values: Vec<Complex64>,
    scales: Vec<f64>,
    touched: Vec<usize>,
    live: Vec<bool>,
}

impl DenseFrontier {
    fn new(size: usize) -> Self {
        DenseFrontier {
            values: vec![ZERO; size],
            scales: vec![0.0; size],
            touched: Vec::new(),
            live: vec![false; size],
        }
    }
}

impl Frontier for DenseFrontier {
    fn add(&mut self, state: usize, value: Complex64, scale: f64) {
        if !self.live[state] {
            self.live[state] = true;
            self.touched.push(state);
        }
        self.values[state] += value;
        if scale > self.scales[state] {
            self.scales[state] = scale;
        }
    }

    fn drain_into(&mut self, out: &mut Vec<(usize, Complex64, f64)>) {
        out.clear();
        for &state in &self.touched {
            out.push((state, self.values[state], self.scales[state]));
            self.values[state] = ZERO;
            self.scales[state] = 0.0;
            self.live[state] = false;
        }
        self.touched.clear();
    }
}

#[derive(Default)]
struct SparseFrontier(BTreeMap<usize, (Complex64, f64)>);

impl Frontier for SparseFrontier {
    fn add(&mut self, state: usize, value: Complex64, scale: f64) {
        let entry = self.0.entry(state).or_insert((ZERO, 0.0));
        entry.0 += value;
        if scale > entry.1 {
            entry.1 = scale;
        }
    }

    fn drain_into(&mut self, out: &mut Vec<(usize, Complex64, f64)>) {
        out.clear();
        out.extend(core::mem::take(&mut self.0).into_iter().map(|(k, (v, s))| (k, v, s)));
    }
}

/// Operator types of a word and the mixed-radix encoding of pending counts.
struct Layout {
    /// Type index of every word position.
    position_type: Vec<usize>,
    radix: Vec<usize>,
    stride: Vec<usize>,
    /// `contraction[u * types + t] = ⟨type_u type_t⟩`.
    contraction: Vec<Complex64>,
    states: Option<usize>,
}

impl Layout {
    fn new(tokens: &[Token], table: &ContractionTable) -> Self {
        let mut types: Vec<Token> = Vec::new();
        let mut occurrences: Vec<usize> = Vec::new();
        let position_type = tokens
            .iter()
            .map(|tok| match types.iter().position(|t| t == tok) {
                Some(idx) => {
                    occurrences[idx] += 1;
                    idx
                }
                None => {
                    types.push(*tok);
                    occurrences.push(1);
                    types.len() - 1
                }
            })
            .collect();
        let radix: Vec<usize> = occurrences.iter().map(|&c| c + 1).collect();
        let mut stride = Vec::with_capacity(radix.len());
        let mut states = Some(1usize);
        for &r in &radix {
            stride.push(states.unwrap_or(0));
            states = states.and_then(|s| s.checked_mul(r));
        }
        let nt = types.len();
        let mut contraction = Vec::with_capacity(nt * nt);
        for &u in &types {
            for &t in &types {
                contraction.push(table.get(u, t));
            }
        }
        Layout {
            position_type,
            radix,
            stride,
            contraction,
            states,
        }
    }

    fn count(&self, state: usize, ty: usize) -> usize {
        (state / self.stride[ty]) % self.radix[ty]
    }
}

fn evaluate(tokens: &[Token], table: &ContractionTable) -> Result<Evaluation> {
    check_modes(tokens, table)?;
    if tokens.len() % 2 == 1 {
        return Ok(Evaluation {
            value: ZERO,
            scale: 0.0,
        });
    }
    if tokens.is_empty() {
        return Ok(Evaluation {
            value: ONE,
            scale: 1.0,
        });
    }
    let layout = Layout::new(tokens, table);
    match layout.states {
        Some(size) if size <= DENSE_STATE_LIMIT => run(&layout, &mut DenseFrontier::new(size)),
        _ => run(&layout, &mut SparseFrontier::default()),
    }
}

fn run<F: Frontier>(layout: &Layout, frontier: &mut F) -> Result<Evaluation> {
    let len = layout.position_type.len();
    let nt = layout.radix.len();
    // Sparse states can exceed usize only if the dense encoding would; in
    // that case the word is far beyond anything tractable anyway.
    if layout.states.is_none() {
        return Err(Error::Inconsistent(format!(
            "operator word of length {len} has too many pending-operator states"
        )));
    }
    let mut current = vec![(0usize, ONE, 1.0f64)];
    for (pos, &t) in layout.position_type.iter().enumerate() {
        let remaining = len - pos - 1;
        for &(state, value, scale) in &current {
            let mut open = 0;
            for u in 0..nt {
                let c = layout.count(state, u);
                open += c;
                if c == 0 {
                    continue;
                }
                let pair = layout.contraction[u * nt + t];
                if pair == ZERO {
                    continue;
                }
                frontier.add(
                    state - layout.stride[u],
                    value * pair * c as f64,
                    scale * pair.norm(),
                );
            }
            if open < remaining {
                frontier.add(state + layout.stride[t], value, scale);
            }
        }
        frontier.drain_into(&mut current);
    }
    let (value, scale) = current
        .iter()
        .find(|&&(state, _, _)| state == 0)
        .map_or((ZERO, 0.0), |&(_, v, s)| (v, s));
    Ok(Evaluation { value, scale })
}

/// Expectation values in the state obtained from a Gaussian state by
/// subtracting photons from a single mode.
///
/// The normalisation `⟨(a†_S)^n (a_S)^n⟩` is computed once, so moments of many
/// observables in the same subtracted state share it.
#[derive(Debug, Clone)]
pub struct SubtractedState<'a> {
    table: &'a ContractionTable,
    spec: SubtractionSpec,
    norm: f64,
}

impl<'a> SubtractedState<'a> {
    pub fn new(table: &'a ContractionTable, spec: SubtractionSpec) -> Result<Self> {
        table.check_mode(spec.mode)?;
        let n = spec.photons as usize;
        let norm = if n == 0 {
            1.0
        } else {
            let mut word = OperatorWord::new();
            word.push_repeated(Token::create(spec.mode), n);
            word.push_repeated(Token::annihilate(spec.mode), n);
            let eval = evaluate(word.tokens(), table)?;
            let magnitude = eval.value.norm();
            if magnitude == 0.0 || magnitude <= DEGENERACY_REL_TOL * eval.scale {
                return Err(Error::DegenerateSubtraction {
                    mode: spec.mode,
                    photons: spec.photons,
                    norm: eval.value.re,
                });
            }
            if eval.value.im.abs() > IMAGINARY_REL_TOL * eval.scale.max(magnitude) {
                return Err(Error::Inconsistent(format!(
                    "normalisation of {n}-photon subtraction has imaginary part {:e}",
                    eval.value.im
                )));
            }
            eval.value.re
        };
        Ok(SubtractedState { table, spec, norm })
    }

    pub fn spec(&self) -> SubtractionSpec {
        self.spec
    }

    /// `⟨(a†_S)^n a†_S… ⟩` normalisation; 1 for no subtraction.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `⟨middle⟩` in the subtracted state. Fails if the result is not real,
    /// so `middle` must have a real expectation value.
    pub fn expectation(&self, middle: &OperatorWord) -> Result<f64> {
        let n = self.spec.photons as usize;
        let mut word = OperatorWord::new();
        word.push_repeated(Token::create(self.spec.mode), n);
        word.extend_from(middle);
        word.push_repeated(Token::annihilate(self.spec.mode), n);
        let eval = evaluate(word.tokens(), self.table)?;
        let value = eval.value / self.norm;
        let scale = eval.scale / self.norm.abs();
        if value.im.abs() > IMAGINARY_REL_TOL * value.re.abs().max(scale) {
            return Err(Error::Inconsistent(format!(
                "moment has imaginary part {:e} (real part {:e})",
                value.im, value.re
            )));
        }
        Ok(value.re)
    }
}

/// `⟨(a†_S)^n · middle · (a_S)^n⟩ / ⟨(a†_S)^n (a_S)^n⟩`.
pub fn subtracted_expectation(
    middle: &OperatorWord,
    sub: SubtractionSpec,
    table: &ContractionTable,
) -> Result<f64> {
    SubtractedState::new(table, sub)?.expectation(middle)
}

/// Photon-number moments of a subtracted state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MomentSet {
    /// `⟨n_i⟩`
    pub mean: BTreeMap<usize, f64>,
    /// `⟨n_i²⟩`
    pub square: BTreeMap<usize, f64>,
    /// `⟨n_i n_j⟩` for `i < j`.
    pub product: BTreeMap<(usize, usize), f64>,
}

impl MomentSet {
    pub fn variance(&self, i: usize) -> Option<f64> {
        let mean = self.mean.get(&i)?;
        Some(self.square.get(&i)? - mean * mean)
    }

    /// `⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩`; the variance when `i == j`.
    pub fn covariance(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return self.variance(i);
        }
        let key = (i.min(j), i.max(j));
        Some(self.product.get(&key)? - self.mean.get(&i)? * self.mean.get(&j)?)
    }
}

/// Means, second moments and pair products for every node appearing in
/// `pairs`. A pair `(i, i)` requests only the node's own moments.
pub fn photon_number_moments(
    table: &ContractionTable,
    sub: SubtractionSpec,
    pairs: &[(usize, usize)],
) -> Result<MomentSet> {
    let state = SubtractedState::new(table, sub)?;
    let mut out = MomentSet::default();
    for &(i, j) in pairs {
        for node in [i, j] {
            if let alloc::collections::btree_map::Entry::Vacant(slot) = out.mean.entry(node) {
                slot.insert(state.expectation(&OperatorWord::number(node))?);
                out.square.insert(
                    node,
                    state.expectation(&OperatorWord::number_product(node, node))?,
                );
            }
        }
        let key = (i.min(j), i.max(j));
        if i != j && !out.product.contains_key(&key) {
            out.product
                .insert(key, state.expectation(&OperatorWord::number_product(i, j))?);
        }
    }
    Ok(out)
}

/// Nodes whose photon statistics photon subtraction in `source` can reach:
/// those linked to it by `δ`, `A` or `A²`, i.e. within two hops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityFilter {
    source: usize,
    near: Vec<bool>,
}

impl LocalityFilter {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn is_near(&self, node: usize) -> bool {
        self.near[node]
    }

    /// Whether subtraction can change the covariance of `n_i` and `n_j`.
    /// When it returns `false` the covariance equals its Gaussian value.
    pub fn affected(&self, i: usize, j: usize) -> bool {
        self.near[i] && self.near[j]
    }

    pub fn near_nodes(&self) -> Vec<usize> {
        (0..self.near.len()).filter(|&i| self.near[i]).collect()
    }
}

pub fn locality_filter(net: &ImprintedNetwork, source: usize) -> Result<LocalityFilter> {
    let n = net.node_count();
    if source >= n {
        return Err(Error::NodeOutOfRange { node: source, n });
    }
    let mut near = vec![false; n];
    near[source] = true;
    for v in net.neighbors(source) {
        near[v] = true;
        for w in net.neighbors(v) {
            near[w] = true;
        }
    }
    Ok(LocalityFilter { source, near })
}

/// Photon-number covariance of the subtracted state.
///
/// With a locality filter, only pairs it marks as affected are evaluated with
/// the Wick engine; every other entry is copied from `gaussian`, the
/// covariance of the unsubtracted state. Without one, every entry is computed.
pub fn subtracted_photon_covariance(
    table: &ContractionTable,
    sub: SubtractionSpec,
    gaussian: &PhotonCovariance,
    locality: Option<&LocalityFilter>,
) -> Result<PhotonCovariance> {
    let n = table.n_modes();
    if gaussian.node_count() != n {
        return Err(Error::param(
            "gaussian",
            format!("covariance has {} nodes, table has {n}", gaussian.node_count()),
        ));
    }
    let state = SubtractedState::new(table, sub)?;
    let evaluated: Vec<usize> = match locality {
        Some(filter) => filter.near_nodes(),
        None => (0..n).collect(),
    };
    let mut cov = gaussian.clone();
    let mut mean = vec![0.0; n];
    for &i in &evaluated {
        mean[i] = state.expectation(&OperatorWord::number(i))?;
        let square = state.expectation(&OperatorWord::number_product(i, i))?;
        cov.set(i, i, square - mean[i] * mean[i]);
    }
    for (a, &i) in evaluated.iter().enumerate() {
        for &j in &evaluated[a + 1..] {
            let product = state.expectation(&OperatorWord::number_product(i, j))?;
            cov.set(i, j, product - mean[i] * mean[j]);
        }
    }
    Ok(cov)
}
