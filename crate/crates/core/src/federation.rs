//! The generative client model: fields of view, local subgraph sampling,
//! censoring, and evidence construction.
//!
//! Every client `k` owns a field of view (a set of viewable node pairs), a
//! same-community connection probability `p`, a cross-community probability
//! `q`, and a censorship probability `r`. Nature samples the client's local
//! subgraph pair by pair, then the client flips each pair's edge/non-edge
//! status independently with probability `r` and reports the result.
//!
//! Randomness is counter-based and splittable: client `k` draws from streams
//! derived from `(master seed, k)`, so adding clients never perturbs earlier
//! clients' draws and generation is reproducible and order-independent.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered node pair, stored as (min, max).
pub type Pair = (usize, usize);

fn ordered(i: usize, j: usize) -> Pair {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

pub fn all_pairs(n: usize) -> BTreeSet<Pair> {
    let mut set = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            set.insert((i, j));
        }
    }
    set
}

/// Parameters for a field of view defined as the complete subgraph on a
/// uniformly sampled node subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteSampleSpec {
    pub m: usize,
}

/// A client's field of view: either an explicit pair set or a deferred
/// complete-sample specification resolved from the seeded stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldOfView {
    Pairs(BTreeSet<Pair>),
    CompleteSample { complete_sample: CompleteSampleSpec },
}

impl FieldOfView {
    pub fn is_resolved(&self) -> bool {
        matches!(self, FieldOfView::Pairs(_))
    }
}

/// Validation strictness for model parameters.
///
/// `Strict` enforces the open intervals `0 < q < p < 1`, `0 < r < 0.5` and
/// balanced labels; `Relaxed` widens to the closed intervals (`q <= p`,
/// `0 <= r <= 0.5`) so deterministic limit regimes like `p = 1` or `r = 0`
/// can be exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Strict,
    Relaxed,
}

/// One client's tuple: field of view plus (p, q, r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientSpec {
    pub fov: FieldOfView,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl ClientSpec {
    pub fn validate(&self, n: usize, mode: Validation) -> Result<()> {
        for v in [self.p, self.q, self.r] {
            if !v.is_finite() {
                return Err(Error::invalid("non-finite probability parameter"));
            }
        }
        match mode {
            Validation::Strict => {
                if !(0.0 < self.q && self.q < self.p && self.p < 1.0) {
                    return Err(Error::invalid(format!(
                        "need 0 < q < p < 1, got q = {}, p = {}",
                        self.q, self.p
                    )));
                }
                if !(0.0 < self.r && self.r < 0.5) {
                    return Err(Error::invalid(format!(
                        "need 0 < r < 0.5, got r = {}",
                        self.r
                    )));
                }
            }
            Validation::Relaxed => {
                if !(0.0..=1.0).contains(&self.q)
                    || !(0.0..=1.0).contains(&self.p)
                    || self.q > self.p
                {
                    return Err(Error::invalid(format!(
                        "need 0 <= q <= p <= 1, got q = {}, p = {}",
                        self.q, self.p
                    )));
                }
                if !(0.0..=0.5).contains(&self.r) {
                    return Err(Error::invalid(format!(
                        "need 0 <= r <= 0.5, got r = {}",
                        self.r
                    )));
                }
            }
        }
        match &self.fov {
            FieldOfView::Pairs(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::invalid("field of view must be nonempty"));
                }
                for &(i, j) in pairs {
                    if i == j {
                        return Err(Error::invalid(format!(
                            "field of view contains degenerate pair ({i}, {i})"
                        )));
                    }
                    if i >= n || j >= n {
                        return Err(Error::invalid(format!(
                            "field of view pair ({i}, {j}) out of range for n = {n}"
                        )));
                    }
                }
            }
            FieldOfView::CompleteSample { complete_sample } => {
                let m = complete_sample.m;
                if m < 2 || m > n {
                    return Err(Error::invalid(format!(
                        "complete sample size must satisfy 2 <= m <= n, got m = {m}, n = {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The resolved, normalized pair set. Errors if the field of view is
    /// still a deferred complete sample.
    pub fn fov_pairs(&self) -> Result<BTreeSet<Pair>> {
        match &self.fov {
            FieldOfView::Pairs(pairs) => Ok(pairs.iter().map(|&(i, j)| ordered(i, j)).collect()),
            FieldOfView::CompleteSample { .. } => Err(Error::invalid(
                "field of view is an unresolved complete sample; resolve the model first",
            )),
        }
    }

    /// Number of viewable pairs (known without resolving).
    pub fn fov_size(&self) -> usize {
        match &self.fov {
            FieldOfView::Pairs(pairs) => pairs
                .iter()
                .map(|&(i, j)| ordered(i, j))
                .collect::<BTreeSet<_>>()
                .len(),
            FieldOfView::CompleteSample { complete_sample } => {
                complete_sample.m * complete_sample.m.saturating_sub(1) / 2
            }
        }
    }

    /// A client is myopic when its field of view is not the complete pair
    /// set on all `n` nodes.
    pub fn is_myopic(&self, n: usize) -> bool {
        match &self.fov {
            FieldOfView::Pairs(_) => self.fov_size() < n * (n - 1) / 2,
            FieldOfView::CompleteSample { complete_sample } => complete_sample.m < n,
        }
    }
}

/// The full generative model: node count, ground-truth labels, clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n: usize,
    pub labels: Vec<i8>,
    pub clients: Vec<ClientSpec>,
}

impl ModelSpec {
    pub fn validate(&self, mode: Validation) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("need n >= 2, got n = {}", self.n)));
        }
        if self.labels.len() != self.n {
            return Err(Error::invalid(format!(
                "labels length {} does not match n = {}",
                self.labels.len(),
                self.n
            )));
        }
        if self.labels.iter().any(|&l| l != 1 && l != -1) {
            return Err(Error::invalid("labels must be +1 or -1"));
        }
        if mode == Validation::Strict {
            let sum: i64 = self.labels.iter().map(|&l| l as i64).sum();
            if sum != 0 {
                return Err(Error::invalid(format!(
                    "groups must be balanced (labels sum to 0), got sum = {sum}"
                )));
            }
        }
        if self.clients.is_empty() {
            return Err(Error::invalid("model needs at least one client"));
        }
        for (k, client) in self.clients.iter().enumerate() {
            client
                .validate(self.n, mode)
                .map_err(|e| Error::invalid(format!("client {k}: {e}")))?;
        }
        Ok(())
    }

    pub fn client_count(&self) -> usize {
        self.clients.len()
    }

    /// Resolve every deferred complete-sample field of view using the
    /// per-client fov streams, and normalize explicit pair sets. Identical
    /// `(model, seed)` inputs resolve identically, and the draw streams used
    /// by [`generate_evidence`] are untouched, so generating from the
    /// resolved model reproduces generation from the original.
    pub fn resolve(&self, seed: u64) -> Result<ModelSpec> {
        self.validate(Validation::Relaxed)?;
        let mut out = self.clone();
        for (k, client) in out.clients.iter_mut().enumerate() {
            let pairs = match &client.fov {
                FieldOfView::Pairs(_) => client.fov_pairs()?,
                FieldOfView::CompleteSample { complete_sample } => {
                    let mut rng = fov_rng(seed, k);
                    fov_complete_sample(self.n, complete_sample.m, &mut rng)?
                }
            };
            client.fov = FieldOfView::Pairs(pairs);
        }
        Ok(out)
    }
}

/// One client's sampled local subgraph: the pairs that came up as edges,
/// and the non-isolated nodes among its field of view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSubgraph {
    pub client: usize,
    pub edges: BTreeSet<Pair>,
    pub active_nodes: BTreeSet<usize>,
}

impl LocalSubgraph {
    /// Number of non-isolated nodes.
    pub fn node_count(&self) -> usize {
        self.active_nodes.len()
    }
}

/// The censored report a client sends to the server: every viewable pair
/// labeled +1 (edge) or -1 (non-edge).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EvidenceDto", into = "EvidenceDto")]
pub struct EvidenceGraph {
    pub client: usize,
    pub labels: BTreeMap<Pair, i8>,
}

#[derive(Serialize, Deserialize)]
struct EvidenceDto {
    client: usize,
    pairs: Vec<(usize, usize, i8)>,
}

impl From<EvidenceGraph> for EvidenceDto {
    fn from(e: EvidenceGraph) -> Self {
        EvidenceDto {
            client: e.client,
            pairs: e.labels.iter().map(|(&(i, j), &l)| (i, j, l)).collect(),
        }
    }
}

impl TryFrom<EvidenceDto> for EvidenceGraph {
    type Error = Error;

    fn try_from(dto: EvidenceDto) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (i, j, l) in dto.pairs {
            if i == j {
                return Err(Error::invalid(format!("degenerate pair ({i}, {i})")));
            }
            if l != 1 && l != -1 {
                return Err(Error::invalid(format!(
                    "evidence label must be +1 or -1, got {l}"
                )));
            }
            if labels.insert(ordered(i, j), l).is_some() {
                return Err(Error::invalid(format!("duplicate pair ({i}, {j})")));
            }
        }
        Ok(EvidenceGraph {
            client: dto.client,
            labels,
        })
    }
}

/// A counter-based stream seeded from `(master, stream)`.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

// Two lanes per client: one consumed by field-of-view resolution, one by
// subgraph sampling and censoring.
fn fov_rng(master: u64, client: usize) -> ChaCha8Rng {
    stream_rng(master, 2 * client as u64)
}

fn draw_rng(master: u64, client: usize) -> ChaCha8Rng {
    stream_rng(master, 2 * client as u64 + 1)
}

/// All pairs among a uniformly sampled `m`-subset of the `n` nodes.
pub fn fov_complete_sample(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<BTreeSet<Pair>> {
    if m < 2 || m > n {
        return Err(Error::invalid(format!(
            "complete sample size must satisfy 2 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let nodes: Vec<usize> = {
        let mut v: Vec<usize> = index_sample(rng, n, m).into_iter().collect();
        v.sort_unstable();
        v
    };
    let mut pairs = BTreeSet::new();
    for a in 0..nodes.len() {
        for b in (a + 1)..nodes.len() {
            pairs.insert((nodes[a], nodes[b]));
        }
    }
    Ok(pairs)
}

/// Sample client `k`'s local subgraph: each viewable pair becomes an edge
/// with probability `p` when the true labels agree and `q` otherwise.
/// Isolated nodes are dropped from the active set.
pub fn sample_subgraph(model: &ModelSpec, k: usize, rng: &mut ChaCha8Rng) -> Result<LocalSubgraph> {
    let client = model
        .clients
        .get(k)
        .ok_or_else(|| Error::invalid(format!("client index {k} out of range")))?;
    let pairs = client.fov_pairs()?;
    let mut edges = BTreeSet::new();
    for &(i, j) in &pairs {
        if i >= model.n || j >= model.n {
            return Err(Error::invalid(format!(
                "field of view pair ({i}, {j}) out of range for n = {}",
                model.n
            )));
        }
        let prob = if model.labels[i] == model.labels[j] {
            client.p
        } else {
            client.q
        };
        if rng.random::<f64>() < prob {
            edges.insert((i, j));
        }
    }
    let mut active_nodes = BTreeSet::new();
    for &(i, j) in &edges {
        active_nodes.insert(i);
        active_nodes.insert(j);
    }
    Ok(LocalSubgraph {
        client: k,
        edges,
        active_nodes,
    })
}

/// Censor a local subgraph into the evidence the client reports: every
/// viewable pair is labeled, with an observed edge reported as an edge with
/// probability `1 - r` and an observed non-edge reported as an edge with
/// probability `r`.
///
/// Censoring runs over the whole field of view, including pairs whose
/// endpoints were dropped as isolated; the aggregation loop consumes every
/// viewable pair, so every one of them must carry a report.
pub fn censor(
    sub: &LocalSubgraph,
    spec: &ClientSpec,
    rng: &mut ChaCha8Rng,
) -> Result<EvidenceGraph> {
    let pairs = spec.fov_pairs()?;
    let mut labels = BTreeMap::new();
    for &pair in &pairs {
        let is_edge = sub.edges.contains(&pair);
        let flip = rng.random::<f64>() < spec.r;
        let reported_edge = is_edge != flip;
        labels.insert(pair, if reported_edge { 1 } else { -1 });
    }
    Ok(EvidenceGraph {
        client: sub.client,
        labels,
    })
}

/// Run the whole generation pipeline for every client, deterministically in
/// the master seed. Returns (local subgraph, censored evidence) per client,
/// ordered by client index.
pub fn generate_evidence(
    model: &ModelSpec,
    seed: u64,
) -> Result<Vec<(LocalSubgraph, EvidenceGraph)>> {
    let resolved = model.resolve(seed)?;
    let mut out = Vec::with_capacity(resolved.clients.len());
    for k in 0..resolved.clients.len() {
        let mut rng = draw_rng(seed, k);
        let sub = sample_subgraph(&resolved, k, &mut rng)?;
        let evidence = censor(&sub, &resolved.clients[k], &mut rng)?;
        out.push((sub, evidence));
    }
    Ok(out)
}
