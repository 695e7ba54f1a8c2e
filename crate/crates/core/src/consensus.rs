//! Server-side aggregation of client evidence into the consensus graph,
//! plus the expectation-form quantities used by the recovery analysis:
//! per-pair signal coefficients, the expected consensus, the signed
//! consensus graph, and the noise proxy.

use crate::error::{Error, Result};
use crate::federation::{EvidenceGraph, ModelSpec, Validation};
use crate::graph::SignedWeightedGraph;

/// The integer-weighted aggregate of all client reports.
///
/// `contributing(i, j)` counts the clients whose field of view contains the
/// pair; each such client moved the weight by exactly +1 or -1, so
/// `|W_ij| <= contributing(i, j)` and the two share parity.
#[derive(Debug, Clone)]
pub struct ConsensusGraph {
    pub graph: SignedWeightedGraph,
    contributing: Vec<u32>,
    pub client_count: usize,
}

impl ConsensusGraph {
    pub fn contributing(&self, i: usize, j: usize) -> u32 {
        self.contributing[i * self.graph.node_count() + j]
    }
}

/// Fold evidence graphs into the consensus: +1 per reported edge, -1 per
/// reported non-edge, summed over every client that views the pair. Pairs in
/// no field of view keep weight 0.
///
/// The fold is commutative, so the result does not depend on client order.
pub fn aggregate(evidence: &[EvidenceGraph], n: usize) -> Result<ConsensusGraph> {
    let mut graph = SignedWeightedGraph::new(n);
    let mut contributing = vec![0u32; n * n];
    for ev in evidence {
        for (&(i, j), &label) in &ev.labels {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "evidence pair ({i}, {j}) out of range for n = {n} (client {})",
                    ev.client
                )));
            }
            if i == j {
                return Err(Error::invalid(format!(
                    "evidence contains degenerate pair ({i}, {i})"
                )));
            }
            let w = graph.weight(i, j) + label as f64;
            graph.set_weight(i, j, w)?;
            contributing[i * n + j] += 1;
            contributing[j * n + i] += 1;
        }
    }
    Ok(ConsensusGraph {
        graph,
        contributing,
        client_count: evidence.len(),
    })
}

/// Per-(pair, client) signal coefficients: the probability that client `k`
/// reports pair (i, j) as an edge. Zero for pairs outside the client's field
/// of view.
#[derive(Debug, Clone)]
pub struct SignalTable {
    n: usize,
    client_count: usize,
    s: Vec<f64>,
}

impl SignalTable {
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n && k < self.client_count);
        self.s[k * self.n * self.n + i * self.n + j]
    }

    pub fn client_count(&self) -> usize {
        self.client_count
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Compute every signal coefficient `s = p + r - 2 p r` (same true label) or
/// `s = q + r - 2 q r` (different labels) over the resolved fields of view.
pub fn signal_coefficients(model: &ModelSpec) -> Result<SignalTable> {
    model.validate(Validation::Relaxed)?;
    let n = model.n;
    let k_count = model.clients.len();
    let mut s = vec![0.0; k_count * n * n];
    for (k, client) in model.clients.iter().enumerate() {
        let pairs = client.fov_pairs()?;
        let same = client.p + client.r - 2.0 * client.p * client.r;
        let cross = client.q + client.r - 2.0 * client.q * client.r;
        for &(i, j) in &pairs {
            let value = if model.labels[i] == model.labels[j] {
                same
            } else {
                cross
            };
            s[k * n * n + i * n + j] = value;
            s[k * n * n + j * n + i] = value;
        }
    }
    Ok(SignalTable {
        n,
        client_count: k_count,
        s,
    })
}

/// The exact mean of the aggregate under the generative model:
/// `E[W_ij] = sum over clients viewing (i,j) of (2 s - 1)`.
pub fn expected_consensus(model: &ModelSpec) -> Result<SignedWeightedGraph> {
    let table = signal_coefficients(model)?;
    let n = model.n;
    let mut g = SignedWeightedGraph::new(n);
    for (k, client) in model.clients.iter().enumerate() {
        for &(i, j) in &client.fov_pairs()? {
            let s = table.coefficient(i, j, k);
            g.set_weight(i, j, g.weight(i, j) + 2.0 * s - 1.0)?;
        }
    }
    Ok(g)
}

/// The signed consensus graph: the expected consensus multiplied entrywise
/// by the true community matrix, `E[W_ij] * y_i * y_j`. Its positive entries
/// are the "good" pairs that pull the relaxation toward the truth.
pub fn signed_consensus(model: &ModelSpec) -> Result<SignedWeightedGraph> {
    let expected = expected_consensus(model)?;
    let n = model.n;
    let mut g = SignedWeightedGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = expected.weight(i, j) * model.labels[i] as f64 * model.labels[j] as f64;
            if w != 0.0 {
                g.set_weight(i, j, w)?;
            }
        }
    }
    Ok(g)
}

/// The variance-style noise proxy: `max_i | sum_{j, k} s (1 - s) |`.
pub fn noise_proxy(model: &ModelSpec) -> Result<f64> {
    let table = signal_coefficients(model)?;
    let n = model.n;
    let mut best: f64 = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            for k in 0..table.client_count() {
                let s = table.coefficient(i, j, k);
                row += s * (1.0 - s);
            }
        }
        best = best.max(row.abs());
    }
    Ok(best)
}
