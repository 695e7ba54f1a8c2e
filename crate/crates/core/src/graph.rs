//! Signed weighted graphs and their expansion quantities: signed degrees,
//! boundary weights, set expansions, and the signed weighted edge expansion
//! (an exact, exhaustive Cheeger-type constant).
//!
//! Weights may be negative. "Positive" always means strictly greater than
//! zero, matching the entrywise split `W = W^+ + W^-` with
//! `W^+_ij = max(W_ij, 0)` and `W^-_ij = min(W_ij, 0)`.

use std::fmt::Write as _;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral::{self, SymMatrix};

/// Hard default on exhaustive subset enumeration; configurable through
/// [`ExpansionOptions`].
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Symmetric real edge weights on `n` nodes with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedWeightedGraph {
    n: usize,
    w: Vec<f64>,
}

impl SignedWeightedGraph {
    /// Graph on `n` nodes with no edges.
    pub fn new(n: usize) -> Self {
        SignedWeightedGraph {
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Build from an edge list. Rejects self loops, out-of-range endpoints,
    /// non-finite weights, and duplicate pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = SignedWeightedGraph::new(n);
        let mut seen = vec![false; n * n];
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::invalid(format!("self loop at node {i}")));
            }
            if !w.is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite weight on edge ({i}, {j})"
                )));
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if seen[a * n + b] {
                return Err(Error::invalid(format!("duplicate edge ({a}, {b})")));
            }
            seen[a * n + b] = true;
            g.w[a * n + b] = w;
            g.w[b * n + a] = w;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// Set the weight of pair (i, j), both directions.
    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::invalid(format!(
                "pair ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::invalid(format!("self loop at node {i}")));
        }
        if !w.is_finite() {
            return Err(Error::invalid("non-finite weight"));
        }
        self.w[i * self.n + j] = w;
        self.w[j * self.n + i] = w;
        Ok(())
    }

    /// Edges with nonzero weight, as (i, j, w) with i < j in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).filter_map(move |j| {
                let w = self.weight(i, j);
                (w != 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn adjacency(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.w[i * self.n + j])
    }

    /// Graph Laplacian `L = D - W` with `D = diag(row sums of W)`.
    pub fn laplacian(&self) -> SymMatrix {
        let d: Vec<f64> = (0..self.n)
            .map(|i| self.w[i * self.n..(i + 1) * self.n].iter().sum())
            .collect();
        SymMatrix::from_fn(self.n, |i, j| {
            if i == j {
                d[i]
            } else {
                -self.w[i * self.n + j]
            }
        })
    }

    /// Entrywise split into (positive part, negative part); the parts sum
    /// back to the original weights.
    pub fn signed_parts(&self) -> (SignedWeightedGraph, SignedWeightedGraph) {
        let mut plus = SignedWeightedGraph::new(self.n);
        let mut minus = SignedWeightedGraph::new(self.n);
        for k in 0..self.w.len() {
            plus.w[k] = self.w[k].max(0.0);
            minus.w[k] = self.w[k].min(0.0);
        }
        (plus, minus)
    }

    /// Signed node degrees: `d^+(i) = sum_j max(W_ij, 0)`,
    /// `d^-(i) = sum_j min(W_ij, 0)`, `d = d^+ + d^-`.
    pub fn degrees(&self) -> Degrees {
        let n = self.n;
        let mut plus = vec![0.0; n];
        let mut minus = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = self.w[i * n + j];
                if w > 0.0 {
                    plus[i] += w;
                } else {
                    minus[i] += w;
                }
            }
        }
        let total = plus.iter().zip(&minus).map(|(p, m)| p + m).collect();
        Degrees { plus, minus, total }
    }

    /// All weights multiplied by `c`.
    pub fn scale(&self, c: f64) -> SignedWeightedGraph {
        SignedWeightedGraph {
            n: self.n,
            w: self.w.iter().map(|w| w * c).collect(),
        }
    }

    /// Serialize to the edge-list text format: header `n <count>`, then one
    /// `i j w` line per nonzero edge in ascending (i, j) order.
    pub fn to_edge_list(&self) -> String {
        let edges: Vec<_> = self.edges().collect();
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, edges.len());
        for (i, j, w) in edges {
            let _ = writeln!(out, "{i} {j} {w}");
        }
        out
    }

    /// Parse the edge-list text format produced by [`Self::to_edge_list`].
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (line_no, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty edge-list input".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse {
                line: line_no + 1,
                message: format!("expected header 'n <count>', got '{header}'"),
            });
        }
        let n: usize = parts[0].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            message: format!("invalid node count '{}'", parts[0]),
        })?;
        let count: usize = parts[1].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            message: format!("invalid edge count '{}'", parts[1]),
        })?;
        let mut edges = Vec::with_capacity(count);
        for (line_no, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    message: format!("expected 'i j w', got '{line}'"),
                });
            }
            let i: usize = parts[0].parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                message: format!("invalid node index '{}'", parts[0]),
            })?;
            let j: usize = parts[1].parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                message: format!("invalid node index '{}'", parts[1]),
            })?;
            let w: f64 = parts[2].parse().map_err(|_| Error::Parse {
                line: line_no + 1,
                message: format!("invalid weight '{}'", parts[2]),
            })?;
            edges.push((i, j, w));
        }
        if edges.len() != count {
            return Err(Error::Parse {
                line: 1,
                message: format!("header promises {count} edges, found {}", edges.len()),
            });
        }
        SignedWeightedGraph::from_edges(n, &edges)
    }
}

/// Signed node degree vectors.
#[derive(Debug, Clone)]
pub struct Degrees {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub total: Vec<f64>,
}

/// Complete graph on `n` nodes, unit weights.
pub fn complete_graph(n: usize) -> SignedWeightedGraph {
    let mut g = SignedWeightedGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            g.w[i * n + j] = 1.0;
            g.w[j * n + i] = 1.0;
        }
    }
    g
}

/// A nonempty node subset, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut m: Vec<usize> = members.into_iter().collect();
        m.sort_unstable();
        m.dedup();
        NodeSet { members: m }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    fn from_mask(mask: u64, n: usize) -> Self {
        NodeSet {
            members: (0..n).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    fn membership(&self, g: &SignedWeightedGraph) -> Result<Vec<bool>> {
        let n = g.node_count();
        let mut in_s = vec![false; n];
        for &i in &self.members {
            if i >= n {
                return Err(Error::invalid(format!("node {i} out of range for n = {n}")));
            }
            in_s[i] = true;
        }
        if self.members.is_empty() {
            return Err(Error::invalid("subset must be nonempty"));
        }
        if self.members.len() == n {
            return Err(Error::invalid("subset must be proper"));
        }
        Ok(in_s)
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.members.len()))?;
        for m in &self.members {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

/// Signed boundary weights of a subset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryWeight {
    pub plus: f64,
    pub minus: f64,
    pub total: f64,
}

/// Sums of `W^+_ij`, `W^-_ij`, `W_ij` over ordered pairs with `i` inside `s`
/// and `j` outside. `s` must be nonempty and proper.
pub fn boundary_weight(g: &SignedWeightedGraph, s: &NodeSet) -> Result<BoundaryWeight> {
    let in_s = s.membership(g)?;
    let n = g.node_count();
    let (mut plus, mut minus) = (0.0, 0.0);
    for &i in s.members() {
        for j in 0..n {
            if in_s[j] {
                continue;
            }
            let w = g.weight(i, j);
            if w > 0.0 {
                plus += w;
            } else {
                minus += w;
            }
        }
    }
    Ok(BoundaryWeight {
        plus,
        minus,
        total: plus + minus,
    })
}

/// Set expansions of a single subset: `phi^+ = w^+(dS) / d^+(S)` (zero when
/// `d^+(S) = 0`, in which case `w^+(dS)` is also zero) and `phi^- = w^-(dS)`.
pub fn set_expansion(g: &SignedWeightedGraph, s: &NodeSet) -> Result<(f64, f64)> {
    let bw = boundary_weight(g, s)?;
    let degrees = g.degrees();
    let d_plus_s: f64 = s.members().iter().map(|&i| degrees.plus[i]).sum();
    let phi_plus = if d_plus_s > 0.0 {
        bw.plus / d_plus_s
    } else {
        0.0
    };
    Ok((phi_plus, bw.minus))
}

/// Result of the exhaustive signed weighted edge expansion.
///
/// `phi_g = positive_term + negative_term`, where the positive term is
/// `(1/2) d^+_min (min phi^+_S)^2` over subsets with `d^+(S) <= d^+(V)/2`
/// and the negative term is `2 min_S w^-(dS)` over all nonempty proper
/// subsets.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub phi_g: f64,
    pub positive_term: f64,
    pub negative_term: f64,
    pub argmin_positive: NodeSet,
    pub argmin_negative: NodeSet,
    pub d_plus_min: f64,
}

/// Options for the exhaustive subset scans.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionOptions {
    /// Maximum node count accepted by the exhaustive enumeration.
    pub max_nodes: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            max_nodes: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Signed weighted edge expansion with the default enumeration cap.
pub fn signed_edge_expansion(g: &SignedWeightedGraph) -> Result<ExpansionReport> {
    signed_edge_expansion_with(g, &ExpansionOptions::default())
}

/// Exhaustive minimization over every nonempty proper subset.
///
/// Subsets are walked in Gray-code order over the partitions separating
/// node 0, with boundary weights and set degrees updated incrementally; each
/// unordered partition is visited once and both sides are considered for the
/// degree-constrained positive term. Ties keep the first minimizer in
/// enumeration order, so the result is reproducible.
pub fn signed_edge_expansion_with(
    g: &SignedWeightedGraph,
    opts: &ExpansionOptions,
) -> Result<ExpansionReport> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::invalid(format!(
            "edge expansion needs n >= 2, got n = {n}"
        )));
    }
    if n > opts.max_nodes.min(63) {
        return Err(Error::capacity(format!(
            "exhaustive expansion enumerates 2^{n} subsets; n = {n} exceeds the cap of {}",
            opts.max_nodes.min(63)
        )));
    }

    let degrees = g.degrees();
    let d_plus_min = degrees.plus.iter().cloned().fold(f64::INFINITY, f64::min);
    let d_plus_total: f64 = degrees.plus.iter().sum();
    let half = d_plus_total / 2.0;

    // Positive and negative weight rows, flat for the inner loop.
    let mut wp = vec![0.0; n * n];
    let mut wm = vec![0.0; n * n];
    let mut has_negative = false;
    for k in 0..n * n {
        let w = g.w[k];
        if w > 0.0 {
            wp[k] = w;
        } else {
            wm[k] = w;
            if w < 0.0 {
                has_negative = true;
            }
        }
    }

    // State for S = {0} plus the masked subset of nodes 1..n.
    let mut cross_p = wp[..n].to_vec(); // cross_p[v] = sum_{u in S} W+[u][v]
    let mut cross_m = wm[..n].to_vec();
    let mut in_s = vec![false; n];
    in_s[0] = true;
    let mut w_plus = degrees.plus[0];
    let mut w_minus = degrees.minus[0];
    let mut d_plus_s = degrees.plus[0];

    #[derive(Clone, Copy)]
    enum Side {
        Subset,
        Complement,
    }

    // Running minima over the scan; strict-less updates keep the first
    // minimizer in enumeration order.
    struct Minima {
        half: f64,
        d_plus_total: f64,
        full_mask: u64,
        phi_plus: f64,
        pos: Option<(u64, Side)>,
        w_minus: f64,
        neg: Option<u64>,
    }

    impl Minima {
        fn consider(&mut self, mask: u64, w_plus: f64, w_minus: f64, d_plus_s: f64) {
            if mask == self.full_mask {
                return;
            }
            if d_plus_s <= self.half {
                let phi = if d_plus_s > 0.0 {
                    w_plus / d_plus_s
                } else {
                    0.0
                };
                if phi < self.phi_plus {
                    self.phi_plus = phi;
                    self.pos = Some((mask, Side::Subset));
                }
            }
            let d_plus_c = self.d_plus_total - d_plus_s;
            if d_plus_c <= self.half {
                let phi = if d_plus_c > 0.0 {
                    w_plus / d_plus_c
                } else {
                    0.0
                };
                if phi < self.phi_plus {
                    self.phi_plus = phi;
                    self.pos = Some((mask, Side::Complement));
                }
            }
            if w_minus < self.w_minus {
                self.w_minus = w_minus;
                self.neg = Some(mask);
            }
        }
    }

    let full_mask: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let steps: u64 = 1u64 << (n - 1);

    let mut best = Minima {
        half,
        d_plus_total,
        full_mask,
        phi_plus: f64::INFINITY,
        pos: None,
        w_minus: f64::INFINITY,
        neg: None,
    };

    let mut mask: u64 = 1; // node 0 always in S
    best.consider(mask, w_plus, w_minus, d_plus_s);

    for counter in 1..steps {
        let node = counter.trailing_zeros() as usize + 1;
        let row = &wp[node * n..(node + 1) * n];
        let row_m = &wm[node * n..(node + 1) * n];
        let cp = cross_p[node];
        if in_s[node] {
            in_s[node] = false;
            mask &= !(1u64 << node);
            w_plus -= degrees.plus[node] - 2.0 * cp;
            d_plus_s -= degrees.plus[node];
            for v in 0..n {
                cross_p[v] -= row[v];
            }
            if has_negative {
                w_minus -= degrees.minus[node] - 2.0 * cross_m[node];
                for v in 0..n {
                    cross_m[v] -= row_m[v];
                }
            }
        } else {
            in_s[node] = true;
            mask |= 1u64 << node;
            w_plus += degrees.plus[node] - 2.0 * cp;
            d_plus_s += degrees.plus[node];
            for v in 0..n {
                cross_p[v] += row[v];
            }
            if has_negative {
                w_minus += degrees.minus[node] - 2.0 * cross_m[node];
                for v in 0..n {
                    cross_m[v] += row_m[v];
                }
            }
        }
        best.consider(mask, w_plus, w_minus, d_plus_s);
    }

    // A minimizing partition always exists for n >= 2 (the singleton with
    // minimum positive degree satisfies the constraint); the fallbacks cover
    // the all-zero-degree corner where the constraint set collapses.
    let (positive_term, argmin_positive) = match best.pos {
        Some((mask, side)) if best.phi_plus.is_finite() => {
            let set_mask = match side {
                Side::Subset => mask,
                Side::Complement => full_mask & !mask,
            };
            (
                0.5 * d_plus_min * best.phi_plus * best.phi_plus,
                NodeSet::from_mask(set_mask, n),
            )
        }
        _ => (0.0, NodeSet::new([0])),
    };
    let (negative_term, argmin_negative) = match best.neg {
        Some(mask) => (2.0 * best.w_minus, NodeSet::from_mask(mask, n)),
        None => (0.0, NodeSet::new([0])),
    };

    Ok(ExpansionReport {
        phi_g: positive_term + negative_term,
        positive_term,
        negative_term,
        argmin_positive,
        argmin_negative,
        d_plus_min,
    })
}

/// Classical Cheeger constant `h(G) = min_{0 < |S| <= n/2} |dS| / |S|` of an
/// unweighted graph, by exhaustive enumeration.
pub fn classical_cheeger(g: &SignedWeightedGraph) -> Result<f64> {
    classical_cheeger_with(g, &ExpansionOptions::default())
}

pub fn classical_cheeger_with(g: &SignedWeightedGraph, opts: &ExpansionOptions) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::invalid(format!(
            "Cheeger constant needs n >= 2, got n = {n}"
        )));
    }
    if n > opts.max_nodes.min(31) {
        return Err(Error::capacity(format!(
            "exhaustive Cheeger constant enumerates 2^{n} subsets; n = {n} exceeds the cap of {}",
            opts.max_nodes.min(31)
        )));
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(i, j, w)| {
            if w == 1.0 {
                Ok((i, j))
            } else {
                Err(Error::invalid(format!(
                    "classical Cheeger constant needs 0/1 weights, found {w} on ({i}, {j})"
                )))
            }
        })
        .collect::<Result<_>>()?;

    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size == 0 || 2 * size > n {
            continue;
        }
        let cut = edges
            .iter()
            .filter(|&&(i, j)| (mask >> i & 1) != (mask >> j & 1))
            .count();
        best = best.min(cut as f64 / size as f64);
    }
    Ok(best)
}

/// Unweighted indicator graph: weight 1 exactly where `W_ij > 0`.
pub fn indicator_graph(g: &SignedWeightedGraph) -> SignedWeightedGraph {
    let mut out = SignedWeightedGraph::new(g.n);
    for k in 0..g.w.len() {
        out.w[k] = if g.w[k] > 0.0 { 1.0 } else { 0.0 };
    }
    out
}

/// Slack of the signed weighted Cheeger inequality:
/// `lambda_{1-perp}(L) - phi_G`. Nonnegative for every signed weighted graph
/// (up to eigensolver tolerance).
pub fn cheeger_gap(g: &SignedWeightedGraph) -> Result<f64> {
    cheeger_gap_with(g, &ExpansionOptions::default())
}

pub fn cheeger_gap_with(g: &SignedWeightedGraph, opts: &ExpansionOptions) -> Result<f64> {
    let lam = spectral::lambda_one_perp(&g.laplacian())?;
    let report = signed_edge_expansion_with(g, opts)?;
    Ok(lam - report.phi_g)
}

/// Signed Rayleigh quotients `(R^+, R^-)` of a vector: the positive- and
/// negative-part difference forms over `v'v`. Their sum is the plain
/// Rayleigh quotient of the Laplacian.
pub fn rayleigh_signed(g: &SignedWeightedGraph, v: &[f64]) -> Result<(f64, f64)> {
    if v.len() != g.n {
        return Err(Error::invalid(format!(
            "vector length {} does not match node count {}",
            v.len(),
            g.n
        )));
    }
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv == 0.0 {
        return Err(Error::invalid("Rayleigh quotient of the zero vector"));
    }
    let (plus, minus) = g.signed_parts();
    let rp = spectral::weighted_difference_form(&plus.adjacency(), v) / vv;
    let rm = spectral::weighted_difference_form(&minus.adjacency(), v) / vv;
    Ok((rp, rm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge(w: f64) -> SignedWeightedGraph {
        SignedWeightedGraph::from_edges(2, &[(0, 1, w)]).unwrap()
    }

    fn random_graph(
        rng: &mut ChaCha8Rng,
        n: usize,
        density: f64,
        lo: f64,
        hi: f64,
    ) -> SignedWeightedGraph {
        let mut g = SignedWeightedGraph::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(density) {
                    g.set_weight(i, j, rng.random_range(lo..hi)).unwrap();
                }
            }
        }
        g
    }

    /// Direct per-subset evaluation of the expansion, used as the oracle for
    /// the incremental Gray-code scan.
    fn naive_expansion(g: &SignedWeightedGraph) -> (f64, f64, f64) {
        let n = g.node_count();
        let degrees = g.degrees();
        let d_plus_min = degrees.plus.iter().cloned().fold(f64::INFINITY, f64::min);
        let d_total: f64 = degrees.plus.iter().sum();
        let mut best_pos = f64::INFINITY;
        let mut best_neg = f64::INFINITY;
        for mask in 1u32..((1u32 << n) - 1) {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let s = NodeSet::new(members.iter().copied());
            let bw = boundary_weight(g, &s).unwrap();
            let d_s: f64 = members.iter().map(|&i| degrees.plus[i]).sum();
            if d_s <= d_total / 2.0 {
                let phi = if d_s > 0.0 { bw.plus / d_s } else { 0.0 };
                best_pos = best_pos.min(phi);
            }
            best_neg = best_neg.min(bw.minus);
        }
        let pos = if best_pos.is_finite() {
            0.5 * d_plus_min * best_pos * best_pos
        } else {
            0.0
        };
        let neg = if best_neg.is_finite() {
            2.0 * best_neg
        } else {
            0.0
        };
        (pos + neg, pos, neg)
    }

    #[test]
    fn signed_parts_split_and_recombine() {
        let g = SignedWeightedGraph::from_edges(4, &[(0, 1, 2.0), (2, 3, -1.0)]).unwrap();
        let (p, m) = g.signed_parts();
        assert_eq!(p.weight(0, 1), 2.0);
        assert_eq!(p.weight(2, 3), 0.0);
        assert_eq!(m.weight(0, 1), 0.0);
        assert_eq!(m.weight(2, 3), -1.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.weight(i, j) + m.weight(i, j), g.weight(i, j));
            }
        }
    }

    #[test]
    fn degrees_examples() {
        let k3 = complete_graph(3);
        let d = k3.degrees();
        assert_eq!(d.plus, vec![2.0, 2.0, 2.0]);
        assert_eq!(d.minus, vec![0.0, 0.0, 0.0]);

        let neg = single_edge(-1.0);
        let d = neg.degrees();
        assert_eq!(d.plus, vec![0.0, 0.0]);
        assert_eq!(d.minus, vec![-1.0, -1.0]);

        // Star on 10 nodes, center 0.
        let star =
            SignedWeightedGraph::from_edges(10, &(1..10).map(|l| (0, l, 1.0)).collect::<Vec<_>>())
                .unwrap();
        let d = star.degrees();
        assert_eq!(d.plus[0], 9.0);
        assert!(d.plus[1..].iter().all(|&x| x == 1.0));
    }

    #[test]
    fn laplacian_examples() {
        let pos = single_edge(1.0).laplacian();
        assert_eq!(
            [pos.get(0, 0), pos.get(0, 1), pos.get(1, 0), pos.get(1, 1)],
            [1.0, -1.0, -1.0, 1.0]
        );

        // Sign flip of the trivial case.
        let neg = single_edge(-1.0).laplacian();
        assert_eq!(
            [neg.get(0, 0), neg.get(0, 1), neg.get(1, 0), neg.get(1, 1)],
            [-1.0, 1.0, 1.0, -1.0]
        );

        let k3 = complete_graph(3).laplacian();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 } else { -1.0 };
                assert_eq!(k3.get(i, j), expect);
            }
        }
        // Rows of any Laplacian sum to zero.
        assert!(k3.row_sums().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn positively_weighted_sandwich_observed() {
        // The indicator sandwich (beta^2/alpha) phi' <= phi <= (alpha^2/beta) phi'
        // is stated without proof for positively weighted graphs; it is
        // checked here empirically and reported, not asserted.
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let mut violations = 0;
        let mut checked = 0;
        for _ in 0..30 {
            let n = rng.random_range(2..8);
            let g = random_graph(&mut rng, n, 0.6, 0.2, 2.0);
            let weights: Vec<f64> = g.edges().map(|(_, _, w)| w).collect();
            if weights.is_empty() {
                continue;
            }
            let alpha = weights.iter().cloned().fold(f64::MIN, f64::max);
            let beta = weights.iter().cloned().fold(f64::MAX, f64::min);
            let phi = signed_edge_expansion(&g).unwrap().phi_g;
            let phi_ind = signed_edge_expansion(&indicator_graph(&g)).unwrap().phi_g;
            checked += 1;
            let lower = beta * beta / alpha * phi_ind;
            let upper = alpha * alpha / beta * phi_ind;
            if phi < lower - 1e-9 || phi > upper + 1e-9 {
                violations += 1;
                println!(
                    "sandwich violated: phi = {phi}, bounds [{lower}, {upper}] (alpha {alpha}, beta {beta})"
                );
            }
        }
        println!("sandwich check: {violations} violations out of {checked} graphs");
        assert!(checked > 0);
    }

    #[test]
    fn boundary_weight_examples() {
        let k3 = complete_graph(3);
        let bw = boundary_weight(&k3, &NodeSet::new([0])).unwrap();
        assert_eq!((bw.plus, bw.minus, bw.total), (2.0, 0.0, 2.0));

        // Two disjoint edges; one component as the subset.
        let g = SignedWeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let bw = boundary_weight(&g, &NodeSet::new([0, 1])).unwrap();
        assert_eq!((bw.plus, bw.minus, bw.total), (0.0, 0.0, 0.0));

        let neg = single_edge(-1.0);
        let bw = boundary_weight(&neg, &NodeSet::new([0])).unwrap();
        assert_eq!((bw.plus, bw.minus, bw.total), (0.0, -1.0, -1.0));

        assert!(boundary_weight(&k3, &NodeSet::new([])).is_err());
        assert!(boundary_weight(&k3, &NodeSet::new([0, 1, 2])).is_err());
    }

    #[test]
    fn set_expansion_examples() {
        let k3 = complete_graph(3);
        let (p, m) = set_expansion(&k3, &NodeSet::new([0])).unwrap();
        assert_eq!((p, m), (1.0, 0.0));

        let neg = single_edge(-1.0);
        let (p, m) = set_expansion(&neg, &NodeSet::new([0])).unwrap();
        assert_eq!((p, m), (0.0, -1.0));

        let star =
            SignedWeightedGraph::from_edges(10, &(1..10).map(|l| (0, l, 1.0)).collect::<Vec<_>>())
                .unwrap();
        let (p, _) = set_expansion(&star, &NodeSet::new(1..10)).unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn expansion_complete_graph_k10() {
        // K10: minimum phi^+ is 5/9 at any balanced split, so
        // phi = (1/2) * 9 * (5/9)^2 = 25/18.
        let report = signed_edge_expansion(&complete_graph(10)).unwrap();
        assert!((report.phi_g - 25.0 / 18.0).abs() < 1e-12);
        assert!((report.phi_g - 1.389).abs() < 0.005);
        assert_eq!(report.negative_term, 0.0);
        assert_eq!(report.argmin_positive.len(), 5);
    }

    #[test]
    fn expansion_single_negative_edge_is_tight() {
        let report = signed_edge_expansion(&single_edge(-1.0)).unwrap();
        assert_eq!(report.positive_term, 0.0);
        assert_eq!(report.negative_term, -2.0);
        assert_eq!(report.phi_g, -2.0);
    }

    #[test]
    fn expansion_k3() {
        let report = signed_edge_expansion(&complete_graph(3)).unwrap();
        assert!((report.phi_g - 1.0).abs() < 1e-12);
        assert!((report.positive_term - 1.0).abs() < 1e-12);
        assert_eq!(report.negative_term, 0.0);
    }

    #[test]
    fn expansion_report_terms_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.5, -2.0, 2.0);
            let report = signed_edge_expansion(&g).unwrap();
            assert!((report.phi_g - (report.positive_term + report.negative_term)).abs() <= 1e-12);
            // Argmin sets reproduce the reported terms when re-evaluated directly.
            let (phi_p, _) = set_expansion(&g, &report.argmin_positive).unwrap();
            let expect_pos = 0.5 * report.d_plus_min * phi_p * phi_p;
            assert!((expect_pos - report.positive_term).abs() <= 1e-9);
            let bw = boundary_weight(&g, &report.argmin_negative).unwrap();
            assert!((2.0 * bw.minus - report.negative_term).abs() <= 1e-9);
        }
    }

    #[test]
    fn gray_scan_matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.6, -2.0, 2.0);
            let report = signed_edge_expansion(&g).unwrap();
            let (phi, pos, neg) = naive_expansion(&g);
            assert!(
                (report.phi_g - phi).abs() < 1e-9,
                "phi mismatch: {} vs {phi}",
                report.phi_g
            );
            assert!((report.positive_term - pos).abs() < 1e-9);
            assert!((report.negative_term - neg).abs() < 1e-9);
        }
    }

    #[test]
    fn expansion_capacity_error() {
        let g = SignedWeightedGraph::new(21);
        match signed_edge_expansion(&g) {
            Err(Error::Capacity(msg)) => assert!(msg.contains("2^21")),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn classical_cheeger_examples() {
        assert_eq!(classical_cheeger(&complete_graph(4)).unwrap(), 2.0);

        let path =
            SignedWeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(classical_cheeger(&path).unwrap(), 0.5);

        let disconnected = SignedWeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(classical_cheeger(&disconnected).unwrap(), 0.0);

        let weighted = single_edge(2.0);
        assert!(classical_cheeger(&weighted).is_err());
    }

    #[test]
    fn indicator_examples() {
        let g = SignedWeightedGraph::from_edges(3, &[(0, 1, 2.0), (1, 2, 0.5)]).unwrap();
        let ind = indicator_graph(&g);
        assert_eq!(ind.weight(0, 1), 1.0);
        assert_eq!(ind.weight(1, 2), 1.0);

        let unit = complete_graph(3);
        assert_eq!(indicator_graph(&unit), unit);

        let neg = SignedWeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, -1.0)]).unwrap();
        let ind = indicator_graph(&neg);
        assert_eq!(ind.weight(1, 2), 0.0);
    }

    #[test]
    fn cheeger_gap_examples() {
        let gap = cheeger_gap(&complete_graph(3)).unwrap();
        assert!((gap - 2.0).abs() < 1e-9);

        // Tight case: both sides equal -2.
        let gap = cheeger_gap(&single_edge(-1.0)).unwrap();
        assert!(gap.abs() < 1e-12);

        let gap = cheeger_gap(&single_edge(1.0)).unwrap();
        assert!((gap - 1.5).abs() < 1e-9);
    }

    #[test]
    fn restricted_minimum_equals_lambda2_for_positive_weights() {
        // With nonnegative weights the Laplacian is positive semidefinite
        // and the kernel vector is the smallest eigenvalue, so the
        // restricted minimum coincides with the second-smallest eigenvalue.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..30 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.6, 0.1, 2.0);
            let l = g.laplacian();
            let perp = spectral::lambda_one_perp(&l).unwrap();
            let l2 = spectral::lambda2(&l).unwrap();
            assert!((perp - l2).abs() <= 1e-8, "{perp} vs {l2}");
        }
    }

    #[test]
    fn classical_cheeger_inequality_on_random_graphs() {
        // lambda2(L) >= h(G)^2 / (2 d_max) on unweighted graphs, with h
        // computed by brute force.
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..30 {
            let n = rng.random_range(2..=10);
            let mut g = SignedWeightedGraph::new(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.5) {
                        g.set_weight(i, j, 1.0).unwrap();
                    }
                }
            }
            let h = classical_cheeger(&g).unwrap();
            let d_max = g.degrees().total.iter().cloned().fold(0.0, f64::max);
            if d_max == 0.0 {
                continue;
            }
            let l2 = spectral::lambda2(&g.laplacian()).unwrap();
            assert!(
                l2 >= h * h / (2.0 * d_max) - 1e-9,
                "lambda2 {l2} below h^2/(2 d_max) = {}",
                h * h / (2.0 * d_max)
            );
        }
    }

    #[test]
    fn cheeger_inequality_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.5, -2.0, 2.0);
            let gap = cheeger_gap(&g).unwrap();
            assert!(gap >= -1e-9, "Cheeger inequality violated: gap = {gap}");
        }
    }

    #[test]
    fn positive_scaling_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.5, -2.0, 2.0);
            let phi = signed_edge_expansion(&g).unwrap().phi_g;
            for c in [0.5, 2.0, 10.0] {
                let scaled = signed_edge_expansion(&g.scale(c)).unwrap().phi_g;
                assert!(
                    (scaled - c * phi).abs() <= 1e-9 * (c * phi).abs().max(1.0),
                    "scaling covariance failed for c = {c}"
                );
            }
        }
    }

    #[test]
    fn positively_weighted_graph_has_zero_negative_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.random_range(2..9);
            let g = random_graph(&mut rng, n, 0.5, 0.1, 2.0);
            let report = signed_edge_expansion(&g).unwrap();
            assert_eq!(report.negative_term, 0.0);
        }
    }

    #[test]
    fn uniform_weight_indicator_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let n = rng.random_range(2..9);
            let c = rng.random_range(0.1..3.0);
            let mut g = SignedWeightedGraph::new(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.5) {
                        g.set_weight(i, j, c).unwrap();
                    }
                }
            }
            let phi = signed_edge_expansion(&g).unwrap().phi_g;
            let phi_ind = signed_edge_expansion(&indicator_graph(&g)).unwrap().phi_g;
            assert!((phi - c * phi_ind).abs() <= 1e-9 * (c * phi_ind).abs().max(1.0));
        }
    }

    #[test]
    fn unweighted_expansion_matches_direct_specialization() {
        // On a 0/1 graph the general definition reduces to
        // (1/2) d_min (min_{d(S) <= |E|} |dS| / d(S))^2.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..15 {
            let n = rng.random_range(2..9);
            let mut g = SignedWeightedGraph::new(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.5) {
                        g.set_weight(i, j, 1.0).unwrap();
                    }
                }
            }
            let report = signed_edge_expansion(&g).unwrap();

            let degrees = g.degrees();
            let d_min = degrees.total.iter().cloned().fold(f64::INFINITY, f64::min);
            let edge_count = g.edges().count() as f64;
            let mut best = f64::INFINITY;
            for mask in 1u32..((1u32 << n) - 1) {
                let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let d_s: f64 = members.iter().map(|&i| degrees.total[i]).sum();
                if d_s > edge_count {
                    continue;
                }
                let s = NodeSet::new(members);
                let cut = boundary_weight(&g, &s).unwrap().total;
                let phi = if d_s > 0.0 { cut / d_s } else { 0.0 };
                best = best.min(phi);
            }
            let direct = if best.is_finite() {
                0.5 * d_min * best * best
            } else {
                0.0
            };
            assert!((report.phi_g - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn rayleigh_decomposes_into_signed_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let n = rng.random_range(2..8);
            let g = random_graph(&mut rng, n, 0.6, -2.0, 2.0);
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() == 0.0 {
                continue;
            }
            let (rp, rm) = rayleigh_signed(&g, &v).unwrap();
            let r = spectral::rayleigh(&g.laplacian(), &v).unwrap();
            assert!((r - (rp + rm)).abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_scaling_and_shifting_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..30 {
            let n = rng.random_range(2..8);
            let g = random_graph(&mut rng, n, 0.6, -2.0, 2.0);
            let l = g.laplacian();
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mean = raw.iter().sum::<f64>() / n as f64;
            let v: Vec<f64> = raw.iter().map(|x| x - mean).collect();
            if v.iter().map(|x| x * x).sum::<f64>() < 1e-9 {
                continue;
            }

            // Scaling invariance.
            let alpha = rng.random_range(0.1..5.0);
            let scaled: Vec<f64> = v.iter().map(|x| alpha * x).collect();
            let r = spectral::rayleigh(&l, &v).unwrap();
            let rs = spectral::rayleigh(&l, &scaled).unwrap();
            assert!((r - rs).abs() < 1e-9);

            // Shifting can only lower the positive part for v orthogonal to 1.
            let delta = rng.random_range(-2.0..2.0);
            let shifted: Vec<f64> = v.iter().map(|x| x + delta).collect();
            let (rp, _) = rayleigh_signed(&g, &v).unwrap();
            let (rp_shift, _) = rayleigh_signed(&g, &shifted).unwrap();
            assert!(rp >= rp_shift - 1e-10);
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g =
            SignedWeightedGraph::from_edges(5, &[(0, 1, 1.5), (1, 2, -0.25), (3, 4, 2.0)]).unwrap();
        let text = g.to_edge_list();
        let parsed = SignedWeightedGraph::parse_edge_list(&text).unwrap();
        assert_eq!(g, parsed);
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(matches!(
            SignedWeightedGraph::parse_edge_list(""),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            SignedWeightedGraph::parse_edge_list("3\n0 1 1.0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            SignedWeightedGraph::parse_edge_list("3 2\n0 1 1.0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            SignedWeightedGraph::parse_edge_list("3 1\n0 x 1.0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(SignedWeightedGraph::from_edges(3, &[(0, 0, 1.0)]).is_err());
        assert!(SignedWeightedGraph::from_edges(3, &[(0, 5, 1.0)]).is_err());
        assert!(SignedWeightedGraph::from_edges(3, &[(0, 1, f64::NAN)]).is_err());
        assert!(SignedWeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 0, 1.0)]).is_err());
    }
}
