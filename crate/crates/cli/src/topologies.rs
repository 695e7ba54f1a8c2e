//! Built-in ten-node topologies for the perturbation study, each with a
//! designated edge whose weight the study varies.

use fedmycd::graph::{complete_graph, SignedWeightedGraph};
use fedmycd::Result;

/// Complete graph on 10 nodes. Edge-transitive, so the designated edge is
/// immaterial.
pub fn complete10() -> SignedWeightedGraph {
    complete_graph(10)
}

/// The Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes
/// i - (i + 5). 3-regular on 10 nodes and edge-transitive.
pub fn petersen() -> SignedWeightedGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5, 1.0));
        edges.push((i, i + 5, 1.0));
        edges.push((i + 5, (i + 2) % 5 + 5, 1.0));
    }
    SignedWeightedGraph::from_edges(10, &edges).expect("static topology")
}

/// Spider with three legs of three nodes each: center 0, legs
/// (1,2,3), (4,5,6), (7,8,9). Every center edge is a bottleneck.
pub fn spider33() -> SignedWeightedGraph {
    let mut edges = Vec::new();
    for leg in 0..3 {
        let a = 1 + leg * 3;
        edges.push((0, a, 1.0));
        edges.push((a, a + 1, 1.0));
        edges.push((a + 1, a + 2, 1.0));
    }
    SignedWeightedGraph::from_edges(10, &edges).expect("static topology")
}

/// A named built-in topology together with its designated perturbed edge.
pub fn builtin(name: &str) -> Option<(SignedWeightedGraph, (usize, usize))> {
    match name {
        "complete" => Some((complete10(), (0, 1))),
        "petersen" => Some((petersen(), (0, 1))),
        "spider33" => Some((spider33(), (0, 1))),
        _ => None,
    }
}

/// Load a topology from edge-list text; the designated edge defaults to the
/// first listed edge.
pub fn from_edge_list(text: &str) -> Result<(SignedWeightedGraph, (usize, usize))> {
    let g = SignedWeightedGraph::parse_edge_list(text)?;
    let edge = g
        .edges()
        .next()
        .map(|(i, j, _)| (i, j))
        .ok_or_else(|| fedmycd::Error::InvalidInput("topology has no edges".into()))?;
    Ok((g, edge))
}
