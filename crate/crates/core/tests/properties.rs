//! Property tests over randomly generated graphs and models.

use proptest::prelude::*;

use fedmycd::graph::{
    boundary_weight, rayleigh_signed, signed_edge_expansion, NodeSet, SignedWeightedGraph,
};
use fedmycd::spectral::{lambda_one_perp, rayleigh};

/// Strategy: a signed weighted graph on 2..=8 nodes with weights in
/// [-3, 3] and roughly half the pairs present.
fn arb_graph() -> impl Strategy<Value = SignedWeightedGraph> {
    (2usize..=8)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec((-3.0f64..3.0, prop::bool::ANY), pairs),
            )
        })
        .prop_map(|(n, weights)| {
            let mut g = SignedWeightedGraph::new(n);
            let mut it = weights.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (w, keep) = it.next().unwrap();
                    if keep {
                        g.set_weight(i, j, w).unwrap();
                    }
                }
            }
            g
        })
}

proptest! {
    /// The Cheeger-type inequality holds on arbitrary signed weighted
    /// graphs: the restricted spectral minimum dominates the expansion.
    #[test]
    fn cheeger_inequality(g in arb_graph()) {
        let lam = lambda_one_perp(&g.laplacian()).unwrap();
        let phi = signed_edge_expansion(&g).unwrap().phi_g;
        prop_assert!(lam >= phi - 1e-9, "lambda {lam} < phi {phi}");
    }

    /// The expansion is 1-homogeneous in the weights.
    #[test]
    fn expansion_scaling(g in arb_graph(), c in 0.1f64..8.0) {
        let phi = signed_edge_expansion(&g).unwrap().phi_g;
        let scaled = signed_edge_expansion(&g.scale(c)).unwrap().phi_g;
        prop_assert!((scaled - c * phi).abs() <= 1e-9 * (c * phi).abs().max(1.0));
    }

    /// The report's terms always sum to phi_g, and the argmin subsets
    /// reproduce the reported terms when evaluated directly.
    #[test]
    fn expansion_report_is_self_consistent(g in arb_graph()) {
        let report = signed_edge_expansion(&g).unwrap();
        prop_assert!(
            (report.phi_g - (report.positive_term + report.negative_term)).abs() <= 1e-12
        );
        let bw = boundary_weight(&g, &report.argmin_negative).unwrap();
        prop_assert!((2.0 * bw.minus - report.negative_term).abs() <= 1e-9);
    }

    /// Rayleigh quotient splits into the positive and negative parts.
    #[test]
    fn rayleigh_split(g in arb_graph(), raw in prop::collection::vec(-1.0f64..1.0, 8)) {
        let n = g.node_count();
        let v: Vec<f64> = raw[..n].to_vec();
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
            let (rp, rm) = rayleigh_signed(&g, &v).unwrap();
            let r = rayleigh(&g.laplacian(), &v).unwrap();
            prop_assert!((r - (rp + rm)).abs() <= 1e-9);
        }
    }

    /// Edge-list text round-trips exactly.
    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let parsed = SignedWeightedGraph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(g, parsed);
    }

    /// Boundary weights of a subset and its complement agree (the cut is
    /// the same set of crossing pairs).
    #[test]
    fn boundary_is_symmetric(g in arb_graph(), pick in prop::collection::vec(prop::bool::ANY, 8)) {
        let n = g.node_count();
        let members: Vec<usize> = (0..n).filter(|&i| pick[i]).collect();
        if !members.is_empty() && members.len() < n {
            let complement: Vec<usize> = (0..n).filter(|&i| !pick[i]).collect();
            let a = boundary_weight(&g, &NodeSet::new(members)).unwrap();
            let b = boundary_weight(&g, &NodeSet::new(complement)).unwrap();
            prop_assert!((a.plus - b.plus).abs() <= 1e-9);
            prop_assert!((a.minus - b.minus).abs() <= 1e-9);
        }
    }
}
