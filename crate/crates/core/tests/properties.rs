use std::collections::BTreeSet;

use proptest::prelude::*;

use graph_recon::bench::format_float;
use graph_recon::connect::{assigned_super_node, ring_edge, super_node_bucket, ConnConfig, Connected, ModConnected};
use graph_recon::diameter::{DiamConfig, SmallDiam};
use graph_recon::exact::{exact_diameter, is_connected, scc_decompose};
use graph_recon::graph::{graph_distance, SparseGraph, Vertex};
use graph_recon::kconn::{hash_bucket, hash_supernodes, ring_graph};
use graph_recon::oracle::{materialize_arcs, materialize_edges, materialize_neighbors, EdgeOracle};
use graph_recon::strong::{StrongConnConfig, StronglyConnected};

fn budget(n: usize) -> usize {
    4 * n + 40
}

fn undirected() -> impl Strategy<Value = SparseGraph> {
    (3usize..30).prop_flat_map(|n| {
        prop::collection::vec((1..=n, 1..=n), 0..2 * n).prop_map(move |pairs| {
            let set: BTreeSet<(Vertex, Vertex)> =
                pairs.into_iter().filter(|&(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
            SparseGraph::undirected(n, budget(n), set).unwrap()
        })
    })
}

fn directed() -> impl Strategy<Value = SparseGraph> {
    (3usize..25).prop_flat_map(|n| {
        prop::collection::vec((1..=n, 1..=n), 0..2 * n).prop_map(move |pairs| {
            let set: BTreeSet<(Vertex, Vertex)> = pairs.into_iter().filter(|&(a, b)| a != b).collect();
            SparseGraph::directed(n, budget(n), set).unwrap()
        })
    })
}

fn contains_all(big: &SparseGraph, small: &SparseGraph) -> bool {
    small.edges().all(|(u, v)| big.has_edge(u, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(g in undirected(), d in directed()) {
        prop_assert_eq!(SparseGraph::parse(&g.to_text()).unwrap(), g);
        prop_assert_eq!(SparseGraph::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn distance_is_a_metric(a in undirected(), seed in any::<u64>()) {
        let n = a.n();
        let b = SparseGraph::undirected(n, a.m_bound(), a.edges().filter(|&(u, _)| (u as u64 ^ seed) % 3 != 0)).unwrap();
        let c = SparseGraph::undirected(n, a.m_bound(), a.edges().filter(|&(_, v)| (v as u64 ^ seed) % 2 != 0)).unwrap();
        let d = |x: &SparseGraph, y: &SparseGraph| graph_distance(x, y).unwrap().differing_pairs;
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&b, &c) <= d(&b, &a) + d(&a, &c));
    }

    #[test]
    fn ring_edge_matches_ring_graph(n0 in 3usize..20, width in 1usize..4) {
        prop_assume!(n0 >= 2 * width + 1);
        let ring = ring_graph(n0, width);
        for a in 1..=n0 {
            for b in 1..=n0 {
                prop_assert_eq!(ring_edge(n0, width, a, b), ring_edge(n0, width, b, a));
                prop_assert_eq!(ring_edge(n0, width, a, b), a != b && ring.has_edge(a, b));
            }
        }
    }

    #[test]
    fn buckets_invert_assignment(n in 10usize..400, c in 0.01f64..0.5, k in 1usize..4) {
        let n0 = ((c * n as f64).ceil() as usize).clamp(1, n);
        prop_assume!(n0 >= k);
        for x in n0 + 1..=n {
            let w = assigned_super_node(x, c, n0);
            prop_assert!(super_node_bucket(w, c, n, n0).contains(&x));
            for h in hash_supernodes(x, c, k, n0).unwrap() {
                prop_assert!(hash_bucket(h, c, k, n, n0).contains(&x));
            }
        }
        for w in 1..=n0 {
            for x in super_node_bucket(w, c, n, n0) {
                prop_assert_eq!(assigned_super_node(x, c, n0), w);
            }
            for x in hash_bucket(w, c, k, n, n0) {
                prop_assert!(hash_supernodes(x, c, k, n0).unwrap().contains(&w));
            }
        }
    }

    #[test]
    fn format_float_round_trips(x in -1e12f64..1e12) {
        let back: f64 = format_float(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs().max(1e-300));
    }

    #[test]
    fn connected_is_a_connected_supergraph(g in undirected(), seed in any::<u64>()) {
        let r = Connected::new(&g, &ConnConfig::new(0.2, 1.0, 0.5, 0.1, seed)).unwrap();
        let fixed = materialize_edges(&r).unwrap();
        prop_assert!(is_connected(&fixed).unwrap());
        prop_assert!(contains_all(&fixed, &g));
        prop_assert_eq!(&materialize_neighbors(&r).unwrap(), &fixed);
        // answers do not depend on query order
        let again = Connected::new(&g, &ConnConfig::new(0.2, 1.0, 0.5, 0.1, seed)).unwrap();
        for u in (1..=g.n()).rev() {
            for v in (1..u).rev() {
                prop_assert_eq!(again.has_edge(u, v).unwrap(), fixed.has_edge(u, v));
            }
        }
    }

    #[test]
    fn mod_connected_is_a_connected_supergraph(g in undirected(), seed in any::<u64>(), c in 0.05f64..0.5) {
        let r = ModConnected::new(&g, &ConnConfig::new(0.2, 1.0, 0.5, c, seed)).unwrap();
        let fixed = materialize_edges(&r).unwrap();
        prop_assert!(is_connected(&fixed).unwrap());
        prop_assert!(contains_all(&fixed, &g));
        prop_assert_eq!(materialize_neighbors(&r).unwrap(), fixed);
    }

    #[test]
    fn strong_is_a_strongly_connected_supergraph(g in directed(), seed in any::<u64>()) {
        let r = StronglyConnected::new(&g, &StrongConnConfig::new(0.2, 1.0, 0.5, seed)).unwrap();
        let fixed = materialize_edges(&r).unwrap();
        prop_assert!(scc_decompose(&fixed).unwrap().is_strongly_connected());
        prop_assert!(contains_all(&fixed, &g));
        prop_assert_eq!(materialize_arcs(&r).unwrap(), fixed);
    }

    #[test]
    fn small_diam_meets_its_radius(g in undirected(), seed in any::<u64>(), d in 1usize..4) {
        let r = SmallDiam::new(&g, &DiamConfig::new(0.2, 1.0, 0.5, 0.1, d, seed)).unwrap();
        let fixed = materialize_edges(&r).unwrap();
        prop_assert!(contains_all(&fixed, &g));
        let k = r.params().radius;
        prop_assert!(exact_diameter(&fixed).unwrap().unwrap() <= 2 * k + 2);
        prop_assert_eq!(materialize_neighbors(&r).unwrap(), fixed);
    }
}
