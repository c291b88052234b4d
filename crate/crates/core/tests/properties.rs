//! Property tests for the library's structural invariants. Instances come
//! from the seeded generators, so every failure shrinks to a small
//! (n, seed, ...) tuple that reproduces deterministically.

mod common;

use proptest::prelude::*;

use spanner_core::charging::{outerplanar_charging, verify_scheme, Pair};
use spanner_core::generators::{gnp_connected, outerplanar, WeightDist};
use spanner_core::graph::{all_pairs, mst, w_int, w_ratio, Weight};
use spanner_core::pathdec::{generate_kpath, normalize, smooth, validate, PathDecomposition};
use spanner_core::pipeline::run_kpath_pipeline;
use spanner_core::spanner::{greedy_spanner, verify_edge_path_property, verify_stretch};

fn dist() -> WeightDist {
    WeightDist::UniformInt { lo: 1, hi: 60 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mst_weight_matches_exhaustive_enumeration(
        n in 2usize..8, p in 0.3f64..1.0, seed in 0u64..10_000,
    ) {
        let g = gnp_connected(n, p, seed, &dist()).unwrap();
        prop_assert_eq!(mst(&g).total_weight, common::exhaustive_msf_weight(&g));
    }

    #[test]
    fn shortest_distances_satisfy_triangle_inequality(
        n in 3usize..11, p in 0.3f64..1.0, seed in 0u64..10_000,
    ) {
        let g = gnp_connected(n, p, seed, &dist()).unwrap();
        let d = all_pairs(&g);
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let (duw, duv, dvw) = (&d[u][w], &d[u][v], &d[v][w]);
                    if let (Some(a), Some(b), Some(c)) = (duw, duv, dvw) {
                        prop_assert!(a <= &(b + c), "d({u},{w}) > d({u},{v}) + d({v},{w})");
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_contains_mst_is_idempotent_and_verifies(
        n in 2usize..14, p in 0.2f64..1.0, seed in 0u64..10_000,
        num in 1i64..6, den in 1i64..6,
    ) {
        let g = gnp_connected(n, p, seed, &dist()).unwrap();
        let eps = w_ratio(num, den);
        let s = greedy_spanner(&g, &eps).unwrap();
        for &ei in &mst(&g).edge_indices {
            prop_assert!(s.edge_indices.contains(&ei), "MST edge {ei} dropped");
        }
        let sg = s.to_graph(&g);
        let again = greedy_spanner(&sg, &eps).unwrap();
        prop_assert_eq!(again.edge_indices.len(), sg.m(), "greedy not idempotent");
        prop_assert!(verify_stretch(&g, &s).unwrap().is_empty());
        prop_assert!(verify_edge_path_property(&g, &s).unwrap().is_empty());
    }

    #[test]
    fn smoothing_a_padded_decomposition_restores_smoothness(
        n in 4usize..16, pw in 1usize..4, seed in 0u64..10_000,
    ) {
        prop_assume!(n >= pw + 2);
        let (g, dec) = generate_kpath(n, pw, seed, &dist()).unwrap();
        // duplicate every other bag: still valid, no longer smooth
        let mut bags = Vec::new();
        for (i, bag) in dec.bags().iter().enumerate() {
            bags.push(bag.clone());
            if i % 2 == 0 {
                bags.push(bag.clone());
            }
        }
        let padded = PathDecomposition::new(bags);
        prop_assert!(validate(&g, &padded).is_empty());
        let sm = smooth(&g, &padded).unwrap();
        prop_assert!(validate(&g, sm.as_dec()).is_empty());
        prop_assert_eq!(sm.pw(), pw);
        // smoothness: |bags| = n - pw, consecutive bags differ by one swap
        prop_assert_eq!(sm.len(), n - pw);
        for i in 1..sm.len() {
            let prev: std::collections::BTreeSet<_> = sm.bags()[i - 1].iter().collect();
            let here: std::collections::BTreeSet<_> = sm.bags()[i].iter().collect();
            prop_assert_eq!(prev.intersection(&here).count(), pw);
        }
    }

    #[test]
    fn normalize_assigns_each_edge_once_and_respects_bag_budget(
        n in 4usize..18, pw in 1usize..5, seed in 0u64..10_000,
    ) {
        prop_assume!(n >= pw + 2);
        let (g, dec) = generate_kpath(n, pw, seed, &dist()).unwrap();
        let ng = normalize(&g, &dec).unwrap();
        // every original edge sits in exactly one bag graph
        let total: usize = ng.bag_edges.iter().map(|b| b.len()).sum();
        prop_assert_eq!(total, g.m());
        let mut seen = vec![false; g.m()];
        for b in &ng.bag_edges {
            for &ei in b {
                prop_assert!(!seen[ei], "edge {ei} in two bag graphs");
                seen[ei] = true;
            }
        }
        // non-first bag graphs are the star of the introduced vertex: at
        // most pw edges, all incident to it, of which >= 0 are MST edges
        // (a free vertex contributes none), so up to pw lie outside the MST
        let mst_pairs: std::collections::BTreeSet<Pair> = mst(&g)
            .pairs(&g)
            .into_iter()
            .collect();
        for (i, b) in ng.bag_edges.iter().enumerate().skip(1) {
            prop_assert!(b.len() <= pw, "bag {i} has {} > pw edges", b.len());
            let intro = dec.introduced(i).expect("non-first bags introduce");
            let mut mst_in_bag = 0usize;
            for &ei in b {
                let e = g.edge(ei);
                prop_assert!(
                    e.u == intro || e.v == intro,
                    "bag {i}: edge ({},{}) misses the introduced vertex {intro}",
                    e.u, e.v
                );
                if mst_pairs.contains(&(e.u, e.v)) {
                    mst_in_bag += 1;
                }
            }
            let non_mst = b.len() - mst_in_bag;
            prop_assert!(non_mst <= pw - mst_in_bag.min(pw));
        }
        // the normalized MST weighs exactly as much as the original
        prop_assert_eq!(mst(&ng.graph).total_weight, mst(&g).total_weight);
    }

    #[test]
    fn outerplanar_scheme_is_1_simple_and_acyclic(
        n in 3usize..16, keep in 0.0f64..1.0, seed in 0u64..10_000,
    ) {
        let inst = outerplanar(n, keep, seed).unwrap();
        let cs = outerplanar_charging(&inst.graph, None).unwrap();
        // strongness is a property of spanners, not raw instances; every
        // structural verdict must hold on the instance itself
        let report = verify_scheme(&inst.graph, &w_int(1), &cs, 1).unwrap();
        prop_assert!(report.tree_ok);
        prop_assert!(report.coverage_ok);
        prop_assert!(report.paths_ok);
        prop_assert!(report.k_simple_ok, "max tree {} / non-tree {}",
            report.max_tree_charge, report.max_nontree_charge);
        prop_assert!(report.acyclic_ok);
    }

    #[test]
    fn kpath_pipeline_certifies_and_strengthening_never_raises_tree_charges(
        n in 4usize..14, pw in 1usize..4, seed in 0u64..10_000,
        num in 1i64..4, den in 1i64..5,
    ) {
        prop_assume!(n >= pw + 2);
        let (g, dec) = generate_kpath(n, pw, seed, &dist()).unwrap();
        let eps = w_ratio(num, den);
        let r = run_kpath_pipeline(&g, &dec, &eps, false).unwrap();
        prop_assert!(r.all_ok(), "verdicts: {:?}", r.report.violations);
        let cert = r.cert.as_ref().unwrap();
        prop_assert!(r.w_spanner <= cert.bound);
        let expected = (w_int(1) + w_int(r.k as i64) / &eps) * &r.w_mst;
        prop_assert_eq!(&cert.bound, &expected);
        // per tree edge, the spliced scheme never charges more than the raw one
        let pre = r.pre_scheme.charge_counts();
        let post = r.scheme.charge_counts();
        for (pair, count) in post {
            if r.scheme.tree.contains(&pair) {
                let before = pre.get(&pair).copied().unwrap_or(0);
                prop_assert!(
                    count <= before,
                    "tree edge {pair:?} charged {count} > {before} after strengthening"
                );
            }
        }
    }

    #[test]
    fn rational_weights_are_handled_exactly(
        n in 3usize..10, p in 0.4f64..1.0, seed in 0u64..10_000, div in 2i64..9,
    ) {
        // same instance with every weight divided by `div`: spanner edge
        // set, verdicts and scaled weights must match the integer original
        let g = gnp_connected(n, p, seed, &dist()).unwrap();
        let mut h = spanner_core::graph::WeightedGraph::new(n);
        for e in g.edges() {
            h.add_edge(e.u, e.v, &e.w / w_int(div)).unwrap();
        }
        let eps = w_ratio(1, 2);
        let sg = greedy_spanner(&g, &eps).unwrap();
        let sh = greedy_spanner(&h, &eps).unwrap();
        prop_assert_eq!(&sg.edge_indices, &sh.edge_indices);
        prop_assert!(verify_stretch(&h, &sh).unwrap().is_empty());
        let scaled: Weight = sh.weight(&h) * w_int(div);
        prop_assert_eq!(scaled, sg.weight(&g));
    }
}
