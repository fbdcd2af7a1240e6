use proptest::prelude::*;

use smc_kernel::blocks::{block_decomposition, is_negative_clique_forest};
use smc_kernel::gen::random_clique_forest;
use smc_kernel::io::{load_graph, save_graph};
use smc_kernel::mcwv::mcwv_cliqueforest;
use smc_kernel::oracle::{beta_exact, is_balanced, mcwv_exact, pt, verify_split_bound};
use smc_kernel::{Sign, SignedGraph};

/// Simple signed graph: each pair is absent, negative or positive.
fn signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(0u8..3, pairs).prop_map(move |codes| {
            let mut edges = Vec::new();
            let mut it = codes.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    match it.next().unwrap() {
                        1 => edges.push((u, v, Sign::Negative)),
                        2 => edges.push((u, v, Sign::Positive)),
                        _ => {}
                    }
                }
            }
            SignedGraph::from_edges(n, edges).unwrap()
        })
    })
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    signed_graph(max_n).prop_filter("connected", |g| g.is_connected())
}

fn subset_of(g: &SignedGraph, mask: u32) -> Vec<usize> {
    (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn switching_is_an_involution_preserving_beta(g in signed_graph(8), mask in any::<u32>()) {
        let set = subset_of(&g, mask);
        let once = g.switch(&set);
        prop_assert_eq!(once.switch(&set), g.clone());
        prop_assert_eq!(beta_exact(&once).unwrap().beta, beta_exact(&g).unwrap().beta);
        prop_assert_eq!(is_balanced(&once).is_balanced(), is_balanced(&g).is_balanced());
    }

    #[test]
    fn blocks_cover_every_edge_once(g in signed_graph(9), mask in any::<u32>()) {
        let s = subset_of(&g, mask & 0b111);
        let dec = block_decomposition(&g, &s);
        let in_s = |v: usize| s.contains(&v);
        for e in g.edges().iter().filter(|e| !in_s(e.u) && !in_s(e.v)) {
            let owners = dec.blocks.iter().filter(|b| b.contains(e.u) && b.contains(e.v)).count();
            prop_assert_eq!(owners, 1, "edge {:?}", e);
        }
        for b in &dec.blocks {
            let mut parts: Vec<usize> = b.interior.iter().chain(&b.exterior).copied().collect();
            parts.sort_unstable();
            let mut all = b.vertices.clone();
            all.sort_unstable();
            prop_assert_eq!(parts, all);
            prop_assert!(b.interior.iter().all(|v| !b.exterior.contains(v)));
        }
    }

    #[test]
    fn text_format_round_trips(g in signed_graph(10)) {
        let text = save_graph(&g);
        let back = load_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(save_graph(&back), text);
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<SignedGraph>(&json).unwrap(), g);
    }

    #[test]
    fn beta_meets_the_lower_bound(g in signed_graph(9)) {
        prop_assert!(4 * beta_exact(&g).unwrap().beta as i64 >= pt(&g).quarters());
    }

    #[test]
    fn balanced_iff_every_edge_is_kept(g in signed_graph(8)) {
        let cert = is_balanced(&g);
        prop_assert!(cert.verify(&g));
        prop_assert_eq!(cert.is_balanced(), beta_exact(&g).unwrap().beta == g.m());
    }

    #[test]
    fn two_part_lower_bound(g in connected_graph(8), mask in any::<u32>()) {
        let full = (1u32 << g.n()) - 1;
        let mask = mask & full;
        prop_assume!(mask != 0 && mask != full);
        let report = verify_split_bound(&g, &subset_of(&g, mask)).unwrap();
        prop_assert!(report.additive_holds);
        prop_assert!(report.slack_holds);
    }

    #[test]
    fn weighted_dp_matches_enumeration(
        n in 1usize..=12,
        block in 2usize..=4,
        seed in any::<u64>(),
        weights in proptest::collection::vec((0u64..5, 0u64..5), 12),
    ) {
        let t = random_clique_forest(n, block, 0.2, seed).unwrap();
        prop_assert!(is_negative_clique_forest(&t));
        let (w1, w2): (Vec<u64>, Vec<u64>) = weights[..n].iter().copied().unzip();
        prop_assert_eq!(mcwv_cliqueforest(&t, &w1, &w2).unwrap(), mcwv_exact(&t, &w1, &w2).unwrap());
    }
}
