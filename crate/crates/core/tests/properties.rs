use bimim::cut::{cut_values, nu};
use bimim::sets::FiniteOrCofinite;
use bimim::{random, BranchDecomposition, Digraph, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn digraph_strategy(max_n: usize) -> impl Strategy<Value = Digraph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n.max(1), 0..n.max(1)), 0..=n * n)
            .prop_map(move |edges| Digraph::new(n, edges.into_iter().filter(|_| n > 0)).unwrap())
    })
}

proptest! {
    #[test]
    fn digraph_text_round_trip(g in digraph_strategy(8)) {
        prop_assert_eq!(Digraph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn reverse_swaps_cut_directions(g in digraph_strategy(9), mask in any::<u16>()) {
        let n = g.n();
        let a = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        let b = a.complement();
        let rev = g.reverse();
        prop_assert_eq!(nu(&g, &a, &b), nu(&rev, &b, &a));
        let cv = cut_values(&g, &a, true);
        prop_assert_eq!(cv.bimim, cut_values(&g, &b, true).bimim);
        prop_assert!(cv.mim_plus <= cv.cutrk_plus.unwrap());
    }

    #[test]
    fn power_contains_graph(g in digraph_strategy(7), r in 1usize..4) {
        let p = g.power(r).unwrap();
        for (u, v) in g.edges() {
            prop_assert!(p.has_edge(u, v));
        }
        let q = g.power(r + 1).unwrap();
        for (u, v) in p.edges() {
            prop_assert!(q.has_edge(u, v));
        }
    }

    #[test]
    fn random_decompositions_round_trip(n in 0usize..20, seed in any::<u64>()) {
        let bd = random::decomposition(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert_eq!(BranchDecomposition::from_text(&bd.to_text()).unwrap(), bd.clone());
        let mut order = bd.leaf_order();
        order.sort_unstable();
        prop_assert_eq!(order, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn set_membership_is_eventually_constant(elems in proptest::collection::btree_set(0usize..12, 0..6), cof in any::<bool>()) {
        let elems: Vec<usize> = elems.into_iter().collect();
        let s = if cof { FiniteOrCofinite::cofinite(elems) } else { FiniteOrCofinite::finite(elems) };
        let d = s.d_value();
        for k in d..d + 5 {
            prop_assert_eq!(s.contains(k), s.contains(d));
        }
        prop_assert_eq!(s.to_string().parse::<FiniteOrCofinite>().unwrap(), s);
    }
}
