#![allow(clippy::needless_range_loop)]

mod common;

use common::{adjacency, closure_by_squaring, seeded, Oracle};
use ltt_core::graph::{
    cycle_states, pair_cycle_states, product_square, reachability, reachable_from, scc, PairNode,
    PairSearch,
};
use ltt_core::CompleteAutomaton;
use proptest::prelude::*;

fn automaton(max_n: usize, max_g: usize) -> impl Strategy<Value = CompleteAutomaton> {
    (1..=max_n, 1..=max_g).prop_flat_map(|(n, g)| {
        proptest::collection::vec(0..n, n * g)
            .prop_map(move |delta| CompleteAutomaton::from_table(n, g, &delta).unwrap())
    })
}

#[test]
fn scc_partition_is_mutual_reachability() {
    for a in seeded(101, 300, 12, 3) {
        let reach = closure_by_squaring(&adjacency(&a));
        let d = scc(&a);
        for p in 0..a.n_states() {
            for q in 0..a.n_states() {
                assert_eq!(
                    d.same_component(p, q),
                    reach[p][q] && reach[q][p],
                    "{:?}",
                    a.table()
                );
            }
        }
    }
}

#[test]
fn reachability_matches_closure() {
    for a in seeded(102, 300, 12, 3) {
        let oracle = closure_by_squaring(&adjacency(&a));
        let table = reachability(&a);
        for p in 0..a.n_states() {
            for q in 0..a.n_states() {
                assert_eq!(table.reaches(p, q), oracle[p][q]);
            }
        }
    }
}

#[test]
fn pair_searches_match_square_closure() {
    for a in seeded(103, 100, 6, 3) {
        let n = a.n_states();
        let o = Oracle::new(&a);
        let product = product_square(&a);
        let mut search = PairSearch::new(&product);
        for p in 0..n {
            for q in 0..n {
                let fresh = reachable_from(PairNode::new(p, q), &product);
                let reused = search.search(PairNode::new(p, q)).clone();
                for x in 0..n {
                    for y in 0..n {
                        let expect = o.pair_reaches((p, q), (x, y));
                        assert_eq!(fresh.get(x, y), expect);
                        assert_eq!(reused.get(x, y), expect);
                    }
                }
            }
        }
    }
}

#[test]
fn cycle_sets_match_definition() {
    for a in seeded(104, 200, 7, 3) {
        let n = a.n_states();
        let o = Oracle::new(&a);
        let cyc = cycle_states(&scc(&a));
        let product = product_square(&a);
        let cyc2 = pair_cycle_states(&product, &scc(&product));
        for p in 0..n {
            assert_eq!(cyc.contains(p), o.cyc[p]);
            for q in 0..n {
                assert_eq!(cyc2.get(p, q), o.cyc2[p][q]);
            }
        }
    }
}

proptest! {
    #[test]
    fn cycle_pairs_project_to_cycle_states(a in automaton(6, 3)) {
        let n = a.n_states();
        let cyc = cycle_states(&scc(&a));
        let product = product_square(&a);
        let cyc2 = pair_cycle_states(&product, &scc(&product));
        for p in 0..n {
            prop_assert_eq!(cyc2.get(p, p), cyc.contains(p));
            for q in 0..n {
                prop_assert_eq!(cyc2.get(p, q), cyc2.get(q, p));
                if cyc2.get(p, q) {
                    prop_assert!(cyc.contains(p) && cyc.contains(q));
                }
            }
        }
    }

    #[test]
    fn pair_reach_implies_componentwise_reach(a in automaton(6, 3)) {
        let n = a.n_states();
        let reach = reachability(&a);
        let product = product_square(&a);
        for p in 0..n {
            for q in 0..n {
                let from = reachable_from(PairNode::new(p, q), &product);
                for x in 0..n {
                    for y in 0..n {
                        if from.get(x, y) {
                            prop_assert!(reach.reaches(p, x) && reach.reaches(q, y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_pair_reach_is_state_reach(a in automaton(8, 3)) {
        let n = a.n_states();
        let reach = reachability(&a);
        let product = product_square(&a);
        for p in 0..n {
            let from = reachable_from(PairNode::new(p, p), &product);
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(from.get(x, y), x == y && reach.reaches(p, x));
                }
            }
        }
    }
}
