//! Lifting: the mapping transform, graph decomposition, absorption, and
//! the full audit on random admitted seeds.

mod common;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use proptest::prelude::*;
use vcsp_core::error::Error;
use vcsp_core::fpoly::{
    find_symmetric_fpoly, symmetric_operations, FractionalPolymorphism, Mapping, Operation,
    SymmetricSearch,
};
use vcsp_core::lift::{
    absorption_from, decompose, lift_trace, mapping_s, stationary_on, ProofAudit,
};
use vcsp_core::{Caps, Rational};

fn mapping(d: usize, m: usize) -> impl Strategy<Value = Mapping> {
    let len = d.pow(m as u32);
    prop::collection::vec(prop::collection::vec(0..d, len), m).prop_map(move |tables| {
        Mapping::new(
            tables
                .into_iter()
                .map(|t| Operation::new(common::dom(d), m, t).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

fn symmetric_op(d: usize, m: usize) -> impl Strategy<Value = Operation> {
    let ops = symmetric_operations(common::dom(d), m, 1 << 20).unwrap();
    prop::sample::select(ops)
}

/// A symmetric binary fractional polymorphism on two labels.
fn symmetric_seed() -> impl Strategy<Value = FractionalPolymorphism<Rational>> {
    prop::collection::vec((symmetric_op(2, 2), 1i64..=4), 1..=3).prop_map(|parts| {
        let total: i64 = parts.iter().map(|(_, w)| w).sum();
        FractionalPolymorphism::from_operations(
            parts.into_iter().map(|(op, w)| (op, common::q(w, total))),
        )
        .unwrap()
    })
}

/// Adjacency lists where every vertex has at least one successor.
fn digraph() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..=9).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=3), n)
            .prop_map(|adj| adj.into_iter().map(|s| s.into_iter().collect()).collect())
    })
}

/// `alpha^s` computed directly: drop coordinate `i`, apply `s`.
fn drop_and_apply(alpha: &[usize], s: &Operation) -> Vec<usize> {
    (0..alpha.len())
        .map(|i| {
            let mut rest = alpha.to_vec();
            rest.remove(i);
            s.apply(&rest)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mapping_transform_is_pointwise(
        (g, s) in (2usize..=3, 3usize..=4).prop_flat_map(|(d, m)| (mapping(d, m), symmetric_op(d, m - 1)))
    ) {
        let gs = mapping_s(&g, &s).unwrap();
        let d = g.domain().size();
        for alpha in vcsp_oracles::all_tuples(d, g.arity_in()) {
            prop_assert_eq!(gs.apply(&alpha), drop_and_apply(&g.apply(&alpha), &s));
        }
    }

    #[test]
    fn components_match_petgraph(adj in digraph()) {
        let dec = decompose(&adj);
        let mut graph = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..adj.len()).map(|_| graph.add_node(())).collect();
        for (v, succ) in adj.iter().enumerate() {
            for &w in succ {
                graph.add_edge(nodes[v], nodes[w], ());
            }
        }
        let mut expected: Vec<Vec<usize>> = tarjan_scc(&graph)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        expected.sort();
        let mut found = dec.components.clone();
        found.sort();
        prop_assert_eq!(&found, &expected);
        // components come in reverse topological order
        for (v, succ) in adj.iter().enumerate() {
            for &w in succ {
                prop_assert!(dec.component_of[w] <= dec.component_of[v]);
            }
        }
        let sinks: Vec<Vec<usize>> = expected
            .into_iter()
            .filter(|c| c.iter().all(|&v| adj[v].iter().all(|w| c.contains(w))))
            .collect();
        let mut found_sinks = dec.sinks.clone();
        found_sinks.sort();
        prop_assert_eq!(found_sinks, sinks);
    }

    #[test]
    fn absorption_is_harmonic(adj in digraph(), weights in prop::collection::vec(1i64..=5, 27)) {
        let transitions: Vec<Vec<(usize, Rational)>> = adj
            .iter()
            .enumerate()
            .map(|(v, succ)| {
                let ws: Vec<i64> = (0..succ.len()).map(|k| weights[3 * v + k]).collect();
                let total: i64 = ws.iter().sum();
                succ.iter().zip(ws).map(|(&w, x)| (w, common::q(x, total))).collect()
            })
            .collect();
        let dec = decompose(&adj);
        let table: Vec<Vec<Rational>> = (0..adj.len())
            .map(|v| absorption_from(&transitions, &dec, v).unwrap())
            .collect();
        for v in 0..adj.len() {
            let total: Rational = table[v].iter().cloned().sum();
            prop_assert_eq!(total, common::q(1, 1));
            match dec.sink_of(v) {
                Some(h) => {
                    for (k, a) in table[v].iter().enumerate() {
                        prop_assert_eq!(a.clone(), common::q((k == h) as i64, 1));
                    }
                }
                None => {
                    for h in 0..dec.sinks.len() {
                        let step: Rational = transitions[v]
                            .iter()
                            .map(|(w, p)| p.clone() * table[*w][h].clone())
                            .sum();
                        prop_assert_eq!(step, table[v][h].clone());
                    }
                }
            }
        }
        for sink in &dec.sinks {
            let pi = stationary_on(&transitions, sink).unwrap();
            let total: Rational = pi.iter().cloned().sum();
            prop_assert_eq!(total, common::q(1, 1));
            for (j, &w) in sink.iter().enumerate() {
                let inflow: Rational = sink
                    .iter()
                    .zip(&pi)
                    .flat_map(|(&u, p)| {
                        transitions[u].iter().filter(move |(t, _)| *t == w).map(move |(_, x)| p.clone() * x.clone())
                    })
                    .sum();
                prop_assert_eq!(inflow, pi[j].clone());
            }
        }
    }

    #[test]
    fn structural_checks_hold_for_any_seed(omega in symmetric_seed()) {
        let audit = ProofAudit::new(&omega, &Caps::default()).unwrap();
        prop_assert!(audit.out_weights().is_ok());
        prop_assert!(audit.edges_realized().is_ok());
        prop_assert!(audit.permutation_closure().is_ok());
        prop_assert!(audit.indexed_recurrence(2).is_ok());
        for cert in &audit.certificates {
            prop_assert!(cert.check(&audit.graph));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn admitted_seeds_pass_every_check(tables in common::language_tables(2, 1..=2, 2, 3)) {
        let lang = common::language_from_tables(2, &tables);
        let SymmetricSearch::Feasible(omega) = find_symmetric_fpoly(&lang, 2, &Caps::default()).unwrap() else {
            return Ok(());
        };
        let audit = ProofAudit::new(&omega, &Caps::default()).unwrap();
        match audit.run(&lang, 4) {
            Ok(counts) => prop_assert!(counts.iter().all(|(_, n)| *n > 0)),
            Err(Error::CapExceeded { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
        let trace = lift_trace(&lang, &omega, &Caps::default()).unwrap();
        prop_assert!(common::oracle_admits(&lang, &trace.limit));
        prop_assert!(common::oracle_admits(&lang, &trace.symmetrized));
        prop_assert!(common::oracle_admits(&lang, &trace.lifted));
        prop_assert!(trace.lifted.is_symmetric());
        prop_assert_eq!(trace.lifted.arity_in(), 3);
    }
}
