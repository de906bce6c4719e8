//! From the mapping graph to an `m -> m` fractional polymorphism on the sinks.
//!
//! Applying the single-step transform to all of `ρ` at once is one step of
//! the Markov chain whose transition probabilities are the edge weights.
//! Starting from `χ_1`, every iterate is admitted, hence so is every Cesàro
//! average, hence so is their limit: the absorption probability of each
//! sink times that sink's stationary distribution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fpoly::{FractionalPolymorphism, Mapping};
use crate::linalg::solve_square;
use crate::scalar::Scalar;

use super::graph::{MappingGraph, SinkDecomposition};
use super::tuples::mapping_s;

/// `ρ' = ρ - λ χ_g + λ Σ_s ω(s) χ_{g^s}` with `λ = ρ(g)`.
pub fn single_step_transform<T: Scalar>(
    rho: &FractionalPolymorphism<T>,
    g: &Mapping,
    omega: &FractionalPolymorphism<T>,
) -> Result<FractionalPolymorphism<T>> {
    let lambda = rho
        .weight(g)
        .ok_or_else(|| Error::InvalidArgument("mapping is not in the support".into()))?
        .clone();
    let mut out: Vec<(Mapping, T)> = rho
        .support()
        .iter()
        .filter(|(h, _)| h != g)
        .cloned()
        .collect();
    for (s, w) in omega.operations() {
        out.push((mapping_s(g, s)?, lambda.clone() * w.clone()));
    }
    FractionalPolymorphism::new(out)
}

/// Weighted adjacency lists `v -> [(target, weight)]`.
pub type Transitions<T> = [Vec<(usize, T)>];

/// Probability of ending in each sink when the chain starts at the identity.
pub fn absorption_probabilities<T: Scalar>(
    graph: &MappingGraph<T>,
    dec: &SinkDecomposition,
) -> Result<Vec<T>> {
    absorption_from(&graph.transitions(), dec, 0)
}

/// Absorption probabilities into each sink of `dec`, starting at `start`.
pub fn absorption_from<T: Scalar>(
    adj: &Transitions<T>,
    dec: &SinkDecomposition,
    start: usize,
) -> Result<Vec<T>> {
    let sinks = dec.sinks.len();
    let mut absorbed: Vec<Option<Vec<T>>> = vec![None; adj.len()];
    for (h, members) in dec.sinks.iter().enumerate() {
        for &v in members {
            let mut e = vec![T::zero(); sinks];
            e[h] = T::one();
            absorbed[v] = Some(e);
        }
    }
    // components come out of Tarjan in reverse topological order, so every
    // edge leaving a component lands on one that is already solved
    for (ci, comp) in dec.components.iter().enumerate() {
        if absorbed[comp[0]].is_some() {
            continue;
        }
        let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = comp.len();
        let mut a = vec![vec![T::zero(); k]; k];
        let mut rhs = vec![vec![T::zero(); k]; sinks];
        for (i, &v) in comp.iter().enumerate() {
            a[i][i] = T::one();
            for (target, w) in &adj[v] {
                if dec.component_of[*target] == ci {
                    let j = pos[target];
                    a[i][j] = a[i][j].clone() - w.clone();
                } else {
                    let known = absorbed[*target]
                        .as_ref()
                        .ok_or_else(|| Error::Internal("components out of order".into()))?;
                    for (r, p) in rhs.iter_mut().zip(known) {
                        r[i] = r[i].clone() + w.clone() * p.clone();
                    }
                }
            }
        }
        let mut per_vertex = vec![vec![T::zero(); sinks]; k];
        for (h, b) in rhs.into_iter().enumerate() {
            if b.iter().all(T::is_zero) {
                continue;
            }
            let x = solve_square(a.clone(), b).ok_or_else(|| {
                Error::Internal("singular absorption system on a transient component".into())
            })?;
            for (pv, xv) in per_vertex.iter_mut().zip(x) {
                pv[h] = xv;
            }
        }
        for (&v, p) in comp.iter().zip(per_vertex) {
            absorbed[v] = Some(p);
        }
    }
    absorbed[start]
        .take()
        .ok_or_else(|| Error::Internal("start vertex was not reached".into()))
}

/// The stationary distribution of the chain restricted to a sink, in the
/// order of `sink`.
pub fn stationary_distribution<T: Scalar>(graph: &MappingGraph<T>, sink: &[usize]) -> Result<Vec<T>> {
    stationary_on(&graph.transitions(), sink)
}

/// Stationary distribution of the chain `adj` restricted to the closed class `sink`.
pub fn stationary_on<T: Scalar>(adj: &Transitions<T>, sink: &[usize]) -> Result<Vec<T>> {
    let k = sink.len();
    let pos: BTreeMap<usize, usize> = sink.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // row j: Σ_g π_g W(g, j) - π_j = 0, last row replaced by Σ π = 1
    let mut a = vec![vec![T::zero(); k]; k];
    for (i, &g) in sink.iter().enumerate() {
        a[i][i] = a[i][i].clone() - T::one();
        for (target, w) in &adj[g] {
            let j = *pos.get(target).ok_or_else(|| {
                Error::Internal("edge leaves a sink component".into())
            })?;
            a[j][i] = a[j][i].clone() + w.clone();
        }
    }
    let mut b = vec![T::zero(); k];
    a[k - 1] = vec![T::one(); k];
    b[k - 1] = T::one();
    solve_square(a, b).ok_or_else(|| Error::Internal("singular stationary system".into()))
}

/// The limit `Σ_H a_H Σ_{g∈H} π_H(g) χ_g`, supported on the sinks.
pub fn limit_distribution<T: Scalar>(
    graph: &MappingGraph<T>,
    dec: &SinkDecomposition,
) -> Result<FractionalPolymorphism<T>> {
    let adj = graph.transitions();
    let absorbed = absorption_from(&adj, dec, 0)?;
    let mut support = Vec::new();
    for (sink, a) in dec.sinks.iter().zip(absorbed) {
        if a.is_zero() {
            continue;
        }
        let pi = stationary_on(&adj, sink)?;
        for (&v, p) in sink.iter().zip(pi) {
            support.push((graph.vertex(v).clone(), a.clone() * p));
        }
    }
    FractionalPolymorphism::new(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::{admits, Operation};
    use crate::lift::graph::sink_decomposition;
    use crate::{catalog, Domain, Language, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn min_max(d: Domain) -> FractionalPolymorphism<Rational> {
        FractionalPolymorphism::from_operations([
            (Operation::min(d, 2), q(1, 2)),
            (Operation::max(d, 2), q(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn chain_into_absorbing_state() {
        // 0 -> 1, 1 -> 1
        let adj = vec![vec![(1, q(1, 1))], vec![(1, q(1, 1))]];
        let dec = crate::lift::graph::decompose(&[vec![1], vec![1]]);
        assert_eq!(absorption_from(&adj, &dec, 0).unwrap(), vec![q(1, 1)]);
        assert_eq!(stationary_on(&adj, &[1]).unwrap(), vec![q(1, 1)]);
    }

    #[test]
    fn two_absorbing_states_split_evenly() {
        // 0 -> 1, 0 -> 2 with weight 1/2 each; 1 and 2 absorbing
        let adj = vec![
            vec![(1, q(1, 2)), (2, q(1, 2))],
            vec![(1, q(1, 1))],
            vec![(2, q(1, 1))],
        ];
        let dec = crate::lift::graph::decompose(&[vec![1, 2], vec![1], vec![2]]);
        assert_eq!(absorption_from(&adj, &dec, 0).unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn transient_cycle_and_periodic_sink() {
        // 0 <-> 1 (transient, each leaks 1/3 to the sink {2, 3}); 2 <-> 3 periodic
        let adj = vec![
            vec![(1, q(2, 3)), (2, q(1, 3))],
            vec![(0, q(2, 3)), (3, q(1, 3))],
            vec![(3, q(1, 1))],
            vec![(2, q(1, 1))],
        ];
        let dec = crate::lift::graph::decompose(&[vec![1, 2], vec![0, 3], vec![3], vec![2]]);
        assert_eq!(dec.sinks, vec![vec![2, 3]]);
        assert_eq!(absorption_from(&adj, &dec, 0).unwrap(), vec![q(1, 1)]);
        assert_eq!(stationary_on(&adj, &[2, 3]).unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn single_step_from_identity() {
        let d = Domain::new(2).unwrap();
        let omega = min_max(d);
        let id = Mapping::identity(d, 3);
        let rho = FractionalPolymorphism::point(id.clone());
        let stepped = single_step_transform(&rho, &id, &omega).unwrap();
        let expected = FractionalPolymorphism::new(
            omega
                .operations()
                .map(|(s, w)| (mapping_s(&id, s).unwrap(), w.clone())),
        )
        .unwrap();
        assert_eq!(stepped, expected);
        assert!(single_step_transform(&stepped, &id, &omega).is_err());
    }

    #[test]
    fn single_generator_limit_is_a_point_mass() {
        let d = Domain::new(2).unwrap();
        let omega = FractionalPolymorphism::<Rational>::point(Mapping::single(Operation::min(d, 2)));
        let graph = MappingGraph::generate(&omega, 1000).unwrap();
        let dec = sink_decomposition(&graph);
        let rho = limit_distribution(&graph, &dec).unwrap();
        // one generator: a single path ending in a cycle
        assert_eq!(dec.sinks.len(), 1);
        let total = crate::scalar::sum(rho.support().iter().map(|(_, w)| w));
        assert_eq!(total, q(1, 1));
        assert!(rho.support().iter().all(|(g, _)| {
            dec.sinks[0].contains(&graph.find(g).unwrap())
        }));
    }

    #[test]
    fn min_max_limit_is_admitted_by_cut() {
        let d = Domain::new(2).unwrap();
        let lang: Language<Rational> = Language::new(d).with("cut", catalog::cut(d)).unwrap();
        let graph = MappingGraph::generate(&min_max(d), 1000).unwrap();
        let dec = sink_decomposition(&graph);
        let rho = limit_distribution(&graph, &dec).unwrap();
        assert!(admits(&lang, &rho, 1 << 20).unwrap());
        let sink_union = dec.sink_union();
        for (g, _) in rho.support() {
            assert!(sink_union.binary_search(&graph.find(g).unwrap()).is_ok());
        }
    }
}
