//! The weighted graph of mappings generated from the identity.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fpoly::{FractionalPolymorphism, Mapping, Operation};
use crate::scalar::Scalar;

use super::tuples::mapping_s;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<T> {
    pub target: usize,
    /// Total generator weight `Σ ω(s)` over the generators realizing the edge.
    pub weight: T,
    /// Indices into [`MappingGraph::generators`] with `source^s = target`.
    pub generators: Vec<usize>,
}

/// Vertices are the mappings `D^m -> D^m` reachable from the identity under
/// `g -> g^s` for `s` in the support of a symmetric `(m-1)`-ary `ω`; vertex
/// 0 is the identity. Out-edges of every vertex carry total weight one.
#[derive(Debug, Clone)]
pub struct MappingGraph<T> {
    arity: usize,
    generators: Vec<(Operation, T)>,
    vertices: Vec<Mapping>,
    lookup: HashMap<Mapping, usize>,
    edges: Vec<Vec<Edge<T>>>,
}

impl<T: Scalar> MappingGraph<T> {
    /// Breadth-first closure of `{1}`; fails once more than `cap` vertices appear.
    pub fn generate(omega: &FractionalPolymorphism<T>, cap: usize) -> Result<Self> {
        if omega.arity_out() != 1 {
            return Err(Error::InvalidArgument(
                "generators must form an m -> 1 fractional polymorphism".into(),
            ));
        }
        if !omega.is_symmetric() {
            return Err(Error::NotSymmetric(
                "every generator of the mapping graph must be symmetric".into(),
            ));
        }
        let m = omega.arity_in() + 1;
        let generators: Vec<(Operation, T)> =
            omega.operations().map(|(g, w)| (g.clone(), w.clone())).collect();
        let identity = Mapping::identity(omega.domain(), m);
        let mut graph = MappingGraph {
            arity: m,
            generators,
            vertices: vec![identity.clone()],
            lookup: HashMap::from([(identity, 0)]),
            edges: vec![Vec::new()],
        };
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let mut out: Vec<Edge<T>> = Vec::new();
            for (k, (s, w)) in graph.generators.iter().enumerate() {
                let h = mapping_s(&graph.vertices[v], s)?;
                let target = match graph.lookup.get(&h) {
                    Some(&t) => t,
                    None => {
                        if graph.vertices.len() >= cap {
                            return Err(Error::cap(
                                "mapping graph vertices",
                                graph.vertices.len() as u128 + 1,
                                cap as u128,
                            ));
                        }
                        let t = graph.vertices.len();
                        graph.lookup.insert(h.clone(), t);
                        graph.vertices.push(h);
                        graph.edges.push(Vec::new());
                        queue.push_back(t);
                        t
                    }
                };
                match out.iter_mut().find(|e| e.target == target) {
                    Some(e) => {
                        e.weight = e.weight.clone() + w.clone();
                        e.generators.push(k);
                    }
                    None => out.push(Edge {
                        target,
                        weight: w.clone(),
                        generators: vec![k],
                    }),
                }
            }
            out.sort_by_key(|e| e.target);
            graph.edges[v] = out;
        }
        Ok(graph)
    }

    /// `m`, the arity of the vertex mappings.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn generators(&self) -> &[(Operation, T)] {
        &self.generators
    }

    pub fn vertices(&self) -> &[Mapping] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Mapping {
        &self.vertices[v]
    }

    pub fn find(&self, g: &Mapping) -> Option<usize> {
        self.lookup.get(g).copied()
    }

    pub fn out_edges(&self, v: usize) -> &[Edge<T>] {
        &self.edges[v]
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[v].iter().map(|e| e.target)
    }

    pub fn edge_weight(&self, from: usize, to: usize) -> Option<&T> {
        self.edges[from]
            .iter()
            .find(|e| e.target == to)
            .map(|e| &e.weight)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Weighted adjacency lists `(target, weight)` per vertex.
    pub fn transitions(&self) -> Vec<Vec<(usize, T)>> {
        self.edges
            .iter()
            .map(|out| out.iter().map(|e| (e.target, e.weight.clone())).collect())
            .collect()
    }
}

/// Strongly connected components, and which of them are sinks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkDecomposition {
    /// All components in reverse topological order (every edge leaving a
    /// component points to an earlier one). Members are sorted.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Sink components, each sorted, ordered by their smallest vertex.
    pub sinks: Vec<Vec<usize>>,
    /// Vertices outside every sink, sorted.
    pub transient: Vec<usize>,
}

impl SinkDecomposition {
    /// Index into `sinks` of the sink containing `v`.
    pub fn sink_of(&self, v: usize) -> Option<usize> {
        self.sinks.iter().position(|h| h.binary_search(&v).is_ok())
    }

    /// The union of all sinks, sorted.
    pub fn sink_union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.sinks.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

pub fn sink_decomposition<T: Scalar>(graph: &MappingGraph<T>) -> SinkDecomposition {
    let succ: Vec<Vec<usize>> = (0..graph.len()).map(|v| graph.successors(v).collect()).collect();
    decompose(&succ)
}

/// Tarjan's algorithm (iterative) on adjacency lists, plus sink detection.
pub fn decompose(succ: &[Vec<usize>]) -> SinkDecomposition {
    let n = succ.len();
    let mut components = tarjan(succ);
    for c in &mut components {
        c.sort_unstable();
    }
    let mut component_of = vec![0; n];
    for (ci, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = ci;
        }
    }
    let mut sinks: Vec<Vec<usize>> = components
        .iter()
        .enumerate()
        .filter(|(ci, c)| {
            c.iter()
                .all(|&v| succ[v].iter().all(|&w| component_of[w] == *ci))
        })
        .map(|(_, c)| c.clone())
        .collect();
    sinks.sort_by_key(|h| h[0]);
    let mut transient: Vec<usize> = (0..n)
        .filter(|&v| !sinks.iter().any(|h| h.binary_search(&v).is_ok()))
        .collect();
    transient.sort_unstable();
    SinkDecomposition {
        components,
        component_of,
        sinks,
        transient,
    }
}

fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut order = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        let mut calls = vec![(root, 0usize)];
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = calls.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                if order[w] == usize::MAX {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                calls.pop();
                if let Some(&(u, _)) = calls.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == order[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(comp);
                }
            }
        }
    }
    components
}
