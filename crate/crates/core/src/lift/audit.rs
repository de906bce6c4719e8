//! Exhaustive checks of the intermediate objects of a lifting step.
//!
//! Each check returns the number of individual facts it verified, or
//! [`Error::AuditFailed`] describing the first counterexample.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::fpoly::{admits, FractionalPolymorphism, Mapping};
use crate::index::{self, Label};
use crate::scalar::{self, Scalar};
use crate::vcsp::{CostFunction, Labeling, Language};
use crate::Caps;

use super::certificate::{sink_certificate, CertificateMode, SinkCertificate};
use super::graph::{sink_decomposition, MappingGraph, SinkDecomposition};
use super::limit::{limit_distribution, single_step_transform};
use super::symmetrize::canonical_sorting_map;
use super::tuples::{mapping_s, permute_operation, tuple_s};

fn fail(check: &'static str, detail: impl Into<String>) -> Error {
    Error::AuditFailed {
        check,
        detail: detail.into(),
    }
}

/// Calls `visit` on every `m`-tuple of labelings of length `n`.
fn for_each_tuple(
    d: usize,
    n: usize,
    m: usize,
    cap: u128,
    mut visit: impl FnMut(&[Labeling]) -> Result<()>,
) -> Result<usize> {
    let states = index::saturating_pow(d, n * m);
    if states > cap {
        return Err(Error::cap("exhaustive tuple enumeration", states, cap));
    }
    let mut count = 0;
    for flat in index::tuples(d, n * m) {
        let xs: Vec<Labeling> = if n == 0 {
            vec![Vec::new(); m]
        } else {
            flat.chunks(n).map(<[Label]>::to_vec).collect()
        };
        visit(&xs)?;
        count += 1;
    }
    Ok(count)
}

fn total_cost<T: Scalar>(f: &CostFunction<T>, ys: &[Labeling]) -> T {
    ys.iter().fold(T::zero(), |acc, y| acc + f.at(y).clone())
}

/// The mapping graph of a symmetric `ω` with its sinks and distribution
/// certificates, ready to be audited against a language admitting `ω`.
#[derive(Debug, Clone)]
pub struct ProofAudit<T> {
    pub omega: FractionalPolymorphism<T>,
    pub graph: MappingGraph<T>,
    pub decomposition: SinkDecomposition,
    /// One distribution certificate per sink, for the pair `(0, 1)`.
    pub certificates: Vec<SinkCertificate<T>>,
    cap: u128,
}

impl<T: Scalar> ProofAudit<T> {
    pub fn new(omega: &FractionalPolymorphism<T>, caps: &Caps) -> Result<Self> {
        let graph = MappingGraph::generate(omega, caps.mapping_vertices)?;
        let decomposition = sink_decomposition(&graph);
        let certificates = decomposition
            .sinks
            .iter()
            .map(|h| sink_certificate(&graph, h, (0, 1), CertificateMode::Distribution))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProofAudit {
            omega: omega.clone(),
            graph,
            decomposition,
            certificates,
            cap: caps.admits,
        })
    }

    fn m(&self) -> usize {
        self.graph.arity()
    }

    fn d(&self) -> usize {
        self.omega.domain().size()
    }

    /// Out-weights of every vertex sum to one.
    pub fn out_weights(&self) -> Result<usize> {
        for v in 0..self.graph.len() {
            let total = scalar::sum(self.graph.out_edges(v).iter().map(|e| &e.weight));
            if !total.is_one() {
                return Err(fail("out-weights", format!("vertex {v} has out-weight {total}")));
            }
        }
        Ok(self.graph.len())
    }

    /// Every edge is realized by exactly its logged generators, and every
    /// `g^s` is an edge.
    pub fn edges_realized(&self) -> Result<usize> {
        let mut count = 0;
        for v in 0..self.graph.len() {
            let g = self.graph.vertex(v);
            let mut logged = 0;
            for e in self.graph.out_edges(v) {
                let mut w = T::zero();
                for &k in &e.generators {
                    let (s, ws) = &self.graph.generators()[k];
                    if &mapping_s(g, s)? != self.graph.vertex(e.target) {
                        return Err(fail("edges", format!("edge {v}->{} misattributed", e.target)));
                    }
                    w = w + ws.clone();
                    logged += 1;
                }
                if w != e.weight {
                    return Err(fail("edges", format!("edge {v}->{} has wrong weight", e.target)));
                }
                count += 1;
            }
            if logged != self.graph.generators().len() {
                return Err(fail("edges", format!("vertex {v} does not log every generator")));
            }
        }
        Ok(count)
    }

    /// `(g_1^π, ..., g_m^π) = (g_{π(1)}, ..., g_{π(m)})` for every vertex
    /// and permutation.
    pub fn permutation_closure(&self) -> Result<usize> {
        let perms = index::permutations(self.m());
        let mut count = 0;
        for (v, g) in self.graph.vertices().iter().enumerate() {
            for pi in &perms {
                for (i, op) in g.ops().iter().enumerate() {
                    if permute_operation(op, pi) != g.ops()[pi[i]] {
                        return Err(fail(
                            "permutation closure",
                            format!("vertex {v}, permutation {pi:?}, component {i}"),
                        ));
                    }
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Admittance is preserved along `steps` single-step transforms from
    /// `χ_1`, cycling through the support.
    pub fn single_steps(&self, lang: &Language<T>, steps: usize) -> Result<usize> {
        let identity = Mapping::identity(self.omega.domain(), self.m());
        let mut rho = FractionalPolymorphism::point(identity);
        for t in 0..steps {
            let support = rho.support();
            let g = support[t % support.len()].0.clone();
            rho = single_step_transform(&rho, &g, &self.omega)?;
            if !scalar::sum(rho.support().iter().map(|(_, w)| w)).is_one() {
                return Err(fail("single step", format!("mass not preserved at step {t}")));
            }
            if !admits(lang, &rho, self.cap)? {
                return Err(fail("single step", format!("admittance lost at step {t}")));
            }
        }
        Ok(steps)
    }

    /// The limit distribution is supported on the sinks and admitted.
    pub fn limit_admitted(&self, lang: &Language<T>) -> Result<usize> {
        let rho = limit_distribution(&self.graph, &self.decomposition)?;
        for (g, _) in rho.support() {
            let v = self
                .graph
                .find(g)
                .ok_or_else(|| fail("limit", "support mapping outside the graph"))?;
            if self.decomposition.sink_of(v).is_none() {
                return Err(fail("limit", format!("vertex {v} is transient")));
            }
        }
        if !admits(lang, &rho, self.cap)? {
            return Err(fail("limit", "limit distribution is not admitted"));
        }
        Ok(rho.support().len())
    }

    /// `x^{h,i} = s((x^{g,1}, ..., x^{g,m})_{-i})` for every edge `h = g^s`
    /// and all tuples of labelings of each length up to `max_n`.
    pub fn indexed_recurrence(&self, max_n: usize) -> Result<usize> {
        let (d, m) = (self.d(), self.m());
        let mut count = 0;
        for n in 1..=max_n {
            for v in 0..self.graph.len() {
                let g = self.graph.vertex(v);
                for e in self.graph.out_edges(v) {
                    let h = self.graph.vertex(e.target);
                    for &k in &e.generators {
                        let s = &self.graph.generators()[k].0;
                        count += for_each_tuple(d, n, m, self.cap, |xs| {
                            let xg = g.apply_columns(xs, n);
                            let xh = h.apply_columns(xs, n);
                            for node in 0..n {
                                let column: Vec<Label> = xg.iter().map(|x| x[node]).collect();
                                let next = tuple_s(&column, s)?;
                                if xh.iter().zip(&next).any(|(x, &a)| x[node] != a) {
                                    return Err(fail(
                                        "indexed recurrence",
                                        format!("edge {v}->{} at {xs:?}", e.target),
                                    ));
                                }
                            }
                            Ok(())
                        })?;
                    }
                }
            }
        }
        Ok(count)
    }

    /// `f^m(x^{g,1..m})` does not depend on `g` within a sink, and a
    /// balancing certificate exists for every pair of sink vertices.
    pub fn sink_balance(&self, lang: &Language<T>) -> Result<usize> {
        let (d, m) = (self.d(), self.m());
        let mut count = 0;
        for sink in &self.decomposition.sinks {
            for &g in sink {
                let mode = CertificateMode::Balance {
                    first: sink[0],
                    second: g,
                };
                let cert = sink_certificate(&self.graph, sink, (0, 1), mode)?;
                if !cert.check(&self.graph) {
                    return Err(fail("sink balance", format!("certificate for {g} rejected")));
                }
            }
            for f in lang.functions() {
                let n = f.arity();
                count += for_each_tuple(d, n, m, self.cap, |xs| {
                    let first = total_cost(f, &self.graph.vertex(sink[0]).apply_columns(xs, n));
                    for &g in &sink[1..] {
                        let other = total_cost(f, &self.graph.vertex(g).apply_columns(xs, n));
                        if other != first {
                            return Err(fail("sink balance", format!("vertex {g} at {xs:?}")));
                        }
                    }
                    Ok(())
                })?;
            }
        }
        Ok(count)
    }

    /// `F_i^λ(x)` for every `i`.
    fn f_all(&self, f: &CostFunction<T>, cert: &SinkCertificate<T>, xs: &[Labeling]) -> Vec<T> {
        let n = f.arity();
        let mut out = vec![T::zero(); self.m()];
        for (&g, l) in cert.sink.iter().zip(&cert.lambda) {
            if l.is_zero() {
                continue;
            }
            let ys = self.graph.vertex(g).apply_columns(xs, n);
            for (o, y) in out.iter_mut().zip(&ys) {
                *o = o.clone() + l.clone() * f.at(y).clone();
            }
        }
        out
    }

    /// Distribution certificates hold for every index pair with a shared
    /// `λ_g`, and `F_i^λ` is the same for every `i`.
    pub fn index_balance(&self, lang: &Language<T>) -> Result<usize> {
        let (d, m) = (self.d(), self.m());
        let mut count = 0;
        for cert in &self.certificates {
            for a in 0..m {
                for b in (0..m).filter(|&b| b != a) {
                    let moved = cert.transport((a, b))?;
                    if !moved.check(&self.graph) || moved.lambda != cert.lambda {
                        return Err(fail("index balance", format!("pair ({a},{b}) rejected")));
                    }
                }
            }
            for f in lang.functions() {
                count += for_each_tuple(d, f.arity(), m, self.cap, |xs| {
                    let values = self.f_all(f, cert, xs);
                    if values.iter().any(|v| v != &values[0]) {
                        return Err(fail("index balance", format!("unequal values at {xs:?}")));
                    }
                    Ok(())
                })?;
            }
        }
        Ok(count)
    }

    /// `F^λ` is unchanged by permuting the `m` values at any single node.
    pub fn coordinate_permutation(&self, lang: &Language<T>) -> Result<usize> {
        let (d, m) = (self.d(), self.m());
        if m < 3 {
            return Ok(0);
        }
        let perms = index::permutations(m);
        let mut count = 0;
        for cert in &self.certificates {
            for f in lang.functions() {
                let n = f.arity();
                for_each_tuple(d, n, m, self.cap, |xs| {
                    let base = self.f_all(f, cert, xs)[0].clone();
                    for node in 0..n {
                        for pi in &perms {
                            let mut moved = xs.to_vec();
                            for (i, x) in moved.iter_mut().enumerate() {
                                x[node] = xs[pi[i]][node];
                            }
                            if self.f_all(f, cert, &moved)[0] != base {
                                return Err(fail(
                                    "coordinate permutation",
                                    format!("node {node}, permutation {pi:?} at {xs:?}"),
                                ));
                            }
                            count += 1;
                        }
                    }
                    Ok(())
                })?;
            }
        }
        Ok(count)
    }

    /// `Range_n(ĝ)` for each arity `n` used by `lang`.
    fn range(&self, g: &Mapping, n: usize) -> Result<HashSet<Vec<Labeling>>> {
        let mut out = HashSet::new();
        for_each_tuple(self.d(), n, self.m(), self.cap, |xs| {
            out.insert(g.apply_columns(xs, n));
            Ok(())
        })?;
        Ok(out)
    }

    /// Runs `visit(cert, ĝ, f, y)` for every sink vertex `ĝ`, function `f`,
    /// and `y` in `Range_n(ĝ)`.
    fn for_each_range_tuple(
        &self,
        lang: &Language<T>,
        mut visit: impl FnMut(&SinkCertificate<T>, usize, &CostFunction<T>, &HashSet<Vec<Labeling>>, &[Labeling]) -> Result<()>,
    ) -> Result<usize> {
        let mut count = 0;
        for cert in &self.certificates {
            for &gh in &cert.sink {
                let g = self.graph.vertex(gh);
                for f in lang.functions() {
                    let range = self.range(g, f.arity())?;
                    for y in &range {
                        visit(cert, gh, f, &range, y)?;
                        count += 1;
                    }
                }
            }
        }
        Ok(count)
    }

    /// Every tuple in `Range_n(ĝ)` is fixed by some mapping of ĝ's sink.
    pub fn range_fixers(&self, lang: &Language<T>) -> Result<usize> {
        self.for_each_range_tuple(lang, |cert, gh, f, _, y| {
            let n = f.arity();
            let fixed = cert
                .sink
                .iter()
                .any(|&g| self.graph.vertex(g).apply_columns(y, n) == y);
            if fixed {
                Ok(())
            } else {
                Err(fail("range fixers", format!("no fixer for {y:?} in the range of {gh}")))
            }
        })
    }

    /// `f^m = F^λ` on `Range_n(ĝ)`.
    pub fn range_average(&self, lang: &Language<T>) -> Result<usize> {
        let m = T::from_count(self.m());
        self.for_each_range_tuple(lang, |cert, gh, f, _, y| {
            if total_cost(f, y) != m.clone() * self.f_all(f, cert, y)[0].clone() {
                return Err(fail("range average", format!("{y:?} in the range of {gh}")));
            }
            Ok(())
        })
    }

    /// The canonical sorting map keeps `Range_n(ĝ)` closed and leaves `f^m`
    /// unchanged on it.
    pub fn sorting_closure(&self, lang: &Language<T>) -> Result<usize> {
        let p = canonical_sorting_map(self.omega.domain(), self.m());
        self.for_each_range_tuple(lang, |_, gh, f, range, y| {
            let sorted = p.apply_columns(y, f.arity());
            if !range.contains(&sorted) {
                return Err(fail("sorting closure", format!("{y:?} leaves the range of {gh}")));
            }
            if total_cost(f, &sorted) != total_cost(f, y) {
                return Err(fail("sorting closure", format!("cost changes at {y:?}")));
            }
            Ok(())
        })
    }

    /// Every check in sequence, with `steps` single-step transforms and
    /// labelings of length up to 2 for the recurrence.
    pub fn run(&self, lang: &Language<T>, steps: usize) -> Result<Vec<(&'static str, usize)>> {
        Ok(vec![
            ("out-weights", self.out_weights()?),
            ("edges", self.edges_realized()?),
            ("permutation closure", self.permutation_closure()?),
            ("single steps", self.single_steps(lang, steps)?),
            ("limit", self.limit_admitted(lang)?),
            ("indexed recurrence", self.indexed_recurrence(2)?),
            ("sink balance", self.sink_balance(lang)?),
            ("index balance", self.index_balance(lang)?),
            ("coordinate permutation", self.coordinate_permutation(lang)?),
            ("range fixers", self.range_fixers(lang)?),
            ("range average", self.range_average(lang)?),
            ("sorting closure", self.sorting_closure(lang)?),
        ])
    }
}
