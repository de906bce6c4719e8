//! Balancing weights on a sink component.
//!
//! For a sink `H` and `I = H x [m]` the weights `λ_{g,i} >= 0` satisfy, for
//! every `(g, i)` in `I`,
//!
//! ```text
//! Σ_{(h,g) ∈ E} w(h,g) λ_{h,i} - 1/(m-1) Σ_{j != i} λ_{g,j} = rhs(g, i)
//! ```
//!
//! where `rhs(g, i) = [g = g'] - [g = g'']` for a [`CertificateMode::Balance`]
//! certificate and `rhs(g, i) = ([i = i'] - [i = i'']) λ_g` for a
//! [`CertificateMode::Distribution`] certificate, which also carries a
//! probability distribution `λ_g` over `H`.

use std::collections::HashMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::fpoly::Mapping;
use crate::index::Label;
use crate::ratlp::{feasible_point, Feasibility};
use crate::scalar::Scalar;
use crate::vcsp::{CostFunction, Labeling};

use super::graph::MappingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    /// Equalizes `Σ_i f(x^{g,i})` between the vertices `g'` and `g''`.
    Balance { first: usize, second: usize },
    /// Equalizes `F_i^λ` between the indices of the pair.
    Distribution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkCertificate<T> {
    /// Vertices of the sink, sorted.
    pub sink: Vec<usize>,
    pub mode: CertificateMode,
    /// Zero-based `(i', i'')`.
    pub pair: (usize, usize),
    /// `λ_g` for each vertex of `sink`; empty in balance mode.
    pub lambda: Vec<T>,
    /// `λ_{g,i}`, indexed `[position in sink][i]`.
    pub weights: Vec<Vec<T>>,
}

/// Incoming edges restricted to `sink`, as `(source position, weight)`.
fn incoming<T: Scalar>(graph: &MappingGraph<T>, sink: &[usize]) -> Result<Vec<Vec<(usize, T)>>> {
    let pos: HashMap<usize, usize> = sink.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut into = vec![Vec::new(); sink.len()];
    for (ph, &h) in sink.iter().enumerate() {
        for e in graph.out_edges(h) {
            let pg = *pos.get(&e.target).ok_or_else(|| {
                Error::InvalidArgument(format!("vertex {h} has an edge leaving the component"))
            })?;
            into[pg].push((ph, e.weight.clone()));
        }
    }
    Ok(into)
}

fn check_inputs<T: Scalar>(
    graph: &MappingGraph<T>,
    sink: &[usize],
    pair: (usize, usize),
) -> Result<()> {
    let m = graph.arity();
    if sink.is_empty() {
        return Err(Error::InvalidArgument("empty component".into()));
    }
    if sink.windows(2).any(|w| w[0] >= w[1]) || sink[sink.len() - 1] >= graph.len() {
        return Err(Error::InvalidArgument(
            "component must be sorted, distinct, and within the graph".into(),
        ));
    }
    if pair.0 == pair.1 || pair.0 >= m || pair.1 >= m {
        return Err(Error::InvalidArgument(format!(
            "index pair {pair:?} must be two distinct indices below {m}"
        )));
    }
    Ok(())
}

/// Solves the balancing system for a sink component with the exact LP solver.
///
/// Distribution certificates are always solved for the pair `(0, 1)` and
/// then transported, so `λ_g` does not depend on the pair.
pub fn sink_certificate<T: Scalar>(
    graph: &MappingGraph<T>,
    sink: &[usize],
    pair: (usize, usize),
    mode: CertificateMode,
) -> Result<SinkCertificate<T>> {
    check_inputs(graph, sink, pair)?;
    let into = incoming(graph, sink)?;
    let m = graph.arity();
    let k = sink.len();
    let solve_pair = match mode {
        CertificateMode::Balance { first, second } => {
            for v in [first, second] {
                if sink.binary_search(&v).is_err() {
                    return Err(Error::InvalidArgument(format!("vertex {v} is not in the component")));
                }
            }
            pair
        }
        CertificateMode::Distribution => (0, 1),
    };
    let with_lambda = matches!(mode, CertificateMode::Distribution);
    let vars = k * m + if with_lambda { k } else { 0 };
    let inv = T::recip_count(m - 1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for pg in 0..k {
        for i in 0..m {
            let mut row = vec![T::zero(); vars];
            for (ph, w) in &into[pg] {
                row[ph * m + i] = row[ph * m + i].clone() + w.clone();
            }
            for j in (0..m).filter(|&j| j != i) {
                row[pg * m + j] = row[pg * m + j].clone() - inv.clone();
            }
            let rhs = match mode {
                CertificateMode::Balance { first, second } => {
                    iverson::<T>(sink[pg] == first) - iverson::<T>(sink[pg] == second)
                }
                CertificateMode::Distribution => {
                    let c = iverson::<T>(i == solve_pair.0) - iverson::<T>(i == solve_pair.1);
                    row[k * m + pg] = -c;
                    T::zero()
                }
            };
            a.push(row);
            b.push(rhs);
        }
    }
    if with_lambda {
        let mut row = vec![T::zero(); vars];
        for v in &mut row[k * m..] {
            *v = T::one();
        }
        a.push(row);
        b.push(T::one());
    }
    let x = match feasible_point(a, b, vars)? {
        Feasibility::Feasible(x) => x,
        Feasibility::Infeasible(y) => {
            let y: Vec<String> = y.iter().map(ToString::to_string).collect();
            return Err(Error::Internal(format!(
                "balancing system on component {sink:?} is infeasible; Farkas vector [{}]",
                y.join(", ")
            )));
        }
    };
    let weights: Vec<Vec<T>> = x[..k * m].chunks(m).map(<[T]>::to_vec).collect();
    let lambda = if with_lambda { x[k * m..].to_vec() } else { Vec::new() };
    let cert = SinkCertificate {
        sink: sink.to_vec(),
        mode,
        pair: solve_pair,
        lambda,
        weights,
    };
    match mode {
        CertificateMode::Balance { .. } => Ok(cert),
        CertificateMode::Distribution => cert.transport(pair),
    }
}

fn iverson<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

impl<T: Scalar> SinkCertificate<T> {
    /// Re-indexes a distribution certificate for another index pair by a
    /// permutation `σ` with `σ(i') = a`, `σ(i'') = b`, where `(a, b)` is
    /// the current pair: `λ'_{g,i} = λ_{g,σ(i)}`.
    pub fn transport(&self, pair: (usize, usize)) -> Result<Self> {
        if !matches!(self.mode, CertificateMode::Distribution) {
            return Err(Error::InvalidArgument(
                "only distribution certificates can be transported".into(),
            ));
        }
        let m = self.weights.first().map_or(0, Vec::len);
        if pair.0 == pair.1 || pair.0 >= m || pair.1 >= m {
            return Err(Error::InvalidArgument(format!(
                "index pair {pair:?} must be two distinct indices below {m}"
            )));
        }
        let (a, b) = self.pair;
        let mut sigma = vec![usize::MAX; m];
        sigma[pair.0] = a;
        sigma[pair.1] = b;
        let mut rest = (0..m).filter(|&j| j != a && j != b);
        for s in sigma.iter_mut().filter(|s| **s == usize::MAX) {
            *s = rest.next().expect("permutation has enough indices");
        }
        let weights = self
            .weights
            .iter()
            .map(|row| sigma.iter().map(|&j| row[j].clone()).collect())
            .collect();
        Ok(SinkCertificate {
            sink: self.sink.clone(),
            mode: self.mode,
            pair,
            lambda: self.lambda.clone(),
            weights,
        })
    }

    /// Re-checks non-negativity, normalization, and every balancing row by
    /// direct substitution.
    pub fn check(&self, graph: &MappingGraph<T>) -> bool {
        if check_inputs(graph, &self.sink, self.pair).is_err() {
            return false;
        }
        let Ok(into) = incoming(graph, &self.sink) else {
            return false;
        };
        let m = graph.arity();
        let k = self.sink.len();
        if self.weights.len() != k || self.weights.iter().any(|r| r.len() != m) {
            return false;
        }
        if self.weights.iter().flatten().any(Signed::is_negative) {
            return false;
        }
        match self.mode {
            CertificateMode::Balance { .. } => {
                if !self.lambda.is_empty() {
                    return false;
                }
            }
            CertificateMode::Distribution => {
                if self.lambda.len() != k
                    || self.lambda.iter().any(Signed::is_negative)
                    || !crate::scalar::sum(&self.lambda).is_one()
                {
                    return false;
                }
            }
        }
        let inv = T::recip_count(m - 1);
        for pg in 0..k {
            for i in 0..m {
                let mut lhs = T::zero();
                for (ph, w) in &into[pg] {
                    lhs = lhs + w.clone() * self.weights[*ph][i].clone();
                }
                for j in (0..m).filter(|&j| j != i) {
                    lhs = lhs - inv.clone() * self.weights[pg][j].clone();
                }
                let rhs = match self.mode {
                    CertificateMode::Balance { first, second } => {
                        iverson::<T>(self.sink[pg] == first) - iverson::<T>(self.sink[pg] == second)
                    }
                    CertificateMode::Distribution => {
                        (iverson::<T>(i == self.pair.0) - iverson::<T>(i == self.pair.1))
                            * self.lambda[pg].clone()
                    }
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// `(x^{g,1}, ..., x^{g,m}) = g(x^1, ..., x^m)`.
pub fn indexed_labelings<L: AsRef<[Label]>>(g: &Mapping, xs: &[L]) -> Result<Vec<Labeling>> {
    g.apply_to_labelings(xs)
}

/// `F_i^λ(x) = Σ_{g ∈ H} λ_g f(x^{g,i})` for a distribution certificate.
pub fn f_lambda<T: Scalar, L: AsRef<[Label]>>(
    f: &CostFunction<T>,
    graph: &MappingGraph<T>,
    cert: &SinkCertificate<T>,
    i: usize,
    xs: &[L],
) -> Result<T> {
    if i >= graph.arity() {
        return Err(Error::InvalidArgument(format!(
            "index {i} out of range for arity {}",
            graph.arity()
        )));
    }
    if cert.lambda.len() != cert.sink.len() {
        return Err(Error::InvalidArgument("certificate carries no distribution".into()));
    }
    let mut total = T::zero();
    for (&g, l) in cert.sink.iter().zip(&cert.lambda) {
        if l.is_zero() {
            continue;
        }
        let y = indexed_labelings(graph.vertex(g), xs)?;
        total = total + l.clone() * f.value(&y[i])?.clone();
    }
    Ok(total)
}
