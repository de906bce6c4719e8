//! The basic LP relaxation of an instance.
//!
//! Variables are a distribution `μ_t` over `D^{n_t}` for every term and a
//! distribution `μ_v` over `D` for every node, tied together by
//! marginalization: `Σ_{σ: σ_k = a} μ_t(σ) = μ_{v(t,k)}(a)`. The objective is
//! `Σ_t Σ_σ μ_t(σ) f_t(σ)`.

use crate::error::{Error, Result};
use crate::index::{self, Label};
use crate::ratlp::{solve, LinearProgram, LpOutcome};
use crate::scalar::Scalar;
use crate::vcsp::{Instance, Labeling};
use crate::Caps;

/// The assembled program together with its variable layout: term
/// variables first (in term order, lexicographic `σ`), then node variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlpRelaxation<T> {
    lp: LinearProgram<T>,
    domain: usize,
    term_offsets: Vec<usize>,
    node_offset: usize,
    nodes: usize,
}

impl<T: Scalar> BlpRelaxation<T> {
    pub fn lp(&self) -> &LinearProgram<T> {
        &self.lp
    }

    pub fn variables(&self) -> usize {
        self.lp.cols()
    }

    pub fn term_variables(&self) -> usize {
        self.node_offset
    }

    pub fn node_variables(&self) -> usize {
        self.nodes * self.domain
    }

    /// Column of `μ_t(σ)`, with `σ` given by its lexicographic index.
    pub fn term_variable(&self, term: usize, sigma: usize) -> usize {
        self.term_offsets[term] + sigma
    }

    /// Column of `μ_v(a)`.
    pub fn node_variable(&self, node: usize, label: Label) -> usize {
        self.node_offset + node * self.domain + label
    }

    /// `μ_t` for every term, read from a point of the program.
    pub fn term_marginals(&self, x: &[T]) -> Vec<Vec<T>> {
        let mut ends = self.term_offsets[1..].to_vec();
        ends.push(self.node_offset);
        self.term_offsets
            .iter()
            .zip(ends)
            .map(|(&s, e)| x[s..e].to_vec())
            .collect()
    }

    /// `μ_v` for every node.
    pub fn node_marginals(&self, x: &[T]) -> Vec<Vec<T>> {
        (0..self.nodes)
            .map(|v| x[self.node_variable(v, 0)..self.node_variable(v, 0) + self.domain].to_vec())
            .collect()
    }

    /// The program with `μ_v(a) = 1` added.
    fn pinned(&self, lp: &LinearProgram<T>, node: usize, label: Label) -> Result<LinearProgram<T>> {
        let mut row = vec![T::zero(); lp.cols()];
        row[self.node_variable(node, label)] = T::one();
        lp.with_row(row, T::one())
    }
}

/// Rows: term normalization, node normalization, then marginalization
/// (by term, position, label).
pub fn build_blp<T: Scalar>(inst: &Instance<T>, caps: &Caps) -> Result<BlpRelaxation<T>> {
    let d = inst.domain().size();
    let mut term_offsets = Vec::with_capacity(inst.terms().len());
    let mut total: u128 = 0;
    for t in inst.terms() {
        term_offsets.push(total as usize);
        total += index::saturating_pow(d, t.scope.len());
        if total > caps.blp_variables {
            return Err(Error::cap("basic LP variables", total, caps.blp_variables));
        }
    }
    let node_offset = total as usize;
    total += (inst.nodes() * d) as u128;
    if total > caps.blp_variables {
        return Err(Error::cap("basic LP variables", total, caps.blp_variables));
    }
    let vars = total as usize;
    let mut relaxation = BlpRelaxation {
        lp: LinearProgram::feasibility(Vec::new(), Vec::new(), vars)?,
        domain: d,
        term_offsets,
        node_offset,
        nodes: inst.nodes(),
    };

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = vec![T::zero(); vars];
    for (ti, t) in inst.terms().iter().enumerate() {
        let f = inst.term_function(t);
        let mut row = vec![T::zero(); vars];
        for (si, value) in f.table().iter().enumerate() {
            let j = relaxation.term_variable(ti, si);
            row[j] = T::one();
            c[j] = value.clone();
        }
        a.push(row);
        b.push(T::one());
    }
    for v in 0..inst.nodes() {
        let mut row = vec![T::zero(); vars];
        for l in 0..d {
            row[relaxation.node_variable(v, l)] = T::one();
        }
        a.push(row);
        b.push(T::one());
    }
    for (ti, t) in inst.terms().iter().enumerate() {
        let n = t.scope.len();
        for (k, &v) in t.scope.iter().enumerate() {
            for l in 0..d {
                let mut row = vec![T::zero(); vars];
                for (si, sigma) in index::tuples(d, n).enumerate() {
                    if sigma[k] == l {
                        row[relaxation.term_variable(ti, si)] = T::one();
                    }
                }
                let j = relaxation.node_variable(v, l);
                row[j] = row[j].clone() - T::one();
                a.push(row);
                b.push(T::zero());
            }
        }
    }
    relaxation.lp = LinearProgram::new(a, b, c)?;
    Ok(relaxation)
}

/// An optimal point of the relaxation with its dual certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
    pub dual: Vec<T>,
}

fn optimum<T: Scalar>(lp: &LinearProgram<T>) -> Option<BlpSolution<T>> {
    match solve(lp) {
        LpOutcome::Optimal { x, value, dual } => Some(BlpSolution { value, x, dual }),
        _ => None,
    }
}

/// Builds and solves the relaxation exactly.
pub fn solve_blp<T: Scalar>(inst: &Instance<T>, caps: &Caps) -> Result<(BlpRelaxation<T>, BlpSolution<T>)> {
    let relaxation = build_blp(inst, caps)?;
    let solution = optimum(relaxation.lp())
        .ok_or_else(|| Error::Internal("the basic LP has no optimum".into()))?;
    Ok((relaxation, solution))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tightness<T> {
    pub blp: T,
    pub integral: T,
    /// `integral - blp`, never negative.
    pub gap: T,
    /// The lexicographically smallest integral minimizer.
    pub minimizer: Labeling,
}

impl<T: Scalar> Tightness<T> {
    pub fn is_tight(&self) -> bool {
        self.gap.is_zero()
    }
}

/// Compares the relaxation with the brute-force minimum.
pub fn check_tightness<T: Scalar>(inst: &Instance<T>, caps: &Caps) -> Result<Tightness<T>> {
    let (integral, minimizer) = inst.brute_force_minimum(caps.enumeration)?;
    let (_, solution) = solve_blp(inst, caps)?;
    let gap = integral.clone() - solution.value.clone();
    if gap.is_negative() {
        return Err(Error::Internal(format!(
            "relaxation value {} exceeds the integral minimum {integral}",
            solution.value
        )));
    }
    Ok(Tightness {
        blp: solution.value,
        integral,
        gap,
        minimizer,
    })
}

/// Rounds a tight relaxation by self-reduction: each node in turn is pinned
/// to the smallest label that keeps the relaxation optimum unchanged.
pub fn extract_labeling<T: Scalar>(inst: &Instance<T>, caps: &Caps) -> Result<Labeling> {
    let (relaxation, solution) = solve_blp(inst, caps)?;
    let target = solution.value;
    let mut lp = relaxation.lp().clone();
    let mut x = Vec::with_capacity(inst.nodes());
    for v in 0..inst.nodes() {
        let mut chosen = None;
        for l in 0..relaxation.domain {
            let candidate = relaxation.pinned(&lp, v, l)?;
            if optimum(&candidate).is_some_and(|s| s.value == target) {
                chosen = Some((l, candidate));
                break;
            }
        }
        let (l, next) = chosen.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no label of node {v} preserves the relaxation optimum {target}; the relaxation is not tight"
            ))
        })?;
        x.push(l);
        lp = next;
    }
    let cost = inst.evaluate(&x)?;
    if cost != target {
        return Err(Error::Internal(format!(
            "rounded labeling costs {cost}, relaxation optimum is {target}"
        )));
    }
    Ok(x)
}
