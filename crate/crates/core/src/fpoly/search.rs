//! LP search for a symmetric fractional polymorphism of a fixed arity.
//!
//! Every symmetric `m`-ary operation becomes one LP column. A symmetric
//! operation is determined by its value on each multiset of `m` labels, so
//! the columns are the `d^C(d+m-1, m)` assignments multiset -> label. Rows
//! are the admittance inequalities, one per function and per multiset of
//! `m` labelings (permuting the labelings permutes nothing once every
//! column is symmetric), plus `Σ ω = 1`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::index::{self, Label};
use crate::ratlp::{self, LinearProgram, LpBuilder, LpOutcome};
use crate::scalar::Scalar;
use crate::vcsp::{Labeling, Language};
use crate::Caps;

use super::{FractionalPolymorphism, Mapping, Operation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetricSearch<T> {
    Feasible(FractionalPolymorphism<T>),
    Infeasible(SymmetricInfeasibility<T>),
}

/// Which inequality an LP row encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintRow {
    Admittance {
        function: String,
        labelings: Vec<Labeling>,
    },
    Normalization,
}

/// The LP that has no solution, together with its Farkas vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricInfeasibility<T> {
    pub lp: LinearProgram<T>,
    pub farkas: Vec<T>,
    pub rows: Vec<ConstraintRow>,
}

impl<T: Scalar> SymmetricInfeasibility<T> {
    pub fn verify(&self) -> bool {
        ratlp::is_farkas_certificate(&self.lp, &self.farkas)
    }

    /// Rows with a nonzero multiplier, i.e. the inequalities the proof uses.
    pub fn active_rows(&self) -> impl Iterator<Item = (&ConstraintRow, &T)> {
        self.rows
            .iter()
            .zip(&self.farkas)
            .filter(|(_, y)| !y.is_zero())
    }
}

/// Every symmetric `m`-ary operation on `d` labels, in lexicographic order
/// of their multiset-value vectors.
pub fn symmetric_operations(
    domain: crate::Domain,
    m: usize,
    cap: u128,
) -> Result<Vec<Operation>> {
    let (multisets, values) = symmetric_value_vectors(domain.size(), m, cap)?;
    let lookup: HashMap<&[Label], usize> = multisets
        .iter()
        .enumerate()
        .map(|(i, ms)| (ms.as_slice(), i))
        .collect();
    let mut sorted = Vec::with_capacity(m);
    Ok(values
        .iter()
        .map(|vals| {
            Operation::from_fn(domain, m, |a| {
                sorted.clear();
                sorted.extend_from_slice(a);
                sorted.sort_unstable();
                vals[lookup[sorted.as_slice()]]
            })
        })
        .collect())
}

/// Sorted multisets of size `m`, and every assignment of a label to each.
type ValueVectors = (Vec<Vec<Label>>, Vec<Vec<Label>>);

fn symmetric_value_vectors(d: usize, m: usize, cap: u128) -> Result<ValueVectors> {
    let classes = index::binomial(d + m - 1, m);
    let count = u32::try_from(classes)
        .ok()
        .and_then(|c| (d as u128).checked_pow(c))
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::cap(
            format!("enumerating symmetric {m}-ary operations on {d} labels"),
            count,
            cap,
        ));
    }
    let multisets = index::multisets(d, m);
    let values = index::tuples(d, multisets.len()).collect();
    Ok((multisets, values))
}

/// Searches for a symmetric fractional polymorphism of arity `m`.
pub fn find_symmetric_fpoly<T: Scalar>(
    lang: &Language<T>,
    m: usize,
    caps: &Caps,
) -> Result<SymmetricSearch<T>> {
    if m < 2 {
        return Err(Error::InvalidArgument("arity must be at least 2".into()));
    }
    let domain = lang.domain();
    if lang.is_empty() {
        // vacuously admitted
        return Ok(SymmetricSearch::Feasible(FractionalPolymorphism::point(
            Mapping::single(Operation::min(domain, m)),
        )));
    }
    let d = domain.size();
    let (multisets, values) = symmetric_value_vectors(d, m, caps.symmetric_operations)?;
    let class_of: HashMap<&[Label], usize> = multisets
        .iter()
        .enumerate()
        .map(|(i, ms)| (ms.as_slice(), i))
        .collect();

    let columns = values.len();
    let mut lp = LpBuilder::new(columns);
    let mut rows = Vec::new();
    let mut column = Vec::new();
    let mut y = Vec::new();
    let inv_m = T::recip_count(m);
    for (name, f) in lang.iter() {
        let n = f.arity();
        let labelings = index::table_len(d, n);
        let rows_needed = index::binomial(labelings + m - 1, m);
        let work = rows_needed.saturating_mul(columns as u128);
        if work > caps.admits {
            return Err(Error::cap(
                format!("symmetric search constraints for `{name}`"),
                work,
                caps.admits,
            ));
        }
        for choice in index::multisets(labelings, m) {
            let xs: Vec<Labeling> = choice.iter().map(|&i| index::lex_decode(d, n, i)).collect();
            // multiset class of each coordinate's column (x^1_v, ..., x^m_v)
            let classes: Vec<usize> = (0..n)
                .map(|v| {
                    column.clear();
                    column.extend(xs.iter().map(|x| x[v]));
                    column.sort_unstable();
                    class_of[column.as_slice()]
                })
                .collect();
            let rhs = xs
                .iter()
                .fold(T::zero(), |acc, x| acc + f.at(x).clone())
                * inv_m.clone();
            let terms: Vec<(usize, T)> = values
                .iter()
                .enumerate()
                .filter_map(|(j, vals)| {
                    y.clear();
                    y.extend(classes.iter().map(|&c| vals[c]));
                    let v = f.at(&y);
                    (!v.is_zero()).then(|| (j, v.clone()))
                })
                .collect();
            lp.add_le(terms, rhs);
            rows.push(ConstraintRow::Admittance {
                function: name.to_string(),
                labelings: xs,
            });
        }
    }
    lp.add_eq((0..columns).map(|j| (j, T::one())).collect(), T::one());
    rows.push(ConstraintRow::Normalization);
    let lp = lp.build();

    match ratlp::solve(&lp) {
        LpOutcome::Optimal { x, .. } => {
            let ops = symmetric_operations(domain, m, caps.symmetric_operations)?;
            let support = ops
                .into_iter()
                .zip(x)
                .filter(|(_, w)| w.is_positive());
            Ok(SymmetricSearch::Feasible(
                FractionalPolymorphism::from_operations(support)?,
            ))
        }
        LpOutcome::Infeasible { farkas } => Ok(SymmetricSearch::Infeasible(
            SymmetricInfeasibility { lp, farkas, rows },
        )),
        LpOutcome::Unbounded { .. } => Err(Error::Internal(
            "feasibility LP reported unbounded".into(),
        )),
    }
}
