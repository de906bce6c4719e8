//! Tuple and mapping transforms driving the lifting graph.

use crate::error::{Error, Result};
use crate::fpoly::{Mapping, Operation};
use crate::index::{self, Label};

/// `alpha^pi = (a_{pi(1)}, ..., a_{pi(m)})`, with zero-based `pi`.
pub fn tuple_permute(alpha: &[Label], pi: &[usize]) -> Vec<Label> {
    debug_assert_eq!(alpha.len(), pi.len());
    pi.iter().map(|&j| alpha[j]).collect()
}

/// `alpha^s`: component `i` is `s` applied to `alpha` with its `i`-th entry removed.
pub fn tuple_s(alpha: &[Label], s: &Operation) -> Result<Vec<Label>> {
    if s.arity() + 1 != alpha.len() {
        return Err(Error::ArityMismatch {
            expected: alpha.len().saturating_sub(1),
            found: s.arity(),
        });
    }
    let mut rest = Vec::with_capacity(s.arity());
    Ok((0..alpha.len())
        .map(|i| {
            rest.clear();
            rest.extend(alpha.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a));
            s.apply(&rest)
        })
        .collect())
}

/// `g^pi(alpha) = g(alpha^pi)`.
pub fn permute_operation(g: &Operation, pi: &[usize]) -> Operation {
    Operation::from_fn(g.domain(), g.arity(), |alpha| g.apply(&tuple_permute(alpha, pi)))
}

/// `g^s = (s ∘ g_{-1}, ..., s ∘ g_{-m})` for a mapping `g: D^m -> D^m` and
/// an operation `s` of arity `m - 1`.
pub fn mapping_s(g: &Mapping, s: &Operation) -> Result<Mapping> {
    let m = g.arity_out();
    if g.arity_in() != m {
        return Err(Error::InvalidArgument(format!(
            "expected a mapping D^{m} -> D^{m}, found D^{} -> D^{m}",
            g.arity_in()
        )));
    }
    if s.arity() + 1 != m {
        return Err(Error::ArityMismatch {
            expected: m - 1,
            found: s.arity(),
        });
    }
    if s.domain() != g.domain() {
        return Err(Error::DomainMismatch {
            expected: g.domain().size(),
            found: s.domain().size(),
        });
    }
    let d = g.domain().size();
    let entries = index::table_len(d, m);
    let s_table = s.table();
    let mut tables: Vec<Vec<Label>> = vec![Vec::with_capacity(entries); m];
    let mut column = vec![0; m];
    for a in 0..entries {
        for (c, op) in column.iter_mut().zip(g.ops()) {
            *c = op.table()[a];
        }
        for (i, table) in tables.iter_mut().enumerate() {
            let idx = column
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0, |acc, (_, &v)| acc * d + v);
            table.push(s_table[idx]);
        }
    }
    let ops = tables
        .into_iter()
        .map(|t| Operation::new(g.domain(), m, t))
        .collect::<Result<Vec<_>>>()?;
    Mapping::new(ops)
}
