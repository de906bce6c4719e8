use crate::error::{Error, Result};
use crate::index::{self, Label};
use crate::vcsp::{Domain, Labeling};

/// An operation `g: D^m -> D` as a dense lexicographic table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operation {
    domain: Domain,
    arity: usize,
    table: Vec<Label>,
}

impl Operation {
    pub fn new(domain: Domain, arity: usize, table: Vec<Label>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArgument("operations need arity at least 1".into()));
        }
        let expected = index::table_len(domain.size(), arity);
        if table.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: table.len(),
            });
        }
        table.iter().try_for_each(|&a| domain.check_label(a))?;
        Ok(Operation {
            domain,
            arity,
            table,
        })
    }

    pub fn from_fn(domain: Domain, arity: usize, mut g: impl FnMut(&[Label]) -> Label) -> Self {
        let table = index::tuples(domain.size(), arity).map(|t| g(&t)).collect();
        Operation::new(domain, arity, table).expect("generated table is well formed")
    }

    /// `(a_1, ..., a_m) -> a_{i+1}` (zero-based `i`).
    pub fn projection(domain: Domain, arity: usize, i: usize) -> Self {
        Operation::from_fn(domain, arity, |a| a[i])
    }

    pub fn min(domain: Domain, arity: usize) -> Self {
        Operation::from_fn(domain, arity, |a| *a.iter().min().unwrap())
    }

    pub fn max(domain: Domain, arity: usize) -> Self {
        Operation::from_fn(domain, arity, |a| *a.iter().max().unwrap())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Label] {
        &self.table
    }

    pub fn apply(&self, args: &[Label]) -> Label {
        debug_assert_eq!(args.len(), self.arity);
        self.table[index::lex_index(self.domain.size(), args)]
    }

    /// Invariant under every permutation of the arguments. A value that
    /// depends only on the multiset of arguments is exactly that, so it
    /// suffices to compare each entry with the entry at the sorted tuple.
    pub fn is_symmetric(&self) -> bool {
        let d = self.domain.size();
        let mut sorted = Vec::with_capacity(self.arity);
        index::tuples(d, self.arity).enumerate().all(|(i, t)| {
            sorted.clone_from(&t);
            sorted.sort_unstable();
            self.table[i] == self.table[index::lex_index(d, &sorted)]
        })
    }

    /// `g(a_1, ..., a_m) = g(a_2, ..., a_m, a_1)` everywhere.
    pub fn is_cyclic(&self) -> bool {
        let d = self.domain.size();
        let mut rotated = Vec::with_capacity(self.arity);
        index::tuples(d, self.arity).enumerate().all(|(i, t)| {
            rotated.clear();
            rotated.extend_from_slice(&t[1..]);
            rotated.push(t[0]);
            self.table[i] == self.table[index::lex_index(d, &rotated)]
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.domain
            .labels()
            .all(|a| self.apply(&vec![a; self.arity]) == a)
    }
}

/// A mapping `D^m -> D^k`, i.e. `k` operations of a common arity `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    ops: Vec<Operation>,
}

impl Mapping {
    pub fn new(ops: Vec<Operation>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("a mapping needs at least one operation".into()))?;
        for g in &ops[1..] {
            if g.arity() != first.arity() {
                return Err(Error::ArityMismatch {
                    expected: first.arity(),
                    found: g.arity(),
                });
            }
            if g.domain() != first.domain() {
                return Err(Error::DomainMismatch {
                    expected: first.domain().size(),
                    found: g.domain().size(),
                });
            }
        }
        Ok(Mapping { ops })
    }

    pub fn single(op: Operation) -> Self {
        Mapping { ops: vec![op] }
    }

    /// The identity `D^m -> D^m`, i.e. the `m` projections.
    pub fn identity(domain: Domain, m: usize) -> Self {
        Mapping {
            ops: (0..m).map(|i| Operation::projection(domain, m, i)).collect(),
        }
    }

    /// Tabulates `alpha -> h(alpha)` for a tuple-valued `h`.
    pub fn from_fn(
        domain: Domain,
        arity_in: usize,
        arity_out: usize,
        mut h: impl FnMut(&[Label]) -> Vec<Label>,
    ) -> Self {
        let d = domain.size();
        let mut tables = vec![Vec::with_capacity(index::table_len(d, arity_in)); arity_out];
        for alpha in index::tuples(d, arity_in) {
            let out = h(&alpha);
            debug_assert_eq!(out.len(), arity_out);
            for (table, v) in tables.iter_mut().zip(out) {
                table.push(v);
            }
        }
        let ops = tables
            .into_iter()
            .map(|t| Operation::new(domain, arity_in, t))
            .collect::<Result<Vec<_>>>()
            .expect("tabulated mapping is well formed");
        Mapping { ops }
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<Operation> {
        self.ops
    }

    pub fn domain(&self) -> Domain {
        self.ops[0].domain()
    }

    pub fn arity_in(&self) -> usize {
        self.ops[0].arity()
    }

    pub fn arity_out(&self) -> usize {
        self.ops.len()
    }

    pub fn apply(&self, alpha: &[Label]) -> Vec<Label> {
        let i = index::lex_index(self.domain().size(), alpha);
        self.ops.iter().map(|g| g.table[i]).collect()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Mapping) -> Result<Mapping> {
        if self.arity_in() != inner.arity_out() {
            return Err(Error::ArityMismatch {
                expected: self.arity_in(),
                found: inner.arity_out(),
            });
        }
        let d = self.domain().size();
        let n_in = index::table_len(d, inner.arity_in());
        let mut scratch = vec![0; inner.arity_out()];
        let mut tables = vec![Vec::with_capacity(n_in); self.arity_out()];
        for i in 0..n_in {
            for (s, g) in scratch.iter_mut().zip(&inner.ops) {
                *s = g.table[i];
            }
            let j = index::lex_index(d, &scratch);
            for (t, g) in tables.iter_mut().zip(&self.ops) {
                t.push(g.table[j]);
            }
        }
        Ok(Mapping {
            ops: tables
                .into_iter()
                .map(|table| Operation {
                    domain: self.domain(),
                    arity: inner.arity_in(),
                    table,
                })
                .collect(),
        })
    }

    /// Applies the mapping coordinate-wise to `m` labelings of a common
    /// length `n`, producing `k` labelings of length `n`.
    pub fn apply_to_labelings<L: AsRef<[Label]>>(&self, xs: &[L]) -> Result<Vec<Labeling>> {
        if xs.len() != self.arity_in() {
            return Err(Error::ArityMismatch {
                expected: self.arity_in(),
                found: xs.len(),
            });
        }
        let n = xs.first().map_or(0, |x| x.as_ref().len());
        let domain = self.domain();
        for x in xs {
            domain.check_labeling(x.as_ref(), n)?;
        }
        Ok(self.apply_columns(xs, n))
    }

    pub(crate) fn apply_columns<L: AsRef<[Label]>>(&self, xs: &[L], n: usize) -> Vec<Labeling> {
        let d = self.domain().size();
        let mut out = vec![Vec::with_capacity(n); self.arity_out()];
        for v in 0..n {
            let i = xs.iter().fold(0, |acc, x| acc * d + x.as_ref()[v]);
            for (y, g) in out.iter_mut().zip(&self.ops) {
                y.push(g.table[i]);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.ops.iter().all(Operation::is_symmetric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> Domain {
        Domain::new(2).unwrap()
    }

    #[test]
    fn symmetry_examples() {
        assert!(Operation::min(d2(), 2).is_symmetric());
        assert!(!Operation::projection(d2(), 2, 0).is_symmetric());
        let majority = Operation::from_fn(d2(), 3, |a| usize::from(a.iter().sum::<usize>() >= 2));
        assert!(majority.is_symmetric());
    }

    #[test]
    fn cyclic_examples() {
        assert!(!Operation::projection(d2(), 3, 0).is_cyclic());
        assert!(Operation::max(d2(), 3).is_cyclic());
        // 1 on the rotations of (0, 1, 2), 0 elsewhere
        let rot = Operation::from_fn(Domain::new(3).unwrap(), 3, |a| {
            usize::from(matches!(a, [0, 1, 2] | [1, 2, 0] | [2, 0, 1]))
        });
        assert!(rot.is_cyclic());
        assert!(!rot.is_symmetric());
    }

    #[test]
    fn binary_cyclic_iff_symmetric() {
        for table in index::tuples(2, 4) {
            let g = Operation::new(d2(), 2, table).unwrap();
            assert_eq!(g.is_cyclic(), g.is_symmetric());
        }
    }

    #[test]
    fn symmetric_implies_cyclic_small() {
        for m in 1..=3 {
            for table in index::tuples(2, 1 << m) {
                let g = Operation::new(d2(), m, table).unwrap();
                if g.is_symmetric() {
                    assert!(g.is_cyclic());
                }
            }
        }
    }

    #[test]
    fn apply_min_max() {
        let g = Mapping::new(vec![Operation::min(d2(), 2), Operation::max(d2(), 2)]).unwrap();
        let out = g.apply_to_labelings(&[vec![0, 1, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(out, vec![vec![0, 1, 0], vec![1, 1, 1]]);
        let empty = g.apply_to_labelings(&[Vec::<Label>::new(), vec![]]).unwrap();
        assert_eq!(empty, vec![Vec::<Label>::new(), vec![]]);
    }

    #[test]
    fn identity_is_identity() {
        let id = Mapping::identity(d2(), 3);
        let xs = vec![vec![0, 1], vec![1, 1], vec![0, 0]];
        assert_eq!(id.apply_to_labelings(&xs).unwrap(), xs);
    }

    #[test]
    fn apply_checks_lengths() {
        let g = Mapping::identity(d2(), 2);
        assert!(g.apply_to_labelings(&[vec![0, 1], vec![1]]).is_err());
        assert!(g.apply_to_labelings(&[vec![0, 1]]).is_err());
        assert!(g.apply_to_labelings(&[vec![0, 2], vec![1, 1]]).is_err());
    }

    #[test]
    fn composition_order() {
        let d = d2();
        let swap = Mapping::new(vec![
            Operation::projection(d, 2, 1),
            Operation::projection(d, 2, 0),
        ])
        .unwrap();
        let first_twice = Mapping::new(vec![
            Operation::projection(d, 2, 0),
            Operation::projection(d, 2, 0),
        ])
        .unwrap();
        // (first_twice ∘ swap)(a, b) = first_twice(b, a) = (b, b)
        let c = first_twice.compose(&swap).unwrap();
        assert_eq!(c.apply(&[0, 1]), vec![1, 1]);
        assert_eq!(swap.compose(&Mapping::identity(d, 2)).unwrap(), swap);
    }

    #[test]
    fn operation_validation() {
        assert!(Operation::new(d2(), 2, vec![0, 1, 1]).is_err());
        assert!(Operation::new(d2(), 1, vec![0, 2]).is_err());
        assert!(Mapping::new(vec![]).is_err());
        assert!(Mapping::new(vec![Operation::min(d2(), 2), Operation::min(d2(), 3)]).is_err());
    }
}
