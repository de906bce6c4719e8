use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::index::{self, Label};
use crate::scalar::Scalar;
use crate::vcsp::{Domain, Labeling, Language};

use super::{Mapping, Operation};

/// A finitely supported probability distribution over mappings `D^m -> D^k`.
///
/// The support is kept sorted by mapping, free of duplicates, with strictly
/// positive weights summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalPolymorphism<T> {
    arity_in: usize,
    arity_out: usize,
    support: Vec<(Mapping, T)>,
}

impl<T: Scalar> FractionalPolymorphism<T> {
    /// Merges duplicate mappings and drops zero weights.
    pub fn new(support: impl IntoIterator<Item = (Mapping, T)>) -> Result<Self> {
        let mut merged: BTreeMap<Mapping, T> = BTreeMap::new();
        let mut shape: Option<(Domain, usize, usize)> = None;
        for (g, w) in support {
            let this = (g.domain(), g.arity_in(), g.arity_out());
            match shape {
                None => shape = Some(this),
                Some(s) if s != this => {
                    return Err(Error::InvalidDistribution(format!(
                        "mapping of shape {}->{} over domain {} mixed with {}->{} over {}",
                        this.1,
                        this.2,
                        this.0.size(),
                        s.1,
                        s.2,
                        s.0.size()
                    )))
                }
                _ => {}
            }
            if w.is_negative() {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
            let slot = merged.entry(g).or_insert_with(T::zero);
            *slot = slot.clone() + w;
        }
        let (_, arity_in, arity_out) = shape
            .ok_or_else(|| Error::InvalidDistribution("empty support".into()))?;
        let support: Vec<(Mapping, T)> = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total = crate::scalar::sum(support.iter().map(|(_, w)| w));
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(FractionalPolymorphism {
            arity_in,
            arity_out,
            support,
        })
    }

    /// An ordinary fractional polymorphism `D^m -> D`.
    pub fn from_operations(support: impl IntoIterator<Item = (Operation, T)>) -> Result<Self> {
        Self::new(support.into_iter().map(|(g, w)| (Mapping::single(g), w)))
    }

    /// The point mass `χ_g`.
    pub fn point(g: Mapping) -> Self {
        FractionalPolymorphism {
            arity_in: g.arity_in(),
            arity_out: g.arity_out(),
            support: vec![(g, T::one())],
        }
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn domain(&self) -> Domain {
        self.support[0].0.domain()
    }

    pub fn support(&self) -> &[(Mapping, T)] {
        &self.support
    }

    pub fn weight(&self, g: &Mapping) -> Option<&T> {
        self.support
            .binary_search_by(|(h, _)| h.cmp(g))
            .ok()
            .map(|i| &self.support[i].1)
    }

    /// All operations in all support mappings are symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.support.iter().all(|(g, _)| g.is_symmetric())
    }

    /// For `k = 1`: the support as operations.
    pub fn operations(&self) -> impl Iterator<Item = (&Operation, &T)> {
        self.support.iter().map(|(g, w)| (&g.ops()[0], w))
    }

    /// The `m`-ary fractional polymorphism `Σ_g ρ(g) (χ_{g_1} + ... + χ_{g_k}) / k`.
    pub fn collapse(&self) -> Self {
        let k = T::from_count(self.arity_out);
        Self::new(self.support.iter().flat_map(|(g, w)| {
            let share = w.clone() / k.clone();
            g.ops()
                .iter()
                .map(move |op| (Mapping::single(op.clone()), share.clone()))
        }))
        .expect("collapse preserves total mass")
    }

    /// From a symmetric `p·m`-ary fractional polymorphism, the `m`-ary one
    /// with `g'(a_1, ..., a_m) = g(a_1, ..., a_1, ..., a_m, ..., a_m)`, each
    /// argument repeated `p` times.
    pub fn reduce_arity(&self, m: usize) -> Result<Self> {
        if self.arity_out != 1 {
            return Err(Error::InvalidArgument(
                "arity reduction applies to m -> 1 fractional polymorphisms".into(),
            ));
        }
        if m == 0 || !self.arity_in.is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "arity {} is not a multiple of {m}",
                self.arity_in
            )));
        }
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric(
                "arity reduction needs a symmetric fractional polymorphism".into(),
            ));
        }
        let p = self.arity_in / m;
        let domain = self.domain();
        let mut wide = Vec::with_capacity(self.arity_in);
        Self::from_operations(self.operations().map(|(g, w)| {
            let reduced = Operation::from_fn(domain, m, |a| {
                wide.clear();
                for &x in a {
                    wide.extend(std::iter::repeat_n(x, p));
                }
                g.apply(&wide)
            });
            (reduced, w.clone())
        }))
    }
}

/// A tuple of labelings at which an inequality of the admittance test fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<T> {
    pub function: String,
    pub labelings: Vec<Labeling>,
    /// `Σ_g ρ(g) f^k(g(x^1, ..., x^m))`
    pub lhs: T,
    /// `f^m(x^1, ..., x^m)`
    pub rhs: T,
}

/// Whether every function of `lang` admits `rho`, by exhaustive enumeration.
pub fn admits<T: Scalar>(
    lang: &Language<T>,
    rho: &FractionalPolymorphism<T>,
    cap: u128,
) -> Result<bool> {
    Ok(find_violation(lang, rho, cap)?.is_none())
}

/// The first violated inequality (lexicographically over functions and
/// tuples), or `None` if `lang` admits `rho`.
pub fn find_violation<T: Scalar>(
    lang: &Language<T>,
    rho: &FractionalPolymorphism<T>,
    cap: u128,
) -> Result<Option<Violation<T>>> {
    if lang.is_empty() {
        return Ok(None);
    }
    if rho.domain() != lang.domain() {
        return Err(Error::DomainMismatch {
            expected: lang.domain().size(),
            found: rho.domain().size(),
        });
    }
    let d = lang.domain().size();
    let m = rho.arity_in();
    let k = rho.arity_out();
    let (mk, km) = (T::from_count(m), T::from_count(k));
    for (name, f) in lang.iter() {
        let n = f.arity();
        let states = index::saturating_pow(d, n * m);
        if states > cap {
            return Err(Error::cap(format!("admittance check for `{name}`"), states, cap));
        }
        let mut flat = vec![0; n * m];
        let mut column_index = vec![0; n];
        let mut y = vec![0; n];
        loop {
            let xs: Vec<&[Label]> = flat.chunks(n).collect();
            for (v, ci) in column_index.iter_mut().enumerate() {
                *ci = xs.iter().fold(0, |acc, x| acc * d + x[v]);
            }
            // compare  m·Σ_g ρ(g) Σ_j f(g_j(x))  with  k·Σ_i f(x^i)
            let mut lhs = T::zero();
            for (g, w) in &rho.support {
                let mut s = T::zero();
                for op in g.ops() {
                    for (yv, &ci) in y.iter_mut().zip(&column_index) {
                        *yv = op.table()[ci];
                    }
                    s = s + f.at(&y).clone();
                }
                lhs = lhs + w.clone() * s;
            }
            let rhs = xs.iter().fold(T::zero(), |acc, x| acc + f.at(x).clone());
            if lhs.clone() * mk.clone() > rhs.clone() * km.clone() {
                return Ok(Some(Violation {
                    function: name.to_string(),
                    labelings: xs.iter().map(|x| x.to_vec()).collect(),
                    lhs: lhs / km,
                    rhs: rhs / mk,
                }));
            }
            if !index::advance(d, &mut flat) {
                break;
            }
        }
    }
    Ok(None)
}
