//! Domains, cost functions, languages and VCSP instances.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::{self, Label};
use crate::scalar::Scalar;

pub type Labeling = Vec<Label>;

/// Default cap on `d^|V|` for exhaustive minimization.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// A finite domain `{0, ..., d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain(usize);

impl Domain {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Domain(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn labels(self) -> std::ops::Range<Label> {
        0..self.0
    }

    pub fn check_label(self, label: Label) -> Result<()> {
        if label < self.0 {
            Ok(())
        } else {
            Err(Error::LabelOutOfDomain {
                label,
                domain: self.0,
            })
        }
    }

    pub fn check_labeling(self, labels: &[Label], len: usize) -> Result<()> {
        if labels.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: labels.len(),
            });
        }
        labels.iter().try_for_each(|&a| self.check_label(a))
    }
}

/// A cost function `D^n -> T` stored as a dense lexicographic table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostFunction<T> {
    domain: Domain,
    arity: usize,
    table: Vec<T>,
}

impl<T: Scalar> CostFunction<T> {
    pub fn new(domain: Domain, arity: usize, table: Vec<T>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArgument(
                "cost functions need arity at least 1".into(),
            ));
        }
        let expected = index::checked_pow(domain.size(), arity)
            .filter(|&n| n <= usize::MAX as u128)
            .ok_or_else(|| Error::InvalidArgument("cost table too large".into()))?
            as usize;
        if table.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: table.len(),
            });
        }
        Ok(CostFunction {
            domain,
            arity,
            table,
        })
    }

    pub fn from_fn(domain: Domain, arity: usize, mut f: impl FnMut(&[Label]) -> T) -> Self {
        let table = index::tuples(domain.size(), arity).map(|t| f(&t)).collect();
        CostFunction::new(domain, arity, table).expect("table built with the right length")
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    /// Lookup without validation; panics on a malformed labeling.
    pub fn at(&self, labels: &[Label]) -> &T {
        debug_assert_eq!(labels.len(), self.arity);
        &self.table[index::lex_index(self.domain.size(), labels)]
    }

    pub fn value(&self, labels: &[Label]) -> Result<&T> {
        self.domain.check_labeling(labels, self.arity)?;
        Ok(self.at(labels))
    }

    /// `f^m(x^1, ..., x^m) = (f(x^1) + ... + f(x^m)) / m`.
    pub fn average_cost<L: AsRef<[Label]>>(&self, labelings: &[L]) -> Result<T> {
        if labelings.is_empty() {
            return Err(Error::InvalidArgument(
                "average cost needs at least one labeling".into(),
            ));
        }
        let mut total = T::zero();
        for x in labelings {
            total = total + self.value(x.as_ref())?.clone();
        }
        Ok(total / T::from_count(labelings.len()))
    }
}

/// A finite-valued language: named cost functions over one domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language<T> {
    domain: Domain,
    names: Vec<String>,
    functions: Vec<CostFunction<T>>,
}

impl<T: Scalar> Language<T> {
    pub fn new(domain: Domain) -> Self {
        Language {
            domain,
            names: Vec::new(),
            functions: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, f: CostFunction<T>) -> Result<usize> {
        let name = name.into();
        if f.domain() != self.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.size(),
                found: f.domain().size(),
            });
        }
        if self.names.contains(&name) {
            return Err(Error::DuplicateName(name));
        }
        self.names.push(name);
        self.functions.push(f);
        Ok(self.functions.len() - 1)
    }

    /// Builder form of [`Language::push`].
    pub fn with(mut self, name: impl Into<String>, f: CostFunction<T>) -> Result<Self> {
        self.push(name, f)?;
        Ok(self)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn function(&self, i: usize) -> &CostFunction<T> {
        &self.functions[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<&CostFunction<T>> {
        self.position(name).map(|i| &self.functions[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CostFunction<T>)> {
        self.names.iter().map(String::as_str).zip(&self.functions)
    }

    pub fn functions(&self) -> &[CostFunction<T>] {
        &self.functions
    }

    pub fn max_arity(&self) -> usize {
        self.functions.iter().map(|f| f.arity()).max().unwrap_or(0)
    }
}

/// One term `f_t(x_{v(t,1)}, ..., x_{v(t,n_t)})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub function: usize,
    pub scope: Vec<usize>,
}

/// A VCSP instance over a shared language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<T> {
    language: Arc<Language<T>>,
    nodes: usize,
    terms: Vec<Term>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(language: Arc<Language<T>>, nodes: usize) -> Self {
        Instance {
            language,
            nodes,
            terms: Vec::new(),
        }
    }

    pub fn add_term(&mut self, function: usize, scope: Vec<usize>) -> Result<()> {
        let f = self.language.functions.get(function).ok_or_else(|| {
            Error::InvalidArgument(format!("no cost function with index {function}"))
        })?;
        if scope.len() != f.arity() {
            return Err(Error::ArityMismatch {
                expected: f.arity(),
                found: scope.len(),
            });
        }
        if let Some(&node) = scope.iter().find(|&&v| v >= self.nodes) {
            return Err(Error::NodeOutOfRange {
                node,
                nodes: self.nodes,
            });
        }
        self.terms.push(Term { function, scope });
        Ok(())
    }

    pub fn add_named_term(&mut self, name: &str, scope: Vec<usize>) -> Result<()> {
        let i = self
            .language
            .position(name)
            .ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
        self.add_term(i, scope)
    }

    pub fn language(&self) -> &Arc<Language<T>> {
        &self.language
    }

    pub fn domain(&self) -> Domain {
        self.language.domain()
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_function(&self, term: &Term) -> &CostFunction<T> {
        self.language.function(term.function)
    }

    /// The instance whose term list is this one's followed by `other`'s.
    pub fn concat(&self, other: &Instance<T>) -> Result<Instance<T>> {
        if self.language != other.language {
            return Err(Error::InvalidArgument(
                "cannot concatenate instances over different languages".into(),
            ));
        }
        let mut out = Instance::new(self.language.clone(), self.nodes.max(other.nodes));
        out.terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(out)
    }

    /// `Cost(x) = sum_t f_t(x restricted to scope t)`.
    pub fn evaluate(&self, x: &[Label]) -> Result<T> {
        self.domain().check_labeling(x, self.nodes)?;
        Ok(self.cost_unchecked(x))
    }

    fn cost_unchecked(&self, x: &[Label]) -> T {
        let mut args = Vec::new();
        self.terms.iter().fold(T::zero(), |acc, t| {
            args.clear();
            args.extend(t.scope.iter().map(|&v| x[v]));
            acc + self.term_function(t).at(&args).clone()
        })
    }

    /// Exact minimum by exhaustive enumeration, with the lexicographically
    /// smallest minimizer.
    pub fn brute_force_minimum(&self, cap: u128) -> Result<(T, Labeling)> {
        let d = self.domain().size();
        let states = index::saturating_pow(d, self.nodes);
        if states > cap {
            return Err(Error::cap("brute-force minimization", states, cap));
        }
        let mut x = vec![0; self.nodes];
        let mut best = self.cost_unchecked(&x);
        let mut argmin = x.clone();
        while index::advance(d, &mut x) {
            let c = self.cost_unchecked(&x);
            if c < best {
                best = c;
                argmin.clone_from(&x);
            }
        }
        Ok((best, argmin))
    }

    /// A seeded random instance: each term picks a function uniformly and a
    /// scope uniformly with replacement.
    pub fn random(
        language: Arc<Language<T>>,
        nodes: usize,
        terms: usize,
        seed: u64,
    ) -> Result<Instance<T>> {
        if language.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        if nodes < language.max_arity() {
            return Err(Error::InvalidArgument(format!(
                "{nodes} nodes cannot host a function of arity {}",
                language.max_arity()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inst = Instance::new(language, nodes);
        for _ in 0..terms {
            let function = rng.random_range(0..inst.language.len());
            let arity = inst.language.function(function).arity();
            let scope = (0..arity).map(|_| rng.random_range(0..nodes)).collect();
            inst.add_term(function, scope)?;
        }
        Ok(inst)
    }
}
