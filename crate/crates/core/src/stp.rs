//! STP multimorphisms and their conversion to submodularity multimorphisms.
//!
//! A commutative, conservative pair `⟨⊓, ⊔⟩` is the same thing as a
//! tournament on `D`: `(a, b)` is an edge iff `(a ⊓ b, a ⊔ b) = (a, b)`. The
//! pair is `⟨min, max⟩` under some total order iff the tournament is
//! acyclic. Reversing an edge that lies on a 3-cycle keeps the pair
//! admitted, and a sequence of such flips makes every tournament acyclic.

use crate::error::{Error, Result};
use crate::fpoly::Operation;
use crate::index::{self, Label};
use crate::scalar::Scalar;
use crate::vcsp::{Domain, Labeling, Language};

/// A pair of binary operations `⟨⊓, ⊔⟩` on a common domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultimorphismPair {
    meet: Operation,
    join: Operation,
}

impl MultimorphismPair {
    pub fn new(meet: Operation, join: Operation) -> Result<Self> {
        for op in [&meet, &join] {
            if op.arity() != 2 {
                return Err(Error::ArityMismatch {
                    expected: 2,
                    found: op.arity(),
                });
            }
        }
        if meet.domain() != join.domain() {
            return Err(Error::DomainMismatch {
                expected: meet.domain().size(),
                found: join.domain().size(),
            });
        }
        Ok(MultimorphismPair { meet, join })
    }

    pub fn from_fn(domain: Domain, mut h: impl FnMut(Label, Label) -> (Label, Label)) -> Self {
        let meet = Operation::from_fn(domain, 2, |x| h(x[0], x[1]).0);
        let join = Operation::from_fn(domain, 2, |x| h(x[0], x[1]).1);
        MultimorphismPair { meet, join }
    }

    pub fn min_max(domain: Domain) -> Self {
        Self::from_fn(domain, |a, b| (a.min(b), a.max(b)))
    }

    /// `⟨min, max⟩` under the order in which `order[r]` has rank `r`.
    pub fn from_order(domain: Domain, order: &[Label]) -> Result<Self> {
        let rank = ranks(domain, order)?;
        Ok(Self::from_fn(domain, |a, b| {
            if rank[a] <= rank[b] {
                (a, b)
            } else {
                (b, a)
            }
        }))
    }

    pub fn meet(&self) -> &Operation {
        &self.meet
    }

    pub fn join(&self) -> &Operation {
        &self.join
    }

    pub fn domain(&self) -> Domain {
        self.meet.domain()
    }

    /// `(a ⊓ b, a ⊔ b)`.
    pub fn at(&self, a: Label, b: Label) -> (Label, Label) {
        (self.meet.apply(&[a, b]), self.join.apply(&[a, b]))
    }

    /// `(x ⊓ y, x ⊔ y)` coordinate-wise.
    pub fn apply(&self, x: &[Label], y: &[Label]) -> (Labeling, Labeling) {
        x.iter().zip(y).map(|(&a, &b)| self.at(a, b)).unzip()
    }

    /// Commutative and conservative.
    pub fn is_stp(&self) -> bool {
        let d = self.domain().size();
        (0..d).all(|a| {
            (0..d).all(|b| {
                let (m, j) = self.at(a, b);
                (m, j) == self.at(b, a) && ((m, j) == (a, b) || (m, j) == (b, a))
            })
        })
    }

    /// An STP pair whose tournament is acyclic.
    pub fn is_submodularity(&self) -> bool {
        pair_to_tournament(self).is_ok_and(|t| t.is_acyclic())
    }
}

fn ranks(domain: Domain, order: &[Label]) -> Result<Vec<usize>> {
    let d = domain.size();
    if order.len() != d {
        return Err(Error::InvalidArgument(format!(
            "order lists {} labels, domain has {d}",
            order.len()
        )));
    }
    let mut rank = vec![usize::MAX; d];
    for (r, &a) in order.iter().enumerate() {
        domain.check_label(a)?;
        if rank[a] != usize::MAX {
            return Err(Error::InvalidArgument(format!("label {a} repeated in order")));
        }
        rank[a] = r;
    }
    Ok(rank)
}

/// A complete directed graph on `D`: exactly one of `(a, b)`, `(b, a)` for
/// every pair of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    adj: Vec<Vec<bool>>,
}

impl Tournament {
    /// From an edge list; fails unless it is complete and loop-free.
    pub fn new(domain: Domain, edges: &[(Label, Label)]) -> Result<Self> {
        let d = domain.size();
        let mut adj = vec![vec![false; d]; d];
        for &(a, b) in edges {
            domain.check_label(a)?;
            domain.check_label(b)?;
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at {a}")));
            }
            if adj[a][b] || adj[b][a] {
                return Err(Error::InvalidArgument(format!("pair {{{a}, {b}}} listed twice")));
            }
            adj[a][b] = true;
        }
        let t = Tournament { adj };
        if let Some((a, b)) = t.missing_pair() {
            return Err(Error::InvalidArgument(format!("no edge between {a} and {b}")));
        }
        Ok(t)
    }

    /// `(a, b)` is an edge, for `a < b`, iff `forward(a, b)`.
    pub fn from_fn(domain: Domain, mut forward: impl FnMut(Label, Label) -> bool) -> Self {
        let d = domain.size();
        let mut adj = vec![vec![false; d]; d];
        for a in 0..d {
            for b in a + 1..d {
                if forward(a, b) {
                    adj[a][b] = true;
                } else {
                    adj[b][a] = true;
                }
            }
        }
        Tournament { adj }
    }

    /// The transitive tournament of a total order.
    pub fn from_order(domain: Domain, order: &[Label]) -> Result<Self> {
        let rank = ranks(domain, order)?;
        Ok(Self::from_fn(domain, |a, b| rank[a] < rank[b]))
    }

    fn missing_pair(&self) -> Option<(Label, Label)> {
        let d = self.size();
        (0..d)
            .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
            .find(|&(a, b)| !self.adj[a][b] && !self.adj[b][a])
    }

    pub fn size(&self) -> usize {
        self.adj.len()
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.size()).expect("tournaments are non-empty")
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        self.adj[a][b]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let d = self.size();
        (0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adj[a][b])
            .collect()
    }

    pub fn out_degree(&self, a: Label) -> usize {
        self.adj[a].iter().filter(|&&e| e).count()
    }

    /// Reverses the edge `(a, b)`.
    pub fn reverse(&mut self, a: Label, b: Label) -> Result<()> {
        if a >= self.size() || b >= self.size() || !self.adj[a][b] {
            return Err(Error::InvalidArgument(format!("({a}, {b}) is not an edge")));
        }
        self.adj[a][b] = false;
        self.adj[b][a] = true;
        Ok(())
    }

    /// The smallest `c` with `(b, c)` and `(c, a)` edges, given the edge `(a, b)`.
    pub fn three_cycle_through(&self, a: Label, b: Label) -> Option<Label> {
        if !self.adj[a][b] {
            return None;
        }
        (0..self.size()).find(|&c| self.adj[b][c] && self.adj[c][a])
    }

    /// A tournament is acyclic iff it has no 3-cycle.
    pub fn is_acyclic(&self) -> bool {
        let d = self.size();
        !(0..d).any(|a| (0..d).any(|b| self.three_cycle_through(a, b).is_some()))
    }

    /// Labels from source to sink, if acyclic; `(a, b)` is an edge iff `a`
    /// comes first.
    pub fn topological_order(&self) -> Option<Vec<Label>> {
        let mut order: Vec<Label> = (0..self.size()).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(self.out_degree(a)));
        let ok = order
            .iter()
            .enumerate()
            .all(|(i, &a)| order[i + 1..].iter().all(|&b| self.adj[a][b]));
        ok.then_some(order)
    }
}

/// Edge `(a, b)` iff `(a ⊓ b, a ⊔ b) = (a, b)`.
pub fn pair_to_tournament(pair: &MultimorphismPair) -> Result<Tournament> {
    if !pair.is_stp() {
        return Err(Error::NotStp(
            "the pair is not commutative and conservative".into(),
        ));
    }
    Ok(Tournament::from_fn(pair.domain(), |a, b| pair.at(a, b) == (a, b)))
}

/// The STP pair of a tournament; `a ⊓ a = a ⊔ a = a` on the diagonal.
pub fn tournament_to_pair(t: &Tournament) -> MultimorphismPair {
    MultimorphismPair::from_fn(t.domain(), |a, b| {
        if a == b || t.has_edge(a, b) {
            (a, b)
        } else {
            (b, a)
        }
    })
}

/// Labelings at which `f(x ⊓ y) + f(x ⊔ y) <= f(x) + f(y)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation<T> {
    pub function: String,
    pub x: Labeling,
    pub y: Labeling,
    /// `f(x ⊓ y) + f(x ⊔ y)`
    pub lhs: T,
    /// `f(x) + f(y)`
    pub rhs: T,
}

/// The first violated inequality, enumerating functions in order and
/// `(x, y)` lexicographically.
pub fn find_pair_violation<T: Scalar>(
    lang: &Language<T>,
    pair: &MultimorphismPair,
    cap: u128,
) -> Result<Option<PairViolation<T>>> {
    if lang.is_empty() {
        return Ok(None);
    }
    if pair.domain() != lang.domain() {
        return Err(Error::DomainMismatch {
            expected: lang.domain().size(),
            found: pair.domain().size(),
        });
    }
    let d = lang.domain().size();
    for (name, f) in lang.iter() {
        let n = f.arity();
        let states = index::saturating_pow(d, 2 * n);
        if states > cap {
            return Err(Error::cap(format!("pair admittance check for `{name}`"), states, cap));
        }
        for flat in index::tuples(d, 2 * n) {
            let (x, y) = flat.split_at(n);
            let (m, j) = pair.apply(x, y);
            let lhs = f.at(&m).clone() + f.at(&j).clone();
            let rhs = f.at(x).clone() + f.at(y).clone();
            if lhs > rhs {
                return Ok(Some(PairViolation {
                    function: name.to_string(),
                    x: x.to_vec(),
                    y: y.to_vec(),
                    lhs,
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

/// Whether every function of `lang` admits the pair.
pub fn admits_multimorphism<T: Scalar>(
    lang: &Language<T>,
    pair: &MultimorphismPair,
    cap: u128,
) -> Result<bool> {
    Ok(find_pair_violation(lang, pair, cap)?.is_none())
}

/// `⟨∧, ∨⟩`: keeps `(a, b)` and `(b, a)` as they are and agrees with the
/// pair elsewhere.
pub fn intermediate_pair(pair: &MultimorphismPair, a: Label, b: Label) -> MultimorphismPair {
    MultimorphismPair::from_fn(pair.domain(), |x, y| {
        if (x, y) == (a, b) || (x, y) == (b, a) {
            (x, y)
        } else {
            pair.at(x, y)
        }
    })
}

/// A 3-cycle `(a, b), (b, c), (c, a)` whose edge `(a, b)` is reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub a: Label,
    pub b: Label,
    pub c: Label,
}

/// The auxiliary labelings `(x', y')` for the first half of a flip:
/// `(x_v, x_v ⊓ y_v)`, or `(c, c)` where `(x_v, y_v) = (b, a)`.
pub fn first_half_labelings(
    pair: &MultimorphismPair,
    cycle: Cycle,
    x: &[Label],
    y: &[Label],
) -> (Labeling, Labeling) {
    x.iter()
        .zip(y)
        .map(|(&xv, &yv)| {
            if (xv, yv) == (cycle.b, cycle.a) {
                (cycle.c, cycle.c)
            } else {
                (xv, pair.at(xv, yv).0)
            }
        })
        .unzip()
}

/// The auxiliary labelings for the second half: `(x_v ∧ y_v, y_v)`, or
/// `(c, c)` where `(x_v, y_v) = (a, b)`.
pub fn second_half_labelings(
    intermediate: &MultimorphismPair,
    cycle: Cycle,
    x: &[Label],
    y: &[Label],
) -> (Labeling, Labeling) {
    x.iter()
        .zip(y)
        .map(|(&xv, &yv)| {
            if (xv, yv) == (cycle.a, cycle.b) {
                (cycle.c, cycle.c)
            } else {
                (intermediate.at(xv, yv).0, yv)
            }
        })
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipOutcome {
    pub cycle: Cycle,
    pub intermediate: MultimorphismPair,
    pub flipped: MultimorphismPair,
}

/// Reverses the tournament edge between `edge.0` and `edge.1`, which must lie
/// on a 3-cycle through `witness`. The edge may be given in either
/// direction. Both the intermediate and the flipped pair are checked
/// against `lang` before returning.
pub fn flip_pair<T: Scalar>(
    lang: &Language<T>,
    pair: &MultimorphismPair,
    edge: (Label, Label),
    witness: Label,
    cap: u128,
) -> Result<FlipOutcome> {
    let mut t = pair_to_tournament(pair)?;
    let d = t.size();
    let (u, v) = edge;
    if u >= d || v >= d || witness >= d || u == v {
        return Err(Error::InvalidFlip(format!(
            "edge ({u}, {v}) with witness {witness} is not within the domain"
        )));
    }
    let (a, b) = if t.has_edge(u, v) { (u, v) } else { (v, u) };
    let c = witness;
    if !(t.has_edge(b, c) && t.has_edge(c, a)) {
        return Err(Error::InvalidFlip(format!(
            "({a}, {b}), ({b}, {c}), ({c}, {a}) is not a 3-cycle"
        )));
    }
    if let Some(w) = find_pair_violation(lang, pair, cap)? {
        return Err(Error::NotAdmitted(format!(
            "`{}` violates the pair at x = {:?}, y = {:?}",
            w.function, w.x, w.y
        )));
    }
    let intermediate = intermediate_pair(pair, a, b);
    if !admits_multimorphism(lang, &intermediate, cap)? {
        return Err(Error::Internal(format!(
            "intermediate pair for ({a}, {b}) is not admitted"
        )));
    }
    t.reverse(a, b)?;
    let flipped = tournament_to_pair(&t);
    if !admits_multimorphism(lang, &flipped, cap)? {
        return Err(Error::Internal(format!("flipped pair for ({a}, {b}) is not admitted")));
    }
    Ok(FlipOutcome {
        cycle: Cycle { a, b, c },
        intermediate,
        flipped,
    })
}

/// One valid flip emitted by [`acyclify`]: `(from, to)` becomes `(to, from)`,
/// with `(to, witness)` and `(witness, from)` edges at flip time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flip {
    pub from: Label,
    pub to: Label,
    pub witness: Label,
    /// The label being inserted when the flip happened.
    pub round: Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Acyclification {
    pub flips: Vec<Flip>,
    pub tournament: Tournament,
    /// Source to sink of the final tournament.
    pub order: Vec<Label>,
}

/// Inserts labels in ascending order; while the new label `c` lies on a
/// 3-cycle `c -> a -> b -> c` inside the labels inserted so far, reverses
/// `(c, a)` for the lexicographically smallest such `(a, b)`.
pub fn acyclify(t: &Tournament) -> Acyclification {
    let mut t = t.clone();
    let mut flips = Vec::new();
    for c in 1..t.size() {
        while let Some((a, b)) = (0..c)
            .flat_map(|a| (0..c).map(move |b| (a, b)))
            .find(|&(a, b)| t.has_edge(c, a) && t.has_edge(a, b) && t.has_edge(b, c))
        {
            t.reverse(c, a).expect("edge was just checked");
            flips.push(Flip {
                from: c,
                to: a,
                witness: b,
                round: c,
            });
        }
    }
    let order = t
        .topological_order()
        .expect("insertion leaves the tournament acyclic");
    Acyclification {
        flips,
        tournament: t,
        order,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodularization {
    /// `order[r]` has rank `r`; the result is `⟨min, max⟩` under it.
    pub order: Vec<Label>,
    pub pair: MultimorphismPair,
    pub flips: Vec<Flip>,
    /// One verified outcome per flip, in order.
    pub steps: Vec<FlipOutcome>,
}

/// Turns an admitted STP pair into an admitted submodularity pair by
/// replaying the flips of [`acyclify`] through [`flip_pair`].
pub fn stp_to_submodular<T: Scalar>(
    lang: &Language<T>,
    pair: &MultimorphismPair,
    cap: u128,
) -> Result<Submodularization> {
    let t = pair_to_tournament(pair)?;
    if let Some(w) = find_pair_violation(lang, pair, cap)? {
        return Err(Error::NotAdmitted(format!(
            "`{}` violates the pair at x = {:?}, y = {:?}",
            w.function, w.x, w.y
        )));
    }
    let plan = acyclify(&t);
    let mut current = pair.clone();
    let mut steps = Vec::with_capacity(plan.flips.len());
    for flip in &plan.flips {
        let outcome = flip_pair(lang, &current, (flip.from, flip.to), flip.witness, cap)?;
        current = outcome.flipped.clone();
        steps.push(outcome);
    }
    let expected = MultimorphismPair::from_order(pair.domain(), &plan.order)?;
    if current != expected {
        return Err(Error::Internal("replayed flips disagree with the plan".into()));
    }
    Ok(Submodularization {
        order: plan.order,
        pair: current,
        flips: plan.flips,
        steps,
    })
}
