//! Reference implementations that share no code with `vcsp-core`.
//!
//! Everything here is deliberately naive: plain vectors, exhaustive
//! enumeration, and textbook Gaussian elimination. The test suites compare
//! the library against these.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// All tuples in `{0..d}^len`, first coordinate most significant.
pub fn all_tuples(d: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Position of `t` in a lexicographic table over `{0..d}`.
pub fn table_index(d: usize, t: &[usize]) -> usize {
    t.iter().rev().enumerate().map(|(k, &a)| a * d.pow(k as u32)).sum()
}

pub mod lp {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub enum Verdict {
        Optimal(Q),
        Infeasible,
        Unbounded,
    }

    /// The unique solution of `A[:, cols] z = b`, if there is exactly one.
    fn unique_solution(a: &[Vec<Q>], b: &[Q], cols: &[usize]) -> Option<Vec<Q>> {
        let rows = b.len();
        let k = cols.len();
        let mut m: Vec<Vec<Q>> = (0..rows)
            .map(|i| {
                let mut r: Vec<Q> = cols.iter().map(|&j| a[i][j].clone()).collect();
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut rank = 0;
        for col in 0..k {
            let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
                return None; // dependent column: not unique
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for v in m[rank].iter_mut() {
                *v = v.clone() / pivot.clone();
            }
            for i in 0..rows {
                if i != rank && !m[i][col].is_zero() {
                    let factor = m[i][col].clone();
                    for j in 0..=k {
                        let delta = factor.clone() * m[rank][j].clone();
                        m[i][j] = m[i][j].clone() - delta;
                    }
                }
            }
            rank += 1;
        }
        if m[rank..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        Some((0..k).map(|i| m[i][k].clone()).collect())
    }

    /// Every basic feasible solution of `A x = b, x >= 0`, found by trying
    /// every column subset.
    pub fn basic_feasible_solutions(a: &[Vec<Q>], b: &[Q], n: usize) -> Vec<Vec<Q>> {
        let mut out: Vec<Vec<Q>> = Vec::new();
        for mask in 0u32..(1 << n) {
            let cols: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            if let Some(z) = unique_solution(a, b, &cols) {
                if z.iter().all(|v| !v.is_negative()) {
                    let mut x = vec![Q::zero(); n];
                    for (&j, v) in cols.iter().zip(z) {
                        x[j] = v;
                    }
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    fn dot(a: &[Q], b: &[Q]) -> Q {
        a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x.clone() * y.clone())
    }

    /// `min c·x` subject to `A x = b`, `x >= 0`, by vertex enumeration. An
    /// unbounded direction exists iff some vertex of
    /// `{r >= 0 : A r = 0, Σ r = 1}` has `c·r < 0`.
    pub fn solve(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> Verdict {
        let n = c.len();
        let vertices = basic_feasible_solutions(a, b, n);
        if vertices.is_empty() {
            return Verdict::Infeasible;
        }
        let mut cone: Vec<Vec<Q>> = a.to_vec();
        cone.push(vec![Q::one(); n]);
        let mut rhs = vec![Q::zero(); b.len()];
        rhs.push(Q::one());
        if basic_feasible_solutions(&cone, &rhs, n)
            .iter()
            .any(|r| dot(c, r).is_negative())
        {
            return Verdict::Unbounded;
        }
        let best = vertices
            .iter()
            .map(|x| dot(c, x))
            .min()
            .expect("non-empty");
        Verdict::Optimal(best)
    }
}

pub mod vcsp {
    use super::*;

    /// A cost function as `(arity, lexicographic table)`.
    pub type Table = (usize, Vec<Q>);

    fn cost(d: usize, f: &Table, args: &[usize]) -> Q {
        assert_eq!(args.len(), f.0);
        f.1[table_index(d, args)].clone()
    }

    /// Minimum of `Σ_t f_t(x[scope_t])` over all labelings, with the first
    /// minimizer in lexicographic order.
    pub fn minimum(d: usize, nodes: usize, terms: &[(Table, Vec<usize>)]) -> (Q, Vec<usize>) {
        all_tuples(d, nodes)
            .into_iter()
            .map(|x| {
                let total = terms.iter().fold(Q::zero(), |s, (f, scope)| {
                    let args: Vec<usize> = scope.iter().map(|&v| x[v]).collect();
                    s + cost(d, f, &args)
                });
                (total, x)
            })
            .reduce(|best, cur| if cur.0 < best.0 { cur } else { best })
            .expect("at least the empty labeling")
    }

    /// Whether every function admits the distribution over mappings
    /// `D^m -> D^k`, each given as `k` tables of length `d^m`:
    /// `(1/k) Σ_g w_g Σ_j f(g_j(x)) <= (1/m) Σ_i f(x^i)`.
    pub fn admits(d: usize, functions: &[Table], m: usize, support: &[(Vec<Vec<usize>>, Q)]) -> bool {
        functions.iter().all(|f| {
            let n = f.0;
            all_tuples(d, n * m).into_iter().all(|flat| {
                let xs: Vec<&[usize]> = (0..m).map(|i| &flat[i * n..(i + 1) * n]).collect();
                let rhs = xs
                    .iter()
                    .fold(Q::zero(), |s, x| s + cost(d, f, x))
                    / Q::from_integer((m as i64).into());
                let mut lhs = Q::zero();
                for (g, w) in support {
                    let k = g.len();
                    let mut s = Q::zero();
                    for gj in g {
                        let y: Vec<usize> = (0..n)
                            .map(|v| {
                                let column: Vec<usize> = xs.iter().map(|x| x[v]).collect();
                                gj[table_index(d, &column)]
                            })
                            .collect();
                        s += cost(d, f, &y);
                    }
                    lhs += w.clone() * s / Q::from_integer((k as i64).into());
                }
                lhs <= rhs
            })
        })
    }

    /// `f(x ⊓ y) + f(x ⊔ y) <= f(x) + f(y)` for every function, with the
    /// two operations given as `d x d` tables.
    pub fn admits_pair(d: usize, functions: &[Table], meet: &[usize], join: &[usize]) -> bool {
        functions.iter().all(|f| {
            let n = f.0;
            let labelings = all_tuples(d, n);
            labelings.iter().all(|x| {
                labelings.iter().all(|y| {
                    let lo: Vec<usize> = x.iter().zip(y).map(|(&a, &b)| meet[a * d + b]).collect();
                    let hi: Vec<usize> = x.iter().zip(y).map(|(&a, &b)| join[a * d + b]).collect();
                    cost(d, f, &lo) + cost(d, f, &hi) <= cost(d, f, x) + cost(d, f, y)
                })
            })
        })
    }
}

pub mod stp {
    use super::vcsp::{admits_pair, Table};
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `⟨min, max⟩` under the order in which `order[r]` has rank `r`, as
    /// two `d x d` tables.
    pub fn min_max_under(order: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let d = order.len();
        let mut rank = vec![0; d];
        for (r, &a) in order.iter().enumerate() {
            rank[a] = r;
        }
        let mut meet = vec![0; d * d];
        let mut join = vec![0; d * d];
        for a in 0..d {
            for b in 0..d {
                let (lo, hi) = if rank[a] <= rank[b] { (a, b) } else { (b, a) };
                meet[a * d + b] = lo;
                join[a * d + b] = hi;
            }
        }
        (meet, join)
    }

    /// A language over `d` labels that is submodular under a hidden random
    /// order: random unaries plus binary sums of `[r(x) >= k][r(y) < l]`
    /// and `[r(x) < k][r(y) >= l]` with non-negative weights, `r` the rank.
    pub fn scrambled_submodular(d: usize, seed: u64) -> (Vec<usize>, Vec<Table>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(&mut rng);
        let mut rank = vec![0; d];
        for (r, &a) in order.iter().enumerate() {
            rank[a] = r;
        }
        let mut functions = Vec::new();
        let unary: Vec<Q> = (0..d).map(|_| q(rng.random_range(0..4), 1)).collect();
        functions.push((1, unary));
        for _ in 0..rng.random_range(1..=3) {
            let mut table = vec![Q::zero(); d * d];
            for _ in 0..rng.random_range(1..=3) {
                let (k, l) = (rng.random_range(1..d), rng.random_range(1..d));
                let w = q(rng.random_range(1..4), 1);
                let flip = rng.random_bool(0.5);
                for a in 0..d {
                    for b in 0..d {
                        let (ra, rb) = (rank[a], rank[b]);
                        let on = if flip { ra < k && rb >= l } else { ra >= k && rb < l };
                        if on {
                            table[a * d + b] += w.clone();
                        }
                    }
                }
            }
            functions.push((2, table));
        }
        (order, functions)
    }

    /// Every binary `{0..=max_cost}`-valued function on `d` labels admitting
    /// the pair, by enumerating all tables.
    pub fn compatible_binary_functions(d: usize, meet: &[usize], join: &[usize], max_cost: usize) -> Vec<Table> {
        all_tuples(max_cost + 1, d * d)
            .into_iter()
            .map(|t| (2, t.into_iter().map(|c| q(c as i64, 1)).collect::<Vec<Q>>()))
            .filter(|f| admits_pair(d, std::slice::from_ref(f), meet, join))
            .collect()
    }
}
