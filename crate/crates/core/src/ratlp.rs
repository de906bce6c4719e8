//! Exact linear programming in standard form.
//!
//! Every system is `min c·x` subject to `A x = b`, `x >= 0`. The solver is a
//! dense two-phase tableau simplex under Bland's rule, so it terminates and
//! is deterministic. Each outcome carries a certificate that
//! [`verify_outcome`] re-checks with plain arithmetic:
//!
//! * `Optimal`: a primal point and a dual `y` with `yᵀA <= c`, `yᵀb = c·x`.
//! * `Infeasible`: a Farkas vector `y` with `yᵀA <= 0` and `yᵀb > 0`.
//! * `Unbounded`: a feasible point and a ray `r >= 0` with `A r = 0`, `c·r < 0`.

use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    c: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    /// `a` is row-major with one row per equality constraint.
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>, c: Vec<T>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if let Some((i, row)) = a.iter().enumerate().find(|(_, r)| r.len() != c.len()) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, objective has {}",
                row.len(),
                c.len()
            )));
        }
        Ok(LinearProgram { a, b, c })
    }

    /// Feasibility system: zero objective.
    pub fn feasibility(a: Vec<Vec<T>>, b: Vec<T>, vars: usize) -> Result<Self> {
        Self::new(a, b, vec![T::zero(); vars])
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }

    pub fn a(&self) -> &[Vec<T>] {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn c(&self) -> &[T] {
        &self.c
    }

    /// The same program with one more equality row.
    pub fn with_row(&self, row: Vec<T>, rhs: T) -> Result<Self> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.push(row);
        b.push(rhs);
        Self::new(a, b, self.c.clone())
    }

    fn row_times(&self, i: usize, x: &[T]) -> T {
        dot(&self.a[i], x)
    }

    /// `yᵀA` as a vector over columns.
    fn left_times(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols()];
        for (row, yi) in self.a.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (o, aij) in out.iter_mut().zip(row) {
                if !aij.is_zero() {
                    *o = o.clone() + yi.clone() * aij.clone();
                }
            }
        }
        out
    }
}

/// Incremental construction with sparse rows; inequalities get slack columns.
#[derive(Debug, Clone)]
pub struct LpBuilder<T> {
    vars: usize,
    rows: Vec<(Vec<(usize, T)>, T)>,
    objective: Vec<(usize, T)>,
}

impl<T: Scalar> LpBuilder<T> {
    pub fn new(vars: usize) -> Self {
        LpBuilder {
            vars,
            rows: Vec::new(),
            objective: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn add_variable(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    pub fn add_eq(&mut self, terms: Vec<(usize, T)>, rhs: T) -> usize {
        self.rows.push((terms, rhs));
        self.rows.len() - 1
    }

    /// `terms <= rhs`; returns the slack column.
    pub fn add_le(&mut self, mut terms: Vec<(usize, T)>, rhs: T) -> usize {
        let slack = self.add_variable();
        terms.push((slack, T::one()));
        self.add_eq(terms, rhs);
        slack
    }

    /// `terms >= rhs`; returns the surplus column.
    pub fn add_ge(&mut self, mut terms: Vec<(usize, T)>, rhs: T) -> usize {
        let surplus = self.add_variable();
        terms.push((surplus, -T::one()));
        self.add_eq(terms, rhs);
        surplus
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.objective.push((var, cost));
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn build(self) -> LinearProgram<T> {
        let n = self.vars;
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        for (terms, rhs) in self.rows {
            let mut row = vec![T::zero(); n];
            for (j, v) in terms {
                row[j] = row[j].clone() + v;
            }
            a.push(row);
            b.push(rhs);
        }
        let mut c = vec![T::zero(); n];
        for (j, v) in self.objective {
            c[j] = c[j].clone() + v;
        }
        LinearProgram { a, b, c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T, dual: Vec<T> },
    Infeasible { farkas: Vec<T> },
    Unbounded { point: Vec<T>, ray: Vec<T> },
}

impl<T: Scalar> LpOutcome<T> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Result of a pure feasibility query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility<T> {
    Feasible(Vec<T>),
    Infeasible(Vec<T>),
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut().filter(|v| !v.is_zero()) {
                *v = v.clone() / p.clone();
            }
            self.rhs[r] = self.rhs[r].clone() / p;
        }
        let support: Vec<(usize, T)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            let row = &mut self.rows[i];
            for (j, v) in &support {
                row[*j] = row[*j].clone() - factor.clone() * v.clone();
            }
            if !prhs.is_zero() {
                self.rhs[i] = self.rhs[i].clone() - factor * prhs.clone();
            }
        }
        self.basis[r] = col;
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .filter(|(row, &bv)| !row[j].is_zero() && !cost[bv].is_zero())
            .fold(cost[j].clone(), |acc, (row, &bv)| {
                acc - cost[bv].clone() * row[j].clone()
            })
    }

    /// Bland's rule: smallest improving column, ties in the ratio test go
    /// to the smallest basic variable.
    fn optimize(&mut self, cost: &[T], entering_limit: usize) -> Phase {
        loop {
            let Some(col) = (0..entering_limit)
                .find(|&j| self.reduced_cost(cost, j).is_negative())
            else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let arc = &self.rows[r][col];
                if !arc.is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / arc.clone();
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return Phase::Unbounded(col),
            }
        }
    }

    fn objective(&self, cost: &[T]) -> T {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(T::zero(), |acc, (&bv, v)| acc + cost[bv].clone() * v.clone())
    }

    /// `c_Bᵀ B⁻¹`, read off the artificial columns (which started as the identity).
    fn duals(&self, cost: &[T], first_artificial: usize) -> Vec<T> {
        (0..self.rows.len())
            .map(|i| {
                self.rows
                    .iter()
                    .zip(&self.basis)
                    .fold(T::zero(), |acc, (row, &bv)| {
                        let e = &row[first_artificial + i];
                        if e.is_zero() || cost[bv].is_zero() {
                            acc
                        } else {
                            acc + cost[bv].clone() * e.clone()
                        }
                    })
            })
            .collect()
    }

    fn primal(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::zero(); n];
        for (&bv, v) in self.basis.iter().zip(&self.rhs) {
            if bv < n {
                x[bv] = v.clone();
            }
        }
        x
    }
}

/// Solves `lp` exactly.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let m = lp.rows();
    let n = lp.cols();
    // Rows with a negative right-hand side are negated so the artificial
    // basis starts feasible; `sign` undoes that for the reported duals.
    let sign: Vec<bool> = lp.b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<T> = lp.a[i]
            .iter()
            .map(|v| if sign[i] { -v.clone() } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        rows.push(row);
        rhs.push(if sign[i] { -lp.b[i].clone() } else { lp.b[i].clone() });
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };
    let unsign = |u: Vec<T>| -> Vec<T> {
        u.into_iter()
            .zip(&sign)
            .map(|(v, &s)| if s { -v } else { v })
            .collect()
    };

    let phase_one_cost: Vec<T> = (0..n + m)
        .map(|j| if j < n { T::zero() } else { T::one() })
        .collect();
    // Phase one is bounded below by zero, so it always ends optimal.
    let _ = tab.optimize(&phase_one_cost, n + m);
    if tab.objective(&phase_one_cost).is_positive() {
        let farkas = unsign(tab.duals(&phase_one_cost, n));
        return LpOutcome::Infeasible { farkas };
    }

    // Drive zero-valued artificials out of the basis where possible; rows
    // where that is impossible are redundant and keep their artificial at 0.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    let mut cost = lp.c.clone();
    cost.extend((0..m).map(|_| T::zero()));
    match tab.optimize(&cost, n) {
        Phase::Optimal => {
            let x = tab.primal(n);
            let value = dot(&lp.c, &x);
            let dual = unsign(tab.duals(&cost, n));
            LpOutcome::Optimal { x, value, dual }
        }
        Phase::Unbounded(col) => {
            let point = tab.primal(n);
            let mut ray = vec![T::zero(); n];
            ray[col] = T::one();
            for (r, &bv) in tab.basis.iter().enumerate() {
                if bv < n {
                    ray[bv] = -tab.rows[r][col].clone();
                }
            }
            LpOutcome::Unbounded { point, ray }
        }
    }
}

/// Any `x >= 0` with `A x = b`, or a Farkas certificate.
pub fn feasible_point<T: Scalar>(a: Vec<Vec<T>>, b: Vec<T>, vars: usize) -> Result<Feasibility<T>> {
    let lp = LinearProgram::feasibility(a, b, vars)?;
    Ok(match solve(&lp) {
        LpOutcome::Optimal { x, .. } => Feasibility::Feasible(x),
        LpOutcome::Infeasible { farkas } => Feasibility::Infeasible(farkas),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    })
}

pub fn is_primal_feasible<T: Scalar>(lp: &LinearProgram<T>, x: &[T]) -> bool {
    x.len() == lp.cols()
        && x.iter().all(|v| !v.is_negative())
        && (0..lp.rows()).all(|i| lp.row_times(i, x) == lp.b[i])
}

/// Checks that `y` proves `A x = b, x >= 0` infeasible: `yᵀA <= 0`, `yᵀb > 0`.
pub fn is_farkas_certificate<T: Scalar>(lp: &LinearProgram<T>, y: &[T]) -> bool {
    y.len() == lp.rows()
        && lp.left_times(y).iter().all(|v| !v.is_positive())
        && dot(y, &lp.b).is_positive()
}

/// Re-checks an outcome's certificate by direct arithmetic, without pivoting.
pub fn verify_outcome<T: Scalar>(lp: &LinearProgram<T>, outcome: &LpOutcome<T>) -> bool {
    match outcome {
        LpOutcome::Optimal { x, value, dual } => {
            is_primal_feasible(lp, x)
                && dot(&lp.c, x) == *value
                && dual.len() == lp.rows()
                && lp
                    .left_times(dual)
                    .iter()
                    .zip(&lp.c)
                    .all(|(ya, c)| ya <= c)
                && dot(dual, &lp.b) == *value
        }
        LpOutcome::Infeasible { farkas } => is_farkas_certificate(lp, farkas),
        LpOutcome::Unbounded { point, ray } => {
            is_primal_feasible(lp, point)
                && ray.len() == lp.cols()
                && ray.iter().all(|v| !v.is_negative())
                && (0..lp.rows()).all(|i| lp.row_times(i, ray).is_zero())
                && dot(&lp.c, ray).is_negative()
        }
    }
}
