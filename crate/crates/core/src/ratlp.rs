//! Dense-tableau primal simplex with Bland's rule.
//!
//! Solves `maximize c·x  subject to  A·x <= u, x >= 0` over any [`LpScalar`].
//! With an exact scalar the optimum, the primal point and the dual point are
//! exact, so optimality can be certified by [`LpSolution::verify`].
//! Rows with a negative bound are handled by a first phase over artificial
//! variables; callers encode equalities as paired inequalities.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::scalar::LpScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError<T: LpScalar> {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("objective is unbounded along {ray:?}")]
    Unbounded { ray: Vec<T> },
    #[error("constraints are infeasible")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    constraints: Vec<Vec<T>>,
    bounds: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub point: Vec<T>,
    /// One multiplier per constraint row; an optimal solution of the dual
    /// `minimize u·y  subject to  Aᵀ·y >= c, y >= 0`.
    pub dual: Vec<T>,
}

/// Bases visited while solving, plus an optional textual dump of every
/// tableau.
#[derive(Debug, Default, Clone)]
pub struct SolveTrace {
    pub bases: Vec<Vec<usize>>,
    pub pivots: usize,
    pub dump: Option<String>,
}

impl SolveTrace {
    pub fn with_dump() -> Self {
        SolveTrace {
            dump: Some(String::new()),
            ..Default::default()
        }
    }

    /// True when no basis was entered twice.
    pub fn bases_distinct(&self) -> bool {
        let mut seen = HashSet::new();
        self.bases.iter().all(|b| seen.insert(b.clone()))
    }
}

impl<T: LpScalar> LinearProgram<T> {
    pub fn new(
        objective: Vec<T>,
        constraints: Vec<Vec<T>>,
        bounds: Vec<T>,
    ) -> Result<Self, LpError<T>> {
        if constraints.len() != bounds.len() {
            return Err(LpError::Malformed(format!(
                "{} constraint rows but {} bounds",
                constraints.len(),
                bounds.len()
            )));
        }
        if let Some((i, row)) = constraints
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != objective.len())
        {
            return Err(LpError::Malformed(format!(
                "row {i} has {} coefficients, expected {}",
                row.len(),
                objective.len()
            )));
        }
        Ok(LinearProgram {
            objective,
            constraints,
            bounds,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<T>] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[T] {
        &self.bounds
    }

    pub fn objective_value(&self, point: &[T]) -> T {
        dot(&self.objective, point)
    }

    /// `A·x <= u` and `x >= 0`, exactly for exact scalars.
    pub fn is_feasible(&self, point: &[T]) -> bool {
        point.len() == self.num_vars()
            && point.iter().all(|x| !x.is_negative_tol())
            && self
                .constraints
                .iter()
                .zip(&self.bounds)
                .all(|(row, u)| !(dot(row, point) - u.clone()).is_positive_tol())
    }

    /// `Aᵀ·y >= c` and `y >= 0`.
    pub fn is_dual_feasible(&self, dual: &[T]) -> bool {
        dual.len() == self.num_constraints()
            && dual.iter().all(|y| !y.is_negative_tol())
            && (0..self.num_vars()).all(|j| {
                let col: T = self
                    .constraints
                    .iter()
                    .zip(dual)
                    .fold(T::zero(), |acc, (row, y)| acc + row[j].clone() * y.clone());
                !(col - self.objective[j].clone()).is_negative_tol()
            })
    }
}

impl<T: LpScalar> LpSolution<T> {
    /// Checks primal feasibility, dual feasibility and equal objectives.
    pub fn verify(&self, lp: &LinearProgram<T>) -> bool {
        let primal = lp.objective_value(&self.point);
        let dual = dot(&lp.bounds, &self.dual);
        lp.is_feasible(&self.point)
            && lp.is_dual_feasible(&self.dual)
            && (primal.clone() - self.value.clone()).is_zero_tol()
            && (dual - self.value.clone()).is_zero_tol()
    }
}

fn dot<T: LpScalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

struct Tableau<T> {
    /// `rows` constraint rows followed by the objective row; the last column
    /// is the right-hand side.
    cells: Vec<Vec<T>>,
    basis: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn rhs(&self, row: usize) -> &T {
        &self.cells[row][self.cols]
    }

    fn set_objective(&mut self, cost: &[T]) {
        let mut obj = vec![T::zero(); self.cols + 1];
        for (j, slot) in obj.iter_mut().enumerate() {
            let mut acc = T::zero();
            for i in 0..self.rows {
                let cb = &cost[self.basis[i]];
                if !cb.is_zero() {
                    acc = acc + cb.clone() * self.cells[i][j].clone();
                }
            }
            if j < self.cols {
                acc = acc - cost[j].clone();
            }
            *slot = acc;
        }
        self.cells[self.rows] = obj;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        for v in self.cells[row].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.cells[row].clone();
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            r[col] = T::zero();
        }
        self.basis[row] = col;
    }

    fn record(&self, trace: &mut SolveTrace, phase: u8) {
        let mut b = self.basis.clone();
        b.sort_unstable();
        trace.bases.push(b);
        if let Some(dump) = trace.dump.as_mut() {
            let _ = writeln!(dump, "phase {phase} basis {:?}", self.basis);
            for row in &self.cells {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(dump, "  [{}]", cells.join(", "));
            }
        }
    }

    /// Maximizes the current objective row over `allowed` columns.
    fn optimize(
        &mut self,
        allowed: &dyn Fn(usize) -> bool,
        trace: &mut SolveTrace,
        phase: u8,
    ) -> Result<(), usize> {
        loop {
            let entering = (0..self.cols)
                .find(|&j| allowed(j) && self.cells[self.rows][j].is_negative_tol());
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows {
                let a = &self.cells[i][col];
                if !a.is_positive_tol() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best
                            || (!(ratio.clone() - best.clone()).is_positive_tol()
                                && !(best.clone() - ratio.clone()).is_positive_tol()
                                && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return Err(col);
            };
            self.pivot(row, col);
            trace.pivots += 1;
            self.record(trace, phase);
        }
    }
}

pub fn solve<T: LpScalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError<T>> {
    solve_traced(lp, &mut SolveTrace::default())
}

pub fn solve_traced<T: LpScalar>(
    lp: &LinearProgram<T>,
    trace: &mut SolveTrace,
) -> Result<LpSolution<T>, LpError<T>> {
    let n = lp.num_vars();
    let m = lp.num_constraints();
    let negative_rows: Vec<usize> = (0..m).filter(|&i| lp.bounds[i].is_negative()).collect();
    let artificials = negative_rows.len();
    let cols = n + m + artificials;

    let mut cells = vec![vec![T::zero(); cols + 1]; m + 1];
    let mut basis = vec![0; m];
    for i in 0..m {
        let flip = lp.bounds[i].is_negative();
        let sign = |v: T| if flip { -v } else { v };
        for j in 0..n {
            cells[i][j] = sign(lp.constraints[i][j].clone());
        }
        cells[i][n + i] = sign(T::one());
        cells[i][cols] = sign(lp.bounds[i].clone());
        basis[i] = n + i;
    }
    for (k, &i) in negative_rows.iter().enumerate() {
        cells[i][n + m + k] = T::one();
        basis[i] = n + m + k;
    }
    let mut tab = Tableau {
        cells,
        basis,
        rows: m,
        cols,
    };
    tab.record(trace, 0);

    if artificials > 0 {
        let mut cost = vec![T::zero(); cols];
        for c in cost.iter_mut().skip(n + m) {
            *c = -T::one();
        }
        tab.set_objective(&cost);
        if tab.optimize(&|_| true, trace, 1).is_err() {
            // phase one is bounded above by zero
            unreachable!("phase one objective is bounded");
        }
        if tab.rhs(m).is_negative_tol() {
            return Err(LpError::Infeasible);
        }
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| !tab.cells[i][j].is_zero_tol()) {
                    tab.pivot(i, j);
                    tab.record(trace, 1);
                }
            }
        }
    }

    let mut cost = vec![T::zero(); cols];
    cost[..n].clone_from_slice(&lp.objective);
    tab.set_objective(&cost);
    if let Err(col) = tab.optimize(&|j| j < n + m, trace, 2) {
        let mut ray = vec![T::zero(); n];
        if col < n {
            ray[col] = T::one();
        }
        for i in 0..m {
            let b = tab.basis[i];
            if b < n {
                ray[b] = -tab.cells[i][col].clone();
            }
        }
        return Err(LpError::Unbounded { ray });
    }

    let mut point = vec![T::zero(); n];
    for i in 0..m {
        if tab.basis[i] < n {
            point[tab.basis[i]] = tab.rhs(i).clone();
        }
    }
    let dual = (0..m).map(|i| tab.cells[m][n + i].clone()).collect();
    Ok(LpSolution {
        value: tab.rhs(m).clone(),
        point,
        dual,
    })
}
