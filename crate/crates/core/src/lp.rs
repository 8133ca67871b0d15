//! Dense two-phase simplex solver.
//!
//! Every containment, covering and separation test in the crate reduces to a
//! small LP (at most a few hundred rows), so a dense tableau is adequate.
//! Variables are free unless marked nonnegative; free variables are split
//! into a difference of two nonnegative columns internally.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, ToleranceContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    nonnegative: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value in the caller's sense; NaN unless optimal.
    pub value: f64,
    /// Optimal point; empty unless optimal.
    pub x: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    /// A feasibility problem over `num_vars` free variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            sense: Sense::Maximize,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            nonnegative: vec![false; num_vars],
        }
    }

    pub fn maximize(mut self, objective: Vec<f64>) -> Self {
        self.sense = Sense::Maximize;
        self.objective = objective;
        self
    }

    pub fn minimize(mut self, objective: Vec<f64>) -> Self {
        self.sense = Sense::Minimize;
        self.objective = objective;
        self
    }

    pub fn nonnegative(mut self, var: usize) -> Self {
        self.nonnegative[var] = true;
        self
    }

    pub fn all_nonnegative(mut self) -> Self {
        self.nonnegative.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn with(mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.constrain(coeffs, relation, rhs);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Largest violation of the constraints (and sign restrictions) at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &nn) in self.nonnegative.iter().enumerate() {
            if nn {
                worst = worst.max(-x[j]);
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: self.objective.len() });
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::DimensionMismatch { expected: self.num_vars, got: c.coeffs.len() });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("non-finite LP data"));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite LP objective"));
        }
        Ok(())
    }
}

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;

struct Tableau {
    rows: usize,
    cols: usize,
    // rows × (cols + 1); last column is the right-hand side
    a: Vec<f64>,
    basis: Vec<usize>,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.a[i * (self.cols + 1) + self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [f64]) {
        let w = self.cols + 1;
        let p = self.a[r * w + c];
        for j in 0..w {
            self.a[r * w + j] /= p;
        }
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = reduced[c];
        if f != 0.0 {
            for (x, y) in reduced.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            reduced[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · x` from the current basic feasible solution.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool], max_iter: usize) -> Result<PhaseOutcome> {
        let w = self.cols + 1;
        // reduced[j] for j < cols, reduced[cols] = -(objective value)
        let mut reduced = vec![0.0; w];
        reduced[..self.cols].copy_from_slice(cost);
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    reduced[j] -= cb * self.a[i * w + j];
                }
            }
        }
        let mut bland = false;
        let mut degenerate_run = 0usize;
        for _ in 0..max_iter {
            let entering = if bland {
                (0..self.cols).find(|&j| allowed[j] && reduced[j] < -COST_EPS)
            } else {
                (0..self.cols)
                    .filter(|&j| allowed[j] && reduced[j] < -COST_EPS)
                    .min_by(|&a, &b| reduced[a].total_cmp(&reduced[b]))
            };
            let Some(c) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let aic = self.at(i, c);
                if aic > PIVOT_EPS {
                    let ratio = self.rhs(i).max(0.0) / aic;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-14 || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if ratio <= 1e-14 {
                degenerate_run += 1;
                if degenerate_run > 50 {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c, &mut reduced);
        }
        Err(Error::Lp(format!("iteration limit {max_iter} reached")))
    }
}

/// Solves `lp` to optimality or certifies infeasibility/unboundedness.
pub fn solve_lp(lp: &LinearProgram, tol: &ToleranceContext) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars;
    let m = lp.constraints.len();

    // structural column map: var j -> (pos col, optional neg col)
    let mut col_of = Vec::with_capacity(n);
    let mut ncols = 0;
    for &nn in &lp.nonnegative {
        if nn {
            col_of.push((ncols, None));
            ncols += 1;
        } else {
            col_of.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let n_struct = ncols;

    // normalize rows to nonnegative rhs
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; n_struct];
        for (j, &v) in c.coeffs.iter().enumerate() {
            let (p, q) = col_of[j];
            coeffs[p] = v;
            if let Some(q) = q {
                coeffs[q] = -v;
            }
        }
        let (mut rel, mut rhs) = (c.relation, c.rhs);
        if rhs < 0.0 {
            coeffs.iter_mut().for_each(|v| *v = -*v);
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push((coeffs, rel, rhs));
    }

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n_struct + n_slack + n_art;
    let w = cols + 1;
    let mut t = Tableau { rows: m, cols, a: vec![0.0; m * w], basis: vec![0; m] };
    let mut slack = n_struct;
    let mut art = n_struct + n_slack;
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        t.a[i * w..i * w + n_struct].copy_from_slice(coeffs);
        t.a[i * w + cols] = *rhs;
        match rel {
            Relation::Le => {
                t.a[i * w + slack] = 1.0;
                t.basis[i] = slack;
                slack += 1;
            }
            Relation::Ge => {
                t.a[i * w + slack] = -1.0;
                slack += 1;
                t.a[i * w + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
            Relation::Eq => {
                t.a[i * w + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
        }
    }
    let first_art = n_struct + n_slack;
    let max_iter = 200 * (m + cols) + 1000;
    let rhs_scale = rows.iter().fold(1.0f64, |s, r| s.max(r.2.abs()));

    if n_art > 0 {
        let mut cost = vec![0.0; cols];
        cost[first_art..].iter_mut().for_each(|c| *c = 1.0);
        let allowed = vec![true; cols];
        t.optimize(&cost, &allowed, max_iter)?;
        let infeas: f64 = (0..m).filter(|&i| t.basis[i] >= first_art).map(|i| t.rhs(i)).sum();
        if infeas > tol.lp * rhs_scale {
            return Ok(LpSolution { status: LpStatus::Infeasible, value: f64::NAN, x: Vec::new() });
        }
        // drive remaining artificials out of the basis
        let mut scratch = vec![0.0; w];
        for i in 0..m {
            if t.basis[i] >= first_art {
                if let Some(c) = (0..first_art).max_by(|&a, &b| t.at(i, a).abs().total_cmp(&t.at(i, b).abs())) {
                    if t.at(i, c).abs() > PIVOT_EPS {
                        t.pivot(i, c, &mut scratch);
                    }
                }
            }
        }
    }

    let mut cost = vec![0.0; cols];
    for (j, &(p, q)) in col_of.iter().enumerate() {
        let c = match lp.sense {
            Sense::Minimize => lp.objective[j],
            Sense::Maximize => -lp.objective[j],
        };
        cost[p] = c;
        if let Some(q) = q {
            cost[q] = -c;
        }
    }
    let allowed: Vec<bool> = (0..cols).map(|j| j < first_art).collect();
    match t.optimize(&cost, &allowed, max_iter)? {
        PhaseOutcome::Unbounded => {
            return Ok(LpSolution { status: LpStatus::Unbounded, value: f64::NAN, x: Vec::new() });
        }
        PhaseOutcome::Optimal => {}
    }
    let mut colval = vec![0.0; cols];
    for i in 0..m {
        colval[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<f64> = col_of
        .iter()
        .map(|&(p, q)| colval[p] - q.map_or(0.0, |q| colval[q]))
        .collect();
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { status: LpStatus::Optimal, value, x })
}
