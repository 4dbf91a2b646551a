//! Dense two-phase primal simplex over exact rationals.
//!
//! Pivoting uses Bland's rule throughout, so the method terminates on the
//! highly degenerate systems equilibrium polytopes produce. A solver is
//! built once per feasible region (phase 1) and can then be re-optimized
//! for many objectives from the current basis, which is what coordinate
//! ranging and slack maximization do.

use super::{dot, LpError, LpRow, LpSolution, RowRel};
use crate::linalg;
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

const PIVOT_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy)]
enum VarCols {
    NonNeg(usize),
    Free(usize, usize),
}

#[derive(Debug, Clone, Copy)]
enum RowInfo {
    /// Row was recognized as `x_j >= 0` and became a variable sign.
    VarBound(usize),
    /// Tableau row index and the total sign factor applied to the original
    /// coefficients when the row was stored.
    Tableau(usize, i8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Warm-startable exact simplex over a fixed feasible region.
#[derive(Debug, Clone)]
pub struct PolytopeSolver {
    num_vars: usize,
    var_cols: Vec<VarCols>,
    row_info: Vec<RowInfo>,
    col_kind: Vec<ColKind>,
    /// The stored constraint matrix (fixed), used for dual extraction.
    stored: Vec<Vec<Rational>>,
    stored_b: Vec<Rational>,
    /// Current tableau body and right-hand side.
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    allow: Vec<bool>,
    cost: Vec<Rational>,
    red: Vec<Rational>,
    obj: Rational,
}

impl PolytopeSolver {
    /// Runs phase 1 on the row system. Returns `None` when infeasible.
    pub fn from_rows(num_vars: usize, rows: &[LpRow]) -> Result<Option<Self>, LpError> {
        for (i, r) in rows.iter().enumerate() {
            if r.coeffs.len() != num_vars {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {num_vars}",
                    r.coeffs.len()
                )));
            }
        }

        // Recognize plain nonnegativity rows so the variable can be kept
        // unsplit; everything else stays a tableau row.
        let mut nonneg = vec![false; num_vars];
        let mut extracted = vec![false; rows.len()];
        for (k, row) in rows.iter().enumerate() {
            if row.rel == RowRel::Ge && row.rhs.is_zero() {
                let nz: Vec<usize> = (0..num_vars)
                    .filter(|&j| !row.coeffs[j].is_zero())
                    .collect();
                if let [j] = nz.as_slice() {
                    if row.coeffs[*j].is_one() && !nonneg[*j] {
                        nonneg[*j] = true;
                        extracted[k] = true;
                    }
                }
            }
        }

        let mut var_cols = Vec::with_capacity(num_vars);
        let mut col_kind: Vec<ColKind> = Vec::new();
        for j in 0..num_vars {
            if nonneg[j] {
                var_cols.push(VarCols::NonNeg(col_kind.len()));
                col_kind.push(ColKind::Structural);
            } else {
                var_cols.push(VarCols::Free(col_kind.len(), col_kind.len() + 1));
                col_kind.push(ColKind::Structural);
                col_kind.push(ColKind::Structural);
            }
        }
        let nstruct = col_kind.len();

        // First pass: row transforms, remembering which need slack columns.
        struct PendingRow {
            coeffs: Vec<Rational>, // over structural columns, after sign work
            rhs: Rational,
            slack: bool,
            sign: i8,
            orig: usize,
        }
        let mut pending = Vec::new();
        for (k, row) in rows.iter().enumerate() {
            if extracted[k] {
                continue;
            }
            let mut sign: i8 = 1;
            let (mut coeffs, mut rhs, slack) = match row.rel {
                RowRel::Le => (row.coeffs.clone(), row.rhs.clone(), true),
                RowRel::Ge => {
                    sign = -1;
                    (
                        row.coeffs.iter().map(|c| -c).collect::<Vec<_>>(),
                        -row.rhs.clone(),
                        true,
                    )
                }
                RowRel::Eq => (row.coeffs.clone(), row.rhs.clone(), false),
            };
            if rhs.is_negative() {
                sign = -sign;
                for c in &mut coeffs {
                    *c = -std::mem::take(c);
                }
                rhs = -rhs;
            }
            // expand over internal structural columns
            let mut expanded = vec![Rational::zero(); nstruct];
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match var_cols[j] {
                    VarCols::NonNeg(p) => expanded[p] = c.clone(),
                    VarCols::Free(p, n) => {
                        expanded[p] = c.clone();
                        expanded[n] = -c.clone();
                    }
                }
            }
            pending.push(PendingRow {
                coeffs: expanded,
                rhs,
                slack,
                sign,
                orig: k,
            });
        }

        let nrows = pending.len();
        // Column layout: structural, then slacks, then artificials.
        let nslack = pending.iter().filter(|p| p.slack).count();
        col_kind.extend(std::iter::repeat_n(ColKind::Slack, nslack));

        let mut stored: Vec<Vec<Rational>> = Vec::with_capacity(nrows);
        let mut stored_b = Vec::with_capacity(nrows);
        let mut row_info = vec![RowInfo::VarBound(usize::MAX); rows.len()];
        for (k, j) in (0..rows.len()).filter(|&k| extracted[k]).zip(0..) {
            let _ = j;
            let var = (0..num_vars)
                .find(|&v| !rows[k].coeffs[v].is_zero())
                .expect("extracted row has a variable");
            row_info[k] = RowInfo::VarBound(var);
        }

        let mut slack_of_row: Vec<Option<usize>> = vec![None; nrows];
        let mut next_slack = nstruct;
        for (r, p) in pending.iter().enumerate() {
            let mut full = p.coeffs.clone();
            full.resize(nstruct + nslack, Rational::zero());
            if p.slack {
                // slack was conceptually added before the rhs sign flip, so
                // its stored coefficient carries that flip
                let coeff = if p.sign == (if rows[p.orig].rel == RowRel::Ge { -1 } else { 1 }) {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                full[next_slack] = coeff;
                slack_of_row[r] = Some(next_slack);
                next_slack += 1;
            }
            row_info[p.orig] = RowInfo::Tableau(r, p.sign);
            stored.push(full);
            stored_b.push(p.rhs.clone());
        }

        // Artificial columns for rows whose slack cannot start basic.
        let mut basis = Vec::with_capacity(nrows);
        let mut art_cols = Vec::new();
        for r in 0..nrows {
            match slack_of_row[r] {
                Some(s) if stored[r][s].is_one() => basis.push(s),
                _ => {
                    let col = nstruct + nslack + art_cols.len();
                    art_cols.push(r);
                    basis.push(col);
                }
            }
        }
        let nart = art_cols.len();
        col_kind.extend(std::iter::repeat_n(ColKind::Artificial, nart));
        let ncols = col_kind.len();
        for (i, &r) in art_cols.iter().enumerate() {
            let col = nstruct + nslack + i;
            for (rr, row) in stored.iter_mut().enumerate() {
                row.resize(ncols, Rational::zero());
                if rr == r {
                    row[col] = Rational::one();
                }
            }
        }
        for row in stored.iter_mut() {
            row.resize(ncols, Rational::zero());
        }

        let mut in_basis = vec![false; ncols];
        for &c in &basis {
            in_basis[c] = true;
        }

        let mut solver = PolytopeSolver {
            num_vars,
            var_cols,
            row_info,
            col_kind,
            a: stored.clone(),
            b: stored_b.clone(),
            stored,
            stored_b,
            basis,
            in_basis,
            allow: vec![true; ncols],
            cost: vec![Rational::zero(); ncols],
            red: vec![Rational::zero(); ncols],
            obj: Rational::zero(),
        };

        if solver.phase1()? {
            Ok(Some(solver))
        } else {
            Ok(None)
        }
    }

    fn ncols(&self) -> usize {
        self.col_kind.len()
    }

    fn nrows(&self) -> usize {
        self.a.len()
    }

    fn phase1(&mut self) -> Result<bool, LpError> {
        let mut cost = vec![Rational::zero(); self.ncols()];
        for (j, k) in self.col_kind.iter().enumerate() {
            if *k == ColKind::Artificial {
                cost[j] = -Rational::one();
            }
        }
        self.install_cost(cost);
        if self.optimize()?.is_none() {
            return Err(LpError::Internal("phase 1 unbounded".into()));
        }
        if self.obj.is_negative() {
            return Ok(false);
        }
        // Drive leftover artificials out of the basis where possible; rows
        // where no real pivot exists are redundant and keep their artificial
        // pinned at zero.
        for r in 0..self.nrows() {
            if self.col_kind[self.basis[r]] == ColKind::Artificial {
                let pivot_col = (0..self.ncols()).find(|&c| {
                    self.col_kind[c] != ColKind::Artificial
                        && !self.in_basis[c]
                        && !self.a[r][c].is_zero()
                });
                if let Some(c) = pivot_col {
                    self.pivot(r, c);
                }
            }
        }
        for (j, k) in self.col_kind.iter().enumerate() {
            if *k == ColKind::Artificial {
                self.allow[j] = false;
            }
        }
        Ok(true)
    }

    fn install_cost(&mut self, cost: Vec<Rational>) {
        self.cost = cost;
        self.red = self.cost.clone();
        self.obj = Rational::zero();
        for r in 0..self.nrows() {
            let cb = self.cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols() {
                if !self.a[r][j].is_zero() {
                    let d = &cb * &self.a[r][j];
                    self.red[j] -= d;
                }
            }
            self.obj += &cb * &self.b[r];
        }
    }

    fn pivot(&mut self, prow: usize, pcol: usize) {
        let piv = self.a[prow][pcol].clone();
        debug_assert!(!piv.is_zero());
        if !piv.is_one() {
            for x in self.a[prow].iter_mut() {
                if !x.is_zero() {
                    *x /= &piv;
                }
            }
            self.b[prow] /= &piv;
        }
        for r in 0..self.nrows() {
            if r == prow || self.a[r][pcol].is_zero() {
                continue;
            }
            let f = self.a[r][pcol].clone();
            for j in 0..self.ncols() {
                if !self.a[prow][j].is_zero() {
                    let d = &f * &self.a[prow][j];
                    self.a[r][j] -= d;
                }
            }
            let d = &f * &self.b[prow];
            self.b[r] -= d;
        }
        let rf = self.red[pcol].clone();
        if !rf.is_zero() {
            for j in 0..self.ncols() {
                if !self.a[prow][j].is_zero() {
                    let d = &rf * &self.a[prow][j];
                    self.red[j] -= d;
                }
            }
            self.obj += &rf * &self.b[prow];
        }
        self.in_basis[self.basis[prow]] = false;
        self.basis[prow] = pcol;
        self.in_basis[pcol] = true;
    }

    /// Primal simplex loop with Bland's rule. `None` means unbounded.
    fn optimize(&mut self) -> Result<Option<()>, LpError> {
        for _ in 0..PIVOT_LIMIT {
            // entering: lowest-index allowed column with positive reduced cost
            let entering = (0..self.ncols())
                .find(|&j| self.allow[j] && !self.in_basis[j] && self.red[j].is_positive());
            let Some(col) = entering else {
                return Ok(Some(()));
            };
            // leaving: minimum ratio, ties by lowest basic variable index
            let mut leave: Option<usize> = None;
            for r in 0..self.nrows() {
                if !self.a[r][col].is_positive() {
                    continue;
                }
                match leave {
                    None => leave = Some(r),
                    Some(best) => {
                        // compare b[r]/a[r][col] with b[best]/a[best][col]
                        let lhs = &self.b[r] * &self.a[best][col];
                        let rhs = &self.b[best] * &self.a[r][col];
                        if lhs < rhs || (lhs == rhs && self.basis[r] < self.basis[best]) {
                            leave = Some(r);
                        }
                    }
                }
            }
            match leave {
                None => return Ok(None),
                Some(r) => self.pivot(r, col),
            }
        }
        Err(LpError::Internal("pivot limit exceeded".into()))
    }

    /// Re-optimizes for a new objective from the current feasible basis.
    /// `None` means unbounded. Every optimum is certified against its dual
    /// before being reported.
    pub fn maximize(&mut self, objective: &[Rational]) -> Result<Option<()>, LpError> {
        if objective.len() != self.num_vars {
            return Err(LpError::Malformed("objective length mismatch".into()));
        }
        let mut cost = vec![Rational::zero(); self.ncols()];
        for (j, c) in objective.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match self.var_cols[j] {
                VarCols::NonNeg(p) => cost[p] = c.clone(),
                VarCols::Free(p, n) => {
                    cost[p] = c.clone();
                    cost[n] = -c.clone();
                }
            }
        }
        self.install_cost(cost);
        match self.optimize()? {
            None => Ok(None),
            Some(()) => {
                self.dual_certificate()?;
                Ok(Some(()))
            }
        }
    }

    /// Solves for the dual of the current basis and verifies strong duality
    /// exactly: dual feasibility on every real column, zero reduced cost on
    /// basic columns, and dual value equal to the tableau objective.
    fn dual_certificate(&self) -> Result<Vec<Rational>, LpError> {
        let fail = |m: String| Err(LpError::Internal(m));
        let n = self.nrows();
        let bt: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|r| self.stored[r][self.basis[i]].clone()).collect())
            .collect();
        let cb: Vec<Rational> = self.basis.iter().map(|&c| self.cost[c].clone()).collect();
        let y = match linalg::solve_unique(&bt, &cb) {
            Some(y) => y,
            None => return fail("basis matrix is singular".into()),
        };
        for j in 0..self.ncols() {
            if self.col_kind[j] == ColKind::Artificial {
                continue;
            }
            let ya: Rational = (0..n)
                .map(|r| {
                    if self.stored[r][j].is_zero() {
                        Rational::zero()
                    } else {
                        &y[r] * &self.stored[r][j]
                    }
                })
                .sum();
            let rc = &self.cost[j] - &ya;
            if rc.is_positive() {
                return fail(format!("dual infeasible at column {j}"));
            }
            if self.in_basis[j] && !rc.is_zero() {
                return fail(format!("nonzero reduced cost on basic column {j}"));
            }
        }
        let dual_value: Rational = (0..n).map(|r| &y[r] * &self.stored_b[r]).sum();
        if dual_value != self.obj {
            return fail("strong duality violated".into());
        }
        Ok(y)
    }

    /// Objective value of the current basis.
    pub fn objective_value(&self) -> Rational {
        self.obj.clone()
    }

    /// Current basic solution mapped back to the original variables.
    pub fn primal(&self) -> Vec<Rational> {
        let mut col_val = vec![Rational::zero(); self.ncols()];
        for (r, &c) in self.basis.iter().enumerate() {
            col_val[c] = self.b[r].clone();
        }
        (0..self.num_vars)
            .map(|j| match self.var_cols[j] {
                VarCols::NonNeg(p) => col_val[p].clone(),
                VarCols::Free(p, n) => &col_val[p] - &col_val[n],
            })
            .collect()
    }

    /// Full solution extraction with exact optimality verification: primal
    /// feasibility, dual feasibility, complementary slackness, and primal
    /// value = dual value. Any failure is an internal error.
    pub fn extract_checked(
        &self,
        objective: &[Rational],
        rows: &[LpRow],
    ) -> Result<LpSolution, LpError> {
        let fail = |m: String| Err(LpError::Internal(m));
        let x = self.primal();

        for (k, row) in rows.iter().enumerate() {
            if !row.satisfied(&x) {
                return fail(format!("primal violates row {k}"));
            }
        }
        let value: Rational = dot(objective, &x);
        if value != self.obj {
            return fail("tableau objective disagrees with primal".into());
        }

        // dual certificate: feasibility, basic reduced costs, value match
        let y = self.dual_certificate()?;

        // multipliers on the original rows, math convention: lambda <= 0 on
        // Ge rows, >= 0 on Le rows, free on Eq rows
        let mut dual = Vec::with_capacity(rows.len());
        for (k, row) in rows.iter().enumerate() {
            let lambda = match self.row_info[k] {
                RowInfo::Tableau(r, sign) => {
                    if sign < 0 {
                        -y[r].clone()
                    } else {
                        y[r].clone()
                    }
                }
                RowInfo::VarBound(j) => {
                    // leftover reduced cost of the variable's column
                    let mut gap = objective[j].clone();
                    for (kk, other) in rows.iter().enumerate() {
                        if kk == k {
                            continue;
                        }
                        if let RowInfo::Tableau(r, sign) = self.row_info[kk] {
                            if !other.coeffs[j].is_zero() {
                                let lam = if sign < 0 { -y[r].clone() } else { y[r].clone() };
                                gap -= lam * &other.coeffs[j];
                            }
                        }
                    }
                    gap
                }
            };
            let ok_sign = match row.rel {
                RowRel::Ge => !lambda.is_positive(),
                RowRel::Le => !lambda.is_negative(),
                RowRel::Eq => true,
            };
            if !ok_sign {
                return fail(format!("dual sign violated on row {k}"));
            }
            if !lambda.is_zero() && !row.tight(&x) {
                return fail(format!("complementary slackness violated on row {k}"));
            }
            dual.push(match row.rel {
                RowRel::Ge => -lambda,
                _ => lambda,
            });
        }

        // documented reported-dual identity
        let mut reported_value = Rational::zero();
        for (k, row) in rows.iter().enumerate() {
            let term = &dual[k] * &row.rhs;
            match row.rel {
                RowRel::Ge => reported_value -= term,
                _ => reported_value += term,
            }
        }
        if reported_value != value {
            return fail("reported dual identity violated".into());
        }

        let tight_rows = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.tight(&x))
            .map(|(k, _)| k)
            .collect();

        Ok(LpSolution {
            value,
            primal: x,
            dual,
            tight_rows,
        })
    }
}
