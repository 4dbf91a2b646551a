//! Exact linear programming over rationals: optimal value with verified
//! strong duality, warm-started re-optimization over a fixed feasible
//! region, coordinate ranging, vertex enumeration, and exact polytope
//! dimension via implicit equalities.

mod simplex;
mod vertices;

pub use simplex::PolytopeSolver;

use crate::linalg;
use crate::rational::Rational;
use num_traits::Zero;
use std::sync::OnceLock;

/// Relation of one constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRel {
    Ge,
    Le,
    Eq,
}

/// One linear constraint `coeffs . x REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<Rational>,
    pub rel: RowRel,
    pub rhs: Rational,
}

impl LpRow {
    pub fn new(coeffs: Vec<Rational>, rel: RowRel, rhs: Rational) -> Self {
        LpRow { coeffs, rel, rhs }
    }

    /// Left-hand side value at a point.
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }

    /// Whether the point satisfies this row.
    pub fn satisfied(&self, x: &[Rational]) -> bool {
        let v = self.lhs(x);
        match self.rel {
            RowRel::Ge => v >= self.rhs,
            RowRel::Le => v <= self.rhs,
            RowRel::Eq => v == self.rhs,
        }
    }

    /// Whether the row holds with equality at the point.
    pub fn tight(&self, x: &[Rational]) -> bool {
        self.lhs(x) == self.rhs
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// A linear program: maximize `objective . x` subject to rows and optional
/// per-variable bounds (variables are free by default).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<(Option<Rational>, Option<Rational>)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            bounds: vec![(None, None); n],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, rel: RowRel, rhs: Rational) -> &mut Self {
        self.rows.push(LpRow::new(coeffs, rel, rhs));
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Bounds restated as explicit rows, appended after the declared rows.
    pub(crate) fn all_rows(&self) -> Vec<LpRow> {
        let q = self.num_vars();
        let mut rows = self.rows.clone();
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            let unit = |j: usize| {
                let mut c = vec![Rational::zero(); q];
                c[j] = num_traits::One::one();
                c
            };
            if let Some(l) = lo {
                rows.push(LpRow::new(unit(j), RowRel::Ge, l.clone()));
            }
            if let Some(h) = hi {
                rows.push(LpRow::new(unit(j), RowRel::Le, h.clone()));
            }
        }
        rows
    }
}

/// Errors from the LP layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("polytope is infeasible")]
    InfeasiblePolytope,
    #[error("polytope is unbounded in coordinate {0}")]
    UnboundedPolytope(usize),
    #[error("operation requires an optimal solution, but the program is {0}")]
    NotOptimal(&'static str),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}

/// Exact optimal solution with its dual certificate.
///
/// Dual sign convention, fixed here once for every consumer: `dual[k]` is
/// reported nonnegative for both `Ge` and `Le` rows and signed for `Eq`
/// rows, and satisfies exactly
///
/// ```text
/// value = sum over Le,Eq rows of dual[k]*rhs[k]
///       - sum over Ge rows    of dual[k]*rhs[k]
/// ```
///
/// together with, for every variable j,
/// `objective[j] = sum_k lambda_k coeffs[k][j]` where `lambda_k` is
/// `-dual[k]` on `Ge` rows and `dual[k]` otherwise. Both identities are
/// verified exactly on every solve. `dual` is indexed like `rows`,
/// followed by one entry per bound row in `all_rows` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    /// Indices of rows (in `all_rows` order) tight at `primal`.
    pub tight_rows: Vec<usize>,
}

/// Result of a solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Solves a linear program exactly. Every optimal answer carries a dual
/// vector that has been checked against the primal for feasibility,
/// complementary slackness and equality of objective values.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let q = lp.num_vars();
    if q == 0 {
        return Err(LpError::Malformed("no variables".into()));
    }
    for (i, r) in lp.rows.iter().enumerate() {
        if r.coeffs.len() != q {
            return Err(LpError::Malformed(format!(
                "row {i} has {} coefficients, expected {q}",
                r.coeffs.len()
            )));
        }
    }
    if lp.bounds.len() != q {
        return Err(LpError::Malformed("bounds length mismatch".into()));
    }
    let rows = lp.all_rows();
    let Some(mut solver) = PolytopeSolver::from_rows(q, &rows)? else {
        return Ok(LpOutcome::Infeasible);
    };
    match solver.maximize(&lp.objective)? {
        None => Ok(LpOutcome::Unbounded),
        Some(()) => {
            let sol = solver.extract_checked(&lp.objective, &rows)?;
            Ok(LpOutcome::Optimal(sol))
        }
    }
}

/// A constraint system with cached vertex enumeration. Immutable once
/// built; all operations may run concurrently.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    rows: Vec<LpRow>,
    vertices: OnceLock<Result<Vec<Vec<Rational>>, LpError>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            dim: self.dim,
            rows: self.rows.clone(),
            vertices: OnceLock::new(),
        }
    }
}

impl Polytope {
    pub fn new(dim: usize, rows: Vec<LpRow>) -> Self {
        debug_assert!(rows.iter().all(|r| r.coeffs.len() == dim));
        Polytope {
            dim,
            rows,
            vertices: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.satisfied(x))
    }

    /// A fresh warm-startable solver over this feasible region, or `None`
    /// when the polytope is empty.
    pub fn solver(&self) -> Result<Option<PolytopeSolver>, LpError> {
        PolytopeSolver::from_rows(self.dim, &self.rows)
    }

    /// Exact (min, max) of coordinate `k`; errors if infeasible or
    /// unbounded in that coordinate.
    pub fn coordinate_range(&self, k: usize) -> Result<(Rational, Rational), LpError> {
        if k >= self.dim {
            return Err(LpError::Malformed(format!("coordinate {k} out of range")));
        }
        let mut solver = self.solver()?.ok_or(LpError::InfeasiblePolytope)?;
        let mut obj = vec![Rational::zero(); self.dim];
        obj[k] = num_traits::One::one();
        let max = match solver.maximize(&obj)? {
            None => return Err(LpError::UnboundedPolytope(k)),
            Some(()) => solver.objective_value(),
        };
        obj[k] = -Rational::from_integer(1.into());
        let min = match solver.maximize(&obj)? {
            None => return Err(LpError::UnboundedPolytope(k)),
            Some(()) => -solver.objective_value(),
        };
        Ok((min, max))
    }

    /// All coordinate ranges, sharing one warm solver. `early_exit` stops
    /// as soon as some range is not a point (used by uniqueness tests).
    pub fn coordinate_ranges(
        &self,
        early_exit: bool,
    ) -> Result<Option<Vec<(Rational, Rational)>>, LpError> {
        let mut solver = self.solver()?.ok_or(LpError::InfeasiblePolytope)?;
        let mut out = Vec::with_capacity(self.dim);
        let mut obj = vec![Rational::zero(); self.dim];
        for k in 0..self.dim {
            obj[k] = num_traits::One::one();
            let max = match solver.maximize(&obj)? {
                None => return Err(LpError::UnboundedPolytope(k)),
                Some(()) => solver.objective_value(),
            };
            obj[k] = -Rational::from_integer(1.into());
            let min = match solver.maximize(&obj)? {
                None => return Err(LpError::UnboundedPolytope(k)),
                Some(()) => -solver.objective_value(),
            };
            obj[k] = Rational::zero();
            let degenerate = min == max;
            out.push((min, max));
            if early_exit && !degenerate {
                return Ok(None);
            }
        }
        Ok(Some(out))
    }

    /// Maximum of a linear objective over the polytope.
    pub fn maximize(&self, objective: &[Rational]) -> Result<LpOutcome, LpError> {
        let mut lp = LinearProgram::new(objective.to_vec());
        lp.rows = self.rows.clone();
        solve(&lp)
    }

    /// The exact, duplicate-free vertex list. Boundedness is verified by
    /// coordinate ranging before enumeration; results are cached.
    pub fn vertices(&self) -> Result<&[Vec<Rational>], LpError> {
        let r = self
            .vertices
            .get_or_init(|| vertices::enumerate_vertices(self));
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// Affine dimension, via the implicit-equality characterization:
    /// dim = ambient dim - rank of the rows that hold with equality on the
    /// whole polytope. Coordinate ranging alone would over-count whenever a
    /// low-dimensional face is skew to the axes, so each inequality row's
    /// slack is maximized instead.
    pub fn dimension(&self) -> Result<usize, LpError> {
        let mut solver = self.solver()?.ok_or(LpError::InfeasiblePolytope)?;
        let mut eq_rows: Vec<Vec<Rational>> = Vec::new();
        for row in &self.rows {
            match row.rel {
                RowRel::Eq => eq_rows.push(row.coeffs.clone()),
                RowRel::Ge | RowRel::Le => {
                    // maximize the slack of the row; 0 means implicit equality
                    let obj: Vec<Rational> = match row.rel {
                        RowRel::Ge => row.coeffs.clone(),
                        _ => row.coeffs.iter().map(|c| -c).collect(),
                    };
                    match solver.maximize(&obj)? {
                        None => {} // unbounded slack, certainly not implicit
                        Some(()) => {
                            let best = match row.rel {
                                RowRel::Ge => solver.objective_value(),
                                _ => -solver.objective_value(),
                            };
                            if best == row.rhs {
                                eq_rows.push(row.coeffs.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(self.dim - linalg::rank(&eq_rows))
    }

    /// Labels of rows tight at a point (indices into `rows`).
    pub fn tight_row_indices(&self, x: &[Rational]) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.tight(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether every point of this polytope satisfies `row`, decided by
    /// optimizing the row's worst violation exactly.
    fn satisfies_everywhere(
        &self,
        solver: &mut PolytopeSolver,
        row: &LpRow,
    ) -> Result<bool, LpError> {
        let check_ge = |solver: &mut PolytopeSolver, coeffs: &[Rational], rhs: &Rational| {
            // min coeffs.x over self >= rhs?
            let negated: Vec<Rational> = coeffs.iter().map(|c| -c).collect();
            match solver.maximize(&negated)? {
                None => Ok::<_, LpError>(false), // unbounded below
                Some(()) => Ok(-solver.objective_value() >= *rhs),
            }
        };
        let check_le = |solver: &mut PolytopeSolver, coeffs: &[Rational], rhs: &Rational| {
            match solver.maximize(coeffs)? {
                None => Ok::<_, LpError>(false),
                Some(()) => Ok(solver.objective_value() <= *rhs),
            }
        };
        match row.rel {
            RowRel::Ge => check_ge(solver, &row.coeffs, &row.rhs),
            RowRel::Le => check_le(solver, &row.coeffs, &row.rhs),
            RowRel::Eq => Ok(check_ge(solver, &row.coeffs, &row.rhs)?
                && check_le(solver, &row.coeffs, &row.rhs)?),
        }
    }

    /// Exact inclusion test: is this polytope contained in the feasible set
    /// of `outer_rows`? One warm-started optimization per outer row.
    pub fn contained_in(&self, outer_rows: &[LpRow]) -> Result<bool, LpError> {
        let mut solver = self.solver()?.ok_or(LpError::InfeasiblePolytope)?;
        for row in outer_rows {
            if !self.satisfies_everywhere(&mut solver, row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact equality of feasible sets, by mutual containment. For bounded
    /// polytopes this coincides with equality of vertex sets but stays
    /// polynomial when the vertex count is enormous.
    pub fn same_set(&self, other: &Polytope) -> Result<bool, LpError> {
        if self.dim != other.dim {
            return Ok(false);
        }
        Ok(self.contained_in(other.rows())? && other.contained_in(self.rows())?)
    }
}

/// Affine dimension of the optimal face of a linear program: the program is
/// solved, the objective is pinned at its optimum as an equality row, and
/// the dimension of the resulting polytope is computed exactly.
pub fn optimal_face_dimension(lp: &LinearProgram) -> Result<usize, LpError> {
    let outcome = solve(lp)?;
    let sol = match outcome {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => return Err(LpError::NotOptimal("infeasible")),
        LpOutcome::Unbounded => return Err(LpError::NotOptimal("unbounded")),
    };
    let mut rows = lp.all_rows();
    rows.push(LpRow::new(lp.objective.clone(), RowRel::Eq, sol.value));
    Polytope::new(lp.num_vars(), rows).dimension()
}
