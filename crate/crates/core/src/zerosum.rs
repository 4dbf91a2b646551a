//! Two-player zero-sum games solved exactly: game value, optimal-strategy
//! polytopes with their vertex sets and dimensions, and the auxiliary
//! zero-sum game whose maximizer-optimal set coincides with the correlated
//! equilibria of a source game.

use crate::ce::build_ce_polytope;
use crate::game::{Game, GameError, PureProfile};
use crate::lp::{LinearProgram, LpError, LpOutcome, LpRow, Polytope, RowRel};
use crate::rational::Rational;
use num_traits::{One, Zero};

/// Payoff matrix for the row player, who maximizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGame {
    matrix: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row,
    Column,
}

impl MatrixGame {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let cols = matrix.first().map_or(0, |r| r.len());
        if matrix.is_empty() || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(GameError::Json("matrix must be rectangular and nonempty".into()));
        }
        Ok(MatrixGame { matrix })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rational {
        &self.matrix[r][c]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    /// The equivalent two-player game (column player gets the negation).
    pub fn to_game(&self) -> Game {
        let b: Vec<Vec<Rational>> = self.matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Game::bimatrix(self.matrix.clone(), b).expect("validated shape")
    }

    // Wire format: {"rows": r, "cols": c, "matrix": [["p/q", ...], ...]}

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "matrix": self
                .matrix
                .iter()
                .map(|row| row.iter().map(crate::rational::format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GameError> {
        let err = |m: &str| GameError::Json(m.to_string());
        let rows = v["rows"].as_u64().ok_or_else(|| err("missing rows"))? as usize;
        let cols = v["cols"].as_u64().ok_or_else(|| err("missing cols"))? as usize;
        let arr = v["matrix"].as_array().ok_or_else(|| err("missing matrix"))?;
        if arr.len() != rows {
            return Err(err("matrix row count mismatch"));
        }
        let mut matrix = Vec::with_capacity(rows);
        for row in arr {
            let row = row.as_array().ok_or_else(|| err("matrix rows must be arrays"))?;
            if row.len() != cols {
                return Err(err("matrix column count mismatch"));
            }
            matrix.push(
                row.iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => crate::rational::parse_rational(s)
                            .map_err(|e| err(&e.to_string())),
                        serde_json::Value::Number(n) => n
                            .as_i64()
                            .map(|i| Rational::from_integer(i.into()))
                            .ok_or_else(|| err("matrix numbers must be integers")),
                        _ => Err(err("matrix entries must be numbers or \"p/q\" strings")),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        MatrixGame::new(matrix)
    }
}

/// Exact solution of a matrix game. The minimax identity (row guarantee =
/// column guarantee) is established by two independent LPs and checked
/// exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
    pub row_face_dimension: usize,
    pub col_face_dimension: usize,
}

/// Rows of the polytope of one side's optimal strategies: the strategy
/// simplex sliced at the game value.
fn optimal_polytope(m: &MatrixGame, side: Side, value: &Rational) -> Polytope {
    match side {
        Side::Row => {
            let r = m.rows();
            let mut rows = simplex_rows(r);
            for j in 0..m.cols() {
                let coeffs: Vec<Rational> = (0..r).map(|i| m.entry(i, j).clone()).collect();
                rows.push(LpRow::new(coeffs, RowRel::Ge, value.clone()));
            }
            Polytope::new(r, rows)
        }
        Side::Column => {
            let c = m.cols();
            let mut rows = simplex_rows(c);
            for i in 0..m.rows() {
                let coeffs: Vec<Rational> = (0..c).map(|j| m.entry(i, j).clone()).collect();
                rows.push(LpRow::new(coeffs, RowRel::Le, value.clone()));
            }
            Polytope::new(c, rows)
        }
    }
}

fn simplex_rows(n: usize) -> Vec<LpRow> {
    let mut rows = Vec::with_capacity(n + 1);
    for k in 0..n {
        let mut c = vec![Rational::zero(); n];
        c[k] = Rational::one();
        rows.push(LpRow::new(c, RowRel::Ge, Rational::zero()));
    }
    rows.push(LpRow::new(vec![Rational::one(); n], RowRel::Eq, Rational::one()));
    rows
}

/// Value LP for one side: variables are the mixed strategy plus the
/// guaranteed payoff level.
fn guarantee_lp(m: &MatrixGame, side: Side) -> LinearProgram {
    match side {
        Side::Row => {
            let r = m.rows();
            // maximize v subject to p in simplex, (M^T p)_j >= v
            let mut obj = vec![Rational::zero(); r + 1];
            obj[r] = Rational::one();
            let mut lp = LinearProgram::new(obj);
            for k in 0..r {
                let mut c = vec![Rational::zero(); r + 1];
                c[k] = Rational::one();
                lp.add_row(c, RowRel::Ge, Rational::zero());
            }
            let mut ones = vec![Rational::one(); r + 1];
            ones[r] = Rational::zero();
            lp.add_row(ones, RowRel::Eq, Rational::one());
            for j in 0..m.cols() {
                let mut c: Vec<Rational> = (0..r).map(|i| m.entry(i, j).clone()).collect();
                c.push(-Rational::one());
                lp.add_row(c, RowRel::Ge, Rational::zero());
            }
            lp
        }
        Side::Column => {
            let cdim = m.cols();
            // minimize u subject to q in simplex, (M q)_i <= u
            let mut obj = vec![Rational::zero(); cdim + 1];
            obj[cdim] = -Rational::one();
            let mut lp = LinearProgram::new(obj);
            for k in 0..cdim {
                let mut c = vec![Rational::zero(); cdim + 1];
                c[k] = Rational::one();
                lp.add_row(c, RowRel::Ge, Rational::zero());
            }
            let mut ones = vec![Rational::one(); cdim + 1];
            ones[cdim] = Rational::zero();
            lp.add_row(ones, RowRel::Eq, Rational::one());
            for i in 0..m.rows() {
                let mut c: Vec<Rational> = (0..cdim).map(|j| m.entry(i, j).clone()).collect();
                c.push(-Rational::one());
                lp.add_row(c, RowRel::Le, Rational::zero());
            }
            lp
        }
    }
}

/// Solves the matrix game exactly: both guarantee LPs, the minimax check,
/// one optimal strategy per side, and the dimension of each side's optimal
/// face.
pub fn solve_zero_sum(m: &MatrixGame) -> Result<ZeroSumSolution, LpError> {
    let row = match crate::lp::solve(&guarantee_lp(m, Side::Row))? {
        LpOutcome::Optimal(s) => s,
        _ => return Err(LpError::Internal("row guarantee LP must be solvable".into())),
    };
    let col = match crate::lp::solve(&guarantee_lp(m, Side::Column))? {
        LpOutcome::Optimal(s) => s,
        _ => return Err(LpError::Internal("column guarantee LP must be solvable".into())),
    };
    let value = row.value.clone();
    if -col.value.clone() != value {
        return Err(LpError::Internal("minimax identity violated".into()));
    }
    let row_strategy = row.primal[..m.rows()].to_vec();
    let col_strategy = col.primal[..m.cols()].to_vec();
    let row_face_dimension = optimal_polytope(m, Side::Row, &value).dimension()?;
    let col_face_dimension = optimal_polytope(m, Side::Column, &value).dimension()?;
    Ok(ZeroSumSolution {
        value,
        row_strategy,
        col_strategy,
        row_face_dimension,
        col_face_dimension,
    })
}

/// Exact vertex list of one side's optimal-strategy polytope.
pub fn optimal_strategy_vertices(m: &MatrixGame, side: Side) -> Result<Vec<Vec<Rational>>, LpError> {
    let sol = solve_zero_sum(m)?;
    let poly = optimal_polytope(m, side, &sol.value);
    Ok(poly.vertices()?.to_vec())
}

/// The auxiliary zero-sum game of a source game: rows are pure profiles,
/// columns are deviation triples (player, recommended, alternative). A
/// distribution over rows has nonnegative payoff against every column
/// exactly when it is a correlated equilibrium of the source game.
///
/// When the game is actually played, the minimizer may also decline to
/// deviate (an identity deviation plan). That option is an all-zero column,
/// so it pins the value at exactly 0 and makes the maximizer's optimal set
/// the CE polytope itself; without it, games admitting a correlated
/// equilibrium with every incentive constraint strict would have positive
/// value and a smaller optimal set. `matrix` holds the proper deviation
/// columns only; the solving entry points append the decline column.
#[derive(Debug, Clone)]
pub struct AuxiliaryGame {
    pub matrix: MatrixGame,
    pub row_profiles: Vec<PureProfile>,
    /// (player, from, to) per column; players ascending, then from, then to
    /// skipping the diagonal.
    pub col_triples: Vec<(usize, usize, usize)>,
}

pub fn build_auxiliary_game(game: &Game) -> AuxiliaryGame {
    let ns = game.num_profiles();
    let mut col_triples = Vec::new();
    for i in 0..game.num_players() {
        let m = game.strategy_counts()[i];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    col_triples.push((i, a, b));
                }
            }
        }
    }
    let row_profiles: Vec<PureProfile> = (0..ns).map(|f| game.profile_from_flat(f)).collect();
    let matrix: Vec<Vec<Rational>> = row_profiles
        .iter()
        .map(|s| {
            col_triples
                .iter()
                .map(|&(i, a, b)| {
                    if s.choice(i) == a {
                        let mut dev = s.clone();
                        dev.0[i] = b;
                        game.payoff(i, s) - game.payoff(i, &dev)
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    AuxiliaryGame {
        matrix: MatrixGame { matrix },
        row_profiles,
        col_triples,
    }
}

impl AuxiliaryGame {
    /// The playable matrix: deviation columns plus the decline column.
    pub fn solvable_matrix(&self) -> MatrixGame {
        let mut matrix = self.matrix.matrix.clone();
        for row in &mut matrix {
            row.push(Rational::zero());
        }
        MatrixGame { matrix }
    }

    /// Value of the auxiliary game (exactly 0 whenever the source game has
    /// a correlated equilibrium, i.e. always).
    pub fn value(&self) -> Result<Rational, LpError> {
        Ok(solve_zero_sum(&self.solvable_matrix())?.value)
    }

    /// Vertices of the maximizer's optimal-strategy polytope.
    pub fn maximizer_optimal_vertices(&self) -> Result<Vec<Vec<Rational>>, LpError> {
        optimal_strategy_vertices(&self.solvable_matrix(), Side::Row)
    }
}

/// Compares the maximizer-optimal polytope of the auxiliary game with the
/// correlated-equilibrium polytope of the source game. Both constraint
/// systems are built independently; equality is decided by exact mutual
/// containment, which for bounded polytopes coincides with equality of the
/// vertex sets while staying tractable when those sets are huge.
pub fn maximizer_optimal_equals_ce(game: &Game) -> Result<bool, LpError> {
    let ce = build_ce_polytope(game);
    let aux = build_auxiliary_game(game);
    let aux_poly = if aux.col_triples.is_empty() {
        // no deviations possible: every distribution is optimal
        Polytope::new(game.num_profiles(), simplex_rows(game.num_profiles()))
    } else {
        let solvable = aux.solvable_matrix();
        let value = solve_zero_sum(&solvable)?.value;
        optimal_polytope(&solvable, Side::Row, &value)
    };
    ce.polytope().same_set(&aux_poly)
}

/// Vertex-level variant of the same comparison, for small games where the
/// extreme points themselves are of interest.
pub fn maximizer_optimal_shared_vertices(game: &Game) -> Result<Option<Vec<Vec<Rational>>>, LpError> {
    let ce = build_ce_polytope(game);
    let mut ce_vertices = ce.polytope().vertices()?.to_vec();
    ce_vertices.sort();
    let aux = build_auxiliary_game(game);
    let mut aux_vertices = if aux.col_triples.is_empty() {
        Polytope::new(game.num_profiles(), simplex_rows(game.num_profiles()))
            .vertices()?
            .to_vec()
    } else {
        aux.maximizer_optimal_vertices()?
    };
    aux_vertices.sort();
    Ok((ce_vertices == aux_vertices).then_some(ce_vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn game3x2(eps: Rational) -> MatrixGame {
        MatrixGame::new(vec![
            vec![-eps, rint(0)],
            vec![rint(0), rint(-1)],
            vec![rint(0), rint(-1)],
        ])
        .unwrap()
    }

    #[test]
    fn unique_optimum_at_eps_zero() {
        let m = game3x2(rint(0));
        let sol = solve_zero_sum(&m).unwrap();
        assert_eq!(sol.value, rint(0));
        assert_eq!(sol.row_face_dimension, 0);
        assert_eq!(sol.row_strategy, vec![rint(1), rint(0), rint(0)]);
        let verts = optimal_strategy_vertices(&m, Side::Row).unwrap();
        assert_eq!(verts, vec![vec![rint(1), rint(0), rint(0)]]);
    }

    #[test]
    fn optimum_face_grows_at_eps_one() {
        let m = game3x2(rint(1));
        let sol = solve_zero_sum(&m).unwrap();
        assert_eq!(sol.value, rat(-1, 2));
        assert_eq!(sol.row_face_dimension, 1);
        let verts = optimal_strategy_vertices(&m, Side::Row).unwrap();
        assert_eq!(
            verts,
            vec![
                vec![rat(1, 2), rat(0, 1), rat(1, 2)],
                vec![rat(1, 2), rat(1, 2), rat(0, 1)],
            ]
        );
    }

    #[test]
    fn matching_pennies_value_and_strategies() {
        let m = MatrixGame::new(vec![
            vec![rint(1), rint(-1)],
            vec![rint(-1), rint(1)],
        ])
        .unwrap();
        let sol = solve_zero_sum(&m).unwrap();
        assert_eq!(sol.value, rint(0));
        assert_eq!(sol.row_strategy, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(sol.col_strategy, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(sol.row_face_dimension, 0);
        assert_eq!(sol.col_face_dimension, 0);
    }

    #[test]
    fn one_by_one_game() {
        let m = MatrixGame::new(vec![vec![rat(7, 3)]]).unwrap();
        let sol = solve_zero_sum(&m).unwrap();
        assert_eq!(sol.value, rat(7, 3));
        assert_eq!(
            optimal_strategy_vertices(&m, Side::Row).unwrap(),
            vec![vec![rint(1)]]
        );
    }

    #[test]
    fn auxiliary_game_shape_and_structure() {
        let g = Game::bimatrix(
            vec![vec![rint(3), rint(0)], vec![rint(5), rint(1)]],
            vec![vec![rint(3), rint(5)], vec![rint(0), rint(1)]],
        )
        .unwrap();
        let aux = build_auxiliary_game(&g);
        assert_eq!(aux.matrix.rows(), 4);
        assert_eq!(aux.matrix.cols(), 4);
        // column (player 0, from a, to b) is nonzero only in rows with
        // profile choice a for player 0
        for (c, &(i, a, _)) in aux.col_triples.iter().enumerate() {
            for (r, profile) in aux.row_profiles.iter().enumerate() {
                if profile.choice(i) != a {
                    assert_eq!(*aux.matrix.entry(r, c), rint(0));
                }
            }
        }
        assert_eq!(aux.value().unwrap(), rint(0));
    }

    #[test]
    fn maximizer_optimal_matches_ce_on_small_games() {
        // dominance solvable: unique CE = unique maximizer-optimal point
        let pd = Game::bimatrix(
            vec![vec![rint(3), rint(0)], vec![rint(5), rint(1)]],
            vec![vec![rint(3), rint(5)], vec![rint(0), rint(1)]],
        )
        .unwrap();
        assert!(maximizer_optimal_equals_ce(&pd).unwrap());
        // vertex route: the shared set is the single point mass on (1,1)
        let shared = maximizer_optimal_shared_vertices(&pd).unwrap().unwrap();
        assert_eq!(
            shared,
            vec![vec![rint(0), rint(0), rint(0), rint(1)]]
        );

        let pennies = Game::bimatrix(
            vec![vec![rint(1), rint(-1)], vec![rint(-1), rint(1)]],
            vec![vec![rint(-1), rint(1)], vec![rint(1), rint(-1)]],
        )
        .unwrap();
        assert!(maximizer_optimal_equals_ce(&pennies).unwrap());
    }
}
