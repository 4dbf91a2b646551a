//! Symmetric Nash equilibria of symmetric bimatrix games by exact support
//! enumeration. Each support yields a small polytope in (strategy, payoff)
//! space whose vertices are the extreme symmetric equilibria with that
//! support.

use super::NashError;
use crate::equilibrium::is_nash;
use crate::game::Game;
use crate::lp::{LpRow, Polytope, RowRel};
use crate::rational::Rational;
use crate::strategy::MixedProfile;
use num_traits::{One, Zero};

/// A two-player game with U2(a,b) = U1(b,a), checked exactly.
#[derive(Debug, Clone)]
pub struct SymmetricGame {
    game: Game,
}

impl SymmetricGame {
    pub fn new(game: Game) -> Result<Self, NashError> {
        if game.num_players() != 2
            || game.strategy_counts()[0] != game.strategy_counts()[1]
        {
            return Err(NashError::WrongShape("a square two-player game"));
        }
        let m = game.strategy_counts()[0];
        let a = game.matrix_of(0);
        let b = game.matrix_of(1);
        for i in 0..m {
            for j in 0..m {
                if b[i][j] != a[j][i] {
                    return Err(NashError::Asymmetric);
                }
            }
        }
        Ok(SymmetricGame { game })
    }

    /// Builds the symmetric game from the row player's matrix alone.
    pub fn from_row_matrix(a: Vec<Vec<Rational>>) -> Result<Self, NashError> {
        let m = a.len();
        let b: Vec<Vec<Rational>> = (0..m)
            .map(|i| (0..m).map(|j| a[j][i].clone()).collect())
            .collect();
        let game = Game::bimatrix(a, b)?;
        SymmetricGame::new(game)
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn size(&self) -> usize {
        self.game.strategy_counts()[0]
    }
}

/// Enumerates all symmetric Nash equilibria (sigma, sigma), reporting
/// degenerate components through their extreme points. Supports are visited
/// by increasing size and lexicographically within a size.
pub fn enumerate_symmetric_nash(sym: &SymmetricGame) -> Result<Vec<MixedProfile>, NashError> {
    let m = sym.size();
    let a = sym.game().matrix_of(0);
    let mut found: Vec<Vec<Rational>> = Vec::new();

    for support in supports_by_size(m) {
        // polytope over (sigma, u): sigma a distribution on `support`, all
        // supported rows pay exactly u, all other rows pay at most u
        let q = m + 1;
        let mut rows = Vec::new();
        for j in 0..m {
            let mut c = vec![Rational::zero(); q];
            c[j] = Rational::one();
            let rel = if support.contains(&j) {
                RowRel::Ge
            } else {
                RowRel::Eq
            };
            rows.push(LpRow::new(c, rel, Rational::zero()));
        }
        let mut ones = vec![Rational::one(); q];
        ones[m] = Rational::zero();
        rows.push(LpRow::new(ones, RowRel::Eq, Rational::one()));
        for k in 0..m {
            let mut c: Vec<Rational> = (0..m).map(|j| a[k][j].clone()).collect();
            c.push(-Rational::one());
            let rel = if support.contains(&k) {
                RowRel::Eq
            } else {
                RowRel::Le
            };
            rows.push(LpRow::new(c, rel, Rational::zero()));
        }
        let poly = Polytope::new(q, rows);
        let verts = match poly.vertices() {
            Ok(v) => v.to_vec(),
            Err(crate::lp::LpError::InfeasiblePolytope) => continue,
            Err(e) => return Err(e.into()),
        };
        for v in verts {
            let sigma = v[..m].to_vec();
            let exact_support: Vec<usize> = (0..m)
                .filter(|&j| !sigma[j].is_zero())
                .collect();
            if exact_support != support {
                continue; // handled under its own (smaller) support
            }
            if !found.contains(&sigma) {
                found.push(sigma);
            }
        }
    }

    let mut out = Vec::with_capacity(found.len());
    for sigma in found {
        let profile = MixedProfile::new(vec![sigma.clone(), sigma])?;
        if !is_nash(sym.game(), &profile)? {
            return Err(NashError::Internal(
                "support enumeration produced a non-equilibrium".into(),
            ));
        }
        out.push(profile);
    }
    super::sort_profiles(&mut out);
    Ok(out)
}

fn supports_by_size(m: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << m))
        .map(|mask| (0..m).filter(|&j| mask & (1 << j) != 0).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}
