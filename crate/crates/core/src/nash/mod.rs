//! Exact Nash-equilibrium enumeration: bimatrix games through the labeled
//! best-response polytopes, symmetric equilibria of symmetric games by
//! support enumeration, pure equilibria for any number of players, a
//! complete case analysis for 2x2x2 games, and iterated strict dominance
//! with mixed dominators.

mod bimatrix;
mod cube;
mod symmetric;

pub use bimatrix::enumerate_nash_bimatrix;
pub use cube::{analyze_2x2x2, Component, CubeAnalysis, QuadraticCaseResult, RootStatus};
pub use symmetric::{enumerate_symmetric_nash, SymmetricGame};

use crate::equilibrium::{is_nash, is_pure_nash};
use crate::game::{Game, GameError, PureProfile};
use crate::lp::{self, LinearProgram, LpError, RowRel};
use crate::rational::Rational;
use crate::strategy::MixedProfile;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NashError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("expected {0}")]
    WrongShape(&'static str),
    #[error("game is not symmetric")]
    Asymmetric,
    #[error("internal error: {0}")]
    Internal(String),
}

/// Result of an equilibrium enumeration.
///
/// `equilibria` lists extreme equilibria. When `degenerate` is false the
/// game's equilibria are finite and the list is all of them; when true the
/// equilibrium set may contain continua whose extreme points are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashReport {
    pub equilibria: Vec<MixedProfile>,
    pub complete: bool,
    pub degenerate: bool,
    /// For bimatrix enumeration: which row-polytope vertex pairs with which
    /// column-polytope vertex, indices into the enumerated vertex lists.
    pub pairing: Vec<(usize, usize)>,
}

/// Exact verification wrapper used by the CLI.
pub fn verify_nash(game: &Game, sigma: &MixedProfile) -> Result<bool, NashError> {
    Ok(is_nash(game, sigma)?)
}

/// All pure Nash equilibria of an arbitrary finite game.
pub fn enumerate_pure_nash(game: &Game) -> Result<Vec<PureProfile>, NashError> {
    let mut out = Vec::new();
    for p in game.profiles() {
        if is_pure_nash(game, &p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Outcome of iterated elimination of strictly dominated strategies
/// (mixed-strategy dominators, exact LP test). Ties are broken by lowest
/// player index, then lowest strategy index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceResult {
    pub solvable: bool,
    /// Eliminations in order: (player, original strategy index).
    pub eliminations: Vec<(usize, usize)>,
    /// The single surviving profile when solvable.
    pub survivor: Option<PureProfile>,
}

/// Tests dominance solvability by iterated strict dominance.
pub fn is_dominance_solvable(game: &Game) -> Result<DominanceResult, NashError> {
    let n = game.num_players();
    let mut active: Vec<Vec<usize>> = game
        .strategy_counts()
        .iter()
        .map(|&m| (0..m).collect())
        .collect();
    let mut eliminations = Vec::new();

    'rounds: loop {
        for player in 0..n {
            if active[player].len() <= 1 {
                continue;
            }
            for pos in 0..active[player].len() {
                let candidate = active[player][pos];
                if strictly_dominated(game, &active, player, candidate)? {
                    active[player].remove(pos);
                    eliminations.push((player, candidate));
                    continue 'rounds;
                }
            }
        }
        break;
    }

    let solvable = active.iter().all(|a| a.len() == 1);
    let survivor = solvable.then(|| PureProfile(active.iter().map(|a| a[0]).collect()));
    Ok(DominanceResult {
        solvable,
        eliminations,
        survivor,
    })
}

/// LP test: is `candidate` strictly dominated by some mixed strategy over
/// the player's other active strategies, against every active opponent
/// profile?
fn strictly_dominated(
    game: &Game,
    active: &[Vec<usize>],
    player: usize,
    candidate: usize,
) -> Result<bool, NashError> {
    let others: Vec<usize> = active[player]
        .iter()
        .copied()
        .filter(|&s| s != candidate)
        .collect();
    if others.is_empty() {
        return Ok(false);
    }
    let opponents = opponent_profiles(game, active, player);
    // variables: weights over `others`, then the margin t; maximize t
    let nv = others.len() + 1;
    let mut obj = vec![Rational::zero(); nv];
    obj[others.len()] = Rational::one();
    let mut lp = LinearProgram::new(obj);
    for k in 0..others.len() {
        let mut c = vec![Rational::zero(); nv];
        c[k] = Rational::one();
        lp.add_row(c, RowRel::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); nv];
    ones[others.len()] = Rational::zero();
    lp.add_row(ones, RowRel::Eq, Rational::one());
    for opp in &opponents {
        let mut coeffs = Vec::with_capacity(nv);
        let base = profile_with(game, player, candidate, opp);
        let base_payoff = game.payoff(player, &base);
        for &alt in &others {
            let p = profile_with(game, player, alt, opp);
            coeffs.push(game.payoff(player, &p) - base_payoff);
        }
        coeffs.push(-Rational::one());
        lp.add_row(coeffs, RowRel::Ge, Rational::zero());
    }
    match lp::solve(&lp)? {
        lp::LpOutcome::Optimal(sol) => Ok(sol.value.is_positive()),
        lp::LpOutcome::Unbounded => Ok(true),
        lp::LpOutcome::Infeasible => Err(NashError::Internal(
            "dominance LP cannot be infeasible".into(),
        )),
    }
}

/// Enumerates active opponent strategy combinations as vectors indexed by
/// player (the entry for `player` is unused).
fn opponent_profiles(game: &Game, active: &[Vec<usize>], player: usize) -> Vec<Vec<usize>> {
    let n = game.num_players();
    let mut out: Vec<Vec<usize>> = vec![vec![0; n]];
    for j in 0..n {
        if j == player {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * active[j].len());
        for partial in &out {
            for &s in &active[j] {
                let mut p = partial.clone();
                p[j] = s;
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn profile_with(game: &Game, player: usize, strategy: usize, opp: &[usize]) -> PureProfile {
    let _ = game;
    let mut choices = opp.to_vec();
    choices[player] = strategy;
    PureProfile(choices)
}

/// Sorts profiles for deterministic reports: by support size, then
/// lexicographically by probabilities.
pub(crate) fn sort_profiles(profiles: &mut Vec<MixedProfile>) {
    profiles.sort_by(|a, b| {
        let size = |p: &MixedProfile| -> usize {
            (0..p.num_players())
                .map(|i| p.support().player(i).len())
                .sum()
        };
        size(a)
            .cmp(&size(b))
            .then_with(|| format!("{a:?}").cmp(&format!("{b:?}")))
    });
    profiles.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rint;

    fn prisoners_dilemma() -> Game {
        Game::bimatrix(
            vec![vec![rint(3), rint(0)], vec![rint(5), rint(1)]],
            vec![vec![rint(3), rint(5)], vec![rint(0), rint(1)]],
        )
        .unwrap()
    }

    fn matching_pennies() -> Game {
        Game::bimatrix(
            vec![vec![rint(1), rint(-1)], vec![rint(-1), rint(1)]],
            vec![vec![rint(-1), rint(1)], vec![rint(1), rint(-1)]],
        )
        .unwrap()
    }

    #[test]
    fn prisoners_dilemma_is_dominance_solvable() {
        let r = is_dominance_solvable(&prisoners_dilemma()).unwrap();
        assert!(r.solvable);
        assert_eq!(r.survivor, Some(PureProfile(vec![1, 1])));
        assert_eq!(r.eliminations.len(), 2);
    }

    #[test]
    fn matching_pennies_is_not() {
        let r = is_dominance_solvable(&matching_pennies()).unwrap();
        assert!(!r.solvable);
        assert!(r.eliminations.is_empty());
    }

    #[test]
    fn mixed_dominance_detected() {
        // middle column is dominated by the 1/2-1/2 mix of the outer two
        // for the column player, though by neither pure strategy
        let g = Game::bimatrix(
            vec![
                vec![rint(0), rint(0), rint(0)],
                vec![rint(0), rint(0), rint(0)],
            ],
            vec![
                vec![rint(4), rint(1), rint(0)],
                vec![rint(0), rint(1), rint(4)],
            ],
        )
        .unwrap();
        assert!(strictly_dominated(
            &g,
            &[vec![0, 1], vec![0, 1, 2]],
            1,
            1
        )
        .unwrap());
        assert!(!strictly_dominated(&g, &[vec![0, 1], vec![0, 1, 2]], 1, 0).unwrap());
    }

    #[test]
    fn pure_nash_enumeration() {
        let g = prisoners_dilemma();
        assert_eq!(
            enumerate_pure_nash(&g).unwrap(),
            vec![PureProfile(vec![1, 1])]
        );
        let g = matching_pennies();
        assert!(enumerate_pure_nash(&g).unwrap().is_empty());
        // all-zero payoffs: every profile is an equilibrium
        let g = Game::new(vec![2, 2], vec![vec![rint(0); 4]; 2]).unwrap();
        assert_eq!(enumerate_pure_nash(&g).unwrap().len(), 4);
    }
}
