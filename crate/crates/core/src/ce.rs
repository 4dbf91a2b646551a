//! The correlated-equilibrium polytope of a game: labeled constraint
//! system, uniqueness, extreme-point counting, per-profile maximal
//! probability, and binding-constraint sets.

use crate::equilibrium::is_correlated_equilibrium;
use crate::game::{Game, GameError, PureProfile};
use crate::lp::{LpError, LpRow, Polytope, RowRel};
use crate::rational::Rational;
use crate::strategy::CorrelatedStrategy;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

/// Errors from correlated-equilibrium analysis.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CeError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("distribution is not a correlated equilibrium of the game")]
    NotCorrelatedEquilibrium,
    #[error("games have different shapes")]
    ShapeMismatch,
    #[error("unique correlated equilibrium is not a product distribution")]
    NotProduct,
}

/// Identifies one row of the CE constraint system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ConstraintLabel {
    /// mu(s) >= 0 for the profile with this flat index.
    Nonnegativity(usize),
    /// sum_s mu(s) = 1.
    Normalization,
    /// h(player, from, to) >= 0 with from != to.
    Incentive {
        player: usize,
        from: usize,
        to: usize,
    },
}

/// The CE polytope with labeled rows: |S| nonnegativity rows, one
/// normalization equality, then the incentive rows ordered by player,
/// recommended strategy, deviation (skipping the diagonal).
#[derive(Debug, Clone)]
pub struct CePolytope {
    game: Game,
    labels: Vec<ConstraintLabel>,
    polytope: Polytope,
}

/// Builds the labeled constraint system whose feasible set is exactly the
/// set of correlated equilibria.
pub fn build_ce_polytope(game: &Game) -> CePolytope {
    let ns = game.num_profiles();
    let mut rows = Vec::new();
    let mut labels = Vec::new();

    for f in 0..ns {
        let mut coeffs = vec![Rational::zero(); ns];
        coeffs[f] = Rational::one();
        rows.push(LpRow::new(coeffs, RowRel::Ge, Rational::zero()));
        labels.push(ConstraintLabel::Nonnegativity(f));
    }
    rows.push(LpRow::new(vec![Rational::one(); ns], RowRel::Eq, Rational::one()));
    labels.push(ConstraintLabel::Normalization);

    for player in 0..game.num_players() {
        let m = game.strategy_counts()[player];
        for from in 0..m {
            for to in 0..m {
                if from == to {
                    continue;
                }
                rows.push(LpRow::new(
                    incentive_coeffs(game, player, from, to),
                    RowRel::Ge,
                    Rational::zero(),
                ));
                labels.push(ConstraintLabel::Incentive { player, from, to });
            }
        }
    }

    CePolytope {
        game: game.clone(),
        labels,
        polytope: Polytope::new(ns, rows),
    }
}

/// Coefficient vector of the incentive row h(player, from, to) >= 0: for
/// each profile where `player` plays `from`, the payoff loss of switching
/// to `to` against the rest of the profile.
pub(crate) fn incentive_coeffs(game: &Game, player: usize, from: usize, to: usize) -> Vec<Rational> {
    let ns = game.num_profiles();
    let mut coeffs = vec![Rational::zero(); ns];
    for f in game.profiles_with(player, from) {
        let mut dev = game.profile_from_flat(f);
        dev.0[player] = to;
        coeffs[f] = game.payoff_flat(player, f) - game.payoff(player, &dev);
    }
    coeffs
}

impl CePolytope {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn labels(&self) -> &[ConstraintLabel] {
        &self.labels
    }

    pub fn num_rows(&self) -> usize {
        self.labels.len()
    }

    /// Exact vertex list of the CE polytope.
    pub fn vertices(&self) -> Result<&[Vec<Rational>], LpError> {
        self.polytope.vertices()
    }
}

/// Labels of the CE constraints holding with equality at a point. The
/// normalization row is always present; comparisons ignore it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingSet {
    pub labels: BTreeSet<ConstraintLabel>,
}

impl BindingSet {
    /// Equality of binding sets modulo the always-binding normalization.
    pub fn same_as(&self, other: &BindingSet) -> bool {
        let strip = |s: &BindingSet| -> BTreeSet<ConstraintLabel> {
            s.labels
                .iter()
                .filter(|l| **l != ConstraintLabel::Normalization)
                .cloned()
                .collect()
        };
        strip(self) == strip(other)
    }
}

/// Whether the game has a unique correlated equilibrium, and the unique CE
/// when it does. Decided by ranging every coordinate of the CE polytope
/// over one warm-started solver; the polytope is a point iff every
/// coordinate range is degenerate.
pub fn is_ce_unique(game: &Game) -> Result<(bool, Option<CorrelatedStrategy>), CeError> {
    let ce = build_ce_polytope(game);
    match ce.polytope.coordinate_ranges(true)? {
        None => Ok((false, None)),
        Some(ranges) => {
            let probs: Vec<Rational> = ranges.into_iter().map(|(lo, _)| lo).collect();
            let mu = CorrelatedStrategy::for_game(game, probs)?;
            Ok((true, Some(mu)))
        }
    }
}

/// Number of extreme correlated equilibria (vertices of the CE polytope).
pub fn count_extreme_ce(game: &Game) -> Result<usize, CeError> {
    let ce = build_ce_polytope(game);
    Ok(ce.vertices()?.len())
}

/// Maximum probability a single profile can carry in any correlated
/// equilibrium. Zero certifies the profile is unplayed in every CE.
pub fn max_profile_probability(game: &Game, profile: &PureProfile) -> Result<Rational, CeError> {
    game.check_profile(profile)?;
    let ce = build_ce_polytope(game);
    let flat = game.flat_index(profile);
    let mut solver = ce
        .polytope
        .solver()?
        .ok_or(LpError::InfeasiblePolytope)?;
    let mut obj = vec![Rational::zero(); game.num_profiles()];
    obj[flat] = Rational::one();
    match solver.maximize(&obj)? {
        None => Err(LpError::UnboundedPolytope(flat).into()),
        Some(()) => Ok(solver.objective_value()),
    }
}

/// Maximal probabilities of all profiles, sharing one warm solver.
pub fn max_profile_probabilities(game: &Game) -> Result<Vec<Rational>, CeError> {
    let ce = build_ce_polytope(game);
    let ns = game.num_profiles();
    let mut solver = ce
        .polytope
        .solver()?
        .ok_or(LpError::InfeasiblePolytope)?;
    let mut out = Vec::with_capacity(ns);
    let mut obj = vec![Rational::zero(); ns];
    for f in 0..ns {
        obj[f] = Rational::one();
        match solver.maximize(&obj)? {
            None => return Err(LpError::UnboundedPolytope(f).into()),
            Some(()) => out.push(solver.objective_value()),
        }
        obj[f] = Rational::zero();
    }
    Ok(out)
}

/// The exact set of CE constraints binding at a correlated equilibrium.
pub fn binding_constraints(game: &Game, mu: &CorrelatedStrategy) -> Result<BindingSet, CeError> {
    if !is_correlated_equilibrium(game, mu)? {
        return Err(CeError::NotCorrelatedEquilibrium);
    }
    let ce = build_ce_polytope(game);
    let labels = ce
        .polytope
        .tight_row_indices(mu.probs())
        .into_iter()
        .map(|i| ce.labels[i].clone())
        .collect();
    Ok(BindingSet { labels })
}

/// Whether two correlated equilibria of same-shaped games satisfy exactly
/// the same nonnegativity and incentive constraints with equality.
pub fn same_binding_sets(
    g1: &Game,
    mu1: &CorrelatedStrategy,
    g2: &Game,
    mu2: &CorrelatedStrategy,
) -> Result<bool, CeError> {
    if g1.strategy_counts() != g2.strategy_counts() {
        return Err(CeError::ShapeMismatch);
    }
    let b1 = binding_constraints(g1, mu1)?;
    let b2 = binding_constraints(g2, mu2)?;
    Ok(b1.same_as(&b2))
}

/// Factorizes a unique CE into its marginals, failing loudly when the CE is
/// not a product distribution (which would contradict it being a Nash
/// equilibrium).
pub fn factorize_unique_ce(
    game: &Game,
    mu: &CorrelatedStrategy,
) -> Result<crate::strategy::MixedProfile, CeError> {
    if !mu.is_product(game) {
        return Err(CeError::NotProduct);
    }
    Ok(mu.marginals(game))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{is_nash, is_quasi_strict};
    use crate::rational::{rat, rint};
    use crate::strategy::MixedProfile;

    fn cyclic_3x3() -> Game {
        Game::bimatrix(
            vec![
                vec![rint(0), rint(2), rint(1)],
                vec![rint(1), rint(0), rint(2)],
                vec![rint(2), rint(1), rint(0)],
            ],
            vec![
                vec![rint(0), rint(1), rint(2)],
                vec![rint(2), rint(0), rint(1)],
                vec![rint(1), rint(2), rint(0)],
            ],
        )
        .unwrap()
    }

    fn prisoners_dilemma() -> Game {
        Game::bimatrix(
            vec![vec![rint(3), rint(0)], vec![rint(5), rint(1)]],
            vec![vec![rint(3), rint(5)], vec![rint(0), rint(1)]],
        )
        .unwrap()
    }

    #[test]
    fn row_counts_match_formula() {
        // 2x2: 4 + 1 + 4
        let g = Game::new(vec![2, 2], vec![vec![rint(0); 4]; 2]).unwrap();
        assert_eq!(build_ce_polytope(&g).num_rows(), 9);
        // 2x2x2: 8 + 1 + 6
        let g = Game::new(vec![2, 2, 2], vec![vec![rint(0); 8]; 3]).unwrap();
        assert_eq!(build_ce_polytope(&g).num_rows(), 15);
        // 4x4: 16 + 1 + 24
        let g = Game::new(vec![4, 4], vec![vec![rint(0); 16]; 2]).unwrap();
        assert_eq!(build_ce_polytope(&g).num_rows(), 41);
    }

    #[test]
    fn membership_agrees_with_h_values() {
        let g = cyclic_3x3();
        let ce = build_ce_polytope(&g);
        let off: Vec<usize> = (0..9).filter(|f| f / 3 != f % 3).collect();
        let mu = CorrelatedStrategy::uniform_on(&g, &off);
        assert!(ce.polytope().contains(mu.probs()));
        let not_ce = CorrelatedStrategy::point_mass(&g, &PureProfile(vec![0, 0]));
        assert_eq!(
            ce.polytope().contains(not_ce.probs()),
            is_correlated_equilibrium(&g, &not_ce).unwrap()
        );
    }

    #[test]
    fn dominance_solvable_has_unique_ce() {
        let g = prisoners_dilemma();
        let (unique, mu) = is_ce_unique(&g).unwrap();
        assert!(unique);
        let mu = mu.unwrap();
        // point mass on (Defect, Defect)
        assert_eq!(*mu.prob_flat(3), rint(1));
        assert_eq!(count_extreme_ce(&g).unwrap(), 1);
        // the unique CE factorizes into a
        // quasi-strict Nash equilibrium
        let sigma = factorize_unique_ce(&g, &mu).unwrap();
        assert!(is_nash(&g, &sigma).unwrap());
        assert!(is_quasi_strict(&g, &sigma).unwrap());
    }

    #[test]
    fn cyclic_game_ce_not_unique() {
        let g = cyclic_3x3();
        let (unique, mu) = is_ce_unique(&g).unwrap();
        assert!(!unique);
        assert!(mu.is_none());
    }

    #[test]
    fn max_profile_probability_results() {
        let g = prisoners_dilemma();
        // profiles involving the dominated strategy carry zero probability
        assert_eq!(
            max_profile_probability(&g, &PureProfile(vec![0, 0])).unwrap(),
            rint(0)
        );
        assert_eq!(
            max_profile_probability(&g, &PureProfile(vec![1, 1])).unwrap(),
            rint(1)
        );
        // every off-diagonal profile of the cyclic game is playable
        let g = cyclic_3x3();
        let p = max_profile_probability(&g, &PureProfile(vec![0, 1])).unwrap();
        assert!(p >= rat(1, 6));
    }

    #[test]
    fn binding_sets_for_known_equilibria() {
        // completely mixed equilibrium of matching pennies: all incentive
        // rows bind, no nonnegativity row binds
        let g = Game::bimatrix(
            vec![vec![rint(1), rint(-1)], vec![rint(-1), rint(1)]],
            vec![vec![rint(-1), rint(1)], vec![rint(1), rint(-1)]],
        )
        .unwrap();
        let sigma = MixedProfile::new(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(1, 2)],
        ])
        .unwrap();
        let mu = CorrelatedStrategy::from_product(&g, &sigma);
        let binding = binding_constraints(&g, &mu).unwrap();
        for l in &binding.labels {
            assert!(!matches!(l, ConstraintLabel::Nonnegativity(_)));
        }
        let incentives = binding
            .labels
            .iter()
            .filter(|l| matches!(l, ConstraintLabel::Incentive { .. }))
            .count();
        assert_eq!(incentives, 4);

        // off-diagonal uniform CE of the cyclic game: exactly the 3
        // diagonal nonnegativity rows bind
        let g = cyclic_3x3();
        let off: Vec<usize> = (0..9).filter(|f| f / 3 != f % 3).collect();
        let mu = CorrelatedStrategy::uniform_on(&g, &off);
        let binding = binding_constraints(&g, &mu).unwrap();
        let nonneg: Vec<usize> = binding
            .labels
            .iter()
            .filter_map(|l| match l {
                ConstraintLabel::Nonnegativity(f) => Some(*f),
                _ => None,
            })
            .collect();
        assert_eq!(nonneg, vec![0, 4, 8]);
    }

    #[test]
    fn binding_set_comparisons() {
        let g = prisoners_dilemma();
        let mu = is_ce_unique(&g).unwrap().1.unwrap();
        assert!(same_binding_sets(&g, &mu, &g, &mu).unwrap());
        // different support => different nonnegativity labels
        let g2 = cyclic_3x3();
        let off: Vec<usize> = (0..9).filter(|f| f / 3 != f % 3).collect();
        let mu_off = CorrelatedStrategy::uniform_on(&g2, &off);
        let diag = CorrelatedStrategy::uniform_on(&g2, &[0, 4, 8]);
        // diag is not a CE of the cyclic game; use the product Nash instead
        let sigma = MixedProfile::new(vec![
            vec![rat(1, 3); 3],
            vec![rat(1, 3); 3],
        ])
        .unwrap();
        let mu_nash = CorrelatedStrategy::from_product(&g2, &sigma);
        assert!(!same_binding_sets(&g2, &mu_off, &g2, &mu_nash).unwrap());
        drop(diag);
        // shape mismatch is an error
        assert!(same_binding_sets(&g, &mu, &g2, &mu_off).is_err());
    }

    #[test]
    fn non_ce_rejected_by_binding_constraints() {
        let g = cyclic_3x3();
        let mu = CorrelatedStrategy::point_mass(&g, &PureProfile(vec![0, 0]));
        assert!(matches!(
            binding_constraints(&g, &mu),
            Err(CeError::NotCorrelatedEquilibrium)
        ));
    }
}
