//! Dual vectors (per-player transition matrices with nonnegative total
//! deviation slack at every profile), the strong dual vector strict on all
//! profiles unplayed in every correlated equilibrium, invariance tests,
//! and the reduced game over recurrent classes.

mod markov;

pub use markov::recurrent_classes;

use crate::ce::{self, CeError};
use crate::equilibrium::expected_payoff;
use crate::game::{Game, GameError};
use crate::lp::{LpError, LpRow, PolytopeSolver, RowRel};
use crate::rational::Rational;
use crate::strategy::MixedProfile;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error("transition matrix dimensions do not match")]
    DimensionMismatch,
    #[error("matrix rows are not probability distributions")]
    NotRowStochastic,
    #[error("deviation slack is negative at profile {flat}")]
    NegativeSlack { flat: usize },
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("no strict slack achievable at zero-probability profile {flat}; this contradicts duality and indicates a solver bug")]
    StrongDualUnavailable { flat: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// One row-stochastic transition matrix per player, with every profile's
/// total deviation slack nonnegative (verified exactly at construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVector {
    transitions: Vec<Vec<Vec<Rational>>>,
}

impl DualVector {
    /// Validates row-stochasticity and the slack conditions against a game.
    pub fn new(game: &Game, transitions: Vec<Vec<Vec<Rational>>>) -> Result<Self, DualError> {
        if transitions.len() != game.num_players()
            || transitions
                .iter()
                .zip(game.strategy_counts())
                .any(|(t, &m)| t.len() != m)
        {
            return Err(DualError::DimensionMismatch);
        }
        for t in &transitions {
            markov::check_row_stochastic(t)?;
        }
        let dv = DualVector { transitions };
        dv.slack_profile(game)?;
        Ok(dv)
    }

    /// The identity dual vector (always feasible, all slacks zero).
    pub fn identity(game: &Game) -> Self {
        let transitions = game
            .strategy_counts()
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|a| {
                        (0..m)
                            .map(|b| if a == b { Rational::one() } else { Rational::zero() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DualVector { transitions }
    }

    pub fn player(&self, i: usize) -> &[Vec<Rational>] {
        &self.transitions[i]
    }

    pub fn transitions(&self) -> &[Vec<Vec<Rational>>] {
        &self.transitions
    }

    /// Exact slack of the deviation inequality at every profile; errors on
    /// the first negative slack.
    pub fn slack_profile(&self, game: &Game) -> Result<SlackProfile, DualError> {
        let ns = game.num_profiles();
        let mut slacks = Vec::with_capacity(ns);
        for flat in 0..ns {
            let profile = game.profile_from_flat(flat);
            let mut slack = Rational::zero();
            for i in 0..game.num_players() {
                let s_i = profile.choice(i);
                // payoff of the transported strategy against the rest
                for (b, w) in self.transitions[i][s_i].iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let mut moved = profile.clone();
                    moved.0[i] = b;
                    slack += w * game.payoff(i, &moved);
                }
                slack -= game.payoff_flat(i, flat);
            }
            if slack.is_negative() {
                return Err(DualError::NegativeSlack { flat });
            }
            slacks.push(slack);
        }
        Ok(SlackProfile { slacks })
    }
}

/// Per-profile slack of the dual inequality, indexed by flat profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackProfile {
    slacks: Vec<Rational>,
}

impl SlackProfile {
    pub fn slack_flat(&self, flat: usize) -> &Rational {
        &self.slacks[flat]
    }

    pub fn slacks(&self) -> &[Rational] {
        &self.slacks
    }

    /// Flat profiles with strictly positive slack.
    pub fn strict_profiles(&self) -> Vec<usize> {
        self.slacks
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_positive())
            .map(|(f, _)| f)
            .collect()
    }
}

/// The transported mixed strategy `alpha * tau`.
pub fn apply_transition(
    alpha_i: &[Vec<Rational>],
    tau: &[Rational],
) -> Result<Vec<Rational>, DualError> {
    let m = alpha_i.len();
    if tau.len() != m || alpha_i.iter().any(|row| row.len() != m) {
        return Err(DualError::DimensionMismatch);
    }
    let mut out = vec![Rational::zero(); m];
    for (s, weight) in tau.iter().enumerate() {
        if weight.is_zero() {
            continue;
        }
        for (t, p) in alpha_i[s].iter().enumerate() {
            if !p.is_zero() {
                out[t] += weight * p;
            }
        }
    }
    Ok(out)
}

/// Exact fixed-point test `alpha * tau = tau`.
pub fn is_invariant(alpha_i: &[Vec<Rational>], tau: &[Rational]) -> Result<bool, DualError> {
    Ok(apply_transition(alpha_i, tau)? == tau)
}

/// Variable layout of the dual LP: all transition entries of player 0,
/// then player 1, and so on; entry (a, b) of player i sits at
/// offset(i) + a*m_i + b.
struct DualLayout {
    offsets: Vec<usize>,
    counts: Vec<usize>,
    total: usize,
}

impl DualLayout {
    fn new(game: &Game) -> Self {
        let counts = game.strategy_counts().to_vec();
        let mut offsets = Vec::with_capacity(counts.len());
        let mut total = 0;
        for &m in &counts {
            offsets.push(total);
            total += m * m;
        }
        DualLayout {
            offsets,
            counts,
            total,
        }
    }

    fn var(&self, player: usize, from: usize, to: usize) -> usize {
        self.offsets[player] + from * self.counts[player] + to
    }

    fn unpack(&self, x: &[Rational]) -> Vec<Vec<Vec<Rational>>> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                (0..m)
                    .map(|a| (0..m).map(|b| x[self.var(i, a, b)].clone()).collect())
                    .collect()
            })
            .collect()
    }
}

/// Feasibility rows of the dual LP: entry nonnegativity, row-stochasticity,
/// and one slack row per profile.
fn dual_feasibility_rows(game: &Game, layout: &DualLayout) -> Vec<LpRow> {
    let mut rows = Vec::new();
    for v in 0..layout.total {
        let mut c = vec![Rational::zero(); layout.total];
        c[v] = Rational::one();
        rows.push(LpRow::new(c, RowRel::Ge, Rational::zero()));
    }
    for (i, &m) in layout.counts.iter().enumerate() {
        for a in 0..m {
            let mut c = vec![Rational::zero(); layout.total];
            for b in 0..m {
                c[layout.var(i, a, b)] = Rational::one();
            }
            rows.push(LpRow::new(c, RowRel::Eq, Rational::one()));
        }
    }
    for flat in 0..game.num_profiles() {
        let (coeffs, rhs) = slack_row(game, layout, flat);
        rows.push(LpRow::new(coeffs, RowRel::Ge, rhs));
    }
    rows
}

/// The slack of profile `flat` as a linear form in the transition entries:
/// coeffs . alpha >= rhs encodes slack(flat) >= 0.
fn slack_row(game: &Game, layout: &DualLayout, flat: usize) -> (Vec<Rational>, Rational) {
    let profile = game.profile_from_flat(flat);
    let mut coeffs = vec![Rational::zero(); layout.total];
    let mut rhs = Rational::zero();
    for i in 0..game.num_players() {
        let s_i = profile.choice(i);
        for b in 0..layout.counts[i] {
            let mut moved = profile.clone();
            moved.0[i] = b;
            coeffs[layout.var(i, s_i, b)] += game.payoff(i, &moved);
        }
        rhs += game.payoff_flat(i, flat);
    }
    (coeffs, rhs)
}

/// Objective vector whose value at alpha is slack(flat) + constant.
fn slack_objective(game: &Game, layout: &DualLayout, flat: usize) -> Vec<Rational> {
    slack_row(game, layout, flat).0
}

/// Finds a dual vector maximizing the total slack over all profiles.
/// The identity is always feasible, so the LP cannot be infeasible.
pub fn find_dual_vector(game: &Game) -> Result<DualVector, DualError> {
    let layout = DualLayout::new(game);
    let rows = dual_feasibility_rows(game, &layout);
    let mut solver = PolytopeSolver::from_rows(layout.total, &rows)?
        .ok_or_else(|| DualError::Internal("dual LP infeasible despite identity".into()))?;
    let mut total = vec![Rational::zero(); layout.total];
    for flat in 0..game.num_profiles() {
        for (v, c) in slack_objective(game, &layout, flat).into_iter().enumerate() {
            total[v] += c;
        }
    }
    match solver.maximize(&total)? {
        None => Err(DualError::Internal("dual LP unbounded".into())),
        Some(()) => DualVector::new(game, layout.unpack(&solver.primal())),
    }
}

/// Finds a dual vector with strictly positive slack at every profile that
/// has probability zero in all correlated equilibria. For each such profile
/// the slack is maximized separately; the equal-weight average of the
/// maximizers is feasible by convexity and strict wherever any one of them
/// is.
pub fn find_strong_dual_vector(game: &Game) -> Result<(DualVector, SlackProfile), DualError> {
    let max_probs = ce::max_profile_probabilities(game)?;
    let zero_profiles: Vec<usize> = max_probs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_zero())
        .map(|(f, _)| f)
        .collect();

    if zero_profiles.is_empty() {
        let dv = find_dual_vector(game)?;
        let slacks = dv.slack_profile(game)?;
        return Ok((dv, slacks));
    }

    let layout = DualLayout::new(game);
    let rows = dual_feasibility_rows(game, &layout);
    let mut solver = PolytopeSolver::from_rows(layout.total, &rows)?
        .ok_or_else(|| DualError::Internal("dual LP infeasible despite identity".into()))?;

    let share = Rational::new(1.into(), (zero_profiles.len() as i64).into());
    let mut averaged = vec![Rational::zero(); layout.total];
    for &flat in &zero_profiles {
        let obj = slack_objective(game, &layout, flat);
        match solver.maximize(&obj)? {
            None => return Err(DualError::Internal("slack LP unbounded".into())),
            Some(()) => {
                let x = solver.primal();
                let (coeffs, rhs) = slack_row(game, &layout, flat);
                let achieved: Rational = coeffs
                    .iter()
                    .zip(&x)
                    .map(|(c, v)| c * v)
                    .sum::<Rational>()
                    - rhs;
                if !achieved.is_positive() {
                    return Err(DualError::StrongDualUnavailable { flat });
                }
                for (acc, v) in averaged.iter_mut().zip(&x) {
                    *acc += &share * v;
                }
            }
        }
    }

    let dv = DualVector::new(game, layout.unpack(&averaged))?;
    let slacks = dv.slack_profile(game)?;
    for &flat in &zero_profiles {
        if !slacks.slack_flat(flat).is_positive() {
            return Err(DualError::StrongDualUnavailable { flat });
        }
    }
    Ok((dv, slacks))
}

/// The reduced game: each player's strategies become the recurrent classes
/// of her transition matrix, and payoffs are evaluated at the product of
/// the classes' stationary distributions.
#[derive(Debug, Clone)]
pub struct ReducedGame {
    /// Per player: recurrent classes with their stationary distributions
    /// embedded in the original strategy space.
    pub classes: Vec<Vec<(Vec<usize>, Vec<Rational>)>>,
    /// The reduced game over class profiles.
    pub game: Game,
}

impl ReducedGame {
    /// Maps a mixed profile of the reduced game back to the original game:
    /// each class weight spreads over its stationary distribution.
    pub fn lift(&self, reduced: &MixedProfile) -> Result<MixedProfile, DualError> {
        if reduced.num_players() != self.classes.len() {
            return Err(DualError::DimensionMismatch);
        }
        let mut strategies = Vec::with_capacity(self.classes.len());
        for (i, player_classes) in self.classes.iter().enumerate() {
            let weights = reduced.strategy(i);
            if weights.len() != player_classes.len() {
                return Err(DualError::DimensionMismatch);
            }
            let m = player_classes[0].1.len();
            let mut sigma = vec![Rational::zero(); m];
            for (w, (_, stationary)) in weights.iter().zip(player_classes) {
                if w.is_zero() {
                    continue;
                }
                for (s, p) in stationary.iter().enumerate() {
                    if !p.is_zero() {
                        sigma[s] += w * p;
                    }
                }
            }
            strategies.push(sigma);
        }
        Ok(MixedProfile::new(strategies)?)
    }
}

/// Builds the reduced game for a dual vector (validated against the game).
pub fn reduce_game(game: &Game, alpha: &DualVector) -> Result<ReducedGame, DualError> {
    alpha.slack_profile(game)?; // revalidate the dual inequality
    let mut classes = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        classes.push(markov::recurrent_classes(alpha.player(i))?);
    }
    let counts: Vec<usize> = classes.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();
    let mut payoffs = vec![Vec::with_capacity(total); game.num_players()];
    // iterate class profiles in row-major order
    for flat in 0..total {
        let mut idx = flat;
        let mut choice = vec![0usize; counts.len()];
        for i in (0..counts.len()).rev() {
            choice[i] = idx % counts[i];
            idx /= counts[i];
        }
        let strategies: Vec<Vec<Rational>> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| classes[i][c].1.clone())
            .collect();
        let sigma = MixedProfile::new(strategies)?;
        for (i, tensor) in payoffs.iter_mut().enumerate() {
            tensor.push(expected_payoff(game, &sigma, i)?);
        }
    }
    let reduced = Game::new(counts, payoffs)?;
    Ok(ReducedGame {
        classes,
        game: reduced,
    })
}

/// For a game with a unique correlated equilibrium: computes the strong
/// dual vector and checks that each marginal of the unique CE is invariant
/// under the corresponding transition matrix.
pub fn check_claim_invariance(game: &Game) -> Result<bool, DualError> {
    let (unique, mu) = ce::is_ce_unique(game)?;
    let mu = match (unique, mu) {
        (true, Some(mu)) => mu,
        _ => return Err(DualError::Precondition("game must have a unique correlated equilibrium")),
    };
    let sigma = ce::factorize_unique_ce(game, &mu)?;
    let (alpha, _) = find_strong_dual_vector(game)?;
    for i in 0..game.num_players() {
        if !is_invariant(alpha.player(i), sigma.strategy(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}
