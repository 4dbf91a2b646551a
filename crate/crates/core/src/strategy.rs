//! Mixed strategy profiles and correlated strategies, validated exactly.
//!
//! Validation rejects off-simplex vectors instead of renormalizing them:
//! a distribution that does not sum to exactly 1 is a construction bug.

use crate::game::{Game, GameError, PureProfile};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// One exact probability vector per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    strategies: Vec<Vec<Rational>>,
}

impl MixedProfile {
    pub fn new(strategies: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        for sigma in &strategies {
            validate_simplex(sigma)?;
        }
        Ok(MixedProfile { strategies })
    }

    /// The degenerate mixture playing `profile` with probability 1.
    pub fn pure(counts: &[usize], profile: &PureProfile) -> Self {
        let strategies = counts
            .iter()
            .zip(&profile.0)
            .map(|(&m, &s)| {
                let mut v = vec![Rational::zero(); m];
                v[s] = Rational::one();
                v
            })
            .collect();
        MixedProfile { strategies }
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, player: usize) -> &[Rational] {
        &self.strategies[player]
    }

    pub fn prob(&self, player: usize, strategy: usize) -> &Rational {
        &self.strategies[player][strategy]
    }

    pub fn matches(&self, game: &Game) -> Result<(), GameError> {
        if self.strategies.len() != game.num_players()
            || self
                .strategies
                .iter()
                .zip(game.strategy_counts())
                .any(|(s, &m)| s.len() != m)
        {
            return Err(GameError::MixedShape);
        }
        Ok(())
    }

    /// Per-player support sets.
    pub fn support(&self) -> SupportSet {
        SupportSet {
            per_player: self
                .strategies
                .iter()
                .map(|s| {
                    s.iter()
                        .enumerate()
                        .filter(|(_, p)| p.is_positive())
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect(),
        }
    }

    /// True if every player's strategy is a point mass.
    pub fn is_pure(&self) -> bool {
        self.strategies
            .iter()
            .all(|s| s.iter().filter(|p| p.is_positive()).count() == 1)
    }

    /// The pure profile when `is_pure`, if any.
    pub fn as_pure(&self) -> Option<PureProfile> {
        let mut choices = Vec::with_capacity(self.strategies.len());
        for s in &self.strategies {
            let support: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(i, _)| i)
                .collect();
            match support.as_slice() {
                [only] => choices.push(*only),
                _ => return None,
            }
        }
        Some(PureProfile(choices))
    }

    /// Probability of a pure profile under the product distribution.
    pub fn profile_probability(&self, profile: &PureProfile) -> Rational {
        self.strategies
            .iter()
            .zip(&profile.0)
            .fold(Rational::one(), |acc, (s, &c)| acc * &s[c])
    }
}

fn validate_simplex(v: &[Rational]) -> Result<(), GameError> {
    if v.is_empty() {
        return Err(GameError::MixedShape);
    }
    let mut sum = Rational::zero();
    for p in v {
        if p.is_negative() {
            return Err(GameError::NegativeProbability);
        }
        sum += p;
    }
    if !sum.is_one() {
        return Err(GameError::NotNormalized);
    }
    Ok(())
}

/// An exact probability distribution over pure profiles, stored in flat
/// profile order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelatedStrategy {
    probs: Vec<Rational>,
}

impl CorrelatedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self, GameError> {
        validate_simplex(&probs)?;
        Ok(CorrelatedStrategy { probs })
    }

    pub fn for_game(game: &Game, probs: Vec<Rational>) -> Result<Self, GameError> {
        if probs.len() != game.num_profiles() {
            return Err(GameError::CorrelatedSize {
                got: probs.len(),
                expected: game.num_profiles(),
            });
        }
        CorrelatedStrategy::new(probs)
    }

    /// Point mass on one profile.
    pub fn point_mass(game: &Game, profile: &PureProfile) -> Self {
        let mut probs = vec![Rational::zero(); game.num_profiles()];
        probs[game.flat_index(profile)] = Rational::one();
        CorrelatedStrategy { probs }
    }

    /// Uniform distribution over the given flat profile indices.
    pub fn uniform_on(game: &Game, flats: &[usize]) -> Self {
        let share = Rational::new(1.into(), (flats.len() as i64).into());
        let mut probs = vec![Rational::zero(); game.num_profiles()];
        for &f in flats {
            probs[f] = share.clone();
        }
        CorrelatedStrategy { probs }
    }

    /// The product distribution induced by a mixed profile.
    pub fn from_product(game: &Game, sigma: &MixedProfile) -> Self {
        let probs = game
            .profiles()
            .map(|p| sigma.profile_probability(&p))
            .collect();
        CorrelatedStrategy { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob_flat(&self, flat: usize) -> &Rational {
        &self.probs[flat]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn matches(&self, game: &Game) -> Result<(), GameError> {
        if self.probs.len() != game.num_profiles() {
            return Err(GameError::CorrelatedSize {
                got: self.probs.len(),
                expected: game.num_profiles(),
            });
        }
        Ok(())
    }

    /// Flat indices of profiles with positive probability.
    pub fn support_profiles(&self) -> BTreeSet<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    /// Marginal distribution of one player's strategy.
    pub fn marginal(&self, game: &Game, player: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); game.strategy_counts()[player]];
        for (f, p) in self.probs.iter().enumerate() {
            out[game.profile_from_flat(f).choice(player)] += p;
        }
        out
    }

    /// All marginals as a mixed profile. Fails only if a marginal is not a
    /// distribution, which cannot happen for a valid correlated strategy.
    pub fn marginals(&self, game: &Game) -> MixedProfile {
        let strategies = (0..game.num_players())
            .map(|i| self.marginal(game, i))
            .collect();
        MixedProfile::new(strategies).expect("marginals of a distribution are distributions")
    }

    /// True if this distribution equals the product of its own marginals.
    pub fn is_product(&self, game: &Game) -> bool {
        let sigma = self.marginals(game);
        *self == CorrelatedStrategy::from_product(game, &sigma)
    }
}

/// Per-player supports of a mixed profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    pub per_player: Vec<BTreeSet<usize>>,
}

impl SupportSet {
    pub fn player(&self, i: usize) -> &BTreeSet<usize> {
        &self.per_player[i]
    }
}

use num_traits::Signed;
