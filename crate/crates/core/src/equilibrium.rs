//! Elementary equilibrium predicates: expected payoffs, deviation values,
//! best responses, Nash / quasi-strict / strict / correlated-equilibrium
//! tests. All exact.

use crate::game::{Game, GameError, PureProfile};
use crate::rational::Rational;
use crate::strategy::{CorrelatedStrategy, MixedProfile, SupportSet};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// Multilinear expected payoff of player `i` under a mixed profile.
pub fn expected_payoff(
    game: &Game,
    sigma: &MixedProfile,
    player: usize,
) -> Result<Rational, GameError> {
    sigma.matches(game)?;
    check_player(game, player)?;
    let mut total = Rational::zero();
    for (flat, profile) in game.profiles().enumerate() {
        let p = sigma.profile_probability(&profile);
        if !p.is_zero() {
            total += p * game.payoff_flat(player, flat);
        }
    }
    Ok(total)
}

/// Expected payoff of player `i` under a correlated strategy.
pub fn expected_payoff_correlated(
    game: &Game,
    mu: &CorrelatedStrategy,
    player: usize,
) -> Result<Rational, GameError> {
    mu.matches(game)?;
    check_player(game, player)?;
    let mut total = Rational::zero();
    for flat in 0..game.num_profiles() {
        let p = mu.prob_flat(flat);
        if !p.is_zero() {
            total += p * game.payoff_flat(player, flat);
        }
    }
    Ok(total)
}

/// The deviation value h: expected gain of following the recommendation
/// `s_i` over switching to `t_i`, summed over opponents' profiles weighted
/// by `mu`. Nonnegative for every triple exactly when `mu` is a correlated
/// equilibrium.
pub fn h_value(
    game: &Game,
    mu: &CorrelatedStrategy,
    player: usize,
    s_i: usize,
    t_i: usize,
) -> Result<Rational, GameError> {
    mu.matches(game)?;
    check_player(game, player)?;
    check_strategy(game, player, s_i)?;
    check_strategy(game, player, t_i)?;
    let mut total = Rational::zero();
    for flat in game.profiles_with(player, s_i) {
        let p = mu.prob_flat(flat);
        if p.is_zero() {
            continue;
        }
        let mut deviated = game.profile_from_flat(flat);
        deviated.0[player] = t_i;
        let diff = game.payoff_flat(player, flat) - game.payoff(player, &deviated);
        total += p * diff;
    }
    Ok(total)
}

/// Exact payoff of playing pure strategy `s_i` against the opponents'
/// components of `sigma`. Player `i`'s own component of `sigma` is ignored.
pub fn payoff_against(
    game: &Game,
    player: usize,
    s_i: usize,
    sigma: &MixedProfile,
) -> Result<Rational, GameError> {
    sigma.matches(game)?;
    check_player(game, player)?;
    check_strategy(game, player, s_i)?;
    let mut total = Rational::zero();
    for flat in game.profiles_with(player, s_i) {
        let profile = game.profile_from_flat(flat);
        let mut weight = num_traits::One::one();
        for (j, &c) in profile.0.iter().enumerate() {
            if j != player {
                weight *= sigma.prob(j, c);
                if Rational::is_zero(&weight) {
                    break;
                }
            }
        }
        if !Rational::is_zero(&weight) {
            total += weight * game.payoff_flat(player, flat);
        }
    }
    Ok(total)
}

/// The set of pure best responses of `player` to the opponents' components
/// of `sigma`.
pub fn pure_best_responses(
    game: &Game,
    player: usize,
    sigma: &MixedProfile,
) -> Result<BTreeSet<usize>, GameError> {
    let m = game.strategy_counts()[player];
    let values: Vec<Rational> = (0..m)
        .map(|s| payoff_against(game, player, s, sigma))
        .collect::<Result<_, _>>()?;
    let best = values.iter().max().cloned().expect("nonempty strategy set");
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(s, _)| s)
        .collect())
}

/// Support of a mixed profile (exact positivity per coordinate).
pub fn support(sigma: &MixedProfile) -> SupportSet {
    sigma.support()
}

/// Nash test: every player's support lies inside her pure-best-response set.
pub fn is_nash(game: &Game, sigma: &MixedProfile) -> Result<bool, GameError> {
    sigma.matches(game)?;
    for i in 0..game.num_players() {
        let pbr = pure_best_responses(game, i, sigma)?;
        let supp = sigma.support();
        if !supp.player(i).is_subset(&pbr) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quasi-strict test: Nash, and every pure best response is in the support.
pub fn is_quasi_strict(game: &Game, sigma: &MixedProfile) -> Result<bool, GameError> {
    sigma.matches(game)?;
    for i in 0..game.num_players() {
        let pbr = pure_best_responses(game, i, sigma)?;
        if pbr != *sigma.support().player(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strict test: pure, and every player's best response is uniquely her own
/// strategy.
pub fn is_strict(game: &Game, sigma: &MixedProfile) -> Result<bool, GameError> {
    sigma.matches(game)?;
    let Some(profile) = sigma.as_pure() else {
        return Ok(false);
    };
    for i in 0..game.num_players() {
        let pbr = pure_best_responses(game, i, sigma)?;
        if pbr.len() != 1 || !pbr.contains(&profile.choice(i)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Correlated-equilibrium membership: all deviation values nonnegative.
pub fn is_correlated_equilibrium(game: &Game, mu: &CorrelatedStrategy) -> Result<bool, GameError> {
    mu.matches(game)?;
    for i in 0..game.num_players() {
        let m = game.strategy_counts()[i];
        for s_i in 0..m {
            for t_i in 0..m {
                if s_i != t_i && h_value(game, mu, i, s_i, t_i)?.is_negative() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pure Nash test without constructing a mixed profile.
pub fn is_pure_nash(game: &Game, profile: &PureProfile) -> Result<bool, GameError> {
    game.check_profile(profile)?;
    let flat = game.flat_index(profile);
    for i in 0..game.num_players() {
        let own = game.payoff_flat(i, flat);
        for t in 0..game.strategy_counts()[i] {
            if t == profile.choice(i) {
                continue;
            }
            let mut dev = profile.clone();
            dev.0[i] = t;
            if game.payoff(i, &dev) > own {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_player(game: &Game, player: usize) -> Result<(), GameError> {
    if player >= game.num_players() {
        return Err(GameError::PlayerRange(player));
    }
    Ok(())
}

fn check_strategy(game: &Game, player: usize, s: usize) -> Result<(), GameError> {
    if s >= game.strategy_counts()[player] {
        return Err(GameError::StrategyRange {
            player,
            strategy: s,
        });
    }
    Ok(())
}
