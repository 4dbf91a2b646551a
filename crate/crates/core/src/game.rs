//! Finite n-player games in normal form with exact rational payoffs.

use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::Zero;
use serde_json::{json, Value};

/// Errors raised by game construction and game-relative validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("game must have at least one player")]
    NoPlayers,
    #[error("player {player} has no strategies")]
    EmptyStrategySet { player: usize },
    #[error("payoff tensor for player {player} has {got} entries, expected {expected}")]
    PayoffSize {
        player: usize,
        got: usize,
        expected: usize,
    },
    #[error("expected {expected} payoff tensors, got {got}")]
    PayoffCount { expected: usize, got: usize },
    #[error("label lists do not match strategy counts")]
    LabelShape,
    #[error("profile does not match game shape")]
    ProfileShape,
    #[error("strategy index {strategy} out of range for player {player}")]
    StrategyRange { player: usize, strategy: usize },
    #[error("player index {0} out of range")]
    PlayerRange(usize),
    #[error("mixed profile does not match game shape")]
    MixedShape,
    #[error("distribution entry is negative")]
    NegativeProbability,
    #[error("distribution does not sum to 1")]
    NotNormalized,
    #[error("correlated strategy has {got} entries, expected {expected}")]
    CorrelatedSize { got: usize, expected: usize },
    #[error("invalid game JSON: {0}")]
    Json(String),
}

/// A pure strategy profile: one 0-based strategy index per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn choice(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite game: per-player strategy counts and one dense payoff tensor per
/// player, stored flat in row-major profile order (player 1 slowest).
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    strategy_counts: Vec<usize>,
    /// payoffs[player][flat profile index]
    payoffs: Vec<Vec<Rational>>,
    labels: Option<Vec<Vec<String>>>,
}

impl Game {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        if strategy_counts.is_empty() {
            return Err(GameError::NoPlayers);
        }
        for (i, &m) in strategy_counts.iter().enumerate() {
            if m == 0 {
                return Err(GameError::EmptyStrategySet { player: i });
            }
        }
        let expected: usize = strategy_counts.iter().product();
        if payoffs.len() != strategy_counts.len() {
            return Err(GameError::PayoffCount {
                expected: strategy_counts.len(),
                got: payoffs.len(),
            });
        }
        for (i, t) in payoffs.iter().enumerate() {
            if t.len() != expected {
                return Err(GameError::PayoffSize {
                    player: i,
                    got: t.len(),
                    expected,
                });
            }
        }
        Ok(Game {
            strategy_counts,
            payoffs,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, GameError> {
        if labels.len() != self.num_players()
            || labels
                .iter()
                .zip(&self.strategy_counts)
                .any(|(l, &m)| l.len() != m)
        {
            return Err(GameError::LabelShape);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Two-player constructor from row-player and column-player matrices.
    pub fn bimatrix(a: Vec<Vec<Rational>>, b: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        if rows == 0
            || cols == 0
            || a.iter().any(|r| r.len() != cols)
            || b.len() != rows
            || b.iter().any(|r| r.len() != cols)
        {
            return Err(GameError::Json("bimatrix shape mismatch".into()));
        }
        let flat = |m: Vec<Vec<Rational>>| m.into_iter().flatten().collect::<Vec<_>>();
        Game::new(vec![rows, cols], vec![flat(a), flat(b)])
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Total number of pure profiles |S|.
    pub fn num_profiles(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    /// Row-major flat index of a profile (player 1 slowest).
    pub fn flat_index(&self, profile: &PureProfile) -> usize {
        debug_assert_eq!(profile.len(), self.num_players());
        let mut idx = 0;
        for (i, &s) in profile.0.iter().enumerate() {
            debug_assert!(s < self.strategy_counts[i]);
            idx = idx * self.strategy_counts[i] + s;
        }
        idx
    }

    pub fn profile_from_flat(&self, mut idx: usize) -> PureProfile {
        let n = self.num_players();
        let mut choices = vec![0usize; n];
        for i in (0..n).rev() {
            choices[i] = idx % self.strategy_counts[i];
            idx /= self.strategy_counts[i];
        }
        PureProfile(choices)
    }

    pub fn check_profile(&self, profile: &PureProfile) -> Result<(), GameError> {
        if profile.len() != self.num_players() {
            return Err(GameError::ProfileShape);
        }
        for (i, &s) in profile.0.iter().enumerate() {
            if s >= self.strategy_counts[i] {
                return Err(GameError::StrategyRange {
                    player: i,
                    strategy: s,
                });
            }
        }
        Ok(())
    }

    pub fn payoff(&self, player: usize, profile: &PureProfile) -> &Rational {
        &self.payoffs[player][self.flat_index(profile)]
    }

    pub fn payoff_flat(&self, player: usize, flat: usize) -> &Rational {
        &self.payoffs[player][flat]
    }

    pub fn payoff_tensor(&self, player: usize) -> &[Rational] {
        &self.payoffs[player]
    }

    /// Iterates over all pure profiles in flat order.
    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        (0..self.num_profiles()).map(|i| self.profile_from_flat(i))
    }

    /// Flat indices of all profiles where `player` plays `strategy`.
    pub fn profiles_with(&self, player: usize, strategy: usize) -> Vec<usize> {
        (0..self.num_profiles())
            .filter(|&f| self.profile_from_flat(f).choice(player) == strategy)
            .collect()
    }

    /// The payoff matrix of a two-player game for one player, as rows.
    pub fn matrix_of(&self, player: usize) -> Vec<Vec<Rational>> {
        assert_eq!(self.num_players(), 2);
        let (m, k) = (self.strategy_counts[0], self.strategy_counts[1]);
        (0..m)
            .map(|r| {
                (0..k)
                    .map(|c| self.payoffs[player][r * k + c].clone())
                    .collect()
            })
            .collect()
    }

    /// A copy with one payoff entry replaced. Used by perturbation sampling.
    pub fn with_payoff(&self, player: usize, flat: usize, value: Rational) -> Game {
        let mut g = self.clone();
        g.payoffs[player][flat] = value;
        g
    }

    /// True if the game is zero-sum across all players.
    pub fn is_zero_sum(&self) -> bool {
        (0..self.num_profiles()).all(|f| {
            self.payoffs
                .iter()
                .fold(Rational::zero(), |acc, t| acc + &t[f])
                .is_zero()
        })
    }

    // ----- JSON wire format -----
    //
    // {"players": n, "strategies": [m_1..m_n] or [[labels...]...],
    //  "payoffs": [tensor_1, ..., tensor_n]} where tensor_i is a depth-n
    // nested array indexed [s_1][s_2]...[s_n]; each leaf is an integer or a
    // "p/q" string.

    pub fn to_json(&self) -> Value {
        let strategies: Value = match &self.labels {
            Some(labels) => json!(labels),
            None => json!(self.strategy_counts),
        };
        let payoffs: Vec<Value> = (0..self.num_players())
            .map(|p| self.nest_tensor(p, 0, 0))
            .collect();
        json!({
            "players": self.num_players(),
            "strategies": strategies,
            "payoffs": payoffs,
        })
    }

    fn nest_tensor(&self, player: usize, depth: usize, base: usize) -> Value {
        let stride: usize = self.strategy_counts[depth + 1..].iter().product();
        let items: Vec<Value> = (0..self.strategy_counts[depth])
            .map(|s| {
                let at = base + s * stride;
                if depth + 1 == self.num_players() {
                    Value::String(format_rational(&self.payoffs[player][at]))
                } else {
                    self.nest_tensor(player, depth + 1, at)
                }
            })
            .collect();
        Value::Array(items)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json(v: &Value) -> Result<Self, GameError> {
        let err = |m: &str| GameError::Json(m.to_string());
        let obj = v.as_object().ok_or_else(|| err("expected object"))?;
        let n = obj
            .get("players")
            .and_then(Value::as_u64)
            .ok_or_else(|| err("missing players"))? as usize;
        let strategies = obj.get("strategies").ok_or_else(|| err("missing strategies"))?;
        let strat_arr = strategies.as_array().ok_or_else(|| err("strategies must be an array"))?;
        if strat_arr.len() != n {
            return Err(err("strategies length does not match players"));
        }
        let mut counts = Vec::with_capacity(n);
        let mut labels: Option<Vec<Vec<String>>> = None;
        for s in strat_arr {
            match s {
                Value::Number(m) => {
                    counts.push(m.as_u64().ok_or_else(|| err("bad strategy count"))? as usize)
                }
                Value::Array(ls) => {
                    let names: Vec<String> = ls
                        .iter()
                        .map(|l| l.as_str().map(str::to_string).ok_or_else(|| err("bad label")))
                        .collect::<Result<_, _>>()?;
                    counts.push(names.len());
                    labels.get_or_insert_with(Vec::new).push(names);
                }
                _ => return Err(err("strategies entries must be counts or label lists")),
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(err("mixed counts and label lists"));
            }
        }
        let payoff_arr = obj
            .get("payoffs")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing payoffs"))?;
        if payoff_arr.len() != n {
            return Err(err("payoffs length does not match players"));
        }
        let mut payoffs = Vec::with_capacity(n);
        for tensor in payoff_arr {
            let mut flat = Vec::with_capacity(counts.iter().product());
            flatten_tensor(tensor, &counts, 0, &mut flat)?;
            payoffs.push(flat);
        }
        let game = Game::new(counts, payoffs)?;
        match labels {
            Some(l) => game.with_labels(l),
            None => Ok(game),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, GameError> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| GameError::Json(format!("parse error: {e}")))?;
        Game::from_json(&v)
    }
}

fn flatten_tensor(
    v: &Value,
    counts: &[usize],
    depth: usize,
    out: &mut Vec<Rational>,
) -> Result<(), GameError> {
    let err = |m: &str| GameError::Json(m.to_string());
    if depth == counts.len() {
        let r = match v {
            Value::Number(x) => {
                let i = x
                    .as_i64()
                    .ok_or_else(|| err("payoff numbers must be integers; use \"p/q\" strings"))?;
                Rational::from_integer(i.into())
            }
            Value::String(s) => parse_rational(s).map_err(|e| err(&e.to_string()))?,
            _ => return Err(err("payoff leaf must be a number or \"p/q\" string")),
        };
        out.push(r);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| err("payoff tensor nesting too shallow"))?;
    if arr.len() != counts[depth] {
        return Err(err("payoff tensor dimension mismatch"));
    }
    for item in arr {
        flatten_tensor(item, counts, depth + 1, out)?;
    }
    Ok(())
}
