//! Exact-arithmetic analysis of finite normal-form games: correlated
//! equilibrium polytopes, Nash enumeration for small games, dual reduction,
//! the zero-sum auxiliary-game construction, and payoff-perturbation
//! probes. Every computation is over arbitrary-precision rationals; no
//! tolerances appear anywhere.

// index loops over small dense tensors and tableaus read better here than
// iterator chains
#![allow(clippy::needless_range_loop)]

pub mod ce;
pub mod dual;
pub mod equilibrium;
pub mod game;
pub mod linalg;
pub mod lp;
pub mod nash;
pub mod par;
pub mod rational;
pub mod registry;
pub mod robustness;
pub mod strategy;
pub mod zerosum;

pub use game::{Game, GameError, PureProfile};
pub use rational::{format_rational, parse_rational, Rational};
pub use strategy::{CorrelatedStrategy, MixedProfile, SupportSet};
