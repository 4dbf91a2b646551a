//! Built-in example games, each a parameterized constructor reproducing a
//! known matrix entry-for-entry. Parameters are exact rationals.

use crate::game::Game;
use crate::rational::{parse_rational, Rational};
use num_traits::One;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("example {example} takes no parameter {param:?}")]
    UnknownParam { example: &'static str, param: String },
    #[error("bad parameter value: {0}")]
    BadValue(String),
}

/// Static description of one registry entry.
#[derive(Debug, Clone, Copy)]
pub struct ExampleInfo {
    pub name: &'static str,
    /// Parameter name and its default value, if the example takes one.
    pub param: Option<(&'static str, &'static str)>,
    /// Parameter values at which the example's documented behavior occurs.
    pub interesting_params: &'static [&'static str],
    pub description: &'static str,
}

pub const EXAMPLES: &[ExampleInfo] = &[
    ExampleInfo {
        name: "flesch-2x2x2",
        param: Some(("eps", "0")),
        interesting_params: &["0", "1/2"],
        description: "three-player mismatching game: unique non-quasi-strict equilibrium at eps=0, a continuum for eps>0",
    },
    ExampleInfo {
        name: "sym-3x3",
        param: Some(("eps", "0")),
        interesting_params: &["0", "1"],
        description: "symmetric game whose unique symmetric equilibrium at eps=0 splits into three for eps>0",
    },
    ExampleInfo {
        name: "counting-3x3",
        param: Some(("eps", "0")),
        interesting_params: &["0", "-1/10", "1/10"],
        description: "equilibrium-counting game: 3/2/4 Nash and 3/2/6 extreme correlated equilibria as eps crosses 0",
    },
    ExampleInfo {
        name: "one-person",
        param: Some(("eps", "0")),
        interesting_params: &["0", "1"],
        description: "one-player game with payoffs (0, eps): a continuum of optima at eps=0",
    },
    ExampleInfo {
        name: "coord-2x2",
        param: Some(("eps", "0")),
        interesting_params: &["0", "1"],
        description: "coordination game with payoffs (1,1) and (-eps,-eps) on the diagonal",
    },
    ExampleInfo {
        name: "moulin-vial-3x3",
        param: None,
        interesting_params: &[],
        description: "cyclic 3x3 game with a unique Nash equilibrium but a correlated equilibrium paying 3/2",
    },
    ExampleInfo {
        name: "moulin-vial-4x4",
        param: Some(("x", "2")),
        interesting_params: &["5/4", "2"],
        description: "the 3x3 cyclic game extended by a safe strategy: unique Nash for x>1, unique correlated equilibrium only for x>3/2",
    },
    ExampleInfo {
        name: "zerosum-3x2",
        param: Some(("eps", "0")),
        interesting_params: &["0", "1"],
        description: "zero-sum game whose row player has a unique optimal strategy only at eps=0",
    },
    ExampleInfo {
        name: "matching-pennies",
        param: None,
        interesting_params: &[],
        description: "2x2 zero-sum matching pennies with payoffs +1/-1",
    },
    ExampleInfo {
        name: "prisoners-dilemma",
        param: None,
        interesting_params: &[],
        description: "dominance-solvable 2x2 game with a strict equilibrium",
    },
];

pub fn list_examples() -> &'static [ExampleInfo] {
    EXAMPLES
}

pub fn example_info(name: &str) -> Option<&'static ExampleInfo> {
    EXAMPLES.iter().find(|e| e.name == name)
}

/// Builds an example at the given parameters; omitted parameters take their
/// documented defaults.
pub fn build_example(name: &str, params: &BTreeMap<String, Rational>) -> Result<Game, RegistryError> {
    let info = example_info(name).ok_or_else(|| RegistryError::UnknownExample(name.to_string()))?;
    for key in params.keys() {
        match info.param {
            Some((expected, _)) if key == expected => {}
            _ => {
                return Err(RegistryError::UnknownParam {
                    example: info.name,
                    param: key.clone(),
                })
            }
        }
    }
    let value = match info.param {
        None => Rational::one(), // unused
        Some((pname, default)) => params
            .get(pname)
            .cloned()
            .unwrap_or_else(|| parse_rational(default).expect("default parses")),
    };
    Ok(match name {
        "flesch-2x2x2" => flesch_2x2x2(&value),
        "sym-3x3" => sym_3x3(&value),
        "counting-3x3" => counting_3x3(&value),
        "one-person" => one_person(&value),
        "coord-2x2" => coord_2x2(&value),
        "moulin-vial-3x3" => moulin_vial_3x3(),
        "moulin-vial-4x4" => moulin_vial_4x4(&value),
        "zerosum-3x2" => zerosum_3x2(&value).to_game(),
        "matching-pennies" => matching_pennies(),
        "prisoners-dilemma" => prisoners_dilemma(),
        _ => unreachable!("covered by example_info"),
    })
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Three players: row (Top/Bottom), column (Left/Right), matrix (West/East).
/// West and East payoff triples as displayed, with (Top,Left,East) for the
/// third player worth 1-eps.
pub fn flesch_2x2x2(eps: &Rational) -> Game {
    let west = [
        [(r(1), r(1), r(1)), (r(0), r(1), r(1))],
        [(r(1), r(1), r(0)), (r(1), r(0), r(1))],
    ];
    let east = [
        [(r(1), r(0), r(1) - eps), (r(1), r(1), r(0))],
        [(r(0), r(1), r(1)), (r(0), r(0), r(0))],
    ];
    let mut tensors: Vec<Vec<Rational>> = (0..3).map(|_| Vec::with_capacity(8)).collect();
    for row in 0..2 {
        for col in 0..2 {
            for mat in 0..2 {
                let (u0, u1, u2) = if mat == 0 {
                    west[row][col].clone()
                } else {
                    east[row][col].clone()
                };
                tensors[0].push(u0);
                tensors[1].push(u1);
                tensors[2].push(u2);
            }
        }
    }
    Game::new(vec![2, 2, 2], tensors)
        .expect("fixed shape")
        .with_labels(vec![
            vec!["T".into(), "B".into()],
            vec!["L".into(), "R".into()],
            vec!["W".into(), "E".into()],
        ])
        .expect("fixed labels")
}

/// Symmetric 3x3 game with (-eps,-eps) at Top-Left.
pub fn sym_3x3(eps: &Rational) -> Game {
    let a = vec![
        vec![-eps.clone(), r(1), r(1)],
        vec![r(0), r(0), r(-1)],
        vec![r(0), r(-1), r(0)],
    ];
    let b: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| a[j][i].clone()).collect())
        .collect();
    Game::bimatrix(a, b)
        .expect("fixed shape")
        .with_labels(vec![
            vec!["T".into(), "M".into(), "B".into()],
            vec!["L".into(), "M".into(), "R".into()],
        ])
        .expect("fixed labels")
}

/// The counting game with (eps,eps) in the middle.
pub fn counting_3x3(eps: &Rational) -> Game {
    let a = vec![
        vec![r(0), r(-1), r(-1)],
        vec![r(-1), eps.clone(), r(-1)],
        vec![r(0), r(0), r(0)],
    ];
    let b = vec![
        vec![r(0), r(-1), r(0)],
        vec![r(-1), eps.clone(), r(0)],
        vec![r(-1), r(-1), r(0)],
    ];
    Game::bimatrix(a, b)
        .expect("fixed shape")
        .with_labels(vec![
            vec!["T".into(), "M".into(), "B".into()],
            vec!["L".into(), "M".into(), "R".into()],
        ])
        .expect("fixed labels")
}

/// One player, two strategies, payoffs (0, eps).
pub fn one_person(eps: &Rational) -> Game {
    Game::new(vec![2], vec![vec![r(0), eps.clone()]]).expect("fixed shape")
}

/// Coordination game: (1,1) at Top-Left, (-eps,-eps) at Bottom-Right.
pub fn coord_2x2(eps: &Rational) -> Game {
    Game::bimatrix(
        vec![vec![r(1), r(0)], vec![r(0), -eps.clone()]],
        vec![vec![r(1), r(0)], vec![r(0), -eps.clone()]],
    )
    .expect("fixed shape")
}

/// The cyclic 3x3 block: unique Nash at uniform with payoff 1, but an
/// off-diagonal correlated equilibrium paying 3/2.
pub fn moulin_vial_3x3() -> Game {
    Game::bimatrix(
        vec![
            vec![r(0), r(2), r(1)],
            vec![r(1), r(0), r(2)],
            vec![r(2), r(1), r(0)],
        ],
        vec![
            vec![r(0), r(1), r(2)],
            vec![r(2), r(0), r(1)],
            vec![r(1), r(2), r(0)],
        ],
    )
    .expect("fixed shape")
}

/// The 3x3 block bordered by a fourth strategy worth x against the block.
pub fn moulin_vial_4x4(x: &Rational) -> Game {
    let a = vec![
        vec![r(0), r(2), r(1), r(-1)],
        vec![r(1), r(0), r(2), r(-1)],
        vec![r(2), r(1), r(0), r(-1)],
        vec![x.clone(), x.clone(), x.clone(), r(0)],
    ];
    let b = vec![
        vec![r(0), r(1), r(2), x.clone()],
        vec![r(2), r(0), r(1), x.clone()],
        vec![r(1), r(2), r(0), x.clone()],
        vec![r(-1), r(-1), r(-1), r(0)],
    ];
    Game::bimatrix(a, b).expect("fixed shape")
}

/// The 3x2 zero-sum counterexample as a matrix game (row maximizer).
pub fn zerosum_3x2(eps: &Rational) -> crate::zerosum::MatrixGame {
    crate::zerosum::MatrixGame::new(vec![
        vec![-eps.clone(), r(0)],
        vec![r(0), r(-1)],
        vec![r(0), r(-1)],
    ])
    .expect("fixed shape")
}

pub fn matching_pennies() -> Game {
    Game::bimatrix(
        vec![vec![r(1), r(-1)], vec![r(-1), r(1)]],
        vec![vec![r(-1), r(1)], vec![r(1), r(-1)]],
    )
    .expect("fixed shape")
}

pub fn prisoners_dilemma() -> Game {
    Game::bimatrix(
        vec![vec![r(3), r(0)], vec![r(5), r(1)]],
        vec![vec![r(3), r(5)], vec![r(0), r(1)]],
    )
    .expect("fixed shape")
}
