//! Seeded generators shared by the integration suites.
#![allow(dead_code)] // each test target uses a different subset

use equirobust_core::game::PureProfile;
use equirobust_core::rational::{rat, Rational};
use equirobust_core::Game;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational with single-digit numerator and denominator.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=9))
}

/// Random two-player game of the given shape.
pub fn random_bimatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Game {
    let tensor = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..rows * cols).map(|_| small_rational(rng)).collect()
    };
    Game::new(vec![rows, cols], vec![tensor(rng), tensor(rng)]).expect("valid shape")
}

/// Random zero-sum bimatrix game with both dimensions at most 3.
pub fn random_zero_sum(rng: &mut ChaCha8Rng) -> Game {
    let rows = rng.random_range(1..=3);
    let cols = rng.random_range(1..=3);
    let a: Vec<Rational> = (0..rows * cols)
        .map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=3)))
        .collect();
    let b: Vec<Rational> = a.iter().map(|x| -x).collect();
    Game::new(vec![rows, cols], vec![a, b]).expect("valid shape")
}

/// A generated dominance-solvable game together with the profile that
/// survives iterated elimination and the uniform dominance margin.
pub struct SolvableGame {
    pub game: Game,
    pub survivor: PureProfile,
    pub margin: Rational,
}

/// Builds a dominance-solvable game in reverse: starting from a single
/// root profile, strategies are appended one at a time, each strictly
/// dominated by an earlier strategy of the same player with a fixed margin
/// maintained at every profile created later. Eliminating strategies in
/// reverse addition order therefore solves the game, and the survivor is
/// the root profile. Strategy indices are shuffled afterwards.
pub fn random_dominance_solvable(seed: u64) -> SolvableGame {
    let mut rng = rng(seed);
    let n: usize = if rng.random_bool(0.5) { 2 } else { 3 };
    let mut sizes: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
    if sizes.iter().all(|&m| m == 1) {
        sizes[0] = 2;
    }
    let margin = rat(rng.random_range(1..=2), 1);

    // payoffs[player][profile (pre-shuffle indices)] built incrementally
    let mut payoffs: Vec<HashMap<Vec<usize>, Rational>> = vec![HashMap::new(); n];
    // dominator[player][strategy] = Some(earlier strategy it is dominated by)
    let mut dominator: Vec<Vec<Option<usize>>> = vec![vec![None]; n];
    let mut counts = vec![1usize; n];

    let root = vec![0usize; n];
    for tensor in payoffs.iter_mut() {
        tensor.insert(root.clone(), small_rational(&mut rng));
    }

    // payoff of `player` at `profile`, walking dominance links down to a
    // root strategy whose value is drawn fresh
    fn value_at(
        player: usize,
        profile: &[usize],
        payoffs: &mut Vec<HashMap<Vec<usize>, Rational>>,
        dominator: &[Vec<Option<usize>>],
        margin: &Rational,
        rng: &mut ChaCha8Rng,
    ) -> Rational {
        if let Some(v) = payoffs[player].get(profile) {
            return v.clone();
        }
        let v = match dominator[player][profile[player]] {
            Some(dom) => {
                let mut swapped = profile.to_vec();
                swapped[player] = dom;
                value_at(player, &swapped, payoffs, dominator, margin, rng) - margin
            }
            None => small_rational(rng),
        };
        payoffs[player].insert(profile.to_vec(), v.clone());
        v
    }

    while counts.iter().zip(&sizes).any(|(c, s)| c < s) {
        let candidates: Vec<usize> = (0..n).filter(|&i| counts[i] < sizes[i]).collect();
        let player = candidates[rng.random_range(0..candidates.len())];
        let new_strategy = counts[player];
        let dom = rng.random_range(0..counts[player]);
        dominator[player].push(Some(dom));
        counts[player] = new_strategy + 1;

        // fill payoffs for every profile involving the new strategy
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for (j, &c) in counts.iter().enumerate() {
            let take = if j == player { 1 } else { c };
            let mut next = Vec::with_capacity(combos.len() * take);
            for partial in &combos {
                if j == player {
                    let mut p = partial.clone();
                    p.push(new_strategy);
                    next.push(p);
                } else {
                    for s in 0..take {
                        let mut p = partial.clone();
                        p.push(s);
                        next.push(p);
                    }
                }
            }
            combos = next;
        }
        for profile in combos {
            for p in 0..n {
                value_at(p, &profile, &mut payoffs, &dominator, &margin, &mut rng);
            }
        }
    }

    // shuffle each player's strategy indices
    let perms: Vec<Vec<usize>> = counts
        .iter()
        .map(|&m| {
            let mut p: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                let j = rng.random_range(0..=i);
                p.swap(i, j);
            }
            p // p[old_index] = new_index
        })
        .collect();

    let total: usize = counts.iter().product();
    let mut tensors = vec![vec![Rational::from_integer(0.into()); total]; n];
    let flat_of = |profile: &[usize], counts: &[usize]| -> usize {
        profile
            .iter()
            .zip(counts)
            .fold(0usize, |acc, (&s, &m)| acc * m + s)
    };
    let mut all: Vec<Vec<usize>> = vec![vec![]];
    for &c in &counts {
        let mut next = Vec::with_capacity(all.len() * c);
        for partial in &all {
            for s in 0..c {
                let mut p = partial.clone();
                p.push(s);
                next.push(p);
            }
        }
        all = next;
    }
    for old_profile in &all {
        let new_profile: Vec<usize> = old_profile
            .iter()
            .enumerate()
            .map(|(i, &s)| perms[i][s])
            .collect();
        let idx = flat_of(&new_profile, &counts);
        for p in 0..n {
            tensors[p][idx] = payoffs[p][old_profile].clone();
        }
    }

    let game = Game::new(counts.clone(), tensors).expect("valid construction");
    let survivor = PureProfile((0..n).map(|i| perms[i][0]).collect());
    SolvableGame {
        game,
        survivor,
        margin,
    }
}
