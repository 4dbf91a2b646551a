//! Cross-module invariants, property-tested on seeded random corpora.
#![allow(clippy::needless_range_loop)]

mod common;

use equirobust_core::ce;
use equirobust_core::dual;
use equirobust_core::equilibrium::{
    h_value, is_correlated_equilibrium, is_nash, is_quasi_strict, is_strict, payoff_against,
};
use equirobust_core::lp::{LinearProgram, LpRow, Polytope, RowRel};
use equirobust_core::nash::{enumerate_nash_bimatrix, is_dominance_solvable};
use equirobust_core::rational::{rat, rint, Rational};
use equirobust_core::robustness::{self, PerturbationSpec};
use equirobust_core::{CorrelatedStrategy, Game, MixedProfile};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn game_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Game> {
    let n = rows * cols;
    (
        prop::collection::vec(rational_strategy(), n),
        prop::collection::vec(rational_strategy(), n),
    )
        .prop_map(move |(a, b)| Game::new(vec![rows, cols], vec![a, b]).unwrap())
}

/// Random exact point on the k-simplex.
fn simplex_strategy(k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..=6, 1i64..=4), k).prop_map(|weights| {
        let mut v: Vec<Rational> = weights.into_iter().map(|(n, d)| rat(n, d)).collect();
        let total: Rational = v.iter().sum();
        if total.is_zero() {
            v[0] = rint(1);
            return v;
        }
        for x in v.iter_mut() {
            *x /= &total;
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn enumerated_equilibria_satisfy_the_predicate_chain(g in game_strategy(2, 3)) {
        let report = enumerate_nash_bimatrix(&g).unwrap();
        for e in &report.equilibria {
            prop_assert!(is_nash(&g, e).unwrap());
            if is_strict(&g, e).unwrap() {
                prop_assert!(is_quasi_strict(&g, e).unwrap());
            }
            // a Nash equilibrium induces a correlated equilibrium
            let mu = CorrelatedStrategy::from_product(&g, e);
            prop_assert!(is_correlated_equilibrium(&g, &mu).unwrap());
        }
    }

    #[test]
    fn unique_bimatrix_equilibrium_is_quasi_strict(g in game_strategy(3, 3)) {
        // two-player version of the openness machinery: a unique
        // equilibrium of a bimatrix game is necessarily quasi-strict
        let report = enumerate_nash_bimatrix(&g).unwrap();
        if !report.degenerate && report.equilibria.len() == 1 {
            prop_assert!(is_quasi_strict(&g, &report.equilibria[0]).unwrap());
        }
    }

    #[test]
    fn product_deviation_values_factorize(
        g in game_strategy(2, 2),
        rows in simplex_strategy(2),
        cols in simplex_strategy(2),
    ) {
        let sigma = MixedProfile::new(vec![rows, cols]).unwrap();
        let mu = CorrelatedStrategy::from_product(&g, &sigma);
        for i in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    let lhs = h_value(&g, &mu, i, s, t).unwrap();
                    let us = payoff_against(&g, i, s, &sigma).unwrap();
                    let ut = payoff_against(&g, i, t, &sigma).unwrap();
                    prop_assert_eq!(lhs, sigma.prob(i, s) * (us - ut));
                }
            }
        }
    }

    #[test]
    fn strictness_chain_on_random_profiles(
        g in game_strategy(2, 3),
        rows in simplex_strategy(2),
        cols in simplex_strategy(3),
    ) {
        let sigma = MixedProfile::new(vec![rows, cols]).unwrap();
        if is_strict(&g, &sigma).unwrap() {
            prop_assert!(is_quasi_strict(&g, &sigma).unwrap());
        }
        if is_quasi_strict(&g, &sigma).unwrap() {
            prop_assert!(is_nash(&g, &sigma).unwrap());
        }
    }

    #[test]
    fn game_json_roundtrip(g in game_strategy(3, 2)) {
        let text = g.to_json_string();
        prop_assert_eq!(Game::from_json_str(&text).unwrap(), g);
    }
}

#[test]
fn quasi_strict_equilibria_have_the_binding_pattern() {
    // the exact characterization behind support comparisons: for a
    // quasi-strict equilibrium, h(s, t) > 0 iff s is played and t is not
    let mut rng = common::rng(0xA1);
    let mut tested = 0;
    for _ in 0..200 {
        let g = common::random_bimatrix(&mut rng, 3, 3);
        let report = enumerate_nash_bimatrix(&g).unwrap();
        for e in &report.equilibria {
            if !is_quasi_strict(&g, e).unwrap() {
                continue;
            }
            tested += 1;
            let mu = CorrelatedStrategy::from_product(&g, e);
            let support = e.support();
            for i in 0..2 {
                for s in 0..3 {
                    for t in 0..3 {
                        if s == t {
                            continue;
                        }
                        let h = h_value(&g, &mu, i, s, t).unwrap();
                        let expected_positive =
                            support.player(i).contains(&s) && !support.player(i).contains(&t);
                        assert_eq!(h.is_positive(), expected_positive);
                        if !expected_positive {
                            assert!(h.is_zero());
                        }
                    }
                }
            }
        }
        if tested >= 40 {
            break;
        }
    }
    assert!(tested >= 10, "corpus must contain quasi-strict equilibria");
}

#[test]
fn nearby_unique_equilibria_bind_the_same_constraints() {
    // two quasi-strict equilibria with equal supports in nearby games
    // satisfy exactly the same CE constraints with equality
    for seed in 0..10u64 {
        let solvable = common::random_dominance_solvable(0xB00 + seed);
        let g = &solvable.game;
        let delta = &solvable.margin / rint(4);
        let spec = PerturbationSpec::random(delta, 3, seed, 16);
        for perturbed in robustness::sample_perturbations(g, &spec).unwrap() {
            let (u1, mu1) = ce::is_ce_unique(g).unwrap();
            let (u2, mu2) = ce::is_ce_unique(&perturbed).unwrap();
            assert!(u1 && u2, "margin keeps uniqueness (seed {seed})");
            let (mu1, mu2) = (mu1.unwrap(), mu2.unwrap());
            assert_eq!(
                mu1.support_profiles(),
                mu2.support_profiles(),
                "supports persist (seed {seed})"
            );
            assert!(ce::same_binding_sets(g, &mu1, &perturbed, &mu2).unwrap());
        }
    }
}

#[test]
fn ce_vertices_are_correlated_equilibria() {
    let mut rng = common::rng(0xA2);
    for _ in 0..25 {
        let g = common::random_bimatrix(&mut rng, 2, 3);
        let poly = ce::build_ce_polytope(&g);
        let verts = poly.vertices().unwrap();
        assert!(!verts.is_empty(), "a correlated equilibrium always exists");
        for v in verts {
            let mu = CorrelatedStrategy::for_game(&g, v.clone()).unwrap();
            assert!(is_correlated_equilibrium(&g, &mu).unwrap());
        }
        // uniqueness tests and vertex counting must agree
        let (unique, _) = ce::is_ce_unique(&g).unwrap();
        assert_eq!(unique, verts.len() == 1);
        // at least one profile is playable in some CE
        let probs = ce::max_profile_probabilities(&g).unwrap();
        assert!(probs.iter().any(Rational::is_positive));
    }
}

#[test]
fn coordinate_ranges_collapse_iff_single_vertex() {
    let mut rng = common::rng(0xA3);
    for case in 0..20 {
        let q = rng.random_range(2..=3usize);
        let mut rows = Vec::new();
        for k in 0..q {
            let mut c = vec![rint(0); q];
            c[k] = rint(1);
            rows.push(LpRow::new(c, RowRel::Ge, rint(0)));
        }
        rows.push(LpRow::new(vec![rint(1); q], RowRel::Eq, rint(1)));
        for _ in 0..rng.random_range(0..=3) {
            let coeffs: Vec<Rational> = (0..q).map(|_| rint(rng.random_range(-2..=2))).collect();
            rows.push(LpRow::new(coeffs, RowRel::Le, rat(rng.random_range(0..=4), 2)));
        }
        let poly = Polytope::new(q, rows);
        let Some(ranges) = poly.coordinate_ranges(false).ok().flatten() else {
            continue; // the random cut emptied the simplex
        };
        for (lo, hi) in &ranges {
            assert!(lo <= hi, "case {case}");
        }
        let vertex_count = poly.vertices().unwrap().len();
        let all_points = ranges.iter().all(|(lo, hi)| lo == hi);
        assert_eq!(all_points, vertex_count == 1, "case {case}");
    }
}

#[test]
fn strong_dual_complementarity_both_directions() {
    let mut rng = common::rng(0xA4);
    for i in 0..10 {
        let g = common::random_bimatrix(&mut rng, 2, 2);
        let probs = ce::max_profile_probabilities(&g).unwrap();
        let (alpha, slacks) = dual::find_strong_dual_vector(&g).unwrap();
        for (f, prob) in probs.iter().enumerate() {
            // forward: strict slack certifies zero probability in every CE
            if slacks.slack_flat(f).is_positive() {
                assert!(prob.is_zero(), "game {i} profile {f}");
            }
            // converse, by construction of the strong dual vector
            if prob.is_zero() {
                assert!(slacks.slack_flat(f).is_positive(), "game {i} profile {f}");
            }
        }
        // expectation identity against every extreme CE
        let poly = ce::build_ce_polytope(&g);
        for v in poly.vertices().unwrap() {
            let pairing: Rational = (0..4)
                .map(|f| &v[f] * slacks.slack_flat(f))
                .sum();
            assert!(pairing.is_zero(), "game {i}");
        }
        drop(alpha);
    }
}

#[test]
fn reduced_game_equilibria_lift_to_the_original() {
    for seed in 0..8u64 {
        let solvable = common::random_dominance_solvable(0xC00 + seed);
        let g = &solvable.game;
        let (alpha, _) = dual::find_strong_dual_vector(g).unwrap();
        let reduced = dual::reduce_game(g, &alpha).unwrap();
        // enumerate the reduced game's pure equilibria and lift them
        for p in equirobust_core::nash::enumerate_pure_nash(&reduced.game).unwrap() {
            let reduced_profile =
                MixedProfile::pure(reduced.game.strategy_counts(), &p);
            let lifted = reduced.lift(&reduced_profile).unwrap();
            assert!(
                is_nash(g, &lifted).unwrap(),
                "lifted equilibrium must survive (seed {seed})"
            );
        }
    }
}

#[test]
fn unique_strict_equilibria_persist_within_margins() {
    let mut probed = 0;
    for seed in 0..30u64 {
        let solvable = common::random_dominance_solvable(0xD00 + seed);
        let g = &solvable.game;
        if g.num_players() != 2 {
            continue;
        }
        let report = enumerate_nash_bimatrix(g).unwrap();
        if report.degenerate || report.equilibria.len() != 1 {
            continue;
        }
        if !is_strict(g, &report.equilibria[0]).unwrap() {
            continue;
        }
        let delta = &solvable.margin / rint(4);
        let spec = PerturbationSpec::random(delta, 12, seed, 16);
        let probe = robustness::probe_unique_strict(g, &spec).unwrap();
        assert_eq!(probe.persistence_fraction, rint(1), "seed {seed}");
        probed += 1;
    }
    assert!(probed >= 5, "corpus must contain strict unique equilibria");
}

#[test]
fn dominance_solvable_games_have_unique_ce() {
    for seed in 40..55u64 {
        let solvable = common::random_dominance_solvable(seed);
        let ds = is_dominance_solvable(&solvable.game).unwrap();
        assert!(ds.solvable);
        let (unique, mu) = ce::is_ce_unique(&solvable.game).unwrap();
        assert!(unique);
        // the unique CE is the point mass on the surviving profile
        let expected =
            CorrelatedStrategy::point_mass(&solvable.game, &solvable.survivor);
        assert_eq!(mu.unwrap(), expected);
    }
}

/// Independent support-enumeration oracle for bimatrix games. For every
/// pair of equal-size supports it solves the two indifference systems
/// exactly and keeps solutions that are strictly positive on the support
/// and strictly unprofitable to leave. Returns `None` when it detects a
/// degenerate situation (ties or singular systems at an equilibrium), in
/// which case the comparison is skipped.
fn support_enumeration_oracle(g: &Game) -> Option<Vec<(Vec<Rational>, Vec<Rational>)>> {
    let m = g.strategy_counts()[0];
    let k = g.strategy_counts()[1];
    let a = g.matrix_of(0);
    let b = g.matrix_of(1);
    let supports = |n: usize| -> Vec<Vec<usize>> {
        (1u32..(1 << n))
            .map(|mask| (0..n).filter(|&j| mask & (1 << j) != 0).collect())
            .collect()
    };
    let mut found = Vec::new();
    for r_supp in supports(m) {
        for c_supp in supports(k) {
            if r_supp.len() != c_supp.len() {
                continue; // nondegenerate equilibria have square supports
            }
            let size = r_supp.len();
            // y on c_supp equalizing the rows of r_supp, unknowns (y, u)
            let solve_side = |payoff: &dyn Fn(usize, usize) -> Rational,
                              own: &[usize],
                              other: &[usize]|
             -> Option<Vec<Rational>> {
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                let mut rhs: Vec<Rational> = Vec::new();
                for &s in own {
                    let mut row: Vec<Rational> =
                        other.iter().map(|&t| payoff(s, t)).collect();
                    row.push(rint(-1));
                    rows.push(row);
                    rhs.push(rint(0));
                }
                let mut ones = vec![rint(1); size + 1];
                ones[size] = rint(0);
                rows.push(ones);
                rhs.push(rint(1));
                equirobust_core::linalg::solve_unique(&rows, &rhs)
            };
            let Some(yu) = solve_side(&|r, c| a[r][c].clone(), &r_supp, &c_supp) else {
                continue;
            };
            let Some(xv) = solve_side(&|c, r| b[r][c].clone(), &c_supp, &r_supp) else {
                continue;
            };
            let (y_small, u1) = (&yu[..size], &yu[size]);
            let (x_small, u2) = (&xv[..size], &xv[size]);
            if y_small.iter().any(|p| !p.is_positive())
                || x_small.iter().any(|p| !p.is_positive())
            {
                continue;
            }
            let mut x = vec![rint(0); m];
            for (i, &s) in r_supp.iter().enumerate() {
                x[s] = x_small[i].clone();
            }
            let mut y = vec![rint(0); k];
            for (i, &t) in c_supp.iter().enumerate() {
                y[t] = y_small[i].clone();
            }
            // off-support payoffs must be strictly worse
            let mut tie = false;
            let mut dominated = true;
            for r in 0..m {
                if r_supp.contains(&r) {
                    continue;
                }
                let pay: Rational = (0..k).map(|c| &a[r][c] * &y[c]).sum();
                if pay == *u1 {
                    tie = true;
                } else if pay > *u1 {
                    dominated = false;
                }
            }
            for c in 0..k {
                if c_supp.contains(&c) {
                    continue;
                }
                let pay: Rational = (0..m).map(|r| &x[r] * &b[r][c]).sum();
                if pay == *u2 {
                    tie = true;
                } else if pay > *u2 {
                    dominated = false;
                }
            }
            if !dominated {
                continue;
            }
            if tie {
                return None; // an equilibrium with extra best responses
            }
            found.push((x, y));
        }
    }
    found.sort();
    found.dedup();
    Some(found)
}

#[test]
fn bimatrix_enumeration_agrees_with_support_oracle() {
    let mut rng = common::rng(0xA6);
    let mut compared = 0;
    for _ in 0..120 {
        let g = common::random_bimatrix(&mut rng, 3, 3);
        let report = enumerate_nash_bimatrix(&g).unwrap();
        if report.degenerate {
            continue;
        }
        let Some(oracle) = support_enumeration_oracle(&g) else {
            continue;
        };
        let mut from_report: Vec<(Vec<Rational>, Vec<Rational>)> = report
            .equilibria
            .iter()
            .map(|e| (e.strategy(0).to_vec(), e.strategy(1).to_vec()))
            .collect();
        from_report.sort();
        assert_eq!(from_report, oracle);
        compared += 1;
    }
    assert!(compared >= 60, "most random games are nondegenerate");
}

#[test]
fn lp_reported_duals_satisfy_the_documented_identity() {
    let mut rng = common::rng(0xA5);
    for _ in 0..25 {
        let q = rng.random_range(1..=3usize);
        let mut lp = LinearProgram::new(
            (0..q).map(|_| rint(rng.random_range(-3..=3))).collect(),
        );
        for k in 0..q {
            let mut c = vec![rint(0); q];
            c[k] = rint(1);
            lp.add_row(c.clone(), RowRel::Ge, rint(-2));
            lp.add_row(c, RowRel::Le, rint(rng.random_range(0..=3)));
        }
        for _ in 0..rng.random_range(0..=2) {
            let coeffs: Vec<Rational> = (0..q).map(|_| rint(rng.random_range(-2..=2))).collect();
            let rel = if rng.random_bool(0.5) { RowRel::Le } else { RowRel::Ge };
            let rhs = rint(rng.random_range(-1..=4));
            let rhs = if rel == RowRel::Ge { -rhs } else { rhs };
            lp.add_row(coeffs, rel, rhs);
        }
        let Ok(outcome) = equirobust_core::lp::solve(&lp) else {
            continue;
        };
        let Some(sol) = outcome.optimal() else { continue };
        // value identity over reported duals, spelled out by hand
        let mut dual_value = Rational::zero();
        for (k, row) in lp.rows.iter().enumerate() {
            let term = &sol.dual[k] * &row.rhs;
            match row.rel {
                RowRel::Ge => dual_value -= term,
                _ => dual_value += term,
            }
            // sign convention: nonnegative on inequality rows
            if row.rel != RowRel::Eq {
                assert!(!sol.dual[k].is_negative());
            }
        }
        assert_eq!(dual_value, sol.value);
    }
}
