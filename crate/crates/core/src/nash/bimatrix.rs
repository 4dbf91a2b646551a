//! Bimatrix Nash enumeration through the two labeled best-response
//! polytopes. Every extreme equilibrium is a completely labeled pair of
//! polytope vertices; degeneracy shows up as a vertex carrying more labels
//! than its dimension.

use super::{NashError, NashReport};
use crate::equilibrium::is_nash;
use crate::game::Game;
use crate::lp::{LpRow, Polytope, RowRel};
use crate::rational::Rational;
use crate::strategy::MixedProfile;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Enumerates all extreme Nash equilibria of a two-player game.
pub fn enumerate_nash_bimatrix(game: &Game) -> Result<NashReport, NashError> {
    if game.num_players() != 2 {
        return Err(NashError::WrongShape("a two-player game"));
    }
    let m = game.strategy_counts()[0];
    let k = game.strategy_counts()[1];

    // shift payoffs so both matrices are strictly positive; equilibria are
    // invariant under adding a constant to one player's payoffs
    let a = positive_matrix(game, 0, m, k);
    let b = positive_matrix(game, 1, m, k);

    // P = {x >= 0, B^T x <= 1}, labels: own strategies at 0, opponent
    // strategies tight (best responses)
    let mut p_rows = Vec::new();
    for i in 0..m {
        let mut c = vec![Rational::zero(); m];
        c[i] = Rational::one();
        p_rows.push(LpRow::new(c, RowRel::Ge, Rational::zero()));
    }
    for j in 0..k {
        let coeffs: Vec<Rational> = (0..m).map(|i| b[i][j].clone()).collect();
        p_rows.push(LpRow::new(coeffs, RowRel::Le, Rational::one()));
    }
    let p_poly = Polytope::new(m, p_rows);

    let mut q_rows = Vec::new();
    for j in 0..k {
        let mut c = vec![Rational::zero(); k];
        c[j] = Rational::one();
        q_rows.push(LpRow::new(c, RowRel::Ge, Rational::zero()));
    }
    for i in 0..m {
        let coeffs: Vec<Rational> = (0..k).map(|j| a[i][j].clone()).collect();
        q_rows.push(LpRow::new(coeffs, RowRel::Le, Rational::one()));
    }
    let q_poly = Polytope::new(k, q_rows);

    let p_vertices: Vec<Vec<Rational>> = p_poly
        .vertices()?
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let q_vertices: Vec<Vec<Rational>> = q_poly
        .vertices()?
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();

    // labels 0..m-1 are row strategies, m..m+k-1 column strategies
    let p_labels: Vec<BTreeSet<usize>> = p_vertices
        .iter()
        .map(|x| {
            let mut l = BTreeSet::new();
            for i in 0..m {
                if x[i].is_zero() {
                    l.insert(i);
                }
            }
            for j in 0..k {
                let v: Rational = (0..m).map(|i| &x[i] * &b[i][j]).sum();
                if v.is_one() {
                    l.insert(m + j);
                }
            }
            l
        })
        .collect();
    let q_labels: Vec<BTreeSet<usize>> = q_vertices
        .iter()
        .map(|y| {
            let mut l = BTreeSet::new();
            for i in 0..m {
                let v: Rational = (0..k).map(|j| &a[i][j] * &y[j]).sum();
                if v.is_one() {
                    l.insert(i);
                }
            }
            for j in 0..k {
                if y[j].is_zero() {
                    l.insert(m + j);
                }
            }
            l
        })
        .collect();

    let degenerate = p_labels.iter().any(|l| l.len() > m) || q_labels.iter().any(|l| l.len() > k);

    let mut equilibria = Vec::new();
    let mut pairing = Vec::new();
    for (pi, pl) in p_labels.iter().enumerate() {
        for (qi, ql) in q_labels.iter().enumerate() {
            if pl.union(ql).count() == m + k {
                let x = normalize(&p_vertices[pi]);
                let y = normalize(&q_vertices[qi]);
                let profile = MixedProfile::new(vec![x, y])?;
                if !is_nash(game, &profile)? {
                    return Err(NashError::Internal(
                        "completely labeled pair failed exact Nash verification".into(),
                    ));
                }
                pairing.push((pi, qi));
                equilibria.push(profile);
            }
        }
    }
    super::sort_profiles(&mut equilibria);

    Ok(NashReport {
        equilibria,
        complete: true,
        degenerate,
        pairing,
    })
}

fn positive_matrix(game: &Game, player: usize, m: usize, k: usize) -> Vec<Vec<Rational>> {
    let mat = game.matrix_of(player);
    let min = mat
        .iter()
        .flatten()
        .min()
        .cloned()
        .expect("nonempty matrix");
    let shift = Rational::one() - min;
    (0..m)
        .map(|i| (0..k).map(|j| &mat[i][j] + &shift).collect())
        .collect()
}

fn normalize(v: &[Rational]) -> Vec<Rational> {
    let total: Rational = v.iter().sum();
    v.iter().map(|x| x / &total).collect()
}
