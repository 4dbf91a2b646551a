//! Recurrent classes and stationary distributions of small exact Markov
//! chains (the transition matrices attached to dual vectors).

use super::DualError;
use crate::linalg;
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

/// Checks that every row is a probability distribution.
pub fn check_row_stochastic(matrix: &[Vec<Rational>]) -> Result<(), DualError> {
    let m = matrix.len();
    for row in matrix {
        if row.len() != m {
            return Err(DualError::DimensionMismatch);
        }
        let mut sum = Rational::zero();
        for p in row {
            if p.is_negative() {
                return Err(DualError::NotRowStochastic);
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(DualError::NotRowStochastic);
        }
    }
    Ok(())
}

/// A recurrent class: its states and the stationary distribution embedded
/// in the full state space.
pub type RecurrentClass = (Vec<usize>, Vec<Rational>);

/// The minimal closed (recurrent) classes of the chain, each with its
/// unique stationary distribution, classes ordered by smallest member.
/// The chain's invariant distributions are exactly the convex combinations
/// of the returned stationaries.
pub fn recurrent_classes(matrix: &[Vec<Rational>]) -> Result<Vec<RecurrentClass>, DualError> {
    check_row_stochastic(matrix)?;
    let m = matrix.len();

    // reachability closure
    let mut reach = vec![vec![false; m]; m];
    for (a, row) in matrix.iter().enumerate() {
        reach[a][a] = true;
        for (b, p) in row.iter().enumerate() {
            if p.is_positive() {
                reach[a][b] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for a in 0..m {
            for b in 0..m {
                if reach[a][b] {
                    for c in 0..m {
                        if reach[b][c] && !reach[a][c] {
                            reach[a][c] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    // strongly connected classes that no edge leaves
    let mut assigned = vec![false; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..m {
        if assigned[a] {
            continue;
        }
        let scc: Vec<usize> = (0..m).filter(|&b| reach[a][b] && reach[b][a]).collect();
        let closed = scc
            .iter()
            .all(|&b| (0..m).all(|c| !matrix[b][c].is_positive() || scc.contains(&c)));
        if closed {
            for &b in &scc {
                assigned[b] = true;
            }
            classes.push(scc);
        } else {
            assigned[a] = true;
        }
    }
    classes.sort();

    let mut out = Vec::with_capacity(classes.len());
    for class in classes {
        let k = class.len();
        // pi P = pi restricted to the class, plus normalization
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(k + 1);
        let mut rhs: Vec<Rational> = Vec::with_capacity(k + 1);
        for (ci, &c) in class.iter().enumerate() {
            let mut row: Vec<Rational> = class
                .iter()
                .map(|&a| matrix[a][c].clone())
                .collect();
            row[ci] -= Rational::one();
            rows.push(row);
            rhs.push(Rational::zero());
        }
        rows.push(vec![Rational::one(); k]);
        rhs.push(Rational::one());
        let pi = linalg::solve_unique(&rows, &rhs).ok_or_else(|| {
            DualError::Internal("stationary system not uniquely solvable".into())
        })?;
        if pi.iter().any(Rational::is_negative) {
            return Err(DualError::Internal("negative stationary weight".into()));
        }
        // embed into the full state space
        let mut full = vec![Rational::zero(); m];
        for (ci, &c) in class.iter().enumerate() {
            full[c] = pi[ci].clone();
        }
        out.push((class, full));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn identity_has_singleton_classes() {
        let eye = vec![
            vec![rint(1), rint(0), rint(0)],
            vec![rint(0), rint(1), rint(0)],
            vec![rint(0), rint(0), rint(1)],
        ];
        let classes = recurrent_classes(&eye).unwrap();
        assert_eq!(classes.len(), 3);
        for (i, (class, pi)) in classes.iter().enumerate() {
            assert_eq!(class, &vec![i]);
            assert_eq!(pi[i], rint(1));
        }
    }

    #[test]
    fn absorbing_state_dominates() {
        // state 1 absorbing, state 0 transient
        let p = vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rint(0), rint(1)],
        ];
        let classes = recurrent_classes(&p).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].0, vec![1]);
        assert_eq!(classes[0].1, vec![rint(0), rint(1)]);
    }

    #[test]
    fn two_cycle_uniform_stationary() {
        let p = vec![
            vec![rint(0), rint(1)],
            vec![rint(1), rint(0)],
        ];
        let classes = recurrent_classes(&p).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].0, vec![0, 1]);
        assert_eq!(classes[0].1, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn rejects_non_stochastic() {
        let p = vec![vec![rat(1, 2), rat(1, 4)], vec![rint(0), rint(1)]];
        assert!(matches!(
            recurrent_classes(&p),
            Err(DualError::NotRowStochastic)
        ));
    }
}
