//! Small dense exact linear algebra: Gaussian elimination over rationals.

use crate::rational::Rational;
use num_traits::Zero;

/// Row-reduces `m` in place (augmented or not), returning the pivot column
/// of each pivot row. Full pivoting is unnecessary in exact arithmetic;
/// partial column scan keeps it simple.
fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (head, tail) = m.split_at_mut(r.max(i));
                let (row_r, row_i) = if r < i {
                    (&head[r], &mut tail[0])
                } else {
                    (&tail[0], &mut head[i])
                };
                for (xi, xr) in row_i.iter_mut().zip(row_r.iter()) {
                    *xi -= &f * xr;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivot_cols
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Solves `a x = b` when the system has a unique solution; returns `None`
/// if it is inconsistent or underdetermined. `a` may be rectangular.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    if rows == 0 || rows != b.len() {
        return None;
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m, cols);
    // inconsistent: a zero row with nonzero rhs
    for row in &m {
        if row[..cols].iter().all(Rational::is_zero) && !row[cols].is_zero() {
            return None;
        }
    }
    if pivots.len() != cols {
        return None; // underdetermined
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Affine rank of a point set minus one, i.e. the dimension of the affine
/// hull (`-1` is never returned; empty input gives 0 by convention of use).
pub fn affine_dimension(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}
