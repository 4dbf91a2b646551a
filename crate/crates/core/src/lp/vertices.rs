//! Exact vertex enumeration by the incremental double-description method
//! with the combinatorial adjacency test. Degenerate vertices (far more
//! tight rows than the dimension) are routine for equilibrium polytopes,
//! and this method handles them without perturbation.

use super::{LpError, LpRow, Polytope, RowRel};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

const MAX_BOX_CORNERS: usize = 4096;

/// Fixed-capacity bitset over constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(capacity: usize) -> Self {
        Bits(vec![0; capacity.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct DoubleDescription {
    active: Vec<LpRow>,
    capacity: usize,
    verts: Vec<Vec<Rational>>,
    tight: Vec<Bits>,
}

impl DoubleDescription {
    fn new(capacity: usize, initial_rows: Vec<LpRow>, verts: Vec<Vec<Rational>>) -> Self {
        let mut dd = DoubleDescription {
            active: initial_rows,
            capacity,
            verts: Vec::new(),
            tight: Vec::new(),
        };
        for v in verts {
            let t = dd.tight_set(&v);
            dd.verts.push(v);
            dd.tight.push(t);
        }
        dd
    }

    fn tight_set(&self, v: &[Rational]) -> Bits {
        let mut b = Bits::new(self.capacity);
        for (i, row) in self.active.iter().enumerate() {
            if row.tight(v) {
                b.set(i);
            }
        }
        b
    }

    /// Splits the current vertex set on one new constraint and keeps the
    /// extreme points of the refined polytope.
    fn add_row(&mut self, row: &LpRow) -> Result<(), LpError> {
        // work with a >= form; Le rows are negated, Eq handled below
        let (coeffs, rhs) = match row.rel {
            RowRel::Le => (
                row.coeffs.iter().map(|c| -c).collect::<Vec<_>>(),
                -row.rhs.clone(),
            ),
            _ => (row.coeffs.clone(), row.rhs.clone()),
        };
        let vals: Vec<Rational> = self
            .verts
            .iter()
            .map(|v| super::dot(&coeffs, v) - &rhs)
            .collect();
        let plus: Vec<usize> = (0..self.verts.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..self.verts.len()).filter(|&i| vals[i].is_negative()).collect();
        let zero: Vec<usize> = (0..self.verts.len()).filter(|&i| vals[i].is_zero()).collect();

        let nothing_cut = match row.rel {
            RowRel::Eq => plus.is_empty() && minus.is_empty(),
            _ => minus.is_empty(),
        };
        if nothing_cut {
            self.push_active(row.clone());
            return Ok(());
        }

        // new points on edges crossing the hyperplane
        let mut generated: Vec<Vec<Rational>> = Vec::new();
        for &u in &plus {
            for &w in &minus {
                if !self.adjacent(u, w) {
                    continue;
                }
                // t in (0,1) with value 0 at u + t(w-u)
                let t = &vals[u] / (&vals[u] - &vals[w]);
                let point: Vec<Rational> = self.verts[u]
                    .iter()
                    .zip(&self.verts[w])
                    .map(|(a, b)| a + &t * &(b - a))
                    .collect();
                generated.push(point);
            }
        }

        let kept: Vec<usize> = match row.rel {
            RowRel::Eq => zero,
            _ => plus.into_iter().chain(zero).collect(),
        };
        let kept_verts: Vec<Vec<Rational>> = kept.iter().map(|&i| self.verts[i].clone()).collect();

        self.push_active(row.clone());

        let mut seen = BTreeSet::new();
        let mut verts = Vec::new();
        for v in kept_verts.into_iter().chain(generated) {
            if seen.insert(v.clone()) {
                verts.push(v);
            }
        }
        self.tight = Vec::with_capacity(verts.len());
        for v in &verts {
            let t = self.tight_set(v);
            self.tight.push(t);
        }
        self.verts = verts;
        if self.verts.is_empty() {
            return Err(LpError::Internal(
                "vertex set emptied while refining a feasible polytope".into(),
            ));
        }
        Ok(())
    }

    fn push_active(&mut self, row: LpRow) {
        let idx = self.active.len();
        self.active.push(row);
        for (v, t) in self.verts.iter().zip(self.tight.iter_mut()) {
            if self.active[idx].tight(v) {
                t.set(idx);
            }
        }
    }

    /// Combinatorial adjacency: u and w span an edge unless some third
    /// vertex is tight on everything they are both tight on.
    fn adjacent(&self, u: usize, w: usize) -> bool {
        let common = self.tight[u].intersect(&self.tight[w]);
        !(0..self.verts.len())
            .any(|v| v != u && v != w && self.tight[v].is_superset(&common))
    }
}

/// Enumerates the vertices of a bounded polytope. Boundedness is verified
/// coordinate by coordinate before enumeration; infeasibility and
/// unboundedness are reported as errors. The result is sorted
/// lexicographically and duplicate-free.
pub(super) fn enumerate_vertices(poly: &Polytope) -> Result<Vec<Vec<Rational>>, LpError> {
    let q = poly.dim();
    if q == 0 {
        return Err(LpError::Malformed("zero-dimensional ambient space".into()));
    }
    let ranges = poly
        .coordinate_ranges(false)?
        .expect("no early exit requested");

    let simplex_rows = detect_simplex(poly);
    let capacity = poly.rows().len() + 2 * q + 2;

    let (mut dd, pending): (DoubleDescription, Vec<usize>) = match simplex_rows {
        Some(init_idx) => {
            let init_rows: Vec<LpRow> = init_idx.iter().map(|&i| poly.rows()[i].clone()).collect();
            let verts: Vec<Vec<Rational>> = (0..q)
                .map(|k| {
                    let mut v = vec![Rational::zero(); q];
                    v[k] = Rational::one();
                    v
                })
                .collect();
            let pending = (0..poly.rows().len())
                .filter(|i| !init_idx.contains(i))
                .collect();
            (DoubleDescription::new(capacity, init_rows, verts), pending)
        }
        None => {
            // start from the exact bounding box
            let mut corner_count = 1usize;
            for (lo, hi) in &ranges {
                if lo != hi {
                    corner_count = corner_count.saturating_mul(2);
                }
            }
            if corner_count > MAX_BOX_CORNERS {
                return Err(LpError::Unsupported(format!(
                    "bounding-box initialization needs {corner_count} corners"
                )));
            }
            let mut box_rows = Vec::new();
            for (k, (lo, hi)) in ranges.iter().enumerate() {
                let unit = |k: usize| {
                    let mut c = vec![Rational::zero(); q];
                    c[k] = Rational::one();
                    c
                };
                if lo == hi {
                    box_rows.push(LpRow::new(unit(k), RowRel::Eq, lo.clone()));
                } else {
                    box_rows.push(LpRow::new(unit(k), RowRel::Ge, lo.clone()));
                    box_rows.push(LpRow::new(unit(k), RowRel::Le, hi.clone()));
                }
            }
            let mut corners: Vec<Vec<Rational>> = vec![Vec::new()];
            for (lo, hi) in &ranges {
                let mut next = Vec::with_capacity(corners.len() * 2);
                for c in &corners {
                    let mut a = c.clone();
                    a.push(lo.clone());
                    next.push(a);
                    if lo != hi {
                        let mut b = c.clone();
                        b.push(hi.clone());
                        next.push(b);
                    }
                }
                corners = next;
            }
            let pending = (0..poly.rows().len()).collect();
            (
                DoubleDescription::new(capacity, box_rows, corners),
                pending,
            )
        }
    };

    for i in pending {
        dd.add_row(&poly.rows()[i])?;
    }

    let mut verts = dd.verts;
    verts.sort();
    verts.dedup();
    for v in &verts {
        if !poly.contains(v) {
            return Err(LpError::Internal("enumerated point outside polytope".into()));
        }
    }
    Ok(verts)
}

/// Looks for the probability-simplex pattern: a nonnegativity row for every
/// coordinate plus an all-ones equality summing to 1. When present the
/// enumeration starts from the unit vectors instead of a bounding box.
fn detect_simplex(poly: &Polytope) -> Option<BTreeSet<usize>> {
    let q = poly.dim();
    let mut nonneg_row: Vec<Option<usize>> = vec![None; q];
    let mut sum_row: Option<usize> = None;
    for (i, row) in poly.rows().iter().enumerate() {
        match row.rel {
            RowRel::Ge if row.rhs.is_zero() => {
                let nz: Vec<usize> = (0..q).filter(|&j| !row.coeffs[j].is_zero()).collect();
                if let [j] = nz.as_slice() {
                    if row.coeffs[*j].is_one() && nonneg_row[*j].is_none() {
                        nonneg_row[*j] = Some(i);
                    }
                }
            }
            RowRel::Eq if row.rhs.is_one() && sum_row.is_none()
                && row.coeffs.iter().all(Rational::is_one) => {
                    sum_row = Some(i);
                }
            _ => {}
        }
    }
    let sum = sum_row?;
    let mut init = BTreeSet::new();
    for r in nonneg_row {
        init.insert(r?);
    }
    init.insert(sum);
    Some(init)
}
