//! Dense exact linear algebra over the rational-function field, plus
//! fraction-free (Bareiss) elimination over the polynomial ring for
//! determinants and Cramer solves where coefficient blowup matters.

use std::sync::Arc;

use crate::coeffs::{Polynomial, RationalFunction, VarPool};

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row. Row order of pivots is deterministic (first nonzero pivot
/// from the top, scanning columns left to right).
pub fn rref(rows: &mut [Vec<RationalFunction>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for e in rows[r][c..].iter_mut() {
            *e = e.mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                #[allow(clippy::needless_range_loop)]
                for j in c..ncols {
                    let delta = rows[r][j].mul(&factor);
                    rows[i][j] = rows[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<RationalFunction>]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Basis of the right kernel of the matrix, one vector per free column,
/// in ascending free-column order.
pub fn kernel_basis(rows: &[Vec<RationalFunction>], ncols: usize, pool: &Arc<VarPool>) -> Vec<Vec<RationalFunction>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    let zero = RationalFunction::zero(pool.clone());
    let one = RationalFunction::one(pool.clone());
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut vec = vec![zero.clone(); ncols];
        vec[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            vec[pc] = work[row][free].neg();
        }
        out.push(vec);
    }
    out
}

/// Particular solution of `A x = b` with all free variables pinned to zero,
/// or `None` when the system is inconsistent. Deterministic: together with
/// the fixed column order this makes solutions reproducible.
pub fn solve(
    rows: &[Vec<RationalFunction>],
    rhs: &[RationalFunction],
    pool: &Arc<VarPool>,
) -> Option<Vec<RationalFunction>> {
    let nrows = rows.len();
    assert_eq!(nrows, rhs.len());
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut work: Vec<Vec<RationalFunction>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut work);
    // A pivot in the augmented column means inconsistency.
    if pivots.last().is_some_and(|&c| c == ncols) {
        return None;
    }
    let zero = RationalFunction::zero(pool.clone());
    let mut x = vec![zero; ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = work[row][ncols].clone();
    }
    Some(x)
}

/// Fraction-free determinant of a square polynomial matrix.
pub fn bareiss_det(mat: &[Vec<Polynomial>], pool: &Arc<VarPool>) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one(pool.clone());
    }
    let mut m: Vec<Vec<Polynomial>> = mat.to_vec();
    let mut prev = Polynomial::one(pool.clone());
    let mut sign_flip = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Polynomial::zero(pool.clone());
            };
            m.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero(pool.clone());
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Solve `A x = b` for a square polynomial system by Cramer's rule with
/// Bareiss determinants; returns `None` when `det A = 0`. Coordinates come
/// back as canonical rational functions `det_i / det`.
pub fn cramer_solve(
    mat: &[Vec<Polynomial>],
    rhs: &[Polynomial],
    pool: &Arc<VarPool>,
) -> Option<Vec<RationalFunction>> {
    let n = mat.len();
    assert_eq!(n, rhs.len());
    let det = bareiss_det(mat, pool);
    if det.is_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut replaced = mat.to_vec();
        for (row, b) in replaced.iter_mut().zip(rhs) {
            row[col] = b.clone();
        }
        let det_i = bareiss_det(&replaced, pool);
        out.push(RationalFunction::new(det_i, det.clone()).expect("det is nonzero"));
    }
    Some(out)
}
