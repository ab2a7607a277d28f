//! Small dense linear-algebra helpers (Gaussian elimination with partial
//! pivoting). Problem sizes here are tiny (facet fits are (m+s+1)-square),
//! so no factorization machinery is warranted.

use crate::real::Real;

/// Solve `a · x = b` for square `a`. Returns `None` when the matrix is
/// singular at the given pivot tolerance (scaled by the largest row entry).
pub fn solve_square<T: Real>(a: &[Vec<T>], b: &[T], rank_tol: T) -> Option<Vec<T>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();

    let scale = m
        .iter()
        .flat_map(|r| r.iter().take(n))
        .fold(T::one(), |acc, &v| acc.max(v.abs()));
    let eps = rank_tol * scale;

    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r1, &r2| {
            m[r1][col]
                .abs()
                .partial_cmp(&m[r2][col].abs())
                .expect("no NaN in linear solve")
        })?;
        if m[pivot_row][col].abs() <= eps {
            return None;
        }
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = m[row][col] / pivot;
            if factor != T::zero() {
                for k in col..=n {
                    let delta = factor * m[col][k];
                    m[row][k] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}
