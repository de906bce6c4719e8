//! Exact dense Gauss-Jordan elimination.

use crate::scalar::Scalar;

/// Solves the square system `a x = b`; `None` if `a` is singular.
pub fn solve_square<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut().skip(col) {
            *v = v.clone() / p.clone();
        }
        b[col] = b[col].clone() / p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                if !a[col][c].is_zero() {
                    a[r][c] = a[r][c].clone() - factor.clone() * a[col][c].clone();
                }
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    Some(b)
}
