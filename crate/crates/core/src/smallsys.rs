//! Tiny dense linear algebra: LU with partial pivoting and numeric rank,
//! sized for the 4×4 interface solves and the 4×8 condition matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;

/// LU factorization of a 4×4 with row pivoting; solves many right-hand sides.
pub struct Lu4 {
    lu: [[f64; 4]; 4],
    perm: [usize; 4],
}

impl Lu4 {
    /// Factor `a`; `None` when a pivot falls under `tol` (singular system).
    pub fn factor(a: [[f64; 4]; 4], tol: f64) -> Option<Lu4> {
        Self::factor_with_quality(a, tol).map(|(lu, _)| lu)
    }

    /// As [`Lu4::factor`], also reporting the smallest pivot magnitude — a
    /// cheap conditioning proxy when the rows are pre-normalized.
    pub fn factor_with_quality(a: [[f64; 4]; 4], tol: f64) -> Option<(Lu4, f64)> {
        let mut lu = a;
        let mut perm = [0usize, 1, 2, 3];
        let mut min_pivot = f64::INFINITY;
        for col in 0..4 {
            let mut p = col;
            let mut best = abs(lu[col][col]);
            for r in col + 1..4 {
                if abs(lu[r][col]) > best {
                    best = abs(lu[r][col]);
                    p = r;
                }
            }
            if best <= tol {
                return None;
            }
            min_pivot = min_pivot.min(best);
            lu.swap(col, p);
            perm.swap(col, p);
            for r in col + 1..4 {
                let f = lu[r][col] / lu[col][col];
                lu[r][col] = f;
                for c in col + 1..4 {
                    lu[r][c] -= f * lu[col][c];
                }
            }
        }
        Some((Lu4 { lu, perm }, min_pivot))
    }

    pub fn solve(&self, b: [f64; 4]) -> [f64; 4] {
        let mut y = [0.0; 4];
        for r in 0..4 {
            let mut v = b[self.perm[r]];
            for c in 0..r {
                v -= self.lu[r][c] * y[c];
            }
            y[r] = v;
        }
        let mut x = [0.0; 4];
        for r in (0..4).rev() {
            let mut v = y[r];
            for c in r + 1..4 {
                v -= self.lu[r][c] * x[c];
            }
            x[r] = v / self.lu[r][r];
        }
        x
    }
}

/// Numeric rank of a small row-major matrix by Gaussian elimination with full
/// column scanning; the threshold is relative to the largest entry.
pub fn numeric_rank(rows: usize, cols: usize, a: &[f64], rel_tol: f64) -> usize {
    let mut m: Vec<f64> = a.to_vec();
    debug_assert_eq!(m.len(), rows * cols);
    let scale = m.iter().fold(0.0f64, |s, &v| s.max(abs(v)));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let mut p = row;
        let mut best = abs(m[row * cols + col]);
        for r in row + 1..rows {
            if abs(m[r * cols + col]) > best {
                best = abs(m[r * cols + col]);
                p = r;
            }
        }
        if best <= tol {
            continue;
        }
        if p != row {
            for c in 0..cols {
                m.swap(row * cols + c, p * cols + c);
            }
        }
        for r in row + 1..rows {
            let f = m[r * cols + col] / m[row * cols + col];
            for c in col..cols {
                m[r * cols + c] -= f * m[row * cols + c];
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

/// Least-squares residual of `x` minimizing ‖Aᵀx − b‖ for a fat system given
/// as rows: used to check that a vector lies in the row space of `a`.
/// Returns the residual ∞-norm of the projection of `b` out of span(rows).
pub fn rowspace_residual(rows: usize, cols: usize, a: &[f64], b: &[f64]) -> f64 {
    // Orthonormalize the rows by modified Gram-Schmidt, project b, and
    // measure what is left.
    let mut q: Vec<Vec<f64>> = Vec::new();
    for r in 0..rows {
        let mut v: Vec<f64> = a[r * cols..(r + 1) * cols].to_vec();
        for u in &q {
            let dot: f64 = v.iter().zip(u.iter()).map(|(x, y)| x * y).sum();
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi -= dot * ui;
            }
        }
        let norm: f64 = crate::math::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 1e-13 {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            q.push(v);
        }
    }
    let mut res: Vec<f64> = b.to_vec();
    for u in &q {
        let dot: f64 = res.iter().zip(u.iter()).map(|(x, y)| x * y).sum();
        for (ri, ui) in res.iter_mut().zip(u.iter()) {
            *ri -= dot * ui;
        }
    }
    res.iter().fold(0.0f64, |s, &v| s.max(abs(v)))
}

/// Solve a general small dense system by LU with partial pivoting.
pub fn dense_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut p = col;
        let mut best = abs(m[perm[col] * n + col]);
        for r in col + 1..n {
            if abs(m[perm[r] * n + col]) > best {
                best = abs(m[perm[r] * n + col]);
                p = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        perm.swap(col, p);
        for r in col + 1..n {
            let f = m[perm[r] * n + col] / m[perm[col] * n + col];
            m[perm[r] * n + col] = f;
            for c in col + 1..n {
                m[perm[r] * n + c] -= f * m[perm[col] * n + c];
            }
        }
    }
    let mut y = vec![0.0; n];
    for r in 0..n {
        let mut v = x[perm[r]];
        for c in 0..r {
            v -= m[perm[r] * n + c] * y[c];
        }
        y[r] = v;
    }
    for r in (0..n).rev() {
        let mut v = y[r];
        for c in r + 1..n {
            v -= m[perm[r] * n + c] * x[c];
        }
        x[r] = v / m[perm[r] * n + r];
    }
    for r in 0..n {
        y[r] = x[r];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu4_solves() {
        let a = [
            [4.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 0.0, 0.0],
            [0.0, 0.0, 2.0, 1.0],
            [0.0, 0.0, 1.0, 2.0],
        ];
        let lu = Lu4::factor(a, 1e-14).unwrap();
        let x = lu.solve([1.0, 2.0, 3.0, 3.0]);
        assert!(abs(x[0] - 1.0 / 11.0) < 1e-14);
        assert!(abs(x[1] - 7.0 / 11.0) < 1e-14);
        assert!(abs(x[2] - 1.0) < 1e-14);
        assert!(abs(x[3] - 1.0) < 1e-14);
    }

    #[test]
    fn rank_detects_dependence() {
        let a = [1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 0.0];
        assert_eq!(numeric_rank(3, 3, &a, 1e-10), 2);
    }

    #[test]
    fn rowspace_projection() {
        let a = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let inside = [2.0, -3.0, 0.0];
        let outside = [0.0, 0.0, 1.5];
        assert!(rowspace_residual(2, 3, &a, &inside) < 1e-12);
        assert!(rowspace_residual(2, 3, &a, &outside) > 1.0);
    }
}
