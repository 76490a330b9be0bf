//! BiCGStab Krylov solver for the assembled nonsymmetric systems.
//!
//! Stabilized bi-conjugate gradients with a zero initial guess, optional
//! Jacobi scaling, and a single restart on a ρ-breakdown. Deterministic: the
//! iterate sequence depends only on the system and the configuration.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::Csr;
use crate::math::{abs, sqrt};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    /// Diagonal (Jacobi) scaling.
    Jacobi,
    /// Incomplete LU with zero fill-in on the assembled pattern. Handles the
    /// off-diagonal imbalance that ghost couplings create under large
    /// material contrast, where diagonal scaling is not enough.
    Ilu0,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Relative residual target on ‖b − Ax‖/‖b‖.
    pub rel_tol: f64,
    /// Iteration cap; 0 selects 20·n.
    pub max_iter: usize,
    pub precond: Preconditioner,
    /// Iterative-refinement passes after the first solve. Rounding in the
    /// BiCGStab recurrences stagnates the attainable residual on
    /// ill-conditioned systems (large material contrast); re-solving against
    /// the exact residual recovers it.
    pub refine_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { rel_tol: 1e-10, max_iter: 0, precond: Preconditioner::None, refine_steps: 0 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveStats {
    pub iterations: usize,
    /// True relative residual of the returned iterate, recomputed from
    /// scratch at exit.
    pub residual: f64,
    pub converged: bool,
    pub restarts: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolverError {
    /// Iteration cap reached; the best iterate is still returned.
    Unconverged { iterations: usize, residual: f64 },
    /// ρ vanished twice (once after a restart).
    Breakdown { iterations: usize },
}

impl core::fmt::Display for SolverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolverError::Unconverged { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:e})")
            }
            SolverError::Breakdown { iterations } => {
                write!(f, "BiCGStab breakdown at iteration {iterations}")
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// ILU(0) factors stored on the matrix's own sparsity pattern.
pub struct Ilu0 {
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<f64>,
    diag: Vec<usize>,
    growth: f64,
}

impl Ilu0 {
    /// Factor `a` (rows must be sorted by column, as assembly produces).
    pub fn factor(a: &Csr) -> Ilu0 {
        let n = a.n;
        let mut data = a.data.clone();
        let indptr = a.indptr.clone();
        let indices = a.indices.clone();
        let mut diag = vec![usize::MAX; n];
        for r in 0..n {
            for k in indptr[r]..indptr[r + 1] {
                if indices[k] as usize == r {
                    diag[r] = k;
                }
            }
            debug_assert!(diag[r] != usize::MAX, "row {r} lacks a diagonal entry");
        }
        // Clip degenerate pivots to a row-scaled floor: the factor loses some
        // accuracy there but stays stable, which matters on the weakly
        // indefinite rows the variable-coefficient benchmarks contain.
        let pivot_floor = |row: usize, data: &[f64]| -> f64 {
            let mut m = 0.0f64;
            for k in indptr[row]..indptr[row + 1] {
                m = m.max(abs(data[k]));
            }
            5e-3 * m.max(1e-300)
        };
        let find = |row: usize, col: u32, indices: &[u32]| -> Option<usize> {
            let (s, e) = (indptr[row], indptr[row + 1]);
            indices[s..e].binary_search(&col).ok().map(|p| s + p)
        };
        for i in 0..n {
            let (row_s, row_e) = (indptr[i], indptr[i + 1]);
            for kk in row_s..row_e {
                let k = indices[kk] as usize;
                if k >= i {
                    break;
                }
                let mut piv = data[diag[k]];
                if abs(piv) < pivot_floor(k, &data) {
                    piv = if piv < 0.0 { -1.0 } else { 1.0 } * pivot_floor(k, &data);
                }
                let f = data[kk] / piv;
                data[kk] = f;
                if f != 0.0 {
                    for jj in kk + 1..row_e {
                        let j = indices[jj];
                        if let Some(p) = find(k, j, &indices) {
                            data[jj] -= f * data[p];
                        }
                    }
                }
            }
        }
        let in_max = a.data.iter().fold(0.0f64, |s, &v| s.max(abs(v)));
        let out_max = data.iter().fold(0.0f64, |s, &v| s.max(abs(v)));
        let growth = if in_max > 0.0 { out_max / in_max } else { 1.0 };
        Ilu0 { indptr, indices, data, diag, growth }
    }

    /// Element growth of the factorization; a large value flags an unstable
    /// factor (weakly indefinite rows), where plain diagonal scaling beats a
    /// bad incomplete factorization.
    pub fn growth(&self) -> f64 {
        self.growth
    }

    /// Solve `L U z = x` in place of `dst`.
    pub fn apply(&self, x: &[f64], dst: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n {
            let mut v = x[i];
            for k in self.indptr[i]..self.diag[i] {
                v -= self.data[k] * dst[self.indices[k] as usize];
            }
            dst[i] = v;
        }
        for i in (0..n).rev() {
            let mut v = dst[i];
            for k in self.diag[i] + 1..self.indptr[i + 1] {
                v -= self.data[k] * dst[self.indices[k] as usize];
            }
            let mut piv = self.data[self.diag[i]];
            if piv == 0.0 {
                piv = 1e-300;
            }
            dst[i] = v / piv;
        }
    }
}

enum Prec {
    Identity,
    Jacobi(Vec<f64>),
    Ilu(Ilu0),
}

impl Prec {
    fn build(a: &Csr, kind: Preconditioner) -> Prec {
        match kind {
            Preconditioner::None => Prec::Identity,
            Preconditioner::Jacobi => {
                let mut d = vec![1.0; a.n];
                for r in 0..a.n {
                    let (cols, vals) = a.row(r);
                    for (c, v) in cols.iter().zip(vals) {
                        if *c as usize == r && *v != 0.0 {
                            d[r] = 1.0 / v;
                        }
                    }
                }
                Prec::Jacobi(d)
            }
            Preconditioner::Ilu0 => Prec::Ilu(Ilu0::factor(a)),
        }
    }
}

/// Solve `A x = b`. On failure the best iterate comes back with the error.
/// Honors `cfg.refine_steps`.
pub fn bicgstab(
    a: &Csr,
    b: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, SolveStats), (Vec<f64>, SolverError)> {
    let prec = Prec::build(a, cfg.precond);
    let first = bicgstab_impl(a, b, cfg, &prec)?;
    if cfg.refine_steps == 0 {
        return Ok(first);
    }
    let n = a.n;
    let bnorm = norm(b);
    let (mut x, mut stats) = first;
    if bnorm == 0.0 {
        return Ok((x, stats));
    }
    let mut ax = vec![0.0; n];
    for _ in 0..cfg.refine_steps {
        a.matvec(&x, &mut ax);
        let mut r = vec![0.0; n];
        for k in 0..n {
            r[k] = b[k] - ax[k];
        }
        let rnorm = norm(&r);
        if rnorm / bnorm <= 1e-15 {
            break;
        }
        // Correction solve at a modest relative target; failures just stop
        // the refinement with the iterate we have.
        let ccfg = SolverConfig { rel_tol: 1e-4, ..*cfg };
        match bicgstab_impl(a, &r, &ccfg, &prec) {
            Ok((dx, s)) => {
                for k in 0..n {
                    x[k] += dx[k];
                }
                stats.iterations += s.iterations;
            }
            Err(_) => break,
        }
    }
    a.matvec(&x, &mut ax);
    let mut res = 0.0;
    for k in 0..n {
        let d = b[k] - ax[k];
        res += d * d;
    }
    stats.residual = sqrt(res) / bnorm;
    stats.converged = true;
    Ok((x, stats))
}

fn bicgstab_impl(
    a: &Csr,
    b: &[f64],
    cfg: &SolverConfig,
    prec: &Prec,
) -> Result<(Vec<f64>, SolveStats), (Vec<f64>, SolverError)> {
    let n = a.n;
    assert_eq!(b.len(), n);
    let max_iter = if cfg.max_iter == 0 { 20 * n } else { cfg.max_iter };

    let apply_precond = |src: &[f64], dst: &mut [f64]| match prec {
        Prec::Identity => dst.copy_from_slice(src),
        Prec::Jacobi(d) => {
            for k in 0..n {
                dst[k] = d[k] * src[k];
            }
        }
        Prec::Ilu(ilu) => ilu.apply(src, dst),
    };

    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        let stats = SolveStats { iterations: 0, residual: 0.0, converged: true, restarts: 0 };
        return Ok((x, stats));
    }

    let mut r = b.to_vec();
    let mut rt = r.clone();
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut ph = vec![0.0; n];
    let mut sh = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut rho = 1.0f64;
    let mut alpha = 1.0f64;
    let mut omega = 1.0f64;
    let mut restarts = 0u32;
    let mut fresh = true;
    // Best iterate seen, returned when the iteration fails or wanders.
    let mut best_x = x.clone();
    let mut best_res = f64::INFINITY;

    let finish = |x: Vec<f64>, iterations: usize, restarts: u32| -> (Vec<f64>, SolveStats) {
        let mut ax = vec![0.0; n];
        a.matvec(&x, &mut ax);
        let mut res = 0.0;
        for k in 0..n {
            let d = b[k] - ax[k];
            res += d * d;
        }
        let residual = sqrt(res) / bnorm;
        (x, SolveStats { iterations, residual, converged: true, restarts })
    };

    let mut iter = 0usize;
    while iter < max_iter {
        iter += 1;
        let rho_new = dot(&rt, &r);
        let breakdown_floor = 1e-60 * bnorm * bnorm;
        if abs(rho_new) < breakdown_floor {
            if restarts == 0 {
                // Restart from the current iterate with a fresh shadow vector.
                restarts += 1;
                rt.copy_from_slice(&r);
                rho = 1.0;
                alpha = 1.0;
                omega = 1.0;
                p.iter_mut().for_each(|z| *z = 0.0);
                v.iter_mut().for_each(|z| *z = 0.0);
                fresh = true;
                continue;
            }
            return Err((x, SolverError::Breakdown { iterations: iter }));
        }
        if fresh {
            p.copy_from_slice(&r);
            fresh = false;
        } else {
            let beta = (rho_new / rho) * (alpha / omega);
            for k in 0..n {
                p[k] = r[k] + beta * (p[k] - omega * v[k]);
            }
        }
        apply_precond(&p, &mut ph);
        a.matvec(&ph, &mut v);
        let rtv = dot(&rt, &v);
        if abs(rtv) < breakdown_floor {
            if restarts == 0 {
                restarts += 1;
                rt.copy_from_slice(&r);
                rho = 1.0;
                alpha = 1.0;
                omega = 1.0;
                fresh = true;
                continue;
            }
            return Err((x, SolverError::Breakdown { iterations: iter }));
        }
        alpha = rho_new / rtv;
        // s = r − α v (reuse r)
        for k in 0..n {
            r[k] -= alpha * v[k];
        }
        if norm(&r) / bnorm < cfg.rel_tol {
            for k in 0..n {
                x[k] += alpha * ph[k];
            }
            let (x, mut stats) = finish(x, iter, restarts);
            stats.converged = stats.residual <= 10.0 * cfg.rel_tol;
            return Ok((x, stats));
        }
        apply_precond(&r, &mut sh);
        a.matvec(&sh, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return Err((x, SolverError::Breakdown { iterations: iter }));
        }
        omega = dot(&t, &r) / tt;
        for k in 0..n {
            x[k] += alpha * ph[k] + omega * sh[k];
        }
        for k in 0..n {
            r[k] -= omega * t[k];
        }
        rho = rho_new;
        let rnorm = norm(&r);
        if !rnorm.is_finite() || rnorm > 1e12 * bnorm {
            // The recurrence wandered off; one restart from the best point.
            if restarts == 0 {
                restarts += 1;
                x.copy_from_slice(&best_x);
                let mut ax = vec![0.0; n];
                a.matvec(&x, &mut ax);
                for k in 0..n {
                    r[k] = b[k] - ax[k];
                }
                rt.copy_from_slice(&r);
                rho = 1.0;
                alpha = 1.0;
                omega = 1.0;
                fresh = true;
                continue;
            }
            return Err((best_x, SolverError::Breakdown { iterations: iter }));
        }
        if rnorm < best_res {
            best_res = rnorm;
            best_x.copy_from_slice(&x);
        }
        if rnorm / bnorm < cfg.rel_tol {
            let (x, mut stats) = finish(x, iter, restarts);
            stats.converged = stats.residual <= 10.0 * cfg.rel_tol;
            return Ok((x, stats));
        }
    }

    let mut ax = vec![0.0; n];
    a.matvec(&best_x, &mut ax);
    let mut res = 0.0;
    for k in 0..n {
        let d = b[k] - ax[k];
        res += d * d;
    }
    let residual = sqrt(res) / bnorm;
    Err((best_x, SolverError::Unconverged { iterations: max_iter, residual }))
}
