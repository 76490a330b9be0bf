//! Error norms and convergence order.

use crate::math::{abs, log2, sqrt};

/// L∞ and the node-count-normalized L2 norm of a nodal error field.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorNorms {
    pub linf: f64,
    pub l2: f64,
}

/// `L∞ = max|u − ũ|`, `L2 = sqrt(Σ(u − ũ)²/N)` over all N nodes.
pub fn error_norms(numeric: &[f64], exact: &[f64]) -> ErrorNorms {
    debug_assert_eq!(numeric.len(), exact.len());
    let mut linf = 0.0f64;
    let mut sum = 0.0f64;
    for (a, b) in numeric.iter().zip(exact) {
        let d = abs(a - b);
        linf = linf.max(d);
        sum += d * d;
    }
    ErrorNorms { linf, l2: sqrt(sum / numeric.len() as f64) }
}

/// Convergence order between consecutive grids differing by 2× refinement:
/// `log2(E_coarse / E_fine)`.
pub fn compute_order(e_coarse: f64, e_fine: f64) -> f64 {
    log2(e_coarse / e_fine)
}
