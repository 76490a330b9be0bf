//! Lagrange interpolation weights on small node sets.
//!
//! Everything the scheme interpolates or differentiates goes through 2- or
//! 3-point Lagrange polynomials on arbitrary distinct abscissae, so one
//! weight routine serves the one-sided interface stencils, the auxiliary
//! off-grid points, and the ghost-value extrapolations alike.

use crate::math::abs;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InterpError {
    /// Two abscissae within 1e-14 of each other.
    CoincidentNodes,
}

impl core::fmt::Display for InterpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InterpError::CoincidentNodes => write!(f, "coincident interpolation nodes"),
        }
    }
}

/// Value and first-derivative weights of the 3-point Lagrange basis at a
/// target abscissa.
#[derive(Clone, Copy, Debug)]
pub struct InterpolationWeights {
    pub nodes: [f64; 3],
    pub target: f64,
    /// Basis values: `p(target) = Σ w0[k]·f(nodes[k])`.
    pub w0: [f64; 3],
    /// Basis derivatives: `p'(target) = Σ w1[k]·f(nodes[k])`.
    pub w1: [f64; 3],
}

/// Weights for quadratic Lagrange interpolation through three nodes.
pub fn lagrange_weights(nodes: [f64; 3], target: f64) -> Result<InterpolationWeights, InterpError> {
    check_distinct(&nodes)?;
    let mut w0 = [0.0; 3];
    let mut w1 = [0.0; 3];
    for j in 0..3 {
        let (k1, k2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let denom = (nodes[j] - nodes[k1]) * (nodes[j] - nodes[k2]);
        w0[j] = (target - nodes[k1]) * (target - nodes[k2]) / denom;
        w1[j] = ((target - nodes[k1]) + (target - nodes[k2])) / denom;
    }
    Ok(InterpolationWeights { nodes, target, w0, w1 })
}

/// Value and derivative weights for linear interpolation through two nodes.
/// Fallback for auxiliary lines that offer only two same-side nodes.
pub fn linear_weights(nodes: [f64; 2], target: f64) -> Result<([f64; 2], [f64; 2]), InterpError> {
    let d = nodes[1] - nodes[0];
    if abs(d) < 1e-14 {
        return Err(InterpError::CoincidentNodes);
    }
    let t = (target - nodes[0]) / d;
    Ok(([1.0 - t, t], [-1.0 / d, 1.0 / d]))
}

fn check_distinct(nodes: &[f64; 3]) -> Result<(), InterpError> {
    for a in 0..3 {
        for b in a + 1..3 {
            if abs(nodes[a] - nodes[b]) < 1e-14 {
                return Err(InterpError::CoincidentNodes);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::XorShift;

    const H: f64 = 0.1;

    #[test]
    fn nodal_identity() {
        let w = lagrange_weights([0.0, H, 2.0 * H], 0.0).unwrap();
        assert_eq!(w.w0, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn midpoint_values() {
        let w = lagrange_weights([0.0, H, 2.0 * H], 0.5 * H).unwrap();
        for (got, want) in w.w0.iter().zip([3.0 / 8.0, 3.0 / 4.0, -1.0 / 8.0]) {
            assert!(abs(got - want) < 1e-14);
        }
    }

    #[test]
    fn one_sided_derivative() {
        let w = lagrange_weights([0.0, H, 2.0 * H], 0.0).unwrap();
        let want = [-1.5 / H, 2.0 / H, -0.5 / H];
        for (got, want) in w.w1.iter().zip(want) {
            assert!(abs(got - want) < 1e-12 / H);
        }
    }

    #[test]
    fn rejects_coincident_nodes() {
        assert_eq!(lagrange_weights([0.0, 0.0, H], 0.5).unwrap_err(), InterpError::CoincidentNodes);
    }

    /// Σw0 = 1 and Σw1 = 0 (constants are reproduced exactly), and degree-2
    /// polynomials are reproduced along with their derivative, on random
    /// node sets and targets.
    #[test]
    fn reproduces_quadratics() {
        let mut rng = XorShift::new(7);
        for _ in 0..200 {
            let x0 = rng.in_range(-1.0, 1.0);
            let x1 = x0 + rng.in_range(0.05, 0.5);
            let x2 = x1 + rng.in_range(0.05, 0.5);
            let t = rng.in_range(x0 - 0.5, x2 + 0.5);
            let w = lagrange_weights([x0, x1, x2], t).unwrap();
            let h = x2 - x0;
            assert!(abs(w.w0.iter().sum::<f64>() - 1.0) < 1e-12);
            assert!(abs(w.w1.iter().sum::<f64>()) < 1e-12 / h);
            let (a, b, c) = (rng.in_range(-2.0, 2.0), rng.in_range(-2.0, 2.0), rng.in_range(-2.0, 2.0));
            let p = |x: f64| a * x * x + b * x + c;
            let val: f64 = w.w0.iter().zip([x0, x1, x2]).map(|(w, x)| w * p(x)).sum();
            let der: f64 = w.w1.iter().zip([x0, x1, x2]).map(|(w, x)| w * p(x)).sum();
            assert!(abs(val - p(t)) < 1e-10);
            assert!(abs(der - (2.0 * a * t + b)) < 1e-9);
        }
    }

    #[test]
    fn linear_fallback() {
        let ([v0, v1], [d0, d1]) = linear_weights([0.0, H], 0.3 * H).unwrap();
        assert!(abs(v0 - 0.7) < 1e-14);
        assert!(abs(v1 - 0.3) < 1e-14);
        assert!(abs(d0 + 1.0 / H) < 1e-12);
        assert!(abs(d1 - 1.0 / H) < 1e-12);
    }
}
