//! Piecewise elastic parameter fields and their spatial gradients.
//!
//! Constant-parameter cases are specified by shear modulus and Poisson ratio
//! per side; the first Lamé parameter follows from `λ = 2μν/(1−2ν)`.
//! Variable-coefficient cases give `μ` and `λ` directly as the affine or
//! bilinear closed forms used by the benchmarks, with hand-coded derivatives
//! (cross-checked against finite differences in the tests). Where `ν` is
//! needed for a variable case it is recovered as `ν = λ/(2(λ+μ))`.

use crate::geometry::Side;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaterialError {
    /// `ν` within 1e-12 of 0.5: the p-wave modulus blows up.
    Incompressible,
}

impl core::fmt::Display for MaterialError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MaterialError::Incompressible => write!(f, "material is (nearly) incompressible"),
        }
    }
}

/// P-wave modulus `M = 2μ(1−ν)/(1−2ν)`. Also equal to `λ + 2μ`.
pub fn p_wave_modulus(mu: f64, nu: f64) -> Result<f64, MaterialError> {
    let d = 1.0 - 2.0 * nu;
    if crate::math::abs(d) < 1e-12 {
        return Err(MaterialError::Incompressible);
    }
    Ok(2.0 * mu * (1.0 - nu) / d)
}

/// Scalar coefficient field with analytic gradient.
#[derive(Clone, Copy, Debug)]
pub enum CoefFn {
    Const(f64),
    /// c0 + c1·(x + y)
    AffineSum { c0: f64, c1: f64 },
    /// c0 + c1·x·y
    Bilinear { c0: f64, c1: f64 },
}

impl CoefFn {
    /// (value, ∂/∂x, ∂/∂y)
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64, f64) {
        match *self {
            CoefFn::Const(c) => (c, 0.0, 0.0),
            CoefFn::AffineSum { c0, c1 } => (c0 + c1 * (x + y), c1, c1),
            CoefFn::Bilinear { c0, c1 } => (c0 + c1 * x * y, c1 * y, c1 * x),
        }
    }
}

/// One side's material description.
#[derive(Clone, Copy, Debug)]
pub struct SideMaterial {
    pub mu: CoefFn,
    pub lambda: CoefFn,
}

impl SideMaterial {
    /// Constant material from shear modulus and Poisson ratio.
    /// Poisson ratios are expected in (0, 0.5) for physical cases.
    pub fn constant(mu: f64, nu: f64) -> Result<Self, MaterialError> {
        let d = 1.0 - 2.0 * nu;
        if crate::math::abs(d) < 1e-12 {
            return Err(MaterialError::Incompressible);
        }
        let lambda = 2.0 * mu * nu / d;
        Ok(SideMaterial { mu: CoefFn::Const(mu), lambda: CoefFn::Const(lambda) })
    }

    pub fn variable(mu: CoefFn, lambda: CoefFn) -> Self {
        SideMaterial { mu, lambda }
    }
}

/// Piecewise material field over `Ω⁺ ∪ Ω⁻`.
#[derive(Clone, Copy, Debug)]
pub struct ElasticField {
    pub plus: SideMaterial,
    pub minus: SideMaterial,
}

/// Pointwise one-sided material values used by assembly and the jump system.
#[derive(Clone, Copy, Debug)]
pub struct MatEval {
    pub mu: f64,
    pub lambda: f64,
    pub nu: f64,
    /// P-wave modulus `λ + 2μ`.
    pub m: f64,
    pub mu_x: f64,
    pub mu_y: f64,
    pub lambda_x: f64,
    pub lambda_y: f64,
}

impl ElasticField {
    pub fn side(&self, side: Side) -> &SideMaterial {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    /// One-sided evaluation at `(x, y)`; the caller picks the side (e.g. for
    /// one-sided limits at the interface).
    pub fn eval(&self, side: Side, x: f64, y: f64) -> MatEval {
        let m = self.side(side);
        let (mu, mu_x, mu_y) = m.mu.eval(x, y);
        let (lambda, lambda_x, lambda_y) = m.lambda.eval(x, y);
        MatEval {
            mu,
            lambda,
            nu: lambda / (2.0 * (lambda + mu)),
            m: lambda + 2.0 * mu,
            mu_x,
            mu_y,
            lambda_x,
            lambda_y,
        }
    }
}
