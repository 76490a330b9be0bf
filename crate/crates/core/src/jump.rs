//! The 4×8 interface-condition system at a crossing and its eliminations.
//!
//! Unknowns are the one-sided first derivatives at the crossing, ordered
//!
//! ```text
//! C = (u1x⁺, u1x⁻, u1y⁺, u1y⁻, u2x⁺, u2x⁻, u2y⁺, u2y⁻)
//! ```
//!
//! Rows 1–2 are the tangential derivatives of the displacement jump
//! conditions; rows 3–4 the two traction jumps. Combining rows 3–4 with
//! multiples of rows 1–2 removes one side's transverse derivative pair,
//! leaving two conditions on derivatives the one-dimensional stencils can
//! reach. The combinations are produced by exact row operations rather than
//! transcribed closed forms.

use crate::geometry::{Crossing, Side};
use crate::material::ElasticField;
use crate::math::{abs, cos, sin};
use crate::mms::JumpData;

pub const N_DERIVS: usize = 8;

/// Column of a one-sided derivative in the condition matrix:
/// `component` is 0 for u1, 1 for u2.
pub fn column(component: usize, axis_is_x: bool, side: Side) -> usize {
    debug_assert!(component < 2);
    component * 4
        + if axis_is_x { 0 } else { 2 }
        + match side {
            Side::Plus => 0,
            Side::Minus => 1,
        }
}

/// Interface conditions at one crossing.
#[derive(Clone, Debug)]
pub struct JumpSystem {
    pub theta: f64,
    pub mat: [[f64; N_DERIVS]; 4],
    /// (∂τ[u1], ∂τ[u2], φ, ψ)
    pub rhs: [f64; 4],
    pub m_plus: f64,
    pub m_minus: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Which transverse derivative pair the combined conditions drop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DropPair {
    /// ∂u1⁻/∂y and ∂u2⁻/∂y
    YMinus,
    /// ∂u1⁺/∂y and ∂u2⁺/∂y
    YPlus,
    /// ∂u1⁻/∂x and ∂u2⁻/∂x
    XMinus,
    /// ∂u1⁺/∂x and ∂u2⁺/∂x
    XPlus,
}

impl DropPair {
    /// Columns of (u1-derivative, u2-derivative) to annihilate.
    pub fn columns(self) -> (usize, usize) {
        match self {
            DropPair::YMinus => (3, 7),
            DropPair::YPlus => (2, 6),
            DropPair::XMinus => (1, 5),
            DropPair::XPlus => (0, 4),
        }
    }

    pub fn all() -> [DropPair; 4] {
        [DropPair::YMinus, DropPair::YPlus, DropPair::XMinus, DropPair::XPlus]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EliminateError {
    /// The tangential-row pivots on the dropped columns vanish at this angle.
    Singular { pivot: f64 },
}

impl core::fmt::Display for EliminateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EliminateError::Singular { pivot } => {
                write!(f, "elimination pivot {pivot:e} too small for this drop choice")
            }
        }
    }
}

/// Two interface conditions with the dropped derivative pair removed.
#[derive(Clone, Debug)]
pub struct CombinedConditions {
    pub rows: [[f64; N_DERIVS]; 2],
    pub rhs: [f64; 2],
}

/// Assemble the 4×8 condition system at a crossing from one-sided material
/// limits and the crossing's jump data.
pub fn build_jump_system(cross: &Crossing, field: &ElasticField, jumps: &JumpData) -> JumpSystem {
    let (x, y) = cross.pos;
    let p = field.eval(Side::Plus, x, y);
    let m = field.eval(Side::Minus, x, y);
    let th = cross.theta;
    let (c, s) = (cos(th), sin(th));

    let mut mat = [[0.0; N_DERIVS]; 4];
    // Tangential derivative of [u1] and [u2]: τ = (−sinθ, cosθ).
    mat[0] = [-s, s, c, -c, 0.0, 0.0, 0.0, 0.0];
    mat[1] = [0.0, 0.0, 0.0, 0.0, -s, s, c, -c];
    // Traction jumps with n = (cosθ, sinθ); M is the p-wave modulus.
    mat[2] = [
        p.m * c,
        -m.m * c,
        p.mu * s,
        -m.mu * s,
        p.mu * s,
        -m.mu * s,
        p.lambda * c,
        -m.lambda * c,
    ];
    mat[3] = [
        p.lambda * s,
        -m.lambda * s,
        p.mu * c,
        -m.mu * c,
        p.mu * c,
        -m.mu * c,
        p.m * s,
        -m.m * s,
    ];

    JumpSystem {
        theta: th,
        mat,
        rhs: [jumps.b_tan.0, jumps.b_tan.1, jumps.traction.0, jumps.traction.1],
        m_plus: p.m,
        m_minus: m.m,
        mu_plus: p.mu,
        mu_minus: m.mu,
        lambda_plus: p.lambda,
        lambda_minus: m.lambda,
    }
}

/// Numeric rank of the condition matrix.
pub fn rank(sys: &JumpSystem) -> usize {
    let mut flat = [0.0; 4 * N_DERIVS];
    for (r, row) in sys.mat.iter().enumerate() {
        flat[r * N_DERIVS..(r + 1) * N_DERIVS].copy_from_slice(row);
    }
    crate::smallsys::numeric_rank(4, N_DERIVS, &flat, 1e-10)
}

/// Eliminate the chosen derivative pair from the traction rows using the
/// tangential rows. Row 1 only touches u1-derivatives and row 2 only
/// u2-derivatives, so each dropped column has exactly one candidate pivot.
pub fn eliminate(sys: &JumpSystem, drop: DropPair) -> Result<CombinedConditions, EliminateError> {
    let (c1, c2) = drop.columns();
    let scale = sys.mu_plus.max(sys.mu_minus).max(1.0);
    let p1 = sys.mat[0][c1];
    let p2 = sys.mat[1][c2];
    // The pivots are ±sinθ or ±cosθ; a relative floor keeps grazing-angle
    // combinations from amplifying roundoff into the conditions.
    if abs(p1) < 1e-12 || abs(p2) < 1e-12 {
        return Err(EliminateError::Singular { pivot: if abs(p1) < abs(p2) { p1 } else { p2 } });
    }
    let _ = scale;
    let mut rows = [[0.0; N_DERIVS]; 2];
    let mut rhs = [0.0; 2];
    for (out, src) in [(0usize, 2usize), (1, 3)] {
        let f1 = sys.mat[src][c1] / p1;
        let f2 = sys.mat[src][c2] / p2;
        for k in 0..N_DERIVS {
            rows[out][k] = sys.mat[src][k] - f1 * sys.mat[0][k] - f2 * sys.mat[1][k];
        }
        // The operation zeroes these exactly up to roundoff; pin them.
        rows[out][c1] = 0.0;
        rows[out][c2] = 0.0;
        rhs[out] = sys.rhs[src] - f1 * sys.rhs[0] - f2 * sys.rhs[1];
    }
    Ok(CombinedConditions { rows, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MeshLine;
    use crate::material::SideMaterial;
    use crate::math::XorShift;

    fn cross_at(theta: f64) -> Crossing {
        Crossing {
            pos: (0.3, 0.1),
            line: MeshLine::Horizontal { j: 1 },
            seg: 0,
            theta,
            normal: (cos(theta), sin(theta)),
            tangent: (-sin(theta), cos(theta)),
        }
    }

    fn field_1a() -> ElasticField {
        ElasticField {
            plus: SideMaterial::constant(1.5e6, 0.20).unwrap(),
            minus: SideMaterial::constant(2.0e6, 0.24).unwrap(),
        }
    }

    fn matched_field() -> ElasticField {
        ElasticField {
            plus: SideMaterial::constant(2.0e6, 0.3).unwrap(),
            minus: SideMaterial::constant(2.0e6, 0.3).unwrap(),
        }
    }

    #[test]
    fn axis_aligned_tangential_rows_reduce_to_y_jumps() {
        let sys = build_jump_system(&cross_at(0.0), &field_1a(), &JumpData::default());
        // cosθ = 1, sinθ = 0: row 1 is [u1y], row 2 is [u2y].
        assert_eq!(sys.mat[0], [0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(sys.mat[1], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0]);
    }

    #[test]
    fn matched_continuous_derivatives_satisfy_system() {
        // With equal materials and zero jump data, any C whose ± entries
        // agree solves all four conditions.
        let theta = core::f64::consts::PI / 4.0;
        let sys = build_jump_system(&cross_at(theta), &matched_field(), &JumpData::default());
        let c = [1.3, 1.3, -0.7, -0.7, 0.4, 0.4, 2.2, 2.2];
        for r in 0..4 {
            let dot: f64 = sys.mat[r].iter().zip(c).map(|(a, b)| a * b).sum();
            assert!(abs(dot - sys.rhs[r]) < 1e-9 * sys.m_plus);
        }
    }

    #[test]
    fn rank_is_four_off_axis() {
        let sys = build_jump_system(
            &cross_at(core::f64::consts::PI / 4.0),
            &field_1a(),
            &JumpData::default(),
        );
        assert_eq!(rank(&sys), 4);
    }

    #[test]
    fn elimination_annihilates_dropped_columns() {
        let mut rng = XorShift::new(11);
        for _ in 0..50 {
            // Keep θ at least 0.05 away from axis multiples.
            let mut theta;
            loop {
                theta = rng.in_range(0.0, 2.0 * core::f64::consts::PI);
                let m = theta % (0.5 * core::f64::consts::PI);
                if m > 0.05 && m < 0.5 * core::f64::consts::PI - 0.05 {
                    break;
                }
            }
            let field = ElasticField {
                plus: SideMaterial::constant(rng.in_range(1e3, 3e6), rng.in_range(0.01, 0.45))
                    .unwrap(),
                minus: SideMaterial::constant(rng.in_range(1e3, 3e6), rng.in_range(0.01, 0.45))
                    .unwrap(),
            };
            let jumps = JumpData {
                b: (0.0, 0.0),
                b_tan: (rng.in_range(-1.0, 1.0), rng.in_range(-1.0, 1.0)),
                traction: (rng.in_range(-1e6, 1e6), rng.in_range(-1e6, 1e6)),
            };
            let sys = build_jump_system(&cross_at(theta), &field, &jumps);
            assert_eq!(rank(&sys), 4);
            for drop in DropPair::all() {
                let comb = eliminate(&sys, drop).unwrap();
                let (c1, c2) = drop.columns();
                for row in &comb.rows {
                    assert_eq!(row[c1], 0.0);
                    assert_eq!(row[c2], 0.0);
                }
                // Combined rows stay in the row space of the original system.
                let mut flat = [0.0; 32];
                for (r, row) in sys.mat.iter().enumerate() {
                    flat[r * 8..(r + 1) * 8].copy_from_slice(row);
                }
                for row in &comb.rows {
                    let scale = row.iter().fold(1.0f64, |s, &v| s.max(abs(v)));
                    let mut scaled = *row;
                    for v in scaled.iter_mut() {
                        *v /= scale;
                    }
                    let mut flat_scaled = flat;
                    let fs = flat.iter().fold(1.0f64, |s, &v| s.max(abs(v)));
                    for v in flat_scaled.iter_mut() {
                        *v /= fs;
                    }
                    assert!(
                        crate::smallsys::rowspace_residual(4, 8, &flat_scaled, &scaled) < 1e-10
                    );
                }
            }
        }
    }

    /// The published closed forms for the first drop choice, after the known
    /// transcription slip in the u2y⁺ coefficient is repaired (the row
    /// operations and the symmetric second set both give cos²θ there, not
    /// sinθcosθ).
    #[test]
    fn first_printed_set_matches_row_operations() {
        let theta = core::f64::consts::PI / 3.0;
        let (c, s) = (cos(theta), sin(theta));
        let field = field_1a();
        let sys = build_jump_system(&cross_at(theta), &field, &JumpData::default());
        let comb = eliminate(&sys, DropPair::YMinus).unwrap();
        let (mp, mm) = (sys.m_plus, sys.m_minus);
        let (up, um) = (sys.mu_plus, sys.mu_minus);
        let (lp, lm) = (sys.lambda_plus, sys.lambda_minus);
        // φ row scaled by −cosθ.
        let phi_row = [
            -mp * c * c - um * s * s,
            mm * c * c + um * s * s,
            (um - up) * s * c,
            0.0,
            -(lm + up) * s * c,
            (lm + um) * c * s,
            (lm - lp) * c * c,
            0.0,
        ];
        // ψ row scaled by −cosθ.
        let psi_row = [
            -(lp + um) * s * c,
            (lm + um) * s * c,
            (um - up) * c * c,
            0.0,
            -up * c * c - mm * s * s,
            um * c * c + mm * s * s,
            (mm - mp) * s * c,
            0.0,
        ];
        let scale = mp;
        for k in 0..8 {
            assert!(
                abs(-c * comb.rows[0][k] - phi_row[k]) < 1e-10 * scale,
                "phi row entry {k}: {} vs {}",
                -c * comb.rows[0][k],
                phi_row[k]
            );
            assert!(
                abs(-c * comb.rows[1][k] - psi_row[k]) < 1e-10 * scale,
                "psi row entry {k}: {} vs {}",
                -c * comb.rows[1][k],
                psi_row[k]
            );
        }
    }

    #[test]
    fn symmetric_materials_smooth_field_gives_zero_residual() {
        let theta = 1.1;
        let sys = build_jump_system(&cross_at(theta), &matched_field(), &JumpData::default());
        let comb = eliminate(&sys, DropPair::YMinus).unwrap();
        let c = [0.5, 0.5, -1.2, -1.2, 0.9, 0.9, 0.3, 0.3];
        for r in 0..2 {
            let dot: f64 = comb.rows[r].iter().zip(c).map(|(a, b)| a * b).sum();
            assert!(abs(dot - comb.rhs[r]) < 1e-9 * sys.m_plus);
        }
    }

    #[test]
    fn x_drop_at_right_angle_is_well_defined() {
        // sinθ = 1 pivots keep the x-eliminations regular at θ = π/2.
        let sys = build_jump_system(
            &cross_at(core::f64::consts::PI / 2.0),
            &field_1a(),
            &JumpData::default(),
        );
        assert!(eliminate(&sys, DropPair::XPlus).is_ok());
        assert!(eliminate(&sys, DropPair::XMinus).is_ok());
        // while the y-eliminations degenerate there.
        assert!(matches!(
            eliminate(&sys, DropPair::YMinus),
            Err(EliminateError::Singular { .. })
        ));
    }
}
