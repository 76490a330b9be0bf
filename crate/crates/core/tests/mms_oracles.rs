//! Independent checks of the manufactured solutions: the analytic body
//! forces against a nested finite-difference divergence of the stress built
//! from displacement values alone, the traction jumps against a second
//! stress-assembly route, and the displacement-jump structure of the weak
//! and strong cases.

use mib_elastic::geometry::{classify_point, Crossing, MeshLine, PointClass, Side};
use mib_elastic::math::XorShift;
use mib_elastic::mms::{Case, CaseId};

/// 4th-order central first derivative from values.
fn fd4(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Stress components at a point from displacement *values* only (inner
/// finite differences) and material values.
fn stress_fd(case: &Case, side: Side, x: f64, y: f64, h: f64) -> (f64, f64, f64) {
    let u1 = |x: f64, y: f64| case.eval_exact(side, x, y).u1.v;
    let u2 = |x: f64, y: f64| case.eval_exact(side, x, y).u2.v;
    let u1x = fd4(|t| u1(t, y), x, h);
    let u1y = fd4(|t| u1(x, t), y, h);
    let u2x = fd4(|t| u2(t, y), x, h);
    let u2y = fd4(|t| u2(x, t), y, h);
    let m = case.field.eval(side, x, y);
    let tr = u1x + u2y;
    (m.lambda * tr + 2.0 * m.mu * u1x, m.mu * (u1y + u2x), m.lambda * tr + 2.0 * m.mu * u2y)
}

/// −∇·𝕋 by outer finite differences of the inner-FD stress field: fully
/// independent of every hand-coded derivative. Step sizes shrink for the
/// steep exponential fields of the flower benchmark, whose fifth derivatives
/// reach ~1e8 and would otherwise dominate the oracle's own truncation.
fn force_fd(case: &Case, side: Side, x: f64, y: f64) -> (f64, f64) {
    let steep = matches!(case.displacement, mib_elastic::mms::DisplacementField::Example3);
    let hi = if steep { 1e-4 } else { 2e-4 };
    let ho = if steep { 4e-4 } else { 2e-3 };
    let t11 = |x: f64, y: f64| stress_fd(case, side, x, y, hi).0;
    let t12 = |x: f64, y: f64| stress_fd(case, side, x, y, hi).1;
    let t22 = |x: f64, y: f64| stress_fd(case, side, x, y, hi).2;
    let d1 = fd4(|t| t11(t, y), x, ho) + fd4(|t| t12(x, t), y, ho);
    let d2 = fd4(|t| t12(t, y), x, ho) + fd4(|t| t22(x, t), y, ho);
    (-d1, -d2)
}

/// Sample points on one side, clear of the interface, the boundary, and the
/// Example-2 origin.
fn sample_points(case: &Case, side: Side, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let (a, b, c, d) = case.bounds;
    let mut rng = XorShift::new(seed);
    let margin = 0.02;
    let scale = case.curve.scale();
    let mut out = Vec::new();
    while out.len() < count {
        let x = rng.in_range(a + 0.05, b - 0.05);
        let y = rng.in_range(c + 0.05, d - 0.05);
        if x * x + y * y < 0.02 {
            continue;
        }
        let ind = case.curve.indicator(x, y);
        if mib_elastic::math::abs(ind) < margin * scale {
            continue;
        }
        if classify_point(&case.curve, x, y).side() == side {
            out.push((x, y));
        }
    }
    out
}

#[test]
fn analytic_forces_match_divergence_oracle() {
    for id in CaseId::all() {
        let case = Case::from_id(id);
        for side in [Side::Plus, Side::Minus] {
            for (k, &(x, y)) in sample_points(&case, side, 100, 0x5eed + id.name().len() as u64)
                .iter()
                .enumerate()
            {
                let (f1, f2) = case.eval_force(side, x, y);
                let (g1, g2) = force_fd(&case, side, x, y);
                let scale = 1.0 + f1.abs().max(f2.abs());
                assert!(
                    (f1 - g1).abs() / scale < 1e-6,
                    "case {} {side:?} sample {k} at ({x},{y}): F1 {f1} vs {g1}",
                    case.name
                );
                assert!(
                    (f2 - g2).abs() / scale < 1e-6,
                    "case {} {side:?} sample {k} at ({x},{y}): F2 {f2} vs {g2}",
                    case.name
                );
            }
        }
    }
}

/// Second, independently written traction route: assemble the full 2×2
/// stress tensor entrywise from `T_ij = λ tr(σ) δ_ij + 2μ σ_ij` and contract
/// with the normal.
fn traction_route_b(case: &Case, side: Side, x: f64, y: f64, n: (f64, f64)) -> (f64, f64) {
    let e = case.eval_exact(side, x, y);
    let m = case.field.eval(side, x, y);
    let grad = [[e.u1.dx, e.u1.dy], [e.u2.dx, e.u2.dy]];
    let mut sigma = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            sigma[i][j] = 0.5 * (grad[i][j] + grad[j][i]);
        }
    }
    let tr = sigma[0][0] + sigma[1][1];
    let mut t = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            t[i][j] = m.lambda * tr * delta + 2.0 * m.mu * sigma[i][j];
        }
    }
    (t[0][0] * n.0 + t[0][1] * n.1, t[1][0] * n.0 + t[1][1] * n.1)
}

/// March 64 points around a curve by bisecting rays from an interior point.
fn interface_samples(case: &Case, count: usize) -> Vec<(f64, f64)> {
    let center = match case.name {
        "5" => (0.0, 1.5),
        _ => (0.0, 0.0),
    };
    let inner = case.curve.indicator(center.0 + 1e-3, center.1) > 0.0;
    let mut out = Vec::new();
    for k in 0..count {
        let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.37) / count as f64;
        let (dx, dy) = (t.cos(), t.sin());
        let mut lo = 0.0f64;
        let mut hi = 2.0f64;
        for _ in 0..90 {
            let mid = 0.5 * (lo + hi);
            let p = (center.0 + mid * dx, center.1 + mid * dy);
            if (case.curve.indicator(p.0, p.1) > 0.0) == inner {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        out.push((center.0 + mid * dx, center.1 + mid * dy));
    }
    out
}

#[test]
fn traction_jump_agrees_across_two_routes() {
    for id in CaseId::all() {
        let case = Case::from_id(id);
        for (x, y) in interface_samples(&case, 64) {
            let n = match case.curve.normal(x, y) {
                Ok(n) => n,
                Err(_) => continue,
            };
            let theta = n.1.atan2(n.0);
            let cross = Crossing {
                pos: (x, y),
                line: MeshLine::Horizontal { j: 0 },
                seg: 0,
                theta,
                normal: n,
                tangent: (-n.1, n.0),
            };
            let j = case.eval_jumps(&cross);
            let tp = traction_route_b(&case, Side::Plus, x, y, n);
            let tm = traction_route_b(&case, Side::Minus, x, y, n);
            let want = (tp.0 - tm.0, tp.1 - tm.1);
            let scale = 1.0 + want.0.abs().max(want.1.abs());
            assert!(
                (j.traction.0 - want.0).abs() / scale < 1e-9,
                "case {} phi at ({x},{y})",
                case.name
            );
            assert!(
                (j.traction.1 - want.1).abs() / scale < 1e-9,
                "case {} psi at ({x},{y})",
                case.name
            );
        }
    }
}

#[test]
fn weak_cases_have_no_displacement_jump() {
    for id in [
        CaseId::E1a,
        CaseId::E1b,
        CaseId::E1c,
        CaseId::E2a,
        CaseId::E2b,
        CaseId::E2c,
        CaseId::E3a,
        CaseId::E3b,
        CaseId::E6,
        CaseId::E7,
    ] {
        let case = Case::from_id(id);
        assert!(!case.strong);
        for (x, y) in interface_samples(&case, 64) {
            let p = case.eval_exact(Side::Plus, x, y);
            let m = case.eval_exact(Side::Minus, x, y);
            assert!((p.u1.v - m.u1.v).abs() <= 1e-10, "case {} u1 at ({x},{y})", case.name);
            assert!((p.u2.v - m.u2.v).abs() <= 1e-10, "case {} u2 at ({x},{y})", case.name);
        }
    }
}

#[test]
fn strong_cases_report_consistent_nonzero_jumps() {
    for id in [CaseId::E4, CaseId::E5, CaseId::E8] {
        let case = Case::from_id(id);
        assert!(case.strong);
        let mut max_jump = 0.0f64;
        for (x, y) in interface_samples(&case, 64) {
            let p = case.eval_exact(Side::Plus, x, y);
            let m = case.eval_exact(Side::Minus, x, y);
            // Both one-sided evaluators must agree with the closed-form
            // difference of the two branch formulas.
            let b1 = p.u1.v - m.u1.v;
            let want_b1 = -x * x - 4.0 * y * y + 0.1225;
            assert!((b1 - want_b1).abs() < 1e-12, "case {}", case.name);
            max_jump = max_jump.max(b1.abs());
        }
        assert!(max_jump > 1e-3, "case {} should be strongly discontinuous", case.name);
    }
}

#[test]
fn boundary_values_equal_exact_on_owning_side() {
    for id in CaseId::all() {
        let case = Case::from_id(id);
        let (a, b, c, d) = case.bounds;
        for k in 0..40 {
            let t = k as f64 / 39.0;
            for (x, y) in [
                (a + t * (b - a), c),
                (a + t * (b - a), d),
                (a, c + t * (d - c)),
                (b, c + t * (d - c)),
            ] {
                let side = classify_point(&case.curve, x, y).side();
                let e = case.eval_exact(side, x, y);
                let bv = case.eval_boundary(x, y);
                assert_eq!(bv, (e.u1.v, e.u2.v));
                // Benchmark curves never touch the outer boundary.
                assert!(classify_point(&case.curve, x, y) != PointClass::OnInterface);
            }
        }
    }
}
