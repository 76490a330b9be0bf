//! Interface curves: point classification, mesh-line crossings, local frames.
//!
//! Every curve is normalized to an implicit signed indicator, negative inside
//! `Ω⁻` and positive in `Ω⁺`, so classification and crossing detection share
//! one code path. Parametric curves (the jigsaw benchmark) get an indicator
//! built from a dense polyline: even-odd parity for the sign, distance to the
//! polyline far away, and a nearest-parameter refinement against the true
//! curve close by, so crossings and normals are not limited by the polyline
//! resolution.

use alloc::string::String;
use alloc::vec::Vec;

use crate::grid::GridSpec;
use crate::math;

/// Number of parameter samples backing a parametric curve's indicator.
const PARAMETRIC_SAMPLES: usize = 2048;

/// Relative indicator magnitude below which a point counts as on-interface.
pub const ON_INTERFACE_TOL: f64 = 1e-10;

/// Relative indicator magnitude targeted by crossing root-finding.
const CROSSING_TOL: f64 = 1e-12;

const BISECT_MAX_ITER: usize = 200;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Raw classification of a point. Grid nodes whose indicator magnitude falls
/// under the snap tolerance are `OnInterface` and treated as belonging to
/// `Ω⁻` everywhere downstream.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PointClass {
    Plus,
    Minus,
    OnInterface,
}

impl PointClass {
    pub fn side(self) -> Side {
        match self {
            PointClass::Plus => Side::Plus,
            PointClass::Minus | PointClass::OnInterface => Side::Minus,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    /// Node classifications disagree across a segment but the indicator does
    /// not change sign: the grid does not resolve the geometry.
    NoBracket { line: MeshLine, seg: usize },
    /// The indicator gradient vanished where a normal was requested.
    DegenerateNormal { x: f64, y: f64 },
    /// A parametric curve definition was empty or degenerate.
    BadCurve(String),
}

impl core::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeometryError::NoBracket { line, seg } => {
                write!(f, "no sign bracket on {line:?} segment {seg} (geometry under-resolved)")
            }
            GeometryError::DegenerateNormal { x, y } => {
                write!(f, "degenerate indicator gradient at ({x}, {y})")
            }
            GeometryError::BadCurve(msg) => write!(f, "bad curve: {msg}"),
        }
    }
}

/// Finite trigonometric series `c0 + Σ aₖ cos(kt) + Σ bₖ sin(kt)`.
#[derive(Clone, Debug)]
pub struct TrigSeries {
    pub constant: f64,
    pub cos_terms: Vec<(f64, f64)>,
    pub sin_terms: Vec<(f64, f64)>,
}

impl TrigSeries {
    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.constant;
        for &(k, c) in &self.cos_terms {
            v += c * math::cos(k * t);
        }
        for &(k, c) in &self.sin_terms {
            v += c * math::sin(k * t);
        }
        v
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for &(k, c) in &self.cos_terms {
            v -= c * k * math::sin(k * t);
        }
        for &(k, c) in &self.sin_terms {
            v += c * k * math::cos(k * t);
        }
        v
    }
}

/// Closed parametric curve with a sampled polyline for fast queries.
#[derive(Clone, Debug)]
pub struct Parametric {
    x: TrigSeries,
    y: TrigSeries,
    samples: Vec<(f64, f64, f64)>,
    max_seg_len: f64,
    ccw: bool,
}

impl Parametric {
    pub fn new(x: TrigSeries, y: TrigSeries) -> Result<Self, GeometryError> {
        let n = PARAMETRIC_SAMPLES;
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
            samples.push((t, x.eval(t), y.eval(t)));
        }
        let mut max_seg = 0.0f64;
        let mut area2 = 0.0;
        for k in 0..n {
            let (_, x0, y0) = samples[k];
            let (_, x1, y1) = samples[(k + 1) % n];
            max_seg = max_seg.max(math::hypot(x1 - x0, y1 - y0));
            area2 += x0 * y1 - x1 * y0;
        }
        if max_seg == 0.0 {
            return Err(GeometryError::BadCurve(String::from("degenerate parametric curve")));
        }
        Ok(Parametric { x, y, samples, max_seg_len: max_seg, ccw: area2 > 0.0 })
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        (self.x.eval(t), self.y.eval(t))
    }

    /// Unit normal pointing toward `Ω⁺` (outside) at parameter `t`.
    fn outward_normal(&self, t: f64) -> Result<(f64, f64), GeometryError> {
        let (dx, dy) = (self.x.deriv(t), self.y.deriv(t));
        let len = math::hypot(dx, dy);
        if len < 1e-12 {
            let (px, py) = self.point(t);
            return Err(GeometryError::DegenerateNormal { x: px, y: py });
        }
        if self.ccw {
            Ok((dy / len, -dx / len))
        } else {
            Ok((-dy / len, dx / len))
        }
    }

    /// Even-odd parity against the polyline.
    fn inside(&self, px: f64, py: f64) -> bool {
        let n = self.samples.len();
        let mut inside = false;
        for k in 0..n {
            let (_, x0, y0) = self.samples[k];
            let (_, x1, y1) = self.samples[(k + 1) % n];
            if (y0 > py) != (y1 > py) {
                let xi = x0 + (py - y0) / (y1 - y0) * (x1 - x0);
                if px < xi {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Squared distance to the polyline and the index of the nearest sample.
    fn nearest_sample(&self, px: f64, py: f64) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (k, &(_, x, y)) in self.samples.iter().enumerate() {
            let d2 = (x - px) * (x - px) + (y - py) * (y - py);
            if d2 < best.1 {
                best = (k, d2);
            }
        }
        best
    }

    /// Parameter of the closest point on the true curve, refined by golden
    /// section over the bracketing sample window.
    fn nearest_parameter(&self, px: f64, py: f64) -> f64 {
        let (k, _) = self.nearest_sample(px, py);
        let n = self.samples.len();
        let step = 2.0 * core::f64::consts::PI / n as f64;
        let t_mid = self.samples[k].0;
        let mut lo = t_mid - step;
        let mut hi = t_mid + step;
        let d2 = |t: f64| {
            let (cx, cy) = self.point(t);
            (cx - px) * (cx - px) + (cy - py) * (cy - py)
        };
        let inv_phi = 0.618_033_988_749_894_9_f64;
        let mut a = hi - inv_phi * (hi - lo);
        let mut b = lo + inv_phi * (hi - lo);
        let mut fa = d2(a);
        let mut fb = d2(b);
        for _ in 0..90 {
            if fa < fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = d2(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = d2(b);
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Signed distance: negative inside. Far from the polyline the polyline
    /// distance is returned directly; near it the value is refined against
    /// the true curve so crossings land on the exact geometry.
    fn signed_distance(&self, px: f64, py: f64) -> f64 {
        let (_, d2) = self.nearest_sample(px, py);
        let d_poly = math::sqrt(d2);
        if d_poly > 3.0 * self.max_seg_len {
            return if self.inside(px, py) { -d_poly } else { d_poly };
        }
        let t = self.nearest_parameter(px, py);
        let (cx, cy) = self.point(t);
        let d = math::hypot(px - cx, py - cy);
        match self.outward_normal(t) {
            Ok((nx, ny)) => {
                if (px - cx) * nx + (py - cy) * ny >= 0.0 {
                    d
                } else {
                    -d
                }
            }
            // Tangent degenerated; fall back to parity.
            Err(_) => {
                if self.inside(px, py) {
                    -d
                } else {
                    d
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
enum CurveKind {
    /// x² + y² = r0²
    Circle { r0: f64 },
    /// a·x² + b·y² = r²
    Ellipse { a: f64, b: f64, r: f64 },
    /// Polar r(θ) = base + amp·sin(lobes·θ)
    Flower { base: f64, amp: f64, lobes: u32 },
    Parametric(Parametric),
    /// User level function; `scale` sets tolerance units, `length` the
    /// finite-difference step base for normals.
    Implicit { f: fn(f64, f64) -> f64, scale: f64, length: f64 },
}

/// A closed, non-self-intersecting curve splitting the domain in two, exposed
/// as a signed indicator that is negative in `Ω⁻`. By default the enclosed
/// region is `Ω⁻`; [`InterfaceCurve::inverted`] swaps the labels for cases
/// whose minus phase is the exterior.
#[derive(Clone, Debug)]
pub struct InterfaceCurve {
    kind: CurveKind,
    flip: bool,
}

impl InterfaceCurve {
    pub fn circle(r0: f64) -> Self {
        InterfaceCurve { kind: CurveKind::Circle { r0 }, flip: false }
    }

    pub fn ellipse(a: f64, b: f64, r: f64) -> Self {
        InterfaceCurve { kind: CurveKind::Ellipse { a, b, r }, flip: false }
    }

    pub fn flower(base: f64, amp: f64, lobes: u32) -> Self {
        InterfaceCurve { kind: CurveKind::Flower { base, amp, lobes }, flip: false }
    }

    pub fn parametric(x: TrigSeries, y: TrigSeries) -> Result<Self, GeometryError> {
        Ok(InterfaceCurve { kind: CurveKind::Parametric(Parametric::new(x, y)?), flip: false })
    }

    pub fn implicit(f: fn(f64, f64) -> f64, scale: f64, length: f64) -> Self {
        InterfaceCurve { kind: CurveKind::Implicit { f, scale, length }, flip: false }
    }

    /// Swap `Ω⁺` and `Ω⁻`.
    pub fn inverted(mut self) -> Self {
        self.flip = !self.flip;
        self
    }

    /// Signed indicator, negative in `Ω⁻`.
    pub fn indicator(&self, x: f64, y: f64) -> f64 {
        let v = self.indicator_raw(x, y);
        if self.flip {
            -v
        } else {
            v
        }
    }

    fn indicator_raw(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            CurveKind::Circle { r0 } => x * x + y * y - r0 * r0,
            CurveKind::Ellipse { a, b, r } => a * x * x + b * y * y - r * r,
            CurveKind::Flower { base, amp, lobes } => {
                let r = math::hypot(x, y);
                if r < 1e-14 {
                    return -base;
                }
                let theta = math::atan2(y, x);
                r - base - amp * math::sin(*lobes as f64 * theta)
            }
            CurveKind::Parametric(p) => p.signed_distance(x, y),
            CurveKind::Implicit { f, .. } => f(x, y),
        }
    }

    /// Magnitude scale of the indicator, for tolerance comparisons.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            CurveKind::Circle { r0 } => r0 * r0,
            CurveKind::Ellipse { r, .. } => r * r,
            CurveKind::Flower { base, .. } => *base,
            CurveKind::Parametric(_) => 1.0,
            CurveKind::Implicit { scale, .. } => *scale,
        }
    }

    /// True when the indicator is (near) a distance function, so a small
    /// endpoint magnitude bound rules out interior sign changes.
    fn indicator_is_distance(&self) -> bool {
        matches!(self.kind, CurveKind::Parametric(_))
    }

    /// Unit normal pointing from `Ω⁻` toward `Ω⁺`, from the normalized
    /// indicator gradient.
    pub fn normal(&self, x: f64, y: f64) -> Result<(f64, f64), GeometryError> {
        let (nx, ny) = self.normal_raw(x, y)?;
        if self.flip {
            Ok((-nx, -ny))
        } else {
            Ok((nx, ny))
        }
    }

    fn normal_raw(&self, x: f64, y: f64) -> Result<(f64, f64), GeometryError> {
        let (gx, gy) = match &self.kind {
            CurveKind::Circle { .. } => (2.0 * x, 2.0 * y),
            CurveKind::Ellipse { a, b, .. } => (2.0 * a * x, 2.0 * b * y),
            CurveKind::Flower { amp, lobes, .. } => {
                let r = math::hypot(x, y);
                if r < 1e-14 {
                    return Err(GeometryError::DegenerateNormal { x, y });
                }
                let theta = math::atan2(y, x);
                let dr = amp * *lobes as f64 * math::cos(*lobes as f64 * theta);
                (x / r + dr * y / (r * r), y / r - dr * x / (r * r))
            }
            CurveKind::Parametric(p) => {
                let t = p.nearest_parameter(x, y);
                let (nx, ny) = p.outward_normal(t)?;
                return Ok((nx, ny));
            }
            CurveKind::Implicit { f, length, .. } => {
                let h = 1e-6 * *length;
                ((f(x + h, y) - f(x - h, y)) / (2.0 * h), (f(x, y + h) - f(x, y - h)) / (2.0 * h))
            }
        };
        let len = math::hypot(gx, gy);
        if len < 1e-12 {
            return Err(GeometryError::DegenerateNormal { x, y });
        }
        Ok((gx / len, gy / len))
    }
}

/// Classify a point against the curve with the standard snap tolerance.
pub fn classify_point(curve: &InterfaceCurve, x: f64, y: f64) -> PointClass {
    let v = curve.indicator(x, y);
    if math::abs(v) <= ON_INTERFACE_TOL * curve.scale() {
        PointClass::OnInterface
    } else if v > 0.0 {
        PointClass::Plus
    } else {
        PointClass::Minus
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MeshLine {
    /// y = y_j, varying x.
    Horizontal { j: usize },
    /// x = x_i, varying y.
    Vertical { i: usize },
}

/// One interface crossing of a grid cell edge, with its local frame.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub pos: (f64, f64),
    pub line: MeshLine,
    /// Index of the lower node of the crossed segment along the line.
    pub seg: usize,
    /// Angle of the outward (`Ω⁻`→`Ω⁺`) normal against +x, in [0, 2π).
    pub theta: f64,
    pub normal: (f64, f64),
    pub tangent: (f64, f64),
}

/// All crossings on the mesh lines of `grid`, plus segments found to be
/// crossed more than once (reported, never silently resolved).
#[derive(Clone, Debug, Default)]
pub struct Crossings {
    pub list: Vec<Crossing>,
    pub multi_cross_segments: Vec<(MeshLine, usize)>,
}

fn bisect(
    curve: &InterfaceCurve,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    eval: impl Fn(f64) -> f64,
) -> f64 {
    let tol = CROSSING_TOL * curve.scale();
    let mut mid = 0.5 * (a + b);
    for _ in 0..BISECT_MAX_ITER {
        mid = 0.5 * (a + b);
        let fm = eval(mid);
        if math::abs(fm) <= tol || (b - a) <= 1e-15 * math::abs(b.max(-a)).max(1e-30) {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    mid
}

fn frame_at(curve: &InterfaceCurve, x: f64, y: f64) -> Result<((f64, f64), (f64, f64), f64), GeometryError> {
    let n = curve.normal(x, y)?;
    let tangent = (-n.1, n.0);
    let theta = math::angle_2pi(n.1, n.0);
    Ok((n, tangent, theta))
}

/// Locate every crossing of the interface with the mesh lines of `grid`.
///
/// Each cell edge whose endpoint classifications differ yields exactly one
/// crossing, located by bisection on the indicator. Edges crossed an even
/// number of times are invisible to the sign test; interior re-sampling flags
/// them in `multi_cross_segments`.
pub fn find_crossings(curve: &InterfaceCurve, grid: &GridSpec) -> Result<Crossings, GeometryError> {
    let mut out = Crossings::default();
    let scale = curve.scale();
    let snap = ON_INTERFACE_TOL * scale;

    let mut handle_segment = |line: MeshLine,
                              seg: usize,
                              p0: (f64, f64),
                              p1: (f64, f64)|
     -> Result<(), GeometryError> {
        let f0 = curve.indicator(p0.0, p0.1);
        let f1 = curve.indicator(p1.0, p1.1);
        let c0 = classify_point(curve, p0.0, p0.1).side();
        let c1 = classify_point(curve, p1.0, p1.1).side();

        // Interior re-sampling to catch segments the endpoint signs miss.
        let seg_len = math::hypot(p1.0 - p0.0, p1.1 - p0.1);
        let skip_scan = curve.indicator_is_distance()
            && math::abs(f0).min(math::abs(f1)) > 1.5 * seg_len;
        if !skip_scan {
            let mut signs_seen = 0usize;
            let mut prev = f0 > 0.0;
            for q in [0.25, 0.5, 0.75] {
                let fx = curve.indicator(p0.0 + q * (p1.0 - p0.0), p0.1 + q * (p1.1 - p0.1));
                if math::abs(fx) > snap && (fx > 0.0) != prev {
                    signs_seen += 1;
                    prev = fx > 0.0;
                }
            }
            if math::abs(f1) > snap && (f1 > 0.0) != prev {
                signs_seen += 1;
            }
            if signs_seen > 1 {
                out.multi_cross_segments.push((line, seg));
            }
        }

        if c0 == c1 {
            return Ok(());
        }
        // On-interface endpoints are themselves the crossing.
        let pos = if math::abs(f0) <= snap {
            p0
        } else if math::abs(f1) <= snap {
            p1
        } else if (f0 > 0.0) == (f1 > 0.0) {
            return Err(GeometryError::NoBracket { line, seg });
        } else {
            match line {
                MeshLine::Horizontal { .. } => {
                    let x = bisect(curve, p0.0, f0, p1.0, |x| curve.indicator(x, p0.1));
                    (x, p0.1)
                }
                MeshLine::Vertical { .. } => {
                    let y = bisect(curve, p0.1, f0, p1.1, |y| curve.indicator(p0.0, y));
                    (p0.0, y)
                }
            }
        };
        let (normal, tangent, theta) = frame_at(curve, pos.0, pos.1)?;
        out.list.push(Crossing { pos, line, seg, theta, normal, tangent });
        Ok(())
    };

    for j in 0..grid.ny {
        let y = grid.y(j);
        for i in 0..grid.nx - 1 {
            handle_segment(
                MeshLine::Horizontal { j },
                i,
                (grid.x(i), y),
                (grid.x(i + 1), y),
            )?;
        }
    }
    for i in 0..grid.nx {
        let x = grid.x(i);
        for j in 0..grid.ny - 1 {
            handle_segment(
                MeshLine::Vertical { i },
                j,
                (x, grid.y(j)),
                (x, grid.y(j + 1)),
            )?;
        }
    }
    Ok(out)
}

/// Normal angle at a point assumed to lie on the curve.
pub fn normal_angle(curve: &InterfaceCurve, x: f64, y: f64) -> Result<f64, GeometryError> {
    let (_, _, theta) = frame_at(curve, x, y)?;
    Ok(theta)
}

/// The jigsaw benchmark curve.
pub fn jigsaw_curve() -> InterfaceCurve {
    let x = TrigSeries {
        constant: 0.0,
        cos_terms: alloc::vec![(1.0, 0.6), (3.0, -0.3)],
        sin_terms: Vec::new(),
    };
    let y = TrigSeries {
        constant: 1.5,
        cos_terms: Vec::new(),
        sin_terms: alloc::vec![(1.0, 0.7), (3.0, -0.07), (7.0, 0.2)],
    };
    InterfaceCurve::parametric(x, y).expect("jigsaw curve is well-formed")
}
