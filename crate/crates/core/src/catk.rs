//! Model spaces `M_κ`, comparison triangles, the Laws of Sines, CAT(κ)
//! quadruple checks, Alexandrov angles and the blow-up metric.
//!
//! Points of `M_κ` live on the unit sphere (`κ > 0`), the plane `z = 0`
//! (`κ = 0`) or the upper sheet of the hyperboloid `−x₀² + x₁² + x₂² = −1`
//! (`κ < 0`); distances are the unit-curvature distances divided by `√|κ|`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatkError {
    #[error("curvature must be finite, got {0}")]
    InvalidKappa(f64),
    #[error("point lies on the {found:?} chart, curvature requires {expected:?}")]
    ChartMismatch { expected: Chart, found: Chart },
    #[error("point is off its model surface: {0}")]
    OffModel(String),
    #[error("geodesic not unique")]
    NotUnique,
    #[error("perimeter {perimeter} exceeds comparison perimeter {bound}")]
    Perimeter { perimeter: f64, bound: f64 },
    #[error("triangle inequality violated by sides {0:?}")]
    TriangleInequality([f64; 3]),
    #[error("degenerate triangle with sides {0:?}")]
    Degenerate([f64; 3]),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not geodesics from a common point: d = {d} > 2s = {}", 2.0 * s)]
    NotCommonBase { s: f64, d: f64 },
}

/// Tolerances used throughout: `comparison` for inequalities between
/// distances, `identity` for closed-form identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub comparison: f64,
    pub identity: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    comparison: 1e-9,
    identity: 1e-12,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Sphere,
    Plane,
    Hyperboloid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kappa(f64);

impl Kappa {
    pub fn new(value: f64) -> Result<Self, CatkError> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(CatkError::InvalidKappa(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `D_κ = π/√κ` for `κ > 0`, infinite otherwise.
    pub fn diameter(self) -> f64 {
        if self.0 > 0.0 {
            PI / self.0.sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn chart(self) -> Chart {
        if self.0 > 0.0 {
            Chart::Sphere
        } else if self.0 < 0.0 {
            Chart::Hyperboloid
        } else {
            Chart::Plane
        }
    }

    // √|κ|, or 1 for the plane
    fn scale(self) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else {
            self.0.abs().sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint {
    coords: [f64; 3],
    chart: Chart,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn minkowski(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn combine(x: f64, a: [f64; 3], y: f64, b: [f64; 3]) -> [f64; 3] {
    [x * a[0] + y * b[0], x * a[1] + y * b[1], x * a[2] + y * b[2]]
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    dot(a, cross(b, c))
}

impl ModelPoint {
    const TOL: f64 = 1e-9;

    pub fn sphere(coords: [f64; 3]) -> Result<Self, CatkError> {
        let n = dot(coords, coords).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > Self::TOL {
            return Err(CatkError::OffModel(format!("sphere point with norm {n}")));
        }
        Ok(Self {
            coords,
            chart: Chart::Sphere,
        })
    }

    pub fn plane(x: f64, y: f64) -> Result<Self, CatkError> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(CatkError::OffModel("non-finite plane point".into()));
        }
        Ok(Self {
            coords: [x, y, 0.0],
            chart: Chart::Plane,
        })
    }

    pub fn hyperboloid(coords: [f64; 3]) -> Result<Self, CatkError> {
        let q = minkowski(coords, coords);
        if !q.is_finite() || (q + 1.0).abs() > Self::TOL * coords[0].abs().max(1.0).powi(2) || coords[0] <= 0.0 {
            return Err(CatkError::OffModel(format!("hyperboloid point with form {q}")));
        }
        Ok(Self {
            coords,
            chart: Chart::Hyperboloid,
        })
    }

    /// Validated point on the given chart.
    pub fn on_chart(chart: Chart, coords: [f64; 3]) -> Result<Self, CatkError> {
        match chart {
            Chart::Sphere => Self::sphere(coords),
            Chart::Hyperboloid => Self::hyperboloid(coords),
            Chart::Plane if coords[2] == 0.0 => Self::plane(coords[0], coords[1]),
            Chart::Plane => Err(CatkError::OffModel("plane point with nonzero third coordinate".into())),
        }
    }

    /// Image of the polar coordinates `(r, θ)` under the exponential map at
    /// the base point (north pole, origin, or `(1,0,0)`).
    pub fn polar(kappa: Kappa, r: f64, theta: f64) -> Self {
        let rho = kappa.scale() * r;
        let (s, c) = theta.sin_cos();
        let coords = match kappa.chart() {
            Chart::Sphere => [rho.sin() * c, rho.sin() * s, rho.cos()],
            Chart::Plane => [r * c, r * s, 0.0],
            Chart::Hyperboloid => [rho.cosh(), rho.sinh() * c, rho.sinh() * s],
        };
        Self {
            coords,
            chart: kappa.chart(),
        }
    }

    pub fn base(kappa: Kappa) -> Self {
        Self::polar(kappa, 0.0, 0.0)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }
}

fn check_chart(kappa: Kappa, p: &ModelPoint) -> Result<(), CatkError> {
    if p.chart != kappa.chart() {
        return Err(CatkError::ChartMismatch {
            expected: kappa.chart(),
            found: p.chart,
        });
    }
    Ok(())
}

// distance on the unit-curvature model
fn unit_distance(p: &ModelPoint, q: &ModelPoint) -> f64 {
    match p.chart {
        Chart::Sphere => {
            let c = cross(p.coords, q.coords);
            dot(c, c).sqrt().atan2(dot(p.coords, q.coords))
        }
        Chart::Plane => {
            let d = sub(p.coords, q.coords);
            d[0].hypot(d[1])
        }
        Chart::Hyperboloid => {
            // ⟨p−q, p−q⟩ = 4 sinh²(d/2) on the upper sheet
            let d = sub(p.coords, q.coords);
            2.0 * (minkowski(d, d).max(0.0).sqrt() / 2.0).asinh()
        }
    }
}

/// Distance in `M_κ`.
pub fn model_distance(kappa: Kappa, p: &ModelPoint, q: &ModelPoint) -> Result<f64, CatkError> {
    check_chart(kappa, p)?;
    check_chart(kappa, q)?;
    Ok(unit_distance(p, q) / kappa.scale())
}

/// The point at parameter `t` on the geodesic `[p, q]`.
pub fn geodesic_point(kappa: Kappa, p: &ModelPoint, q: &ModelPoint, t: f64) -> Result<ModelPoint, CatkError> {
    check_chart(kappa, p)?;
    check_chart(kappa, q)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(CatkError::InvalidParameter(format!("t = {t} outside [0, 1]")));
    }
    let delta = unit_distance(p, q);
    let coords = match kappa.chart() {
        Chart::Plane => combine(1.0 - t, p.coords, t, q.coords),
        _ if delta == 0.0 => p.coords,
        Chart::Sphere => {
            if PI - delta < 1e-12 {
                return Err(CatkError::NotUnique);
            }
            let s = delta.sin();
            let v = combine(((1.0 - t) * delta).sin() / s, p.coords, (t * delta).sin() / s, q.coords);
            let n = dot(v, v).sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        }
        Chart::Hyperboloid => {
            let s = delta.sinh();
            let v = combine(((1.0 - t) * delta).sinh() / s, p.coords, (t * delta).sinh() / s, q.coords);
            [(1.0 + v[1] * v[1] + v[2] * v[2]).sqrt(), v[1], v[2]]
        }
    };
    Ok(ModelPoint {
        coords,
        chart: kappa.chart(),
    })
}

/// Side lengths and solved angles; `α` is opposite `a`, `β` opposite `b`,
/// `γ` opposite `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonTriangle {
    pub kappa: Kappa,
    pub sides: [f64; 3],
    pub angles: [f64; 3],
}

impl ComparisonTriangle {
    pub fn perimeter(&self) -> f64 {
        self.sides.iter().sum()
    }
}

/// `s(x)` of the Law of Sines: `x`, `sin(√κ x)` or `sinh(√−κ x)`.
fn sine_kappa(kappa: Kappa, x: f64) -> f64 {
    let k = kappa.value();
    if k > 0.0 {
        (k.sqrt() * x).sin()
    } else if k < 0.0 {
        ((-k).sqrt() * x).sinh()
    } else {
        x
    }
}

/// Comparison triangle in `M_κ` with the given side lengths.
///
/// Angles come from the half-angle forms of the laws of cosines, e.g.
/// `tan²(α/2) = s(σ−b)·s(σ−c) / (s(σ)·s(σ−a))` with `σ` the half perimeter,
/// which stay accurate for thin triangles.
pub fn comparison_triangle(kappa: Kappa, a: f64, b: f64, c: f64) -> Result<ComparisonTriangle, CatkError> {
    let sides = [a, b, c];
    if sides.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(CatkError::InvalidParameter(format!("side lengths {sides:?}")));
    }
    if sides.contains(&0.0) {
        return Err(CatkError::Degenerate(sides));
    }
    let perimeter = a + b + c;
    let bound = 2.0 * kappa.diameter();
    if perimeter >= bound {
        return Err(CatkError::Perimeter { perimeter, bound });
    }
    let excess = [b + c - a, a + c - b, a + b - c];
    if excess.iter().any(|&e| e < 0.0) {
        return Err(CatkError::TriangleInequality(sides));
    }
    let half = perimeter / 2.0;
    let angles = [0, 1, 2].map(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let num = sine_kappa(kappa, excess[j] / 2.0) * sine_kappa(kappa, excess[k] / 2.0);
        let den = sine_kappa(kappa, half) * sine_kappa(kappa, excess[i] / 2.0);
        2.0 * num.max(0.0).sqrt().atan2(den.max(0.0).sqrt())
    });
    Ok(ComparisonTriangle { kappa, sides, angles })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinesReport {
    /// `sin(angle)/s(side)` for the three sides.
    pub ratios: [f64; 3],
    /// Largest pairwise difference of the ratios.
    pub ratio_residual: f64,
    /// For `κ > 0`: largest `|det(a,b,c) − sin α · sin d(a,b) · sin d(a,c)|`
    /// over the cyclic relabellings of the realized unit vectors.
    pub determinant_residual: Option<f64>,
    /// For `κ > 0`: the determinant of the realized vertices.
    pub determinant: Option<f64>,
}

impl SinesReport {
    pub fn residual(&self) -> f64 {
        self.ratio_residual.max(self.determinant_residual.unwrap_or(0.0))
    }
}

/// Residuals of the Law of Sines and, for `κ > 0`, of the determinant
/// identity on a realization of the triangle by unit vectors.
pub fn law_of_sines_residual(kappa: Kappa, tri: &ComparisonTriangle) -> Result<SinesReport, CatkError> {
    let t = comparison_triangle(kappa, tri.sides[0], tri.sides[1], tri.sides[2])?;
    let ratios = [0, 1, 2].map(|i| t.angles[i].sin() / sine_kappa(kappa, t.sides[i]));
    let ratio_residual = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (ratios[i] - ratios[j]).abs())
        .fold(0.0, f64::max);
    let (determinant, determinant_residual) = if kappa.value() > 0.0 {
        let k = kappa.value().sqrt();
        let [a, b, c] = t.sides.map(|x| k * x);
        let [alpha, beta, gamma] = t.angles;
        // vertex A at e₃, B at distance c, C at distance b at angle α from AB
        let va = [0.0, 0.0, 1.0];
        let vb = [c.sin(), 0.0, c.cos()];
        let vc = [b.sin() * alpha.cos(), b.sin() * alpha.sin(), b.cos()];
        let det = det3(va, vb, vc);
        // det(a,b,c) = det(b,c,a) = det(c,a,b)
        let residual = [
            (det - alpha.sin() * c.sin() * b.sin()).abs(),
            (det - beta.sin() * a.sin() * c.sin()).abs(),
            (det - gamma.sin() * b.sin() * a.sin()).abs(),
            // realized opposite side
            (unit_distance(
                &ModelPoint {
                    coords: vb,
                    chart: Chart::Sphere,
                },
                &ModelPoint {
                    coords: vc,
                    chart: Chart::Sphere,
                },
            ) - a)
                .abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        (Some(det), Some(residual))
    } else {
        (None, None)
    };
    Ok(SinesReport {
        ratios,
        ratio_residual,
        determinant_residual,
        determinant,
    })
}

/// Six pairwise distances of points `p, q, r, m` with `m` on `[q, r]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub pq: f64,
    pub pr: f64,
    pub qr: f64,
    pub qm: f64,
    pub mr: f64,
    pub pm: f64,
}

impl Quadruple {
    /// Distances of four points of `M_κ`, with `m` at parameter `t` on `[q, r]`.
    pub fn from_model(kappa: Kappa, p: &ModelPoint, q: &ModelPoint, r: &ModelPoint, t: f64) -> Result<Self, CatkError> {
        let m = geodesic_point(kappa, q, r, t)?;
        let d = |x: &ModelPoint, y: &ModelPoint| model_distance(kappa, x, y);
        Ok(Self {
            pq: d(p, q)?,
            pr: d(p, r)?,
            qr: d(q, r)?,
            qm: d(q, &m)?,
            mr: d(&m, r)?,
            pm: d(p, &m)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatCheck {
    pub pass: bool,
    pub distance: f64,
    pub comparison_distance: f64,
}

pub fn cat_check(kappa: Kappa, quad: &Quadruple) -> Result<CatCheck, CatkError> {
    cat_check_with(kappa, quad, TOLERANCES.comparison)
}

/// Compares `d(p, m)` with the distance from `p̄` to the comparison point
/// `m̄` in the comparison triangle of `(p, q, r)` in `M_κ`.
pub fn cat_check_with(kappa: Kappa, quad: &Quadruple, tol: f64) -> Result<CatCheck, CatkError> {
    let Quadruple { pq, pr, qr, qm, mr, pm } = *quad;
    let all = [pq, pr, qr, qm, mr, pm];
    if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(CatkError::InvalidParameter(format!("distances {all:?}")));
    }
    if (qm + mr - qr).abs() > tol {
        return Err(CatkError::InvalidParameter(format!(
            "m is not on [q, r]: {qm} + {mr} ≠ {qr}"
        )));
    }
    let perimeter = pq + pr + qr;
    let bound = 2.0 * kappa.diameter();
    if perimeter >= bound {
        return Err(CatkError::Perimeter { perimeter, bound });
    }
    let comparison_distance = if qr == 0.0 {
        pq
    } else if pq == 0.0 {
        qm
    } else if pr == 0.0 {
        mr
    } else {
        let tri = comparison_triangle(kappa, qr, pr, pq)?;
        let beta = tri.angles[1];
        let q_bar = ModelPoint::base(kappa);
        let r_bar = ModelPoint::polar(kappa, qr, 0.0);
        let p_bar = ModelPoint::polar(kappa, pq, beta);
        let m_bar = geodesic_point(kappa, &q_bar, &r_bar, (qm / qr).clamp(0.0, 1.0))?;
        model_distance(kappa, &p_bar, &m_bar)?
    };
    Ok(CatCheck {
        pass: pm <= comparison_distance + tol,
        distance: pm,
        comparison_distance,
    })
}

/// North pole and two orthogonal equator points of the unit sphere with the
/// midpoint of the equator arc; fails the `κ = 0` comparison.
pub fn fat_sphere_witness() -> Quadruple {
    let k = Kappa(1.0);
    let p = ModelPoint::polar(k, 0.0, 0.0);
    let q = ModelPoint::polar(k, PI / 2.0, 0.0);
    let r = ModelPoint::polar(k, PI / 2.0, PI / 2.0);
    Quadruple::from_model(k, &p, &q, &r, 0.5).expect("witness points are valid")
}

/// Random valid comparison triangle; for `κ > 0` every side is below
/// `0.6·D_κ`, otherwise below 4.
pub fn random_triangle<R: Rng>(kappa: Kappa, rng: &mut R) -> ComparisonTriangle {
    let max_side = if kappa.value() > 0.0 { 0.6 * kappa.diameter() } else { 4.0 };
    loop {
        let [a, b, c] = [(); 3].map(|_| rng.random_range(1e-3..max_side));
        if let Ok(t) = comparison_triangle(kappa, a, b, c) {
            return t;
        }
    }
}

/// Random point within distance `radius` of the base point.
pub fn sample_point<R: Rng>(kappa: Kappa, radius: f64, rng: &mut R) -> ModelPoint {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = rng.random_range(0.0..2.0 * PI);
    ModelPoint::polar(kappa, r, theta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleEstimate {
    pub angle: f64,
    /// `2·arcsin(d(c(s), c'(s)) / 2s)` along the schedule.
    pub raw: Vec<f64>,
    /// Order-2 Richardson extrapolations of consecutive raw values.
    pub extrapolated: Vec<f64>,
    pub monotone: bool,
    /// Difference of the last two extrapolated values.
    pub last_change: f64,
}

/// `s₀·2^{−k}` for `k = 0..steps`.
pub fn geometric_schedule(s0: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| s0 * 0.5f64.powi(k as i32)).collect()
}

/// Estimates the Alexandrov angle between two geodesics from a common point.
pub fn alexandrov_angle_estimate<P>(
    c: impl Fn(f64) -> P,
    c2: impl Fn(f64) -> P,
    dist: impl Fn(&P, &P) -> f64,
    schedule: &[f64],
) -> Result<AngleEstimate, CatkError> {
    if schedule.is_empty() {
        return Err(CatkError::InvalidParameter("empty schedule".into()));
    }
    if schedule.iter().any(|s| !(s.is_finite() && *s > 0.0)) || schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CatkError::InvalidParameter(
            "schedule must be positive and strictly decreasing".into(),
        ));
    }
    let mut raw = Vec::with_capacity(schedule.len());
    for &s in schedule {
        let d = dist(&c(s), &c2(s));
        if d > 2.0 * s * (1.0 + 1e-12) + 1e-15 {
            return Err(CatkError::NotCommonBase { s, d });
        }
        raw.push(2.0 * (d / (2.0 * s)).min(1.0).asin());
    }
    let extrapolated: Vec<f64> = schedule
        .windows(2)
        .zip(raw.windows(2))
        .map(|(s, th)| {
            let (a, b) = (s[0] * s[0], s[1] * s[1]);
            ((th[1] * a - th[0] * b) / (a - b)).clamp(0.0, PI)
        })
        .collect();
    let eps = 1e-12;
    let monotone = raw.windows(2).all(|w| w[1] >= w[0] - eps) || raw.windows(2).all(|w| w[1] <= w[0] + eps);
    let angle = *extrapolated.last().unwrap_or(raw.last().unwrap());
    let last_change = match extrapolated.as_slice() {
        [.., x, y] => (y - x).abs(),
        _ => 0.0,
    };
    Ok(AngleEstimate {
        angle,
        raw,
        extrapolated,
        monotone,
        last_change,
    })
}

/// `√(d² + θ²)`.
pub fn blowup_metric(d: f64, theta: f64) -> Result<f64, CatkError> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(CatkError::InvalidParameter(format!("distance {d} must be non-negative")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(CatkError::InvalidParameter(format!("angle {theta} outside [0, π]")));
    }
    Ok(d.hypot(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k(v: f64) -> Kappa {
        Kappa::new(v).unwrap()
    }

    #[test]
    fn distances() {
        let n = ModelPoint::sphere([0.0, 0.0, 1.0]).unwrap();
        let e = ModelPoint::sphere([1.0, 0.0, 0.0]).unwrap();
        assert!((model_distance(k(1.0), &n, &e).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((model_distance(k(4.0), &n, &e).unwrap() - PI / 4.0).abs() < 1e-15);
        let o = ModelPoint::hyperboloid([1.0, 0.0, 0.0]).unwrap();
        let x = ModelPoint::hyperboloid([1f64.cosh(), 1f64.sinh(), 0.0]).unwrap();
        assert!((model_distance(k(-1.0), &o, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            model_distance(k(0.0), &o, &x),
            Err(CatkError::ChartMismatch { .. })
        ));
        assert!(ModelPoint::sphere([1.0, 1.0, 0.0]).is_err());
        assert!(ModelPoint::hyperboloid([-1.0, 0.0, 0.0]).is_err());
        assert_eq!(k(1.0).diameter(), PI);
        assert_eq!(k(-3.0).diameter(), f64::INFINITY);
        assert!(Kappa::new(f64::NAN).is_err());
    }

    #[test]
    fn geodesics() {
        let p = ModelPoint::plane(0.0, 0.0).unwrap();
        let q = ModelPoint::plane(2.0, 0.0).unwrap();
        assert_eq!(geodesic_point(k(0.0), &p, &q, 0.5).unwrap().coords(), [1.0, 0.0, 0.0]);
        let a = ModelPoint::sphere([1.0, 0.0, 0.0]).unwrap();
        let b = ModelPoint::sphere([0.0, 1.0, 0.0]).unwrap();
        let m = geodesic_point(k(1.0), &a, &b, 0.5).unwrap();
        let h = 0.5f64.sqrt();
        assert!(sub(m.coords(), [h, h, 0.0]).iter().all(|x| x.abs() < 1e-15));
        assert_eq!(geodesic_point(k(1.0), &a, &b, 0.0).unwrap(), a);
        let antipode = ModelPoint::sphere([-1.0, 0.0, 0.0]).unwrap();
        assert_eq!(geodesic_point(k(1.0), &a, &antipode, 0.3), Err(CatkError::NotUnique));
        assert!(geodesic_point(k(1.0), &a, &b, 1.5).is_err());
    }

    #[test]
    fn triangles() {
        let t = comparison_triangle(k(0.0), 1.0, 1.0, 1.0).unwrap();
        assert!(t.angles.iter().all(|a| (a - PI / 3.0).abs() < 1e-15));
        let t = comparison_triangle(k(1.0), PI / 2.0, PI / 2.0, PI / 2.0).unwrap();
        assert!(t.angles.iter().all(|a| (a - PI / 2.0).abs() < 1e-15));
        assert!(matches!(
            comparison_triangle(k(1.0), PI, PI, PI),
            Err(CatkError::Perimeter { .. })
        ));
        assert!(matches!(
            comparison_triangle(k(0.0), 1.0, 1.0, 3.0),
            Err(CatkError::TriangleInequality(_))
        ));
        assert!(matches!(
            comparison_triangle(k(0.0), 0.0, 1.0, 1.0),
            Err(CatkError::Degenerate(_))
        ));
        // 3-4-5
        let t = comparison_triangle(k(0.0), 3.0, 4.0, 5.0).unwrap();
        assert!((t.angles[2] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sines() {
        let t = comparison_triangle(k(0.0), 1.0, 1.0, 1.0).unwrap();
        assert_eq!(law_of_sines_residual(k(0.0), &t).unwrap().ratio_residual, 0.0);
        let t = comparison_triangle(k(1.0), PI / 2.0, PI / 2.0, PI / 2.0).unwrap();
        let r = law_of_sines_residual(k(1.0), &t).unwrap();
        assert!(r.ratio_residual < 1e-12);
        assert!(r.determinant_residual.unwrap() < 1e-12);
        assert!((r.determinant.unwrap() - 1.0).abs() < 1e-12);
        let t = comparison_triangle(k(2.0), 0.7, 0.9, 1.1).unwrap();
        assert!(law_of_sines_residual(k(2.0), &t).unwrap().residual() < 1e-9);
    }

    #[test]
    fn cat_checks() {
        // tree quadruple: comparison triangle with sides 3, 3, 4
        let tree = Quadruple {
            pq: 3.0,
            pr: 3.0,
            qr: 4.0,
            qm: 2.0,
            mr: 2.0,
            pm: 1.0,
        };
        let c = cat_check(k(0.0), &tree).unwrap();
        assert!(c.pass);
        assert!((c.comparison_distance - 5f64.sqrt()).abs() < 1e-12);

        let w = fat_sphere_witness();
        assert!((w.pm - PI / 2.0).abs() < 1e-12);
        assert!(!cat_check(k(0.0), &w).unwrap().pass);
        assert!(cat_check(k(1.0), &w).unwrap().pass);

        let bad = Quadruple { qm: 3.0, ..tree };
        assert!(cat_check(k(0.0), &bad).is_err());
    }

    #[test]
    fn model_quadruples_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kv in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let kappa = k(kv);
            let radius = if kv > 0.0 { 1.0 / kappa.scale() } else { 2.0 };
            for _ in 0..500 {
                let [p, q, r] = [(); 3].map(|_| sample_point(kappa, radius, &mut rng));
                let quad = Quadruple::from_model(kappa, &p, &q, &r, rng.random()).unwrap();
                let c = cat_check(kappa, &quad).unwrap();
                assert!(c.pass, "{kv} {quad:?} {c:?}");
                assert!((c.distance - c.comparison_distance).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn angles() {
        let plane = |x: f64, y: f64| ModelPoint::plane(x, y).unwrap();
        let d = |a: &ModelPoint, b: &ModelPoint| model_distance(k(0.0), a, b).unwrap();
        let sched = geometric_schedule(1.0, 12);
        let e = alexandrov_angle_estimate(|s| plane(s, 0.0), |s| plane(0.0, s), d, &sched).unwrap();
        assert!((e.angle - PI / 2.0).abs() < 1e-9);
        assert!(e.monotone);
        let e = alexandrov_angle_estimate(|s| plane(s, 0.0), |s| plane(-s, 0.0), d, &sched).unwrap();
        assert!((e.angle - PI).abs() < 1e-9);
        let err = alexandrov_angle_estimate(|s| plane(s, 0.0), |_| plane(-5.0, 0.0), d, &sched);
        assert!(matches!(err, Err(CatkError::NotCommonBase { .. })));
        assert!(alexandrov_angle_estimate(|s| plane(s, 0.0), |s| plane(0.0, s), d, &[1.0, 2.0]).is_err());

        // spherical geodesics from the pole at angle 1 converge to 1
        let sphere = |s: f64, th: f64| ModelPoint::polar(k(1.0), s, th);
        let ds = |a: &ModelPoint, b: &ModelPoint| model_distance(k(1.0), a, b).unwrap();
        let e = alexandrov_angle_estimate(|s| sphere(s, 0.0), |s| sphere(s, 1.0), ds, &sched).unwrap();
        assert!((e.angle - 1.0).abs() < 1e-9, "{e:?}");
    }

    #[test]
    fn blowup() {
        assert_eq!(blowup_metric(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(blowup_metric(4.0, 3.0).unwrap(), 5.0);
        // angles beyond π are outside the space of directions
        assert!(blowup_metric(3.0, 4.0).is_err());
        assert!((blowup_metric(3.0, PI).unwrap() - (9.0 + PI * PI).sqrt()).abs() < 1e-15);
        assert!(blowup_metric(-1.0, 0.0).is_err());
        assert!(blowup_metric(1.0, 4.0).is_err());
    }
}
