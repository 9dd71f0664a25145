//! The ℝ-trees `T₁ = (−1,1)×ℝ` and `T₂ = ℝ×ℝ` with the metric
//! `d((x,y),(x',y')) = |y−y'|` if `x = x'` and `|y| + |x−x'| + |y'|`
//! otherwise: a horizontal axis with a vertical line through each of its
//! points.
//!
//! Coordinates are exact rationals, so metric identities, the ultrametric
//! inequality and the cover conditions are decided without rounding.
//!
//! For the end `ξ = +∞` of the axis of `T₂`, the apartments through `ξ` are
//! the axis and the lines made of a vertical ray at `x` and `[x, ∞)×0`.
//! Identifying each with the axis by the isometry fixing `[x, ∞)×0` sends
//! `(x, y)` to `(x − |y|, 0)`; these maps agree on overlaps and give the
//! retraction `p`. Its fiber over `(α, 0)` is `{(α + t, ±t) : t ≥ 0}`, and
//! rays to `ξ` from two fiber points branch at the axis point below the one
//! further out (or at `(x, 0)` when both lie over the same `x`), so
//! `δ = 2·max(t, t')` on distinct points, which equals `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;
use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::catk::{alexandrov_angle_estimate, geometric_schedule, AngleEstimate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("point {0} is not in {1}")]
    OutOfTree(TreePoint, RTree),
    #[error("points lie in different fibers: {0} and {1}")]
    DifferentFibers(TreePoint, TreePoint),
    #[error("the retraction to the +∞ end is defined on T2 only")]
    RetractionNeedsT2,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    pub x: Rational64,
    pub y: Rational64,
}

impl TreePoint {
    pub fn new(x: Rational64, y: Rational64) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(Rational64::from_integer(x), Rational64::from_integer(y))
    }

    /// Nearest rational point with small denominators.
    pub fn from_f64(x: f64, y: f64) -> Result<Self, TreeError> {
        let conv = |v: f64| {
            Rational64::approximate_float(v)
                .ok_or_else(|| TreeError::InvalidParameter(format!("coordinate {v} is not representable")))
        };
        Ok(Self::new(conv(x)?, conv(y)?))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(self.x), to_f64(self.y))
    }
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for TreePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (x, y) = self.to_f64();
        [x, y].serialize(s)
    }
}

fn to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn serialize_rational<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(to_f64(*r))
}

fn sign(v: Rational64) -> Rational64 {
    if v.is_negative() {
        -Rational64::one()
    } else {
        Rational64::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RTree {
    /// `(−1, 1) × ℝ`
    T1,
    /// `ℝ × ℝ`
    T2,
}

impl fmt::Display for RTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RTree::T1 => write!(f, "T1"),
            RTree::T2 => write!(f, "T2"),
        }
    }
}

/// The distinguished end of `T₂` used by the retraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndDirection {
    /// `x → +∞` along the axis.
    AxisPlus,
}

impl RTree {
    pub fn contains(&self, p: &TreePoint) -> bool {
        match self {
            RTree::T1 => p.x.abs() < Rational64::one(),
            RTree::T2 => true,
        }
    }

    pub fn check(&self, p: &TreePoint) -> Result<(), TreeError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(TreeError::OutOfTree(*p, *self))
        }
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<Rational64, TreeError> {
        self.check(p)?;
        self.check(q)?;
        Ok(dist(p, q))
    }

    /// The point at arc-length fraction `t` of the geodesic from `p` to `q`:
    /// down the fiber of `p`, along the axis, up the fiber of `q`.
    pub fn geodesic(&self, p: &TreePoint, q: &TreePoint, t: Rational64) -> Result<TreePoint, TreeError> {
        self.check(p)?;
        self.check(q)?;
        if t < Rational64::zero() || t > Rational64::one() {
            return Err(TreeError::InvalidParameter(format!("t = {t} outside [0, 1]")));
        }
        Ok(geodesic(p, q, t))
    }
}

fn dist(p: &TreePoint, q: &TreePoint) -> Rational64 {
    if p.x == q.x {
        (p.y - q.y).abs()
    } else {
        p.y.abs() + (p.x - q.x).abs() + q.y.abs()
    }
}

fn geodesic(p: &TreePoint, q: &TreePoint, t: Rational64) -> TreePoint {
    if p.x == q.x {
        return TreePoint::new(p.x, p.y + t * (q.y - p.y));
    }
    let s = t * dist(p, q);
    let (down, across) = (p.y.abs(), (q.x - p.x).abs());
    if s <= down {
        TreePoint::new(p.x, p.y - sign(p.y) * s)
    } else if s <= down + across {
        TreePoint::new(p.x + sign(q.x - p.x) * (s - down), Rational64::zero())
    } else {
        TreePoint::new(q.x, sign(q.y) * (s - down - across))
    }
}

/// Geodesic lines of the trees, parametrized by arc length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApartmentDescriptor {
    /// `{x0} × ℝ`.
    Vertical {
        #[serde(serialize_with = "serialize_rational")]
        x0: Rational64,
    },
    /// Ray at `x1` toward `s1·∞`, the segment `[x1, x2]×0`, ray at `x2`
    /// toward `s2·∞`; signs are `±1`.
    BiRay {
        #[serde(serialize_with = "serialize_rational")]
        x1: Rational64,
        s1: i8,
        #[serde(serialize_with = "serialize_rational")]
        x2: Rational64,
        s2: i8,
    },
    /// `T₂` only: vertical ray at `x` toward `s·∞` joined to `[x, ∞)×0`.
    RayToPlus {
        #[serde(serialize_with = "serialize_rational")]
        x: Rational64,
        s: i8,
    },
    /// `T₂` only: `(−∞, x]×0` joined to the vertical ray at `x` toward `s·∞`.
    RayToMinus {
        #[serde(serialize_with = "serialize_rational")]
        x: Rational64,
        s: i8,
    },
    /// `T₂` only: the axis `ℝ×0`.
    Axis,
}

impl ApartmentDescriptor {
    pub fn is_valid_in(&self, tree: RTree) -> bool {
        let inside = |x: Rational64| tree.contains(&TreePoint::new(x, Rational64::zero()));
        let signs_ok = |s: i8| s == 1 || s == -1;
        match *self {
            ApartmentDescriptor::Vertical { x0 } => inside(x0),
            ApartmentDescriptor::BiRay { x1, s1, x2, s2 } => {
                x1 < x2 && inside(x1) && inside(x2) && signs_ok(s1) && signs_ok(s2)
            }
            ApartmentDescriptor::RayToPlus { s, .. } | ApartmentDescriptor::RayToMinus { s, .. } => {
                tree == RTree::T2 && signs_ok(s)
            }
            ApartmentDescriptor::Axis => tree == RTree::T2,
        }
    }

    /// Unit-speed parametrization `ℝ → line`.
    pub fn point_at(&self, s: Rational64) -> TreePoint {
        let zero = Rational64::zero();
        let sg = |v: i8| Rational64::from_integer(i64::from(v));
        match *self {
            ApartmentDescriptor::Vertical { x0 } => TreePoint::new(x0, s),
            ApartmentDescriptor::BiRay { x1, s1, x2, s2 } => {
                if s <= zero {
                    TreePoint::new(x1, -sg(s1) * s)
                } else if s <= x2 - x1 {
                    TreePoint::new(x1 + s, zero)
                } else {
                    TreePoint::new(x2, sg(s2) * (s - (x2 - x1)))
                }
            }
            ApartmentDescriptor::RayToPlus { x, s: sign } => {
                if s <= zero {
                    TreePoint::new(x, -sg(sign) * s)
                } else {
                    TreePoint::new(x + s, zero)
                }
            }
            ApartmentDescriptor::RayToMinus { x, s: sign } => {
                if s <= zero {
                    TreePoint::new(x + s, zero)
                } else {
                    TreePoint::new(x, sg(sign) * s)
                }
            }
            ApartmentDescriptor::Axis => TreePoint::new(s, zero),
        }
    }
}

/// A segment given by its projection: `(u, v)×0` or `{x0}×(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Horizontal { u: Rational64, v: Rational64 },
    Vertical { x0: Rational64, lo: Rational64, hi: Rational64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentDecision {
    pub contained: bool,
    pub witness: Option<ApartmentDescriptor>,
    pub justification: String,
}

/// Decides whether a segment lies in an apartment, from the classification
/// of geodesic lines: vertical lines, bi-rays, and in `T₂` additionally the
/// axis and the lines through one end of the axis.
pub fn is_segment_in_apartment(tree: RTree, seg: Segment) -> Result<SegmentDecision, TreeError> {
    match seg {
        Segment::Vertical { x0, lo, hi } => {
            if lo >= hi {
                return Err(TreeError::InvalidParameter("empty vertical segment".into()));
            }
            tree.check(&TreePoint::new(x0, lo))?;
            Ok(SegmentDecision {
                contained: true,
                witness: Some(ApartmentDescriptor::Vertical { x0 }),
                justification: format!("the vertical line {{{x0}}}×ℝ contains the segment"),
            })
        }
        Segment::Horizontal { u, v } => {
            if u >= v {
                return Err(TreeError::InvalidParameter("empty horizontal segment".into()));
            }
            match tree {
                RTree::T2 => Ok(SegmentDecision {
                    contained: true,
                    witness: Some(ApartmentDescriptor::Axis),
                    justification: "the axis ℝ×0 is an apartment of T2".into(),
                }),
                RTree::T1 => {
                    let one = Rational64::one();
                    if u > -one && v < one {
                        Ok(SegmentDecision {
                            contained: true,
                            witness: Some(ApartmentDescriptor::BiRay { x1: u, s1: 1, x2: v, s2: 1 }),
                            justification: format!("the bi-ray through [{u}, {v}]×0 contains the segment"),
                        })
                    } else {
                        Ok(SegmentDecision {
                            contained: false,
                            witness: None,
                            justification: format!(
                                "apartments of T1 are the vertical lines {{x0}}×ℝ, which meet the axis in \
                                 one point, and the bi-rays, whose horizontal part is a compact [x1, x2]×0 \
                                 with −1 < x1 < x2 < 1; ({u}, {v})×0 reaches the boundary of (−1, 1), so \
                                 it lies in neither kind"
                            ),
                        })
                    }
                }
            }
        }
    }
}

/// `(g(x), y)` with `g(x) = x/(1+|x|)`, a homeomorphism `T₂ → T₁`.
pub fn stretch_map(p: &TreePoint) -> TreePoint {
    TreePoint::new(p.x / (Rational64::one() + p.x.abs()), p.y)
}

/// Inverse of [`stretch_map`]: `u/(1−|u|)`.
pub fn stretch_inverse(p: &TreePoint) -> Result<TreePoint, TreeError> {
    RTree::T1.check(p)?;
    Ok(TreePoint::new(p.x / (Rational64::one() - p.x.abs()), p.y))
}

/// The pair `(1,0), (0,0)` at distance 1 in `T₂` whose images are at
/// distance 1/2: the stretch map is not an isometry.
pub fn stretch_distortion_witness() -> (TreePoint, TreePoint, Rational64, Rational64) {
    let p = TreePoint::from_ints(1, 0);
    let q = TreePoint::from_ints(0, 0);
    (p, q, dist(&p, &q), dist(&stretch_map(&p), &stretch_map(&q)))
}

/// Retraction `T₂ → ℝ×0` from the end `ξ`: `p(x, y) = (x − |y|, 0)`.
pub fn retraction(tree: RTree, _xi: EndDirection, p: &TreePoint) -> Result<TreePoint, TreeError> {
    if tree != RTree::T2 {
        return Err(TreeError::RetractionNeedsT2);
    }
    Ok(retract(p))
}

fn retract(p: &TreePoint) -> TreePoint {
    TreePoint::new(p.x - p.y.abs(), Rational64::zero())
}

/// The point of the fiber over `(alpha, 0)` at distance `|p(y) − alpha|`
/// from `y`.
pub fn lift_to_fiber(y: &TreePoint, alpha: Rational64) -> TreePoint {
    let t = y.x - alpha;
    if t <= Rational64::zero() {
        TreePoint::new(alpha, Rational64::zero())
    } else {
        TreePoint::new(y.x, sign(y.y) * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberDistance {
    pub branch_point: TreePoint,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational64,
}

/// Branch point `e` of the rays from `b` and `c` to `ξ`, and
/// `δ(b, c) = d(e, b) + d(e, c)`.
pub fn fiber_ultrametric(tree: RTree, _xi: EndDirection, b: &TreePoint, c: &TreePoint) -> Result<FiberDistance, TreeError> {
    if tree != RTree::T2 {
        return Err(TreeError::RetractionNeedsT2);
    }
    if retract(b) != retract(c) {
        return Err(TreeError::DifferentFibers(*b, *c));
    }
    Ok(fiber_delta(b, c))
}

fn fiber_delta(b: &TreePoint, c: &TreePoint) -> FiberDistance {
    let zero = Rational64::zero();
    let e = if b.x != c.x {
        TreePoint::new(b.x.max(c.x), zero)
    } else if b.y.signum() == c.y.signum() {
        TreePoint::new(b.x, b.y.signum() * b.y.abs().min(c.y.abs()))
    } else {
        TreePoint::new(b.x, zero)
    };
    FiberDistance {
        branch_point: e,
        delta: dist(&e, b) + dist(&e, c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub points: usize,
    pub triples: u64,
    pub ultrametric: bool,
    /// `max δ/d` over distinct pairs.
    #[serde(serialize_with = "serialize_rational")]
    pub lipschitz_max: Rational64,
    /// `min δ/d` over distinct pairs.
    #[serde(serialize_with = "serialize_rational")]
    pub lipschitz_min: Rational64,
    pub first_violation: Option<(usize, usize, usize)>,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.ultrametric && self.lipschitz_min >= Rational64::one() && self.lipschitz_max == Rational64::one()
    }
}

/// Checks the ultrametric inequality on all triples of a fiber sample and
/// the ratio `δ/d` on all pairs.
pub fn verify_fiber_metric(tree: RTree, xi: EndDirection, sample: &[TreePoint]) -> Result<FiberReport, TreeError> {
    let n = sample.len();
    let mut delta = vec![Rational64::zero(); n * n];
    let mut ratio_max = Rational64::one();
    let mut ratio_min = Rational64::one();
    for i in 0..n {
        for j in i + 1..n {
            let dl = fiber_ultrametric(tree, xi, &sample[i], &sample[j])?.delta;
            let d = dist(&sample[i], &sample[j]);
            if !d.is_zero() {
                ratio_max = ratio_max.max(dl / d);
                ratio_min = ratio_min.min(dl / d);
            } else if !dl.is_zero() {
                ratio_max = Rational64::from_integer(i64::MAX);
            }
            delta[i * n + j] = dl;
            delta[j * n + i] = dl;
        }
    }
    // exact ranks make the triple scan a comparison of integers
    let mut values: Vec<Rational64> = delta.clone();
    values.sort();
    values.dedup();
    let rank: Vec<u32> = delta
        .iter()
        .map(|v| values.binary_search(v).unwrap() as u32)
        .collect();
    let mut triples = 0u64;
    let mut first_violation = None;
    'scan: for i in 0..n {
        for j in i + 1..n {
            let ij = rank[i * n + j];
            for k in j + 1..n {
                let (ik, jk) = (rank[i * n + k], rank[j * n + k]);
                triples += 1;
                if ik > ij.max(jk) || ij > ik.max(jk) || jk > ij.max(ik) {
                    first_violation = Some((i, j, k));
                    break 'scan;
                }
            }
        }
    }
    Ok(FiberReport {
        points: n,
        triples,
        ultrametric: first_violation.is_none(),
        lipschitz_max: ratio_max,
        lipschitz_min: ratio_min,
        first_violation,
    })
}

/// `n` points of the fiber over `(alpha, 0)` with `t = k/denominator`,
/// `0 ≤ k < max_k`.
pub fn sample_fiber<R: Rng>(alpha: Rational64, n: usize, max_k: i64, denominator: i64, rng: &mut R) -> Vec<TreePoint> {
    (0..n)
        .map(|_| {
            let t = Rational64::new(rng.random_range(0..max_k), denominator);
            let s = if rng.random_bool(0.5) { t } else { -t };
            TreePoint::new(alpha + t, s)
        })
        .collect()
}

/// Random points of `[−bound, bound]²` on the grid `1/denominator`; a third
/// of them on the axis and a third on the integer fibers.
pub fn sample_points<R: Rng>(n: usize, bound: i64, denominator: i64, rng: &mut R) -> Vec<TreePoint> {
    let m = bound * denominator;
    (0..n)
        .map(|_| {
            let x = Rational64::new(rng.random_range(-m..=m), denominator);
            let y = Rational64::new(rng.random_range(-m..=m), denominator);
            match rng.random_range(0..3) {
                0 => TreePoint::new(x, Rational64::zero()),
                1 => TreePoint::new(Rational64::from_integer(x.to_integer()), y),
                _ => TreePoint::new(x, y),
            }
        })
        .collect()
}

/// The `3rL`-ball around a fiber point: all fiber points with `t ≤ 3r/2`
/// when the centre is among them, otherwise the centre alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum FiberBall {
    Low,
    Point(TreePoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverElement {
    /// Index `k` of the base interval `((k−1)r/2, (k+1)r/2)`.
    pub base_index: i64,
    pub basepoint: TreePoint,
    /// Fiber point over the basepoint defining the element.
    pub x: TreePoint,
    /// Whether `x` lies in the low ball `t ≤ 3r/2` of its fiber.
    pub low: bool,
    /// Indices of the sample points in the element.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurilloCover {
    #[serde(serialize_with = "serialize_rational")]
    pub r: Rational64,
    pub lipschitz: i64,
    pub elements: Vec<CoverElement>,
    pub order: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub mesh: Rational64,
    #[serde(serialize_with = "serialize_rational")]
    pub mesh_bound: Rational64,
    /// r-neighbourhoods inside `p⁻¹(U)` are absorbed.
    pub absorbing: bool,
    /// Diameters are at most `r(2 + 3L)`.
    pub diameter_bounded: bool,
    /// Every sample point over `U` lies in some element over `U`.
    pub covering: bool,
    /// Elements over one `U` defined by different balls are disjoint.
    pub disjoint_or_equal: bool,
}

impl BurilloCover {
    pub fn order_ok(&self) -> bool {
        self.order <= 2
    }

    pub fn mesh_ok(&self) -> bool {
        self.mesh <= self.mesh_bound
    }

    pub fn passed(&self) -> bool {
        self.absorbing && self.diameter_bounded && self.covering && self.disjoint_or_equal && self.order_ok() && self.mesh_ok()
    }
}

/// Distance from `y` to the low ball `{(alpha + t, ±t) : 0 ≤ t ≤ h}`. The
/// distance to `(alpha + t, ±t)` is piecewise linear in `t` with breaks only
/// at `t = x_y − alpha`, so the minimum is attained at `0`, `h` or there.
fn distance_to_low_ball(y: &TreePoint, alpha: Rational64, h: Rational64) -> Rational64 {
    let zero = Rational64::zero();
    let mid = (y.x - alpha).max(zero).min(h);
    [zero, h, mid]
        .into_iter()
        .flat_map(|t| [TreePoint::new(alpha + t, t), TreePoint::new(alpha + t, -t)])
        .map(|q| dist(y, &q))
        .min()
        .unwrap()
}

fn base_indices(beta: Rational64, r: Rational64) -> Vec<i64> {
    // (k−1)r/2 < β < (k+1)r/2  ⇔  2β/r − 1 < k < 2β/r + 1
    let c = beta * 2 / r;
    let lo = (c - 1).floor().to_integer() + 1;
    let hi = (c + 1).ceil().to_integer() - 1;
    (lo..=hi).filter(|&k| Rational64::from_integer(k - 1) < c && c < Rational64::from_integer(k + 1)).collect()
}

/// Builds the elements `W_{U,x}` over the base cover by intervals of length
/// `r` and checks absorption, diameter, coverage and disjointness on the sample (`L = 1`).
pub fn burillo_cover(tree: RTree, _xi: EndDirection, r: Rational64, sample: &[TreePoint]) -> Result<BurilloCover, TreeError> {
    if tree != RTree::T2 {
        return Err(TreeError::RetractionNeedsT2);
    }
    if r <= Rational64::zero() {
        return Err(TreeError::InvalidParameter(format!("r = {r} must be positive")));
    }
    let lipschitz = 1i64;
    let ball_radius = r * 3 * lipschitz;
    let low_height = ball_radius / 2;

    let mut over: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, y) in sample.iter().enumerate() {
        for k in base_indices(retract(y).x, r) {
            over.entry(k).or_default().push(i);
        }
    }

    let mut elements = Vec::new();
    let (mut absorbing, mut covering, mut disjoint_or_equal) = (true, true, true);
    for (&k, members_u) in &over {
        let alpha = r * k / 2;
        let basepoint = TreePoint::new(alpha, Rational64::zero());
        // candidate centres: the basepoint and the lifts of the sample
        let mut balls: BTreeMap<FiberBall, TreePoint> = BTreeMap::new();
        balls.insert(FiberBall::Low, basepoint);
        for &i in members_u {
            let x = lift_to_fiber(&sample[i], alpha);
            let ball = if fiber_delta(&x, &basepoint).delta <= ball_radius {
                FiberBall::Low
            } else {
                FiberBall::Point(x)
            };
            balls.entry(ball).or_insert(x);
        }
        let mut covered = BTreeSet::new();
        let mut over_u: Vec<CoverElement> = Vec::new();
        for (ball, x) in balls {
            let members: Vec<usize> = members_u
                .iter()
                .copied()
                .filter(|&i| {
                    let d = match ball {
                        FiberBall::Low => distance_to_low_ball(&sample[i], alpha, low_height),
                        FiberBall::Point(c) => dist(&sample[i], &c),
                    };
                    d <= r
                })
                .collect();
            if members.is_empty() {
                continue;
            }
            for &i in &members {
                if !covered.insert(i) {
                    disjoint_or_equal = false;
                }
            }
            let member_set: BTreeSet<usize> = members.iter().copied().collect();
            for &i in &members {
                for &j in members_u {
                    if dist(&sample[i], &sample[j]) <= r && !member_set.contains(&j) {
                        absorbing = false;
                    }
                }
            }
            over_u.push(CoverElement {
                base_index: k,
                basepoint,
                x,
                low: ball == FiberBall::Low,
                members,
            });
        }
        if covered.len() != members_u.len() {
            covering = false;
        }
        elements.extend(over_u);
    }

    let mut mesh = Rational64::zero();
    for e in &elements {
        for (a, &i) in e.members.iter().enumerate() {
            for &j in &e.members[a + 1..] {
                mesh = mesh.max(dist(&sample[i], &sample[j]));
            }
        }
    }
    let mesh_bound = r * (2 + 3 * lipschitz);
    let mut multiplicity = vec![0usize; sample.len()];
    for e in &elements {
        for &i in &e.members {
            multiplicity[i] += 1;
        }
    }
    if multiplicity.contains(&0) {
        covering = false;
    }
    Ok(BurilloCover {
        r,
        lipschitz,
        order: multiplicity.iter().copied().max().unwrap_or(0),
        mesh,
        mesh_bound,
        absorbing,
        diameter_bounded: mesh <= mesh_bound,
        covering,
        disjoint_or_equal,
        elements,
    })
}

/// Every element of `fine` is contained in some element of `coarse`, on
/// the sample. Returns the first element that is not.
pub fn refines<'a>(fine: &'a BurilloCover, coarse: &BurilloCover) -> Option<&'a CoverElement> {
    let coarse_sets: Vec<BTreeSet<usize>> = coarse
        .elements
        .iter()
        .map(|e| e.members.iter().copied().collect())
        .collect();
    fine.elements
        .iter()
        .find(|e| !coarse_sets.iter().any(|c| e.members.iter().all(|i| c.contains(i))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    fn unit(self) -> (f64, f64) {
        match self {
            Direction::Left => (-1.0, 0.0),
            Direction::Right => (1.0, 0.0),
            Direction::Up => (0.0, 1.0),
            Direction::Down => (0.0, -1.0),
        }
    }
}

/// Directions at `o`: four at axis points, two on the open fibers.
pub fn directions_at(tree: RTree, o: &TreePoint) -> Result<Vec<Direction>, TreeError> {
    tree.check(o)?;
    Ok(if o.y.is_zero() {
        vec![Direction::Left, Direction::Right, Direction::Up, Direction::Down]
    } else {
        vec![Direction::Up, Direction::Down]
    })
}

fn float_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    if p.0 == q.0 {
        (p.1 - q.1).abs()
    } else {
        p.1.abs() + (p.0 - q.0).abs() + q.1.abs()
    }
}

/// Alexandrov angle at `o` between the geodesics leaving in two directions.
pub fn direction_angle(o: &TreePoint, a: Direction, b: Direction) -> Result<AngleEstimate, TreeError> {
    let (ox, oy) = o.to_f64();
    // stay inside the open fiber when o is off the axis
    let s0 = if oy == 0.0 { 0.5 } else { (oy.abs() / 2.0).min(0.5) };
    let ray = |dir: Direction| move |s: f64| (ox + s * dir.unit().0, oy + s * dir.unit().1);
    alexandrov_angle_estimate(ray(a), ray(b), |p, q| float_distance(*p, *q), &geometric_schedule(s0, 12))
        .map_err(|e| TreeError::InvalidParameter(e.to_string()))
}

/// Number of components of the sampled punctured ball `B_ε(o)∖{o}`, where
/// two points are joined iff `o` is not on the geodesic between them.
pub fn punctured_components<R: Rng>(
    tree: RTree,
    o: &TreePoint,
    eps: Rational64,
    n: usize,
    rng: &mut R,
) -> Result<(usize, usize), TreeError> {
    tree.check(o)?;
    if eps <= Rational64::zero() {
        return Err(TreeError::InvalidParameter(format!("ε = {eps} must be positive")));
    }
    let steps = 1000i64;
    let mut points = Vec::new();
    for _ in 0..n {
        let u = eps * Rational64::new(rng.random_range(-(steps - 1)..steps), steps);
        let v = eps * Rational64::new(rng.random_range(-(steps - 1)..steps), steps);
        let p = match rng.random_range(0..3) {
            0 => TreePoint::new(o.x, o.y + u),
            1 if o.y.is_zero() => TreePoint::new(o.x + u, o.y),
            _ => TreePoint::new(o.x + u, v),
        };
        let d = dist(o, &p);
        if tree.contains(&p) && !d.is_zero() && d < eps {
            points.push(p);
        }
    }
    points.sort();
    points.dedup();
    let mut uf = UnionFind::<usize>::new(points.len());
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let through_o = dist(&points[i], o) + dist(o, &points[j]) == dist(&points[i], &points[j]);
            if !through_o {
                uf.union(i, j);
            }
        }
    }
    let labels: BTreeSet<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
    Ok((labels.len(), points.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PuncturedBallCheck {
    pub point: TreePoint,
    #[serde(serialize_with = "serialize_rational")]
    pub eps: Rational64,
    pub directions: Vec<Direction>,
    pub components: usize,
    pub sampled: usize,
    /// Largest deviation of a pairwise direction angle from π.
    pub angle_error: f64,
}

impl PuncturedBallCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.components == self.directions.len() && self.angle_error <= tol
    }
}

/// Compares punctured-ball components with the directions at `o` and
/// measures the pairwise direction angles.
pub fn punctured_ball_check<R: Rng>(
    tree: RTree,
    o: &TreePoint,
    eps: Rational64,
    n: usize,
    rng: &mut R,
) -> Result<PuncturedBallCheck, TreeError> {
    let directions = directions_at(tree, o)?;
    let (components, sampled) = punctured_components(tree, o, eps, n, rng)?;
    let mut angle_error: f64 = 0.0;
    for (i, &a) in directions.iter().enumerate() {
        for &b in &directions[i + 1..] {
            angle_error = angle_error.max((direction_angle(o, a, b)?.angle - PI).abs());
        }
    }
    Ok(PuncturedBallCheck {
        point: *o,
        eps,
        directions,
        components,
        sampled,
        angle_error,
    })
}
