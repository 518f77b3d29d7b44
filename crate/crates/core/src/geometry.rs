//! Planar primitives with a single absolute tolerance.
//!
//! Everything here works on `f64` coordinates and compares through [`Tol`].
//! Regions are canonicalized (CCW, starting at the lexicographically smallest
//! vertex) so that two computations of the same set compare vertex by vertex.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coordinates beyond this magnitude are treated as "at infinity" when
/// intersecting half-planes.
pub const CLIP_BOX: f64 = 1.0e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("empty input")]
    EmptyInput,
    #[error("intersection is unbounded")]
    Unbounded,
    #[error("intersection is empty")]
    EmptyIntersection,
    #[error("half-plane normal is degenerate")]
    DegenerateHalfPlane,
    #[error("tolerance must lie in (0, 1e-3), got {0}")]
    BadTolerance(f64),
}

/// A point or a displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type Point2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    fn lex_cmp(&self, o: &Vec2) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl std::iter::Sum for Vec2 {
    fn sum<I: Iterator<Item = Vec2>>(iter: I) -> Vec2 {
        iter.fold(Vec2::ZERO, Add::add)
    }
}

/// Absolute comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    eps: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { eps: 1e-9 }
    }
}

impl Tol {
    pub fn new(eps: f64) -> Result<Self, GeometryError> {
        if eps > 0.0 && eps < 1e-3 {
            Ok(Tol { eps })
        } else {
            Err(GeometryError::BadTolerance(eps))
        }
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn same_point(&self, a: Point2, b: Point2) -> bool {
        (a - b).norm_inf() <= self.eps
    }
}

/// Closed half-plane `normal · p <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Vec2, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// The half-plane to the left of the directed line `a -> b`.
    pub fn left_of(a: Point2, b: Point2) -> Self {
        let normal = (b - a).perp() * -1.0;
        HalfPlane::new(normal, normal.dot(a))
    }

    /// Signed violation `normal · p - offset` (positive = outside).
    #[inline]
    pub fn excess(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: Point2, tol: &Tol) -> bool {
        self.excess(p) <= tol.eps() * self.normal.norm()
    }

    fn unit(&self) -> Option<HalfPlane> {
        let n = self.normal.norm();
        (n.is_finite() && n > 0.0 && self.offset.is_finite())
            .then(|| HalfPlane::new(self.normal / n, self.offset / n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Empty => "empty",
            RegionKind::Point => "point",
            RegionKind::Segment => "segment",
            RegionKind::Polygon => "polygon",
        })
    }
}

/// A closed convex set given by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    kind: RegionKind,
    vertices: Vec<Point2>,
}

impl Region {
    pub fn empty() -> Self {
        Region {
            kind: RegionKind::Empty,
            vertices: Vec::new(),
        }
    }

    pub fn point(p: Point2) -> Self {
        Region {
            kind: RegionKind::Point,
            vertices: vec![p],
        }
    }

    /// Rebuilds a region from raw vertices, re-deriving its kind.
    pub fn from_vertices(points: &[Point2], tol: &Tol) -> Self {
        convex_hull(points, tol).unwrap_or_else(|_| Region::empty())
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.kind == RegionKind::Empty
    }

    pub fn centroid(&self) -> Option<Point2> {
        if self.vertices.is_empty() {
            return None;
        }
        let n = self.vertices.len() as f64;
        Some(self.vertices.iter().copied().sum::<Vec2>() / n)
    }

    /// Edges as `(start, end)` pairs; a segment yields a single edge.
    pub fn edges(&self) -> Vec<(Point2, Point2)> {
        match self.kind {
            RegionKind::Empty | RegionKind::Point => Vec::new(),
            RegionKind::Segment => vec![(self.vertices[0], self.vertices[1])],
            RegionKind::Polygon => {
                let m = self.vertices.len();
                (0..m)
                    .map(|i| (self.vertices[i], self.vertices[(i + 1) % m]))
                    .collect()
            }
        }
    }

    pub fn translated(&self, by: Vec2) -> Region {
        Region {
            kind: self.kind,
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    /// Membership with tolerance.
    pub fn contains(&self, q: Point2, tol: &Tol) -> bool {
        match self.kind {
            RegionKind::Empty => false,
            RegionKind::Point => tol.same_point(self.vertices[0], q),
            RegionKind::Segment => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                point_segment_distance(a, b, q) <= tol.eps()
            }
            RegionKind::Polygon => self
                .edges()
                .iter()
                .all(|&(a, b)| HalfPlane::left_of(a, b).contains(q, tol)),
        }
    }

    /// Symmetric Hausdorff distance between the vertex sets.
    pub fn vertex_hausdorff(&self, other: &Region) -> f64 {
        hausdorff(&self.vertices, &other.vertices)
    }
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    fn directed(a: &[Point2], b: &[Point2]) -> f64 {
        a.iter()
            .map(|p| b.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    directed(a, b).max(directed(b, a))
}

pub fn point_segment_distance(a: Point2, b: Point2, q: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(d) / len2).clamp(0.0, 1.0);
    q.dist(a + d * t)
}

/// Sign of `(b - a) × (c - a)`; zero when the cross product is within
/// `eps · scale`, `scale` being the largest coordinate magnitude involved.
pub fn orient(a: Point2, b: Point2, c: Point2, tol: &Tol) -> i8 {
    let cross = (b - a).cross(c - a);
    let scale = a.norm_inf().max(b.norm_inf()).max(c.norm_inf()).max(1.0);
    if cross.abs() <= tol.eps() * scale {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

/// Rotates a CCW cycle so it starts at the lexicographically smallest vertex.
fn canonical_start(mut verts: Vec<Point2>) -> Vec<Point2> {
    if let Some((idx, _)) = verts
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.lex_cmp(b))
    {
        verts.rotate_left(idx);
    }
    verts
}

/// Convex hull (monotone chain), collapsing to a segment or point when the
/// input is degenerate within tolerance.
pub fn convex_hull(points: &[Point2], tol: &Tol) -> Result<Region, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));

    // Cluster near-duplicates so that tolerance noise cannot fake a polygon.
    let mut uniq: Vec<Point2> = Vec::with_capacity(pts.len());
    for p in pts {
        if !uniq.iter().any(|&q| tol.same_point(p, q)) {
            uniq.push(p);
        }
    }
    if uniq.len() == 1 {
        return Ok(Region::point(uniq[0]));
    }

    let mut lower: Vec<Point2> = Vec::new();
    for &p in &uniq {
        while lower.len() >= 2
            && orient(lower[lower.len() - 2], lower[lower.len() - 1], p, tol) <= 0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in uniq.iter().rev() {
        while upper.len() >= 2
            && orient(upper[upper.len() - 2], upper[upper.len() - 1], p, tol) <= 0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let hull = lower;

    if hull.len() <= 2 {
        // Collinear: keep the extreme pair along the dominant direction.
        let (a, b) = farthest_pair(&uniq);
        if tol.same_point(a, b) {
            return Ok(Region::point(a));
        }
        let (a, b) = if a.lex_cmp(&b) == Ordering::Greater {
            (b, a)
        } else {
            (a, b)
        };
        return Ok(Region {
            kind: RegionKind::Segment,
            vertices: vec![a, b],
        });
    }
    Ok(Region {
        kind: RegionKind::Polygon,
        vertices: canonical_start(hull),
    })
}

pub fn farthest_pair(pts: &[Point2]) -> (Point2, Point2) {
    let mut best = (pts[0], pts[0], -1.0);
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = a.dist(b);
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

/// Intersects closed half-planes.
///
/// Every extreme point of a bounded intersection is the crossing of two
/// constraint lines, so the vertices are found by enumerating line pairs
/// (including the sides of a `±CLIP_BOX` square) and keeping those feasible
/// for all constraints. A surviving vertex on the clip box means the true
/// intersection is unbounded.
pub fn intersect_halfplanes(hps: &[HalfPlane], tol: &Tol) -> Result<Region, GeometryError> {
    let mut lines = Vec::with_capacity(hps.len() + 4);
    for hp in hps {
        lines.push(hp.unit().ok_or(GeometryError::DegenerateHalfPlane)?);
    }
    lines.extend([
        HalfPlane::new(Vec2::new(1.0, 0.0), CLIP_BOX),
        HalfPlane::new(Vec2::new(-1.0, 0.0), CLIP_BOX),
        HalfPlane::new(Vec2::new(0.0, 1.0), CLIP_BOX),
        HalfPlane::new(Vec2::new(0.0, -1.0), CLIP_BOX),
    ]);

    let feasible = |p: Point2| lines.iter().all(|l| l.excess(p) <= tol.eps());
    let mut verts = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a, b) = (lines[i], lines[j]);
            let det = a.normal.cross(b.normal);
            if det.abs() < 1e-12 {
                continue;
            }
            let p = Vec2::new(
                (a.offset * b.normal.y - b.offset * a.normal.y) / det,
                (a.normal.x * b.offset - b.normal.x * a.offset) / det,
            );
            if p.is_finite() && feasible(p) {
                verts.push(p);
            }
        }
    }
    if verts.is_empty() {
        return Err(GeometryError::EmptyIntersection);
    }
    let box_margin = CLIP_BOX * (1.0 - 1e-9);
    if verts.iter().any(|v| v.norm_inf() >= box_margin) {
        return Err(GeometryError::Unbounded);
    }
    convex_hull(&verts, tol)
}

/// True iff `q` lies on segment `ab` strictly between its endpoints.
pub fn segment_interior_contains(a: Point2, b: Point2, q: Point2, tol: &Tol) -> bool {
    let d = b - a;
    let len = d.norm();
    if len <= tol.eps() {
        return false;
    }
    let off_line = d.cross(q - a).abs() / len;
    off_line <= tol.eps()
        && q.dist(a) > tol.eps()
        && q.dist(b) > tol.eps()
        && (q - a).dot(d) > 0.0
        && (q - b).dot(d) < 0.0
}
