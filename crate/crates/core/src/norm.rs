//! Polygonal norms on the plane and their duals.
//!
//! A [`PolygonalNorm`] is given by its unit circle: a centrally symmetric,
//! strictly convex polygon around the origin. Edge `k` joins vertex `k` to
//! vertex `k + 1`; the unit functional supported on edge `k` is the dual
//! vertex `k`, and the functionals supporting the unit ball at primal vertex
//! `k` form the dual edge `[dual[k - 1], dual[k]]`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::geometry::{orient, Point2, Tol, Vec2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("norm polygon must have an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("norm polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("norm polygon has a non-finite coordinate")]
    NonFinite,
    #[error("norm polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("norm polygon is not centrally symmetric at vertex {0}")]
    NotSymmetric(usize),
    #[error("origin is not strictly inside the norm polygon")]
    OriginOutside,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("functional has dual norm {0}, expected 1")]
    NotUnitFunctional(f64),
}

/// Linear functional `v -> a·vx + b·vy`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Functional {
    pub a: f64,
    pub b: f64,
}

impl Functional {
    pub const ZERO: Functional = Functional { a: 0.0, b: 0.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        Functional { a, b }
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> f64 {
        self.a * v.x + self.b * v.y
    }

    /// Coefficient vector `(a, b)`.
    #[inline]
    pub fn vec(&self) -> Vec2 {
        Vec2::new(self.a, self.b)
    }

    #[inline]
    pub fn from_vec(v: Vec2) -> Self {
        Functional::new(v.x, v.y)
    }

    pub fn lerp(self, o: Functional, t: f64) -> Functional {
        Functional::from_vec(self.vec().lerp(o.vec(), t))
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

impl Add for Functional {
    type Output = Functional;
    fn add(self, o: Functional) -> Functional {
        Functional::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Functional {
    type Output = Functional;
    fn sub(self, o: Functional) -> Functional {
        Functional::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Functional {
    type Output = Functional;
    fn neg(self) -> Functional {
        Functional::new(-self.a, -self.b)
    }
}

impl Mul<f64> for Functional {
    type Output = Functional;
    fn mul(self, s: f64) -> Functional {
        Functional::new(self.a * s, self.b * s)
    }
}

impl std::iter::Sum for Functional {
    fn sum<I: Iterator<Item = Functional>>(iter: I) -> Functional {
        iter.fold(Functional::ZERO, Add::add)
    }
}

/// A point of the unit circle, typed by whether it is a corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitCircleElement {
    /// Zero type: a polygon vertex.
    Vertex(usize),
    /// First type: interior of edge `edge`, at parameter `t` in (0, 1).
    EdgeInterior { edge: usize, t: f64 },
}

impl UnitCircleElement {
    pub fn is_vertex(&self) -> bool {
        matches!(self, UnitCircleElement::Vertex(_))
    }
}

/// All unit functionals norming a given vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionalSet {
    Unique(Functional),
    /// Every convex combination of `lo` and `hi`.
    SegmentSet {
        lo: Functional,
        hi: Functional,
    },
}

impl FunctionalSet {
    pub fn lo(&self) -> Functional {
        match *self {
            FunctionalSet::Unique(f) => f,
            FunctionalSet::SegmentSet { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> Functional {
        match *self {
            FunctionalSet::Unique(f) => f,
            FunctionalSet::SegmentSet { hi, .. } => hi,
        }
    }

    pub fn at(&self, t: f64) -> Functional {
        self.lo().lerp(self.hi(), t)
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, FunctionalSet::Unique(_))
    }

    pub fn contains(&self, f: Functional, tol: &Tol) -> bool {
        let (lo, hi) = (self.lo().vec(), self.hi().vec());
        crate::geometry::point_segment_distance(lo, hi, f.vec()) <= tol.eps() * hi.norm().max(1.0)
    }
}

/// A norm whose unit ball is a centrally symmetric convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalNorm {
    vertices: Vec<Point2>,
    duals: Vec<Functional>,
    /// Angle of vertex k measured CCW from vertex 0, in [0, 2π).
    sector_starts: Vec<f64>,
    base_angle: f64,
    tol: Tol,
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PolygonalNorm {
    pub fn new(vertices: &[Point2]) -> Result<Self, NormError> {
        Self::with_tol(vertices, Tol::default())
    }

    /// Validates the unit polygon and puts it in CCW order.
    pub fn with_tol(vertices: &[Point2], tol: Tol) -> Result<Self, NormError> {
        let m = vertices.len();
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(NormError::NonFinite);
        }
        if m % 2 == 1 {
            return Err(NormError::OddVertexCount(m));
        }
        if m < 4 {
            return Err(NormError::TooFewVertices(m));
        }
        let mut verts = vertices.to_vec();
        let area2: f64 = (0..m).map(|k| verts[k].cross(verts[(k + 1) % m])).sum();
        if !area2.is_finite() {
            return Err(NormError::NonFinite);
        }
        if area2 < 0.0 {
            verts.reverse();
        }
        // Shape checks run on a copy scaled to unit size, so they do not
        // depend on how large the polygon is.
        let radius = verts.iter().map(|v| v.norm_inf()).fold(0.0, f64::max);
        if radius == 0.0 {
            return Err(NormError::OriginOutside);
        }
        let unit: Vec<Point2> = verts.iter().map(|&v| v / radius).collect();
        for k in 0..m {
            let (a, b, c) = (unit[k], unit[(k + 1) % m], unit[(k + 2) % m]);
            if orient(a, b, c, &tol) != 1 {
                return Err(NormError::NotConvex((k + 1) % m));
            }
        }
        let h = m / 2;
        for k in 0..h {
            if !tol.same_point(unit[k + h], -unit[k]) {
                return Err(NormError::NotSymmetric(k));
            }
        }
        for k in 0..m {
            if orient(unit[k], unit[(k + 1) % m], Vec2::ZERO, &tol) != 1 {
                return Err(NormError::OriginOutside);
            }
        }

        let base_angle = verts[0].angle();
        let sector_starts: Vec<f64> = verts
            .iter()
            .map(|v| wrap_angle(v.angle() - base_angle))
            .collect();
        // A locally convex cycle could still wind around the origin twice.
        if sector_starts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NormError::NotConvex(0));
        }

        let duals = (0..m)
            .map(|k| {
                let (p, q) = (verts[k], verts[(k + 1) % m]);
                let det = p.cross(q);
                Functional::new((q.y - p.y) / det, (p.x - q.x) / det)
            })
            .collect();

        Ok(PolygonalNorm {
            vertices: verts,
            duals,
            sector_starts,
            base_angle,
            tol,
        })
    }

    pub fn tol(&self) -> &Tol {
        &self.tol
    }

    /// Same unit polygon under a different tolerance.
    pub fn with_tolerance(&self, tol: Tol) -> Self {
        PolygonalNorm {
            tol,
            ..self.clone()
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `k` with cyclic indexing.
    pub fn vertex(&self, k: usize) -> Point2 {
        self.vertices[k % self.len()]
    }

    /// One unit functional per edge; entry `k` is supported on edge `k`.
    pub fn dual_vertices(&self) -> &[Functional] {
        &self.duals
    }

    pub fn dual_vertex(&self, k: usize) -> Functional {
        self.duals[k % self.len()]
    }

    /// Endpoints `(dual[k-1], dual[k])` of the functionals supporting vertex `k`.
    pub fn dual_edge(&self, k: usize) -> (Functional, Functional) {
        let m = self.len();
        (self.duals[(k + m - 1) % m], self.duals[k % m])
    }

    /// Largest Euclidean length among the dual vertices.
    pub fn dual_scale(&self) -> f64 {
        self.duals
            .iter()
            .map(|f| f.vec().norm())
            .fold(0.0, f64::max)
    }

    /// Largest Euclidean length among the primal vertices.
    pub fn primal_scale(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Index of the edge whose angular sector contains `v`.
    fn sector(&self, v: Vec2) -> usize {
        let r = wrap_angle(v.angle() - self.base_angle);
        let k = self.sector_starts.partition_point(|&s| s <= r);
        k.saturating_sub(1)
    }

    /// Minkowski functional of the unit polygon.
    pub fn gauge(&self, v: Vec2) -> f64 {
        if v.x == 0.0 && v.y == 0.0 {
            return 0.0;
        }
        self.duals[self.sector(v)].apply(v).max(0.0)
    }

    /// `max_k φ(v_k)`.
    pub fn dual_norm(&self, f: Functional) -> f64 {
        self.vertices
            .iter()
            .map(|&v| f.apply(v))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    pub fn is_unit_functional(&self, f: Functional) -> bool {
        (self.dual_norm(f) - 1.0).abs() <= self.tol.eps()
    }

    pub fn classify_direction(&self, v: Vec2) -> Result<UnitCircleElement, NormError> {
        let g = self.gauge(v);
        if !(g > 0.0 && g.is_finite()) {
            return Err(NormError::ZeroVector);
        }
        let unit = v / g;
        let m = self.len();
        let k = self.sector(v);
        let (a, b) = (self.vertices[k], self.vertices[(k + 1) % m]);
        let eps = self.tol.eps();
        if unit.dist(a) <= eps {
            return Ok(UnitCircleElement::Vertex(k));
        }
        if unit.dist(b) <= eps {
            return Ok(UnitCircleElement::Vertex((k + 1) % m));
        }
        let d = b - a;
        let t = ((unit - a).dot(d) / d.dot(d)).clamp(f64::EPSILON, 1.0 - f64::EPSILON);
        Ok(UnitCircleElement::EdgeInterior { edge: k, t })
    }

    pub fn norming_set(&self, v: Vec2) -> Result<FunctionalSet, NormError> {
        Ok(match self.classify_direction(v)? {
            UnitCircleElement::EdgeInterior { edge, .. } => FunctionalSet::Unique(self.duals[edge]),
            UnitCircleElement::Vertex(k) => {
                let (lo, hi) = self.dual_edge(k);
                FunctionalSet::SegmentSet { lo, hi }
            }
        })
    }

    /// The point of the unit circle an element refers to.
    pub fn element_point(&self, e: UnitCircleElement) -> Point2 {
        match e {
            UnitCircleElement::Vertex(k) => self.vertex(k),
            UnitCircleElement::EdgeInterior { edge, t } => {
                self.vertex(edge).lerp(self.vertex(edge + 1), t)
            }
        }
    }

    /// The unit ball of the dual norm, as a norm in its own right.
    pub fn dual_polygon(&self) -> Result<PolygonalNorm, NormError> {
        let pts: Vec<Point2> = self.duals.iter().map(Functional::vec).collect();
        PolygonalNorm::with_tol(&pts, self.tol)
    }

    /// Image of the unit polygon under a linear map `[[a, b], [c, d]]`.
    pub fn linear_image(&self, m: [[f64; 2]; 2]) -> Result<PolygonalNorm, NormError> {
        let pts: Vec<Point2> = self
            .vertices
            .iter()
            .map(|v| Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y))
            .collect();
        PolygonalNorm::with_tol(&pts, self.tol)
    }
}

/// Diamond `|x| + |y|` (the Manhattan plane).
pub fn diamond() -> PolygonalNorm {
    PolygonalNorm::new(&[
        Vec2::new(1.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(-1.0, 0.0),
        Vec2::new(0.0, -1.0),
    ])
    .expect("diamond is a valid norm")
}

/// Regular polygon with `2 * half` vertices on the Euclidean unit circle,
/// vertex 0 at angle 0.
pub fn regular(half: usize) -> Result<PolygonalNorm, NormError> {
    let m = 2 * half;
    let pts: Vec<Point2> = (0..m)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / half as f64;
            Vec2::new(a.cos(), a.sin())
        })
        .collect();
    // Exact central symmetry.
    let mut pts = pts;
    for k in 0..half {
        pts[k + half] = -pts[k];
    }
    PolygonalNorm::new(&pts)
}
