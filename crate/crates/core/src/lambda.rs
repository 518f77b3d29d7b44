//! Planes normed by a regular 2λ-gon.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{hausdorff, orient, Point2, RegionKind, Tol, Vec2};
use crate::norm::{regular, Functional, NormError, PolygonalNorm, UnitCircleElement};
use crate::solver::{
    ft_solve, objective, region_for_selection, Certificate, FtSolution, SolverError,
};
use crate::uniqueness::{uniqueness_verdict, UniquenessError, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LambdaError {
    #[error("lambda must be at least 2, got {0}")]
    LambdaTooSmall(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("lambda = {lambda}: verdict contradicts the mod-3 law")]
    LawViolated { lambda: u32 },
    #[error("triangle construction and solver disagree: {0}")]
    Disagreement(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Uniqueness(#[from] UniquenessError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPlane {
    pub lambda: u32,
    pub norm: PolygonalNorm,
}

/// Regular 2λ-gon with vertex k at angle kπ/λ, radius 1.
pub fn make_lambda_norm(lambda: u32) -> Result<LambdaPlane, LambdaError> {
    if lambda < 2 {
        return Err(LambdaError::LambdaTooSmall(lambda));
    }
    Ok(LambdaPlane {
        lambda,
        norm: regular(lambda as usize)?,
    })
}

pub fn classify_lambda(lambda: u32) -> Result<Verdict, LambdaError> {
    let plane = make_lambda_norm(lambda)?;
    let verdict = uniqueness_verdict(&plane.norm)?;
    if verdict.is_unique() == lambda.is_multiple_of(3) {
        return Err(LambdaError::LawViolated { lambda });
    }
    Ok(verdict)
}

/// Classifies every λ in `range`, in order.
pub fn classify_range(
    range: std::ops::RangeInclusive<u32>,
) -> Vec<(u32, Result<Verdict, LambdaError>)> {
    let lambdas: Vec<u32> = range.collect();
    lambdas
        .into_par_iter()
        .map(|l| (l, classify_lambda(l)))
        .collect()
}

/// Euclidean angle at `at` between the rays to `a` and `b`, in [0, π].
pub fn viewing_angle(at: Point2, a: Point2, b: Point2) -> f64 {
    let (u, v) = (a - at, b - at);
    u.cross(v).abs().atan2(u.dot(v))
}

/// True iff the triangle is non-degenerate and every angle is below 120°
/// by more than `eps`.
pub fn is_admissible(x: [Point2; 3], tol: &Tol) -> bool {
    if orient(x[0], x[1], x[2], tol) == 0 {
        return false;
    }
    let limit = 2.0 * PI / 3.0 - tol.eps();
    (0..3).all(|i| viewing_angle(x[i], x[(i + 1) % 3], x[(i + 2) % 3]) < limit)
}

/// The point seeing every side at 120°.
///
/// Each side gets an outward equilateral apex; the line from that apex to
/// the opposite corner passes through the point, so two such lines meet
/// there.
pub fn torricelli_point(x1: Point2, x2: Point2, x3: Point2) -> Option<Point2> {
    let x = [x1, x2, x3];
    let tol = Tol::default();
    if !x.iter().all(|q| q.is_finite()) || !is_admissible(x, &tol) {
        return None;
    }
    let apex = |i: usize| {
        let (a, b, c) = (x[i], x[(i + 1) % 3], x[(i + 2) % 3]);
        // Equilateral apex on side bc, away from a.
        let side = (c - b).cross(a - b);
        let turn = if side > 0.0 { -PI / 3.0 } else { PI / 3.0 };
        b + (c - b).rotate(turn)
    };
    let (a0, d0) = (x[0], apex(0) - x[0]);
    let (a1, d1) = (x[1], apex(1) - x[1]);
    let det = d0.cross(d1);
    if det == 0.0 {
        return None;
    }
    let s = (a1 - a0).cross(d1) / det;
    let t = a0 + d0 * s;
    t.is_finite().then_some(t)
}

/// Optimal set of a triangle in a λ-plane with λ ≡ 0 mod 3, built from the
/// Torricelli point directly and checked against the generic solver.
///
/// From the Torricelli point `p` the three directions `x̂ᵢ − p` are 120°
/// apart, so they land on the unit circle in rotated copies of the same
/// element. If none is a vertex the edge functionals sum to zero and the
/// cones meet in a polygon; if all are vertices, taking the functional of
/// the following edge at each keeps the sum at zero and the cones meet in
/// `p` alone.
pub fn lambda_triangle_solution(lambda: u32, x: [Point2; 3]) -> Result<FtSolution, LambdaError> {
    if !lambda.is_multiple_of(3) {
        return Err(LambdaError::PreconditionViolated(format!(
            "lambda = {lambda} is not a multiple of 3"
        )));
    }
    let plane = make_lambda_norm(lambda)?;
    let norm = &plane.norm;
    let p = torricelli_point(x[0], x[1], x[2]).ok_or_else(|| {
        LambdaError::PreconditionViolated(
            "triangle is degenerate or has an angle of at least 120°".into(),
        )
    })?;

    let elements = x
        .iter()
        .map(|&xi| norm.classify_direction(xi - p))
        .collect::<Result<Vec<_>, _>>()?;
    let vertex_count = elements.iter().filter(|e| e.is_vertex()).count();
    let expected = match vertex_count {
        0 => RegionKind::Polygon,
        3 => RegionKind::Point,
        _ => {
            return Err(LambdaError::Disagreement(format!(
                "{vertex_count} of 3 directions hit vertices"
            )))
        }
    };
    let functionals: Vec<Functional> = elements
        .iter()
        .map(|e| match *e {
            UnitCircleElement::EdgeInterior { edge, .. } => norm.dual_vertex(edge),
            UnitCircleElement::Vertex(k) => norm.dual_vertex(k),
        })
        .collect();
    let sum: Functional = functionals.iter().copied().sum();
    let scale = norm.dual_scale();
    if sum.vec().norm() > 10.0 * norm.tol().eps() * scale {
        return Err(LambdaError::Disagreement(format!(
            "functionals sum to {sum}"
        )));
    }

    let (region, cones) = region_for_selection(norm, &x, &functionals)?;
    if region.kind() != expected {
        return Err(LambdaError::Disagreement(format!(
            "cones meet in a {}, expected a {expected}",
            region.kind()
        )));
    }

    let generic = ft_solve(norm, &x)?;
    let size = x.iter().map(|q| q.norm_inf()).fold(1.0, f64::max);
    let gap = hausdorff(region.vertices(), generic.region.vertices());
    if generic.kind() != expected || gap > 1e-8 * size {
        return Err(LambdaError::Disagreement(format!(
            "solver returned a {} at Hausdorff distance {gap:e}",
            generic.kind()
        )));
    }
    Ok(FtSolution {
        objective: objective(norm, &x, p),
        region,
        certificate: Certificate { p, functionals },
        cones,
    })
}

/// Rotation of the points about their centroid.
pub fn rotate_about_centroid(x: [Point2; 3], theta: f64) -> [Point2; 3] {
    let c = (x[0] + x[1] + x[2]) / 3.0;
    x.map(|q| c + (q - c).rotate(theta))
}

/// Euclidean unit vector at angle `theta`.
pub fn unit(theta: f64) -> Vec2 {
    Vec2::new(theta.cos(), theta.sin())
}
