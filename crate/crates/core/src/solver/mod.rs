//! Fermat–Torricelli sets under a polygonal norm.
//!
//! The pipeline finds one optimal point by enumerating the vertices of the
//! objective's linearity arrangement, certifies it with norming functionals
//! that sum to zero, and recovers the whole optimal set as the intersection
//! of the cones those functionals define at the terminals.

mod cone;
mod select;

pub use cone::{build_cone, intersect_cones, Cone, ConeShape};
pub use select::Preference;

use thiserror::Error;

use crate::geometry::{GeometryError, Point2, Region, RegionKind, Tol, Vec2};
use crate::norm::{Functional, FunctionalSet, NormError, PolygonalNorm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("no terminals given")]
    EmptyInput,
    #[error("terminal {0} is not a finite point")]
    NonFinite(usize),
    #[error("no norming functionals summing to zero exist at {0}")]
    Infeasible(Point2),
    #[error("{0}")]
    Norm(#[from] NormError),
    #[error("cone intersection failed: {0}")]
    Geometry(#[from] GeometryError),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
}

/// Norming functionals at `p`, one per terminal, summing to zero.
///
/// For a terminal that coincides with `p` the entry is a subgradient of the
/// norm at the origin (dual norm at most one) rather than a unit functional.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub p: Point2,
    pub functionals: Vec<Functional>,
}

impl Certificate {
    pub fn sum(&self) -> Functional {
        self.functionals.iter().copied().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FtSolution {
    pub region: Region,
    pub objective: f64,
    pub certificate: Certificate,
    /// Cones whose intersection is `region`; empty when the optimum is a terminal.
    pub cones: Vec<Cone>,
}

impl FtSolution {
    pub fn kind(&self) -> RegionKind {
        self.region.kind()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    /// Return the middle point of odd collinear inputs without running the pipeline.
    pub skip_collinear_shortcut: bool,
    pub preference: Preference,
}

/// Sum of norm distances from `x` to the terminals.
pub fn objective(norm: &PolygonalNorm, points: &[Point2], x: Point2) -> f64 {
    points.iter().map(|&q| norm.gauge(x - q)).sum()
}

fn value_slack(tol: &Tol, v: f64) -> f64 {
    tol.eps() * (1.0 + v.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidates {
    /// Every candidate attaining the minimum, deduplicated.
    pub argmin: Vec<Point2>,
    pub value: f64,
}

/// Minimizes the objective over the vertices of its linearity arrangement.
///
/// Each distance term is linear on the sectors cut out by the lines through
/// its terminal along the unit polygon's vertex directions. The optimal set
/// is a union of arrangement faces, so its extreme points are among the
/// terminals and the pairwise crossings of these lines.
pub fn candidate_minimize(
    norm: &PolygonalNorm,
    points: &[Point2],
) -> Result<Candidates, SolverError> {
    if points.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    let tol = norm.tol();
    let mut terminals: Vec<Point2> = Vec::new();
    for &q in points {
        if !terminals.iter().any(|&t| tol.same_point(t, q)) {
            terminals.push(q);
        }
    }
    let dirs: Vec<Vec2> = norm.vertices()[..norm.len() / 2]
        .iter()
        .map(|v| v.normalized())
        .collect();

    let mut candidates: Vec<Point2> = terminals.clone();
    for (i, &a) in terminals.iter().enumerate() {
        for &b in &terminals[i + 1..] {
            for &da in &dirs {
                for &db in &dirs {
                    let det = da.cross(db);
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let s = (b - a).cross(db) / det;
                    let q = a + da * s;
                    if q.is_finite() {
                        candidates.push(q);
                    }
                }
            }
        }
    }

    let values: Vec<f64> = candidates
        .iter()
        .map(|&q| objective(norm, points, q))
        .collect();
    let value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = value_slack(tol, value);
    let mut argmin: Vec<Point2> = Vec::new();
    for (&q, &v) in candidates.iter().zip(&values) {
        if v <= value + slack && !argmin.iter().any(|&a| tol.same_point(a, q)) {
            argmin.push(q);
        }
    }
    Ok(Candidates { argmin, value })
}

fn coinciding(points: &[Point2], p: Point2, tol: &Tol) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| tol.same_point(points[i], p))
        .collect()
}

/// Optimality test at `p`.
///
/// Away from the terminals this asks for norming functionals of `xᵢ - p`
/// summing to zero. At a terminal the coinciding entries may be anything of
/// dual norm at most one, which is the subdifferential condition there.
pub fn verify_ft_point(
    norm: &PolygonalNorm,
    points: &[Point2],
    p: Point2,
) -> Option<Vec<Functional>> {
    verify_with(norm, points, p, Preference::default())
}

fn verify_with(
    norm: &PolygonalNorm,
    points: &[Point2],
    p: Point2,
    pref: Preference,
) -> Option<Vec<Functional>> {
    let tol = norm.tol();
    let at = coinciding(points, p, tol);
    if at.is_empty() {
        return select_functionals_with(norm, points, p, pref).ok();
    }
    let others: Vec<usize> = (0..points.len()).filter(|i| !at.contains(i)).collect();
    let sets: Vec<FunctionalSet> = others
        .iter()
        .map(|&i| norm.norming_set(points[i] - p))
        .collect::<Result<_, _>>()
        .ok()?;
    let base = select::dual_ball(norm, at.len() as f64, tol);
    let (chosen, residual) = select::select_from_sets(&sets, &base, pref, tol)?;
    let mut out = vec![Functional::ZERO; points.len()];
    for (&i, f) in others.iter().zip(chosen) {
        out[i] = f;
    }
    let share = Functional::from_vec(residual / at.len() as f64);
    for &i in &at {
        out[i] = share;
    }
    Some(out)
}

/// Unit functionals `φᵢ` norming `xᵢ - p` with `Σ φᵢ = 0`, for `p` off the terminals.
pub fn select_functionals(
    norm: &PolygonalNorm,
    points: &[Point2],
    p: Point2,
) -> Result<Vec<Functional>, SolverError> {
    select_functionals_with(norm, points, p, Preference::default())
}

pub fn select_functionals_with(
    norm: &PolygonalNorm,
    points: &[Point2],
    p: Point2,
    pref: Preference,
) -> Result<Vec<Functional>, SolverError> {
    let tol = norm.tol();
    let sets: Vec<FunctionalSet> = points
        .iter()
        .map(|&x| norm.norming_set(x - p))
        .collect::<Result<_, _>>()
        .map_err(|_| SolverError::Infeasible(p))?;
    let origin = Region::point(Vec2::ZERO);
    let (chosen, _) =
        select::select_from_sets(&sets, &origin, pref, tol).ok_or(SolverError::Infeasible(p))?;
    let scale = norm.dual_scale().max(1.0);
    let sum: Functional = chosen.iter().copied().sum();
    if sum.vec().norm() > 10.0 * tol.eps() * scale * points.len() as f64 {
        return Err(SolverError::Infeasible(p));
    }
    Ok(chosen)
}

/// Middle terminal of an odd collinear set.
pub fn collinear_median(points: &[Point2], tol: &Tol) -> Option<Point2> {
    if points.len().is_multiple_of(2) {
        return None;
    }
    let (a, b) = crate::geometry::farthest_pair(points);
    let d = b - a;
    let len = d.norm();
    if len <= tol.eps() {
        return Some(points[0]);
    }
    let dir = d / len;
    if points.iter().any(|&q| dir.cross(q - a).abs() > tol.eps()) {
        return None;
    }
    let mut sorted: Vec<(f64, Point2)> = points.iter().map(|&q| ((q - a).dot(dir), q)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    Some(sorted[points.len() / 2].1)
}

/// Cones of the terminals off `p` under a selection, and their intersection.
pub fn region_for_selection(
    norm: &PolygonalNorm,
    points: &[Point2],
    functionals: &[Functional],
) -> Result<(Region, Vec<Cone>), SolverError> {
    let cones: Vec<Cone> = points
        .iter()
        .zip(functionals)
        .map(|(&x, &f)| build_cone(norm, x, f))
        .collect::<Result<_, _>>()?;
    let region = intersect_cones(&cones, norm.tol())?;
    Ok((region, cones))
}

/// Every distinct selection the tie-breaking rules produce at `p`.
pub fn alternative_selections(
    norm: &PolygonalNorm,
    points: &[Point2],
    p: Point2,
) -> Vec<Vec<Functional>> {
    let mut out: Vec<Vec<Functional>> = Vec::new();
    for pref in Preference::ALL {
        if let Ok(sel) = select_functionals_with(norm, points, p, pref) {
            let dup = out.iter().any(|o| {
                o.iter()
                    .zip(&sel)
                    .all(|(a, b)| (a.vec() - b.vec()).norm() <= 1e-12)
            });
            if !dup {
                out.push(sel);
            }
        }
    }
    out
}

pub fn ft_solve(norm: &PolygonalNorm, points: &[Point2]) -> Result<FtSolution, SolverError> {
    ft_solve_with(norm, points, &SolveOptions::default())
}

pub fn ft_solve_with(
    norm: &PolygonalNorm,
    points: &[Point2],
    opts: &SolveOptions,
) -> Result<FtSolution, SolverError> {
    if points.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    if let Some(i) = points.iter().position(|q| !q.is_finite()) {
        return Err(SolverError::NonFinite(i));
    }
    let tol = norm.tol();

    if !opts.skip_collinear_shortcut {
        if let Some(mid) = collinear_median(points, tol) {
            return terminal_solution(norm, points, mid, opts.preference);
        }
    }

    let cands = candidate_minimize(norm, points)?;
    let is_terminal = |q: Point2| points.iter().any(|&x| tol.same_point(x, q));
    if cands.argmin.len() == 1 && is_terminal(cands.argmin[0]) {
        return terminal_solution(norm, points, cands.argmin[0], opts.preference);
    }

    let p = interior_candidate(&cands.argmin, is_terminal).ok_or_else(|| {
        SolverError::CertificateFailed("every optimal candidate is a terminal".into())
    })?;
    let functionals = select_functionals_with(norm, points, p, opts.preference)?;
    let (region, cones) = region_for_selection(norm, points, &functionals)?;

    let slack = value_slack(tol, cands.value) * 10.0;
    for &v in region.vertices() {
        let f = objective(norm, points, v);
        if (f - cands.value).abs() > slack {
            return Err(SolverError::CertificateFailed(format!(
                "region vertex {v} has objective {f}, optimum is {}",
                cands.value
            )));
        }
    }
    Ok(FtSolution {
        region,
        objective: cands.value,
        certificate: Certificate { p, functionals },
        cones,
    })
}

/// A point of the optimal set away from the terminals: the average of the
/// optimal candidates, else one of them, else a midpoint of two.
fn interior_candidate(argmin: &[Point2], is_terminal: impl Fn(Point2) -> bool) -> Option<Point2> {
    let avg = argmin.iter().copied().sum::<Vec2>() / argmin.len() as f64;
    if !is_terminal(avg) {
        return Some(avg);
    }
    if let Some(&q) = argmin.iter().find(|&&q| !is_terminal(q)) {
        return Some(q);
    }
    for (i, &a) in argmin.iter().enumerate() {
        for &b in &argmin[i + 1..] {
            let mid = (a + b) * 0.5;
            if !is_terminal(mid) {
                return Some(mid);
            }
        }
    }
    None
}

fn terminal_solution(
    norm: &PolygonalNorm,
    points: &[Point2],
    at: Point2,
    pref: Preference,
) -> Result<FtSolution, SolverError> {
    let functionals = verify_with(norm, points, at, pref).ok_or_else(|| {
        SolverError::CertificateFailed(format!("terminal {at} fails the subgradient test"))
    })?;
    Ok(FtSolution {
        region: Region::point(at),
        objective: objective(norm, points, at),
        certificate: Certificate { p: at, functionals },
        cones: Vec::new(),
    })
}
