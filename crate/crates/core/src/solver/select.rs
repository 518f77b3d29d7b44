//! Choosing norming functionals that sum to zero.
//!
//! Each norming set is a point or a segment `lo + t·dir, t ∈ [0, 1]` in the
//! dual plane, so the achievable sums form a zonotope. A selection is found
//! by peeling generators off one at a time: for the last generator we keep
//! only the `t` values that leave the remainder inside the zonotope of the
//! earlier ones (a convex polygon, so the feasible `t` form an interval).

use crate::geometry::{convex_hull, HalfPlane, Point2, Region, RegionKind, Tol, Vec2};
use crate::norm::{Functional, FunctionalSet, PolygonalNorm};

/// Tie-breaking for functionals that are not forced to a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Preference {
    /// Try `t = 0`, then `t = 1`, then the middle of the feasible interval.
    #[default]
    LowFirst,
    /// Try `t = 1`, then `t = 0`, then the middle.
    HighFirst,
    /// Always the middle of the feasible interval.
    Midpoint,
}

impl Preference {
    pub const ALL: [Preference; 3] = [
        Preference::LowFirst,
        Preference::HighFirst,
        Preference::Midpoint,
    ];

    fn pick(self, lo: f64, hi: f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        match self {
            Preference::LowFirst if lo <= 0.0 => 0.0,
            Preference::LowFirst if hi >= 1.0 => 1.0,
            Preference::HighFirst if hi >= 1.0 => 1.0,
            Preference::HighFirst if lo <= 0.0 => 0.0,
            _ => mid,
        }
    }
}

/// Linear constraints `normal · q <= offset` describing a convex region,
/// including degenerate ones.
fn region_constraints(r: &Region) -> Vec<HalfPlane> {
    let v = r.vertices();
    match r.kind() {
        RegionKind::Empty => Vec::new(),
        RegionKind::Point => {
            let a = v[0];
            vec![
                HalfPlane::new(Vec2::new(1.0, 0.0), a.x),
                HalfPlane::new(Vec2::new(-1.0, 0.0), -a.x),
                HalfPlane::new(Vec2::new(0.0, 1.0), a.y),
                HalfPlane::new(Vec2::new(0.0, -1.0), -a.y),
            ]
        }
        RegionKind::Segment => {
            let (a, b) = (v[0], v[1]);
            let d = (b - a).normalized();
            let n = d.perp();
            vec![
                HalfPlane::new(n, n.dot(a)),
                HalfPlane::new(-n, -n.dot(a)),
                HalfPlane::new(d, d.dot(b)),
                HalfPlane::new(-d, -d.dot(a)),
            ]
        }
        RegionKind::Polygon => r
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let hp = HalfPlane::left_of(a, b);
                let n = hp.normal.norm();
                HalfPlane::new(hp.normal / n, hp.offset / n)
            })
            .collect(),
    }
}

/// `{t ∈ [0,1] : r - t·g ∈ region}`, with `slack` added to every constraint.
fn feasible_interval(region: &Region, r: Vec2, g: Vec2, slack: f64) -> Option<(f64, f64)> {
    if region.is_empty() {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for hp in region_constraints(region) {
        let alpha = -hp.normal.dot(g);
        let beta = hp.offset + slack - hp.normal.dot(r);
        if alpha.abs() <= 1e-15 {
            if beta < 0.0 {
                return None;
            }
        } else if alpha > 0.0 {
            hi = hi.min(beta / alpha);
        } else {
            lo = lo.max(beta / alpha);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn minkowski_with_segment(r: &Region, g: Vec2, tol: &Tol) -> Region {
    let mut pts: Vec<Point2> = r.vertices().to_vec();
    pts.extend(r.vertices().iter().map(|&v| v + g));
    convex_hull(&pts, tol).unwrap_or_else(|_| Region::empty())
}

/// Finds `t ∈ [0,1]^k` and `b ∈ base` with `Σ t_i g_i + b = target`.
///
/// Returns the parameters and the residual `b`.
pub(crate) fn decompose(
    target: Vec2,
    base: &Region,
    gens: &[Vec2],
    pref: Preference,
    slack: f64,
    tol: &Tol,
) -> Option<(Vec<f64>, Vec2)> {
    // Prefix zonotopes: prefix[j] = base ⊕ [0,1]g_0 ⊕ … ⊕ [0,1]g_{j-1}.
    let mut prefix = Vec::with_capacity(gens.len() + 1);
    prefix.push(base.clone());
    for &g in gens {
        let next = minkowski_with_segment(prefix.last().unwrap(), g, tol);
        prefix.push(next);
    }

    let mut ts = vec![0.0; gens.len()];
    let mut r = target;
    for j in (0..gens.len()).rev() {
        let (lo, hi) = feasible_interval(&prefix[j], r, gens[j], slack)?;
        let t = pref.pick(lo, hi).clamp(0.0, 1.0);
        ts[j] = t;
        r = r - gens[j] * t;
    }
    let ok = region_constraints(base)
        .iter()
        .all(|hp| hp.normal.dot(r) - hp.offset <= slack);
    ok.then_some((ts, r))
}

/// Cancels a leftover sum by moving two non-parallel generators.
fn polish(ts: &mut [f64], gens: &[Vec2], residual: Vec2) {
    if residual.norm() == 0.0 {
        return;
    }
    let mut best: Option<(f64, usize, usize, f64, f64)> = None;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let det = gens[i].cross(gens[j]);
            if det.abs() < 1e-9 * gens[i].norm() * gens[j].norm() {
                continue;
            }
            // Δi·gi + Δj·gj = -residual
            let di = (-residual).cross(gens[j]) / det;
            let dj = gens[i].cross(-residual) / det;
            let (ni, nj) = (ts[i] + di, ts[j] + dj);
            if (0.0..=1.0).contains(&ni) && (0.0..=1.0).contains(&nj) {
                let quality = det.abs();
                if best.is_none_or(|b| quality > b.0) {
                    best = Some((quality, i, j, ni, nj));
                }
            }
        }
    }
    if let Some((_, i, j, ni, nj)) = best {
        ts[i] = ni;
        ts[j] = nj;
    }
}

/// Picks one functional from each set so that their sum lies in `base`
/// (the origin for the strict test).
pub(crate) fn select_from_sets(
    sets: &[FunctionalSet],
    base: &Region,
    pref: Preference,
    tol: &Tol,
) -> Option<(Vec<Functional>, Vec2)> {
    let fixed: Vec2 = sets.iter().map(|s| s.lo().vec()).sum();
    let mut gen_owner = Vec::new();
    let mut gens = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let g = s.hi().vec() - s.lo().vec();
        if !s.is_unique() && g.norm() > 0.0 {
            gen_owner.push(i);
            gens.push(g);
        }
    }
    let scale = sets
        .iter()
        .map(|s| s.lo().vec().norm().max(s.hi().vec().norm()))
        .fold(1.0, f64::max);
    let slack = tol.eps() * scale;
    let (mut ts, mut residual) = decompose(-fixed, base, &gens, pref, slack, tol)?;

    if base.kind() == RegionKind::Point {
        let current = |ts: &[f64]| fixed + gens.iter().zip(ts).map(|(&g, &t)| g * t).sum::<Vec2>();
        let before = current(&ts);
        polish(&mut ts, &gens, before);
        // A functional a hair away from a dual vertex changes its cone from
        // an angle to a ray, so pull near-endpoint parameters back.
        let snapped: Vec<f64> = ts
            .iter()
            .map(|&t| match t {
                t if t < 1e-6 => 0.0,
                t if t > 1.0 - 1e-6 => 1.0,
                t => t,
            })
            .collect();
        if current(&snapped).norm() <= 10.0 * slack {
            ts = snapped;
        }
        residual = -current(&ts);
    }

    let mut out: Vec<Functional> = sets.iter().map(FunctionalSet::lo).collect();
    for (&t, &owner) in ts.iter().zip(&gen_owner) {
        out[owner] = sets[owner].at(t);
    }
    Some((out, residual))
}

/// Scaled copy of the dual unit ball, as a region.
pub(crate) fn dual_ball(norm: &PolygonalNorm, scale: f64, tol: &Tol) -> Region {
    let pts: Vec<Point2> = norm
        .dual_vertices()
        .iter()
        .map(|f| f.vec() * scale)
        .collect();
    convex_hull(&pts, tol).unwrap_or_else(|_| Region::empty())
}
