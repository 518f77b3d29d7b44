//! Brute-force checks that share no code path with the solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point2, Region, RegionKind, Vec2};
use crate::norm::PolygonalNorm;
use crate::solver::objective;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// `(min corner, max corner)`; `None` means the terminals' bounding box
    /// grown by one norm unit.
    pub bbox: Option<(Point2, Point2)>,
    pub resolution: usize,
    pub refine_rounds: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            bbox: None,
            resolution: 400,
            refine_rounds: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResult {
    pub point: Point2,
    pub value: f64,
    /// Cell diagonal of the last (finest) grid.
    pub cell_diameter: f64,
}

/// Grid search, zooming ×10 around the incumbent after each pass.
pub fn grid_minimize(norm: &PolygonalNorm, points: &[Point2], spec: &GridSpec) -> GridResult {
    assert!(!points.is_empty(), "grid_minimize needs terminals");
    let res = spec.resolution.max(8);
    let (mut lo, mut hi) = spec.bbox.unwrap_or_else(|| {
        let grow = norm.primal_scale();
        let mut lo = points[0];
        let mut hi = points[0];
        for q in points {
            lo = Vec2::new(lo.x.min(q.x), lo.y.min(q.y));
            hi = Vec2::new(hi.x.max(q.x), hi.y.max(q.y));
        }
        (lo - Vec2::new(grow, grow), hi + Vec2::new(grow, grow))
    });

    let mut best = (points[0], objective(norm, points, points[0]));
    let mut cell = 0.0;
    for round in 0..=spec.refine_rounds {
        let step = (hi - lo) / res as f64;
        cell = step.norm();
        for i in 0..=res {
            for j in 0..=res {
                let q = Vec2::new(lo.x + step.x * i as f64, lo.y + step.y * j as f64);
                let v = objective(norm, points, q);
                if v < best.1 {
                    best = (q, v);
                }
            }
        }
        if round < spec.refine_rounds {
            let half = (hi - lo) / 20.0;
            lo = best.0 - half;
            hi = best.0 + half;
        }
    }
    GridResult {
        point: best.0,
        value: best.1,
        cell_diameter: cell,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub max_inside_deviation: f64,
    /// Smallest objective increase just outside the region; differences
    /// below floating-point noise count as zero.
    pub min_outside_excess: f64,
}

impl ProbeReport {
    pub fn is_clean(&self, inside_tol: f64) -> bool {
        self.max_inside_deviation < inside_tol && self.min_outside_excess > 0.0
    }
}

/// Samples the region and a thin shell around it.
///
/// Inside: vertices, edge midpoints, the centroid and `samples` random convex
/// combinations must all attain `optimum`. Outside: points pushed `delta`
/// across the boundary must do strictly worse.
pub fn probe_solution_set<R: Rng>(
    norm: &PolygonalNorm,
    points: &[Point2],
    region: &Region,
    optimum: f64,
    samples: usize,
    delta: f64,
    rng: &mut R,
) -> ProbeReport {
    let verts = region.vertices();
    let mut inside: Vec<Point2> = verts.to_vec();
    for (a, b) in region.edges() {
        inside.push((a + b) * 0.5);
    }
    inside.extend(region.centroid());
    if verts.len() > 1 {
        for _ in 0..samples {
            let w: Vec<f64> = verts.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = w.iter().sum();
            inside.push(verts.iter().zip(&w).map(|(&v, &wi)| v * (wi / total)).sum());
        }
    }

    let mut outside: Vec<Point2> = Vec::new();
    match region.kind() {
        RegionKind::Empty => {}
        RegionKind::Point => {
            for k in 0..8 {
                let a = std::f64::consts::FRAC_PI_4 * k as f64;
                outside.push(verts[0] + Vec2::new(a.cos(), a.sin()) * delta);
            }
        }
        RegionKind::Segment => {
            let (a, b) = (verts[0], verts[1]);
            let d = (b - a).normalized();
            let n = d.perp();
            outside.push(a - d * delta);
            outside.push(b + d * delta);
            let mut along = vec![0.0, 0.5, 1.0];
            along.extend((0..samples).map(|_| rng.gen::<f64>()));
            for s in along {
                let q = a.lerp(b, s);
                outside.push(q + n * delta);
                outside.push(q - n * delta);
            }
        }
        RegionKind::Polygon => {
            for (a, b) in region.edges() {
                let out = (b - a).normalized().perp() * -1.0;
                let mut along = vec![0.0, 0.5, 1.0];
                along.extend((0..samples / verts.len().max(1) + 1).map(|_| rng.gen::<f64>()));
                for s in along {
                    outside.push(a.lerp(b, s) + out * delta);
                }
            }
        }
    }

    let noise = 64.0 * f64::EPSILON * (1.0 + optimum.abs()) * points.len() as f64;
    let max_inside_deviation = inside
        .iter()
        .map(|&q| (objective(norm, points, q) - optimum).abs())
        .fold(0.0, f64::max);
    let min_outside_excess = outside
        .iter()
        .map(|&q| {
            let e = objective(norm, points, q) - optimum;
            if e.abs() <= noise {
                0.0
            } else {
                e
            }
        })
        .fold(f64::INFINITY, f64::min);
    ProbeReport {
        max_inside_deviation,
        min_outside_excess,
    }
}

/// Probes a solved instance with a seeded generator: 64 samples, offset
/// `1e-6` times the instance size.
pub fn self_check(
    norm: &PolygonalNorm,
    points: &[Point2],
    region: &Region,
    optimum: f64,
    seed: u64,
) -> ProbeReport {
    let size = points.iter().map(|q| q.norm_inf()).fold(1.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probe_solution_set(norm, points, region, optimum, 64, 1e-6 * size, &mut rng)
}

/// Random centrally symmetric convex polygon with `2 * half` vertices.
///
/// Built as a zonotope: `half` generator segments with well-separated
/// directions, summed, then scaled so the farthest vertex lies at a random
/// radius in [0.5, 1.5].
pub fn random_symmetric_polygon<R: Rng>(rng: &mut R, half: usize) -> PolygonalNorm {
    let half = half.max(2);
    let min_gap = 0.25 * std::f64::consts::PI / half as f64;
    loop {
        let mut angles: Vec<f64> = (0..half)
            .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
            .collect();
        angles.sort_by(f64::total_cmp);
        let wrap_gap = angles[0] + std::f64::consts::PI - angles[half - 1];
        if angles.windows(2).any(|w| w[1] - w[0] < min_gap) || wrap_gap < min_gap {
            continue;
        }
        let gens: Vec<Vec2> = angles
            .iter()
            .map(|&a| Vec2::new(a.cos(), a.sin()) * rng.gen_range(0.5..1.5))
            .collect();
        let start = -gens.iter().copied().sum::<Vec2>() * 0.5;
        let mut verts = Vec::with_capacity(2 * half);
        let mut cur = start;
        for &g in &gens {
            verts.push(cur);
            cur += g;
        }
        for k in 0..half {
            verts.push(-verts[k]);
        }
        let radius = verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let target = rng.gen_range(0.5..1.5);
        let verts: Vec<Vec2> = verts.iter().map(|&v| v * (target / radius)).collect();
        if let Ok(n) = PolygonalNorm::new(&verts) {
            return n;
        }
    }
}

/// A random norm with 4–20 vertices and 3–7 terminals in [-5, 5]².
pub fn random_instance<R: Rng>(rng: &mut R) -> (PolygonalNorm, Vec<Point2>) {
    let half = rng.gen_range(2..=10);
    let norm = random_symmetric_polygon(rng, half);
    let n = rng.gen_range(3..=7);
    let pts = (0..n)
        .map(|_| Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
        .collect();
    (norm, pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{diamond, regular};
    use crate::solver::ft_solve;

    fn p(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn grid_examples() {
        let d = diamond();
        let g = grid_minimize(&d, &[p(0., 0.), p(2., 0.), p(0., 2.)], &GridSpec::default());
        assert!(g.point.dist(p(0., 0.)) < 1e-6);
        assert!((g.value - 4.0).abs() < 3.0 * g.cell_diameter);

        let g = grid_minimize(&regular(5).unwrap(), &[p(0.3, -1.7)], &GridSpec::default());
        assert!(g.point.dist(p(0.3, -1.7)) < 1e-6);
        assert!(g.value < 1e-6);

        let s3 = 3f64.sqrt();
        let g = grid_minimize(
            &regular(3).unwrap(),
            &[p(0., 0.), p(1., 0.), p(0.5, s3 / 2.)],
            &GridSpec::default(),
        );
        assert!((g.value - 2.0).abs() < 3.0 * g.cell_diameter);
    }

    #[test]
    fn probe_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = regular(3).unwrap();
        let s3 = 3f64.sqrt();
        let tri = [p(0., 0.), p(1., 0.), p(0.5, s3 / 2.)];
        let sol = ft_solve(&h, &tri).unwrap();
        let r = probe_solution_set(&h, &tri, &sol.region, sol.objective, 50, 1e-6, &mut rng);
        assert!(r.max_inside_deviation < 1e-9, "{r:?}");
        assert!(r.min_outside_excess > 0.0, "{r:?}");

        let d = diamond();
        let pts = [p(0., 0.), p(2., 0.), p(0., 2.)];
        let sol = ft_solve(&d, &pts).unwrap();
        let r = probe_solution_set(&d, &pts, &sol.region, sol.objective, 50, 1e-6, &mut rng);
        assert_eq!(r.max_inside_deviation, 0.0);
        assert!(r.min_outside_excess > 0.0);

        // Negative control: shift the true triangle.
        let bad = sol_shifted(&h, &tri);
        let r = probe_solution_set(&h, &tri, &bad.0, bad.1, 50, 1e-6, &mut rng);
        assert!(r.min_outside_excess <= 0.0, "{r:?}");
        assert!(!r.is_clean(1e-8));
    }

    fn sol_shifted(h: &PolygonalNorm, tri: &[Point2]) -> (Region, f64) {
        let sol = ft_solve(h, tri).unwrap();
        (sol.region.translated(p(0.1, 0.0)), sol.objective)
    }

    #[test]
    fn random_polygons_are_valid_and_sized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for half in 2..=10 {
            let n = random_symmetric_polygon(&mut rng, half);
            assert_eq!(n.len(), 2 * half);
            let r = n.primal_scale();
            assert!((0.5..=1.5).contains(&r));
        }
    }

    #[test]
    fn generator_is_reproducible() {
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(3));
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
