use crate::geometry::{intersect_halfplanes, HalfPlane, Point2, Region, Tol, Vec2};
use crate::norm::{Functional, NormError, PolygonalNorm};

use super::SolverError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeShape {
    Ray {
        dir: Vec2,
    },
    /// Counter-clockwise sweep from `d1` to `d2`, strictly less than π.
    Angle {
        d1: Vec2,
        d2: Vec2,
    },
}

/// `vertex - {a : φ(a) = ‖a‖}`: the directions from a terminal along which
/// its norming functional stays norming, reflected through the terminal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub vertex: Point2,
    pub shape: ConeShape,
}

impl Cone {
    pub fn ray(vertex: Point2, dir: Vec2) -> Self {
        Cone {
            vertex,
            shape: ConeShape::Ray { dir },
        }
    }

    pub fn angle(vertex: Point2, d1: Vec2, d2: Vec2) -> Self {
        Cone {
            vertex,
            shape: ConeShape::Angle { d1, d2 },
        }
    }

    pub fn is_ray(&self) -> bool {
        matches!(self.shape, ConeShape::Ray { .. })
    }

    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        let x = self.vertex;
        match self.shape {
            ConeShape::Ray { dir } => {
                let d = dir.normalized();
                let n = d.perp();
                vec![
                    HalfPlane::new(n, n.dot(x)),
                    HalfPlane::new(-n, -n.dot(x)),
                    HalfPlane::new(-d, -d.dot(x)),
                ]
            }
            ConeShape::Angle { d1, d2 } => vec![
                HalfPlane::left_of(x, x + d1.normalized()),
                HalfPlane::left_of(x + d2.normalized(), x),
            ],
        }
    }
}

/// Cone of a terminal under a unit functional.
///
/// The level line `φ = 1` touches the unit polygon in one vertex (a ray) or
/// along one edge (an angle).
pub fn build_cone(norm: &PolygonalNorm, x: Point2, f: Functional) -> Result<Cone, SolverError> {
    let dn = norm.dual_norm(f);
    let eps = norm.tol().eps();
    if (dn - 1.0).abs() > eps * norm.dual_scale().max(1.0) {
        return Err(NormError::NotUnitFunctional(dn).into());
    }
    let m = norm.len();
    let values: Vec<f64> = norm.vertices().iter().map(|&v| f.apply(v)).collect();
    let k = (0..m)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("norm has vertices");
    let prev = (k + m - 1) % m;
    let next = (k + 1) % m;
    let touches = |i: usize| values[i] >= 1.0 - eps;
    let edge_start = match (touches(prev), touches(next)) {
        (false, false) => None,
        (true, false) => Some(prev),
        (false, true) => Some(k),
        (true, true) => Some(if values[prev] > values[next] { prev } else { k }),
    };
    Ok(match edge_start {
        None => Cone::ray(x, -norm.vertex(k)),
        Some(e) => Cone::angle(x, -norm.vertex(e), -norm.vertex(e + 1)),
    })
}

pub fn intersect_cones(cones: &[Cone], tol: &Tol) -> Result<Region, SolverError> {
    if cones.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    let hps: Vec<HalfPlane> = cones.iter().flat_map(Cone::halfplanes).collect();
    Ok(intersect_halfplanes(&hps, tol)?)
}
