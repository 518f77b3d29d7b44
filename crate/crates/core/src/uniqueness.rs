//! Does every three-point set have a unique Fermat–Torricelli point?
//!
//! The answer is no exactly when the unit circle carries a consistent triple
//! (three unit-circle elements with support functionals summing to zero) of
//! one of three shapes:
//!
//! 1. three edge-interior points;
//! 2. two edge-interior points and a vertex;
//! 3. one edge-interior point and a pair of opposite vertices.
//!
//! Each shape is searched exhaustively over edges and vertices. A hit is
//! turned into an explicit witness (the three elements themselves) and
//! solved, so every negative verdict comes with a checked counterexample.

use std::fmt;

use thiserror::Error;

use crate::geometry::{segment_interior_contains, Point2, Region, RegionKind, Tol};
use crate::norm::{Functional, PolygonalNorm, UnitCircleElement};
use crate::solver::{ft_solve, FtSolution, SolverError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UniquenessError {
    #[error("witness for condition {condition} failed: {reason}")]
    WitnessFailed {
        condition: Condition,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    ThreeEdges = 1,
    TwoEdgesOneVertex = 2,
    EdgeAndOppositeVertices = 3,
}

impl Condition {
    pub const ALL: [Condition; 3] = [
        Condition::ThreeEdges,
        Condition::TwoEdgesOneVertex,
        Condition::EdgeAndOppositeVertices,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(k: u8) -> Option<Self> {
        Condition::ALL.into_iter().find(|c| c.number() == k)
    }

    /// Shape of the optimal set the witness is expected to produce.
    pub fn expected_kind(self) -> RegionKind {
        match self {
            Condition::ThreeEdges => RegionKind::Polygon,
            _ => RegionKind::Segment,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistentTriple {
    pub elements: [UnitCircleElement; 3],
    pub functionals: [Functional; 3],
    pub condition: Condition,
}

impl ConsistentTriple {
    /// The witness terminals: the unit-circle points themselves.
    pub fn witness(&self, norm: &PolygonalNorm) -> [Point2; 3] {
        self.elements.map(|e| norm.element_point(e))
    }

    /// Checks the defining properties: unit functionals summing to zero,
    /// edge elements carrying their edge functional, and vertex elements
    /// carrying a functional strictly inside their dual edge.
    pub fn is_sound(&self, norm: &PolygonalNorm) -> bool {
        let tol = scaled_tol(norm);
        let sum: Functional = self.functionals.iter().copied().sum();
        if sum.vec().norm() > tol.eps() {
            return false;
        }
        self.elements
            .iter()
            .zip(&self.functionals)
            .all(|(e, f)| match *e {
                UnitCircleElement::EdgeInterior { edge, t } => {
                    t > 0.0
                        && t < 1.0
                        && (norm.dual_vertex(edge).vec() - f.vec()).norm() <= tol.eps()
                }
                UnitCircleElement::Vertex(k) => {
                    let (lo, hi) = norm.dual_edge(k);
                    segment_interior_contains(lo.vec(), hi.vec(), f.vec(), &tol)
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    UniqueForAllTriples,
    NonUnique {
        triple: ConsistentTriple,
        witness: [Point2; 3],
        expected: RegionKind,
        /// Optimal set of the witness as solved.
        region: Region,
    },
}

impl Verdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, Verdict::UniqueForAllTriples)
    }

    pub fn condition(&self) -> Option<Condition> {
        match self {
            Verdict::UniqueForAllTriples => None,
            Verdict::NonUnique { triple, .. } => Some(triple.condition),
        }
    }
}

/// Tolerance scaled by the size of the dual polygon.
fn scaled_tol(norm: &PolygonalNorm) -> Tol {
    let eps = (norm.tol().eps() * norm.dual_scale().max(1.0)).min(1e-4);
    Tol::new(eps).unwrap_or_default()
}

fn edge_mid(edge: usize) -> UnitCircleElement {
    UnitCircleElement::EdgeInterior { edge, t: 0.5 }
}

/// Three edges whose functionals sum to zero.
pub fn check_condition1(norm: &PolygonalNorm) -> Option<ConsistentTriple> {
    let tol = scaled_tol(norm);
    let duals = norm.dual_vertices();
    let m = duals.len();
    for i in 0..m {
        for j in (i + 1)..m {
            let partial = duals[i] + duals[j];
            for k in (j + 1)..m {
                if (partial + duals[k]).vec().norm() <= tol.eps() {
                    return Some(ConsistentTriple {
                        elements: [edge_mid(i), edge_mid(j), edge_mid(k)],
                        functionals: [duals[i], duals[j], duals[k]],
                        condition: Condition::ThreeEdges,
                    });
                }
            }
        }
    }
    None
}

/// Two edges whose functionals are cancelled by a functional strictly inside
/// some vertex's dual edge.
pub fn check_condition2(norm: &PolygonalNorm) -> Option<ConsistentTriple> {
    let tol = scaled_tol(norm);
    let duals = norm.dual_vertices();
    let m = duals.len();
    for i in 0..m {
        for j in (i + 1)..m {
            let psi = -(duals[i] + duals[j]);
            for k in 0..m {
                let (lo, hi) = norm.dual_edge(k);
                if segment_interior_contains(lo.vec(), hi.vec(), psi.vec(), &tol) {
                    return Some(ConsistentTriple {
                        elements: [edge_mid(i), edge_mid(j), UnitCircleElement::Vertex(k)],
                        functionals: [duals[i], duals[j], psi],
                        condition: Condition::TwoEdgesOneVertex,
                    });
                }
            }
        }
    }
    None
}

/// An edge functional cancelled by interior functionals of two opposite
/// vertices.
///
/// With dual edge `D = lo + [0,1]·u` at vertex `v`, the dual edge at `-v` is
/// `-D`, and `ψ₁ + ψ₂` ranges over `(s - r)·u`. So the edge functional must
/// be `t·u` with `0 < |t| < 1`; then `s = (1 - t)/2`, `r = (1 + t)/2`.
pub fn check_condition3(norm: &PolygonalNorm) -> Option<ConsistentTriple> {
    let tol = scaled_tol(norm);
    let duals = norm.dual_vertices();
    let m = duals.len();
    for (e, &phi) in duals.iter().enumerate() {
        for k in 0..m / 2 {
            let (lo, hi) = norm.dual_edge(k);
            let u = hi.vec() - lo.vec();
            let (pv, uu) = (phi.vec(), u.dot(u));
            if pv.cross(u).abs() > tol.eps() * pv.norm() * u.norm() {
                continue;
            }
            let t = pv.dot(u) / uu;
            let psi1 = lo.vec() + u * ((1.0 - t) / 2.0);
            let neg_psi2 = lo.vec() + u * ((1.0 + t) / 2.0);
            let inside = |q| segment_interior_contains(lo.vec(), hi.vec(), q, &tol);
            if inside(psi1) && inside(neg_psi2) {
                return Some(ConsistentTriple {
                    elements: [
                        edge_mid(e),
                        UnitCircleElement::Vertex(k),
                        UnitCircleElement::Vertex(k + m / 2),
                    ],
                    functionals: [
                        phi,
                        Functional::from_vec(psi1),
                        Functional::from_vec(-neg_psi2),
                    ],
                    condition: Condition::EdgeAndOppositeVertices,
                });
            }
        }
    }
    None
}

pub fn check_condition(norm: &PolygonalNorm, c: Condition) -> Option<ConsistentTriple> {
    match c {
        Condition::ThreeEdges => check_condition1(norm),
        Condition::TwoEdgesOneVertex => check_condition2(norm),
        Condition::EdgeAndOppositeVertices => check_condition3(norm),
    }
}

/// Solves the witness of a triple and checks the shape it must have.
pub fn solve_witness(
    norm: &PolygonalNorm,
    triple: &ConsistentTriple,
) -> Result<FtSolution, UniquenessError> {
    let fail = |reason: String| UniquenessError::WitnessFailed {
        condition: triple.condition,
        reason,
    };
    let witness = triple.witness(norm);
    let sol = ft_solve(norm, &witness).map_err(|e: SolverError| fail(e.to_string()))?;
    let kind = sol.kind();
    let ok = match triple.condition {
        Condition::TwoEdgesOneVertex => matches!(kind, RegionKind::Segment | RegionKind::Polygon),
        c => kind == c.expected_kind(),
    };
    if !ok {
        return Err(fail(format!(
            "expected a {} optimal set, solver returned a {kind}",
            triple.condition.expected_kind()
        )));
    }
    Ok(sol)
}

pub fn uniqueness_verdict(norm: &PolygonalNorm) -> Result<Verdict, UniquenessError> {
    for c in Condition::ALL {
        if let Some(triple) = check_condition(norm, c) {
            let sol = solve_witness(norm, &triple)?;
            return Ok(Verdict::NonUnique {
                witness: triple.witness(norm),
                expected: c.expected_kind(),
                region: sol.region,
                triple,
            });
        }
    }
    Ok(Verdict::UniqueForAllTriples)
}
