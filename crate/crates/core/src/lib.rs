//! Fermat–Torricelli sets in planes normed by centrally symmetric polygons.
//!
//! [`solver::ft_solve`] returns the whole optimal set of a finite point set,
//! [`uniqueness::uniqueness_verdict`] decides whether every three-point set
//! has a unique optimum, and [`lambda`] covers regular 2λ-gon norms.
//! [`oracle`] holds brute-force checks used by the tests.

pub mod doc;
pub mod geometry;
pub mod lambda;
pub mod norm;
pub mod oracle;
pub mod solver;
pub mod uniqueness;

pub use geometry::{Point2, Region, RegionKind, Tol, Vec2};
pub use norm::{Functional, PolygonalNorm};
pub use solver::{ft_solve, FtSolution};
pub use uniqueness::{uniqueness_verdict, Verdict};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Norm(#[from] norm::NormError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Uniqueness(#[from] uniqueness::UniquenessError),
    #[error(transparent)]
    Lambda(#[from] lambda::LambdaError),
    #[error(transparent)]
    Doc(#[from] doc::DocError),
}

impl Error {
    /// True when the input was fine but a self-check failed.
    pub fn is_internal(&self) -> bool {
        use lambda::LambdaError as L;
        use solver::SolverError as S;
        match self {
            Error::Geometry(_) | Error::Norm(_) => false,
            Error::Solver(e) => !matches!(e, S::EmptyInput | S::NonFinite(_) | S::Norm(_)),
            Error::Uniqueness(_) => true,
            Error::Lambda(e) => match e {
                L::LambdaTooSmall(_) | L::PreconditionViolated(_) | L::Norm(_) => false,
                L::Solver(s) => Error::Solver(s.clone()).is_internal(),
                L::LawViolated { .. } | L::Disagreement(_) | L::Uniqueness(_) => true,
            },
            Error::Doc(e) => matches!(e, doc::DocError::Lambda(L::LawViolated { .. })),
        }
    }
}
