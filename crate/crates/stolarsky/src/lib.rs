//! Discrepancy and distance geometry on compact rank-one symmetric spaces.
//!
//! The library implements the Stolarsky invariance principle
//!
//! ```text
//! gamma(Q) * lambda[xi, D_N] + tau[D_N] = <tau> * N^2
//! ```
//!
//! relating the ball quadratic discrepancy `lambda` of an `N`-point set to its
//! sum of pairwise chordal distances `tau`, on all spaces `Q(d, d0)`: the
//! spheres `S^d` and the projective spaces `RP^n`, `CP^n`, `HP^n`, and `OP^2`.
//!
//! The main pieces:
//!
//! * [`algebra`] — arithmetic in the four normed division algebras
//!   (real, complex, quaternion, octonion) and in the Hermitian matrix spaces
//!   hosting the projector model of projective points;
//! * [`spaces`] — the space registry: metrics, ball volumes, exact constants,
//!   canonical geodesics, and uniform sampling;
//! * [`jacobi`] — Jacobi polynomial machinery and the zonal series expansions
//!   of both metrics;
//! * [`invariance`] — discrepancy functionals, the invariance-principle
//!   residual, and seeded Monte Carlo oracles for the defining integrals;
//! * [`optimize`] — maximization of pairwise distance sums and empirical
//!   scaling experiments;
//! * [`csv`] — the point-set interchange format.
//!
//! All computations are in `f64`. Every randomized routine takes an explicit
//! seed and is reproducible; parallel execution does not change results.

pub mod algebra;
pub mod csv;
pub mod invariance;
pub mod jacobi;
pub mod optimize;
pub mod quad;
pub mod spaces;
pub mod special;

mod stream;

pub use algebra::{AlgebraElement, AlgebraTag, HermitianMatrix, ProjectorCheck};
pub use invariance::{McEstimate, PointSet, RadialMeasure};
pub use jacobi::{ChordalSeries, JacobiParams, SdSeries, SeriesTruncation};
pub use optimize::{OptimizeConfig, ScalingReport};
pub use spaces::{Family, Point, SpaceId};

use thiserror::Error;

/// Default tolerance for projector-point validation (`||P^2 - P||`, `|Tr P - 1|`).
pub const EPS_POINT: f64 = 1e-10;
/// Default tolerance for the octonion associator of a representative triple.
pub const EPS_ASSOC: f64 = 1e-10;
/// Tolerance for unit-norm checks on representative vectors.
pub const EPS_UNIT: f64 = 1e-12;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra tag mismatch: {left:?} vs {right:?}")]
    TagMismatch { left: AlgebraTag, right: AlgebraTag },

    #[error("matrix size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: SpaceId, right: SpaceId },

    #[error("vector norm {norm} differs from 1 by more than {tol:e}")]
    NotUnit { norm: f64, tol: f64 },

    #[error("octonion triple is not associative: associator norm {residual:e} exceeds {tol:e}")]
    NotAssociative { residual: f64, tol: f64 },

    #[error("not a valid point: {0}")]
    InvalidPoint(String),

    #[error("radius {radius} outside [0, pi]")]
    RadiusOutOfRange { radius: f64 },

    #[error("{space} does not support {operation}")]
    Unsupported {
        space: SpaceId,
        operation: &'static str,
    },

    #[error("unrecognized space token `{0}` (expected S<d>, RP<n>, CP<n>, HP<n>, or OP2)")]
    SpaceParse(String),

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed point-set CSV: {0}")]
    Csv(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
