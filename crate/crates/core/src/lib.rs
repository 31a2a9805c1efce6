//! Exact enumeration of vertex and fundamental normal surfaces.
//!
//! A triangulated 3-manifold with `n` tetrahedra defines the solution cone
//! `{x in R^{7n} : Ax = 0, x >= 0}` of its matching equations. Normal
//! surfaces are the integer points of this cone that satisfy the
//! quadrilateral constraints. This crate computes
//!
//! * the vertex normal surfaces: admissible extremal rays ([`vertex_enum`]);
//! * the fundamental normal surfaces: admissible Hilbert basis elements,
//!   either by decomposing the admissible region into maximal admissible
//!   faces and running a primal Hilbert basis computation on each
//!   ([`faces`], [`primal`]), or by a quadrilateral-filtered dual completion
//!   procedure over the matching equations ([`dual`]).
//!
//! The algorithms are generic over an exact integer [`Scalar`]; the aliases
//! below fix it to [`BigInt`], which is what production runs use.

pub mod census;
pub mod cone;
pub mod dual;
pub mod faces;
pub mod fixtures;
pub mod linalg;
pub mod num;
pub mod oracle;
pub mod primal;
pub mod triangulation;
pub mod vertex_enum;

use std::time::{Duration, Instant};

pub use num_bigint::BigInt;
use thiserror::Error;

pub use cone::{is_admissible_vector, is_admissible_zeroset, zero_set, Admissibility, ZeroSet};
pub use num::Scalar;
pub use triangulation::{matching_matrix, parse_triangulation, MatchingMatrix, Triangulation, TriangulationError};

/// A point of `Z^{7n}` in normal coordinates.
pub type NormalVector = cone::IntVector<BigInt>;
/// A deduplicated, lexicographically ordered set of normal vectors.
pub type BasisSet = cone::BasisSet<BigInt>;
/// Admissible extremal rays with their zero sets.
pub type RaySet = vertex_enum::RaySet<BigInt>;
/// A cone with linearly independent generators.
pub type SimplicialCone = primal::SimplicialCone<BigInt>;
/// Dense constraint matrix over arbitrary-precision integers.
pub type DenseMatrix = cone::DenseMatrix<BigInt>;

/// A cooperative time limit, polled between units of work.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(limit: Duration) -> Self {
        Deadline(Some(Instant::now() + limit))
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn check(&self) -> Result<(), TimedOut> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(TimedOut),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("time limit reached")]
pub struct TimedOut;

/// Satisfies the matching equations exactly.
pub fn satisfies_matching(a: &MatchingMatrix, x: &NormalVector) -> Result<bool, cone::DimensionMismatch> {
    if x.len() != a.cols() {
        return Err(cone::DimensionMismatch { expected: a.cols(), found: x.len() });
    }
    Ok(a.mul_vec(x).iter().all(|v| v == &BigInt::from(0)))
}

/// Vertex normal surfaces of a triangulation.
pub fn vertex_surfaces(tri: &Triangulation) -> RaySet {
    let a = matching_matrix(tri).to_dense();
    vertex_enum::enumerate_admissible_rays(&a, &Admissibility::quadrilateral(tri.size()))
}

/// Fundamental normal surfaces of a triangulation by the primal method.
pub fn fundamental_primal(tri: &Triangulation) -> BasisSet {
    let a = matching_matrix(tri).to_dense();
    primal::fundamental_primal_cone(&a, &Admissibility::quadrilateral(tri.size()), &Deadline::none())
        .expect("no deadline set")
        .basis
}

/// Fundamental normal surfaces of a triangulation by the dual method.
pub fn fundamental_dual(tri: &Triangulation) -> BasisSet {
    let a = matching_matrix(tri).to_dense();
    dual::fundamental_dual_cone(&a, &Admissibility::quadrilateral(tri.size()), &Deadline::none())
        .expect("no deadline set")
        .basis
}
