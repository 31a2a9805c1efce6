//! Triangulations shipped with the crate.

/// Ideal figure-eight knot complement, two tetrahedra, four face pairs.
pub const FIGURE_EIGHT: &str = include_str!("../fixtures/figure_eight.tri");

/// A single tetrahedron with every face on the boundary.
pub const ORTHANT: &str = include_str!("../fixtures/orthant.tri");
