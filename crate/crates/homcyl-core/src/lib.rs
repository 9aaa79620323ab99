//! Exact algebra of homology cylinders in low degree.
//!
//! The crate computes the degree-one and degree-two Johnson homomorphisms,
//! the Birman-Craggs homomorphism, the quadratic part of the torsion, and
//! the core of the Casson invariant on clasper presentations, together with
//! the diagram spaces, free (quasi-)Lie algebras, boolean function spaces
//! and group-ring truncations these invariants live in.

pub mod diagrams;
pub mod freelie;
pub mod groupring;
pub mod invariants;
pub mod matrix;
pub mod multilinear;
pub mod presentation;
pub mod spin;
pub mod symplectic;

/// Exact rational scalar used throughout the diagrammatic modules.
pub type Q = num_rational::Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}
