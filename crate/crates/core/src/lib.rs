//! Fast factorization and inversion for polynomial-Vandermonde-like
//! matrices with low displacement rank.
//!
//! A matrix `R` in this class is defined implicitly by a recurrence
//! system of polynomials (quasiseparable, semiseparable, or well-free
//! three-term), a set of nonzero evaluation nodes, and a rank-`alpha`
//! generator pair `(G, B)` satisfying the displacement equation
//!
//! ```text
//! diag(1/x) * R - R * W = G * B
//! ```
//!
//! where `W` is the (strictly upper triangular) recurrence shift matrix
//! of the system. The crate provides:
//!
//! - [`fast_gepp::gepp`]: partial-pivoting LU of `R` in O(alpha n^2)
//!   operating on the generators, never forming `R`;
//! - [`inversion_engine::invert`]: the full inverse in O(alpha n^2) via
//!   a reversed ("hat") recurrence system and a Horner-style polynomial
//!   sum evaluation;
//! - dense reference implementations in [`oracle`] for testing;
//! - explicit polynomial machinery: recurrence evaluation, Vandermonde
//!   assembly, monomial coefficient (basis) matrices, and classical
//!   presets (monomial, Chebyshev, Szego) in [`poly_systems`] and
//!   [`basis_transform`].
//!
//! Entry point: build a [`PolySystem`] and [`NodeSet`], wrap them with
//! generators into a [`DisplacementInstance`], then factor or invert.

pub mod basis_transform;
pub mod dense;
pub mod displacement;
pub mod error;
pub mod fast_gepp;
pub mod horner;
pub mod instance_gen;
pub mod inversion_engine;
pub mod oracle;
pub mod poly_systems;
pub mod recurrence_structure;

pub use dense::DenseMatrix;
pub use displacement::DisplacementInstance;
pub use error::{Error, Result};
pub use poly_systems::{NodeSet, PolyFamily, PolySystem};
