//! Exact computations in the absolute order on the finite general linear
//! group GL_n(F_q).
//!
//! GL_n(F_q) is generated by its reflections (invertible maps fixing a
//! hyperplane pointwise), and the reflection length of an element equals the
//! codimension of its fixed space. The induced prefix order is the absolute
//! order. This crate provides:
//!
//! - [`gf`]: arithmetic in F_q for q = p^e, with a deterministic primitive
//!   modulus and primitive element;
//! - [`matfq`]: dense exact linear algebra over F_q, subspaces in canonical
//!   echelon form, characteristic polynomials, and enumeration of GL_n(F_q)
//!   at desk scale;
//! - [`absorder`]: reflection lengths, the order test, constructive minimal
//!   reflection factorizations, and Hurwitz moves on factorizations;
//! - [`singer`]: Singer cycles and regular elliptic elements, the interval
//!   below them, flag f-vectors, Mobius values, and the bijection between
//!   chains and twisted direct-sum decompositions;
//! - [`qseries`]: the closed formulas those enumerations are checked
//!   against (rank sizes, flag counts, q-binomial identities, the q-difference
//!   operator), over arbitrary-precision integers and rationals;
//! - [`symoracle`]: a symmetric-group brute-force counter for additive
//!   factorizations of an n-cycle;
//! - [`checks`]: the property suites driven by the `verify` CLI subcommand.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod absorder;
pub mod checks;
pub mod error;
pub mod gf;
pub mod matfq;
pub mod qseries;
pub mod singer;
pub mod symoracle;

pub use error::{Error, Result};
