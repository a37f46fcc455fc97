//! Exact-arithmetic verification of Tverberg-type partition problems for
//! hyperplane arrangements.
//!
//! Everything is computed over arbitrary-precision rationals. The crate
//! builds the colorful counterexample families (planar and high-dimensional),
//! certifies that every colorful partition of them contains two disjoint
//! induced simplices, perturbs them into general position without breaking
//! any certificate, and checks the monochromatic partition theorem on small
//! instances, both exhaustively and through the projection/Tverberg route.

pub mod combinatorics;
pub mod constructions;
pub mod document;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod render;
pub mod scalar;
pub mod separation;
pub mod simplex;
pub mod verifier;

pub use error::{Error, Result};
pub use geometry::{ColoredArrangement, Hyperplane, Vector};
pub use scalar::Scalar;
