//! Exact-arithmetic engine for twisted de Rham cohomology of finite
//! graded-commutative differential algebras, the filtration spectral sequence
//! with Massey-product differentials, and the characteristic-class algebra of
//! twisted K-theory.
//!
//! Everything is computed over the rationals with arbitrary precision; no
//! floating point is used anywhere.

pub mod cdga;
pub mod cdgafile;
pub mod charclass;
pub mod cohomology;
pub mod exactlin;
pub mod hankel;
pub mod mpoly;
pub mod par;
pub mod report;
pub mod twisted;

pub use exactlin::{Matrix, Scalar, Subspace};
