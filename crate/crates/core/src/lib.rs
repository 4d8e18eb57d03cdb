//! Laplace hyperfunctions at desk scale.
//!
//! Hyperfunctions with exponential-type support are represented as finite sums
//! of boundary values of holomorphic functions on orthant wedges. Their Laplace
//! transforms and inverses are computed by adaptive contour quadrature, and
//! constant-coefficient equations are solved by dividing by the symbol.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod quadrature;
pub mod chains;
pub mod hyperfun;
pub mod laplace;
pub mod opcalc;
pub mod literal;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
