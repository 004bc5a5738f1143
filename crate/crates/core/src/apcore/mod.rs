//! Exact-frequency AP polynomials and matrices.

pub mod basis;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod sampling;

pub use basis::{Frequency, FrequencyBasis};
pub use matrix::ApMatrix;
pub use poly::ApPolynomial;
pub use rational::Rational;
