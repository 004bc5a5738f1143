pub mod apcore;
pub mod error;
pub mod factorization;
pub mod geometry;
pub mod json;
pub mod laurent;
pub mod options;
pub mod toepcorona;

pub use apcore::{ApMatrix, ApPolynomial, Frequency, FrequencyBasis, Rational};
pub use error::{ApwError, ErrorClass, Result};
pub use factorization::{ApFactorization, FactorizationReport, FactorizationStatus};
pub use geometry::{Halfspace, MaskKind, SpectralMask};
pub use options::SolverOptions;
pub use toepcorona::CoronaSolution;
