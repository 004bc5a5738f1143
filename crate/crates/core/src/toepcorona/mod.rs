//! Finite Toeplitz sections, the Gram feasibility test, coprime factorizations,
//! symmetric factorization and the corona solver.

pub mod coprime;
pub mod corona;
pub mod gram;
pub mod symmetric;
pub mod toeplitz;

pub use coprime::{kernel_range_check, right_coprime_from_left, CoprimeFactorization, KernelRangeReport};
pub use corona::{corona_parametrize, corona_solve, parameter_roundtrip_error, CoronaSolution, ParametrizedSolution};
pub use gram::{gram_test, GramReport};
pub use symmetric::{symmetric_factorize, SymmetricFactorization};
pub use toeplitz::{index_set, toeplitz_truncate, TruncatedToeplitz};
