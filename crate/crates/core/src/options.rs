use serde::{Deserialize, Serialize};

/// Numerical knobs shared by the factorization and corona routines.
///
/// Defaults are part of the output contract: every report echoes the
/// options it was produced with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Finite-section cutoff (l1 norm of lattice coordinates).
    pub cutoff: usize,
    /// l1 residual allowed when truncating one-sided inverse series.
    pub tail_tol: f64,
    /// Number of sample points used for sup-norm and determinant checks.
    pub grid_density: usize,
    /// Offset into the low-discrepancy sampling sequence.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cutoff: 32,
            tail_tol: 1e-12,
            grid_density: 4096,
            seed: 0,
        }
    }
}
