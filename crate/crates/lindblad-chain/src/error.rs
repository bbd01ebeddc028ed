//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violated a documented precondition (bad label, index out of
    /// range, mismatched list lengths, invalid parameter range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Requested problem size exceeds the dense-representation ceiling.
    #[error("capacity exceeded: n_sites = {n_sites} is above the dense limit of {limit} sites")]
    CapacityExceeded { n_sites: usize, limit: usize },

    /// The generator's kernel does not look one-dimensional.
    #[error("degenerate steady state: {0}")]
    DegenerateSteadyState(String),

    /// The solver finished but the residual is above tolerance.
    #[error("steady-state solve did not converge: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ConvergenceFailure { residual: f64, tolerance: f64 },

    /// Fixed-step integrator detected unacceptable trace drift.
    #[error("time step too large: per-step trace drift {drift:.3e} exceeds 1e-8")]
    StepSize { drift: f64 },

    /// A quantity that must be real (up to roundoff) was not.
    #[error("numerical consistency violation: {0}")]
    NumericalConsistency(String),

    /// Configuration document failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    #[error("linear algebra backend error: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
