//! Error types shared by the whole crate.

use num_complex::Complex64 as C64;

/// Errors produced by construction, classification, and the solvers.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar input fell outside its allowed domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A vector or matrix had the wrong shape for the operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The requested quantity is undefined for this configuration.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// A closed form valid in one symmetry phase was requested in the other.
    #[error("phase mismatch: {0}")]
    PhaseMismatch(String),

    /// Parameters fall inside the guard band around the coupling where the
    /// eigensystem coalesces; closed forms are refused there.
    #[error(
        "parameters inside the exceptional-point guard band \
         (|2J^2 - gamma^2| <= {band:.3e}); use the rk4 or matrix-exponential path"
    )]
    AtExceptionalPoint { band: f64 },

    /// Hyperbolic arguments past the overflow cap.
    #[error("hyperbolic overflow: delta*t = {0:.3e} exceeds 700; reduce t or evaluate in the log domain")]
    Overflow(f64),

    /// An iterative solver ran out of iterations; carries the best iterate.
    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize, best: Vec<C64> },

    /// A propagated state norm passed the divergence limit.
    #[error("state norm diverged: {0:.3e}")]
    Divergence(f64),

    /// Two trajectories were compared on different time grids.
    #[error("time grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
