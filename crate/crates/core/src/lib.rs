//! Final limit `P = lim_{t→∞} exp(tB)` of the transition matrix of a finite
//! right intensity matrix `B`.
//!
//! [`final_limit`] computes `P` directly: classify states into recurrence
//! classes and transient states, take the stationary vector of each class, and
//! distribute every transient state over the classes by its absorption
//! probabilities. The [`oracles`] module provides three independent routes to
//! the same matrix for cross-checking.
//!
//! ```
//! use ctmc_limit::{final_limit, validate, Matrix64};
//!
//! let raw = Matrix64::from_rows(&[[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 2.0, -3.0]]).unwrap();
//! let b = validate(&raw, 1e-9).unwrap();
//! let limit = final_limit(&b).unwrap();
//! assert!((limit.p.get(2, 1) - 2.0 / 3.0).abs() < 1e-15);
//! ```
//!
//! All numerical types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precision.

pub mod chain;
pub mod limit;
pub mod linalg;
pub mod oracles;
mod scalar;

pub use chain::{
    classify_graph, classify_states, embedded_chain, reachability_closure, validate, ChainError,
    ClassStructure, EmbeddedChain, IntensityMatrix, StateClass,
};
pub use limit::{
    absorption_vector, final_limit, final_limit_with, stationary_distribution, AbsorptionTable,
    FinalLimit, InvariantBounds, InvariantViolation, LimitError, StationaryVector,
};
pub use linalg::{
    inverse, left_null_vector, lu_factor, solve, LinalgError, LuFactorization, Matrix,
};
pub use oracles::{
    adaptive_horizon, adaptive_horizon_capped, resolvent, resolvent_limit, simulate,
    transition_matrix, OracleError, SimulationResult,
};
pub use scalar::{Element, Scalar, Tolerances};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type IntensityMatrix64 = IntensityMatrix<f64>;
pub type IntensityMatrix32 = IntensityMatrix<f32>;
pub type FinalLimit64 = FinalLimit<f64>;
pub type FinalLimit32 = FinalLimit<f32>;
pub type Tolerances64 = Tolerances<f64>;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl Error {
    /// `true` for rejected input (bad shape, invalid rates); `false` for
    /// failures of the numerics on valid input.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Chain(ChainError::Linalg(e)) | Error::Linalg(e) => !matches!(
                e,
                LinalgError::Singular { .. } | LinalgError::DegenerateNullSpace
            ),
            Error::Chain(_) => true,
            Error::Limit(LimitError::UnknownClass(_) | LimitError::NoTransientStates) => true,
            Error::Limit(_) => false,
            Error::Oracle(OracleError::Domain { .. }) => true,
            Error::Oracle(_) => false,
        }
    }
}
