//! Independent approximations of the final limit: the matrix exponential by
//! uniformization, the scaled resolvent, and Monte Carlo simulation of the
//! jump process.

mod expm;
mod resolvent;
mod simulate;

pub use expm::{adaptive_horizon, adaptive_horizon_capped, transition_matrix, DEFAULT_HORIZON_CAP};
pub use resolvent::{resolvent, resolvent_limit};
pub use simulate::{simulate, SimulationResult};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} = {value} is out of range")]
    Domain { what: &'static str, value: f64 },
    #[error("exp(tB) did not settle before t = {cap}")]
    SlowConvergence { cap: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
