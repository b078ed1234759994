//! Intensity matrices, their embedded jump chain, and the split of the state
//! space into recurrence classes and transient states.

mod classes;
mod embedded;

pub use classes::{
    classify_graph, classify_states, reachability_closure, ClassStructure, StateClass,
};
pub use embedded::{embedded_chain, EmbeddedChain};

use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("intensity matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("negative rate {value} at ({row}, {col})")]
    InvalidRate { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, not zero")]
    InvalidRowSum { row: usize, sum: f64 },
    #[error("{found} labels given for {expected} states")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A validated right intensity matrix `B`: nonnegative off-diagonal rates and
/// a diagonal equal to the negated off-diagonal row sum.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMatrix<T> {
    b: Matrix<T>,
    labels: Option<Vec<String>>,
}

/// Checks that `raw` is a right intensity matrix and projects its diagonal.
///
/// Off-diagonal entries in `[-tol, 0)` are set to zero. A row is rejected when
/// `|Σⱼ raw_ij| > tol · n · ‖raw‖max`. The returned diagonal is recomputed as
/// `b_ii = −Σ_{j≠i} b_ij`.
pub fn validate<T: Scalar>(raw: &Matrix<T>, tol: T) -> Result<IntensityMatrix<T>, ChainError> {
    let (rows, cols) = raw.shape();
    if rows != cols {
        return Err(ChainError::NotSquare { rows, cols });
    }
    let n = rows;
    let row_tol = tol * T::from_count(n) * raw.max_abs();
    let mut b = raw.clone();
    for i in 0..n {
        let sum: T = raw.row(i).iter().copied().sum();
        for j in (0..n).filter(|&j| j != i) {
            let v = raw.get(i, j);
            if v < -tol {
                return Err(ChainError::InvalidRate {
                    row: i,
                    col: j,
                    value: v.as_f64(),
                });
            }
            if v < T::zero() {
                b.set(i, j, T::zero());
            }
        }
        if sum.abs() > row_tol {
            return Err(ChainError::InvalidRowSum {
                row: i,
                sum: sum.as_f64(),
            });
        }
        let off: T = (0..n).filter(|&j| j != i).map(|j| b.get(i, j)).sum();
        b.set(i, i, -off);
    }
    Ok(IntensityMatrix { b, labels: None })
}

impl<T: Scalar> IntensityMatrix<T> {
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ChainError> {
        if labels.len() != self.n() {
            return Err(ChainError::LabelCount {
                expected: self.n(),
                found: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(ChainError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of state `i`, or its index when unlabeled.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn rate(&self, i: usize, j: usize) -> T {
        self.b.get(i, j)
    }

    /// Total exit rate `−b_ii`.
    pub fn exit_rate(&self, i: usize) -> T {
        -self.b.get(i, i)
    }

    /// Directed graph with an edge `i → j` iff `i ≠ j` and `b_ij > 0`.
    pub fn adjacency(&self) -> Matrix<bool> {
        Matrix::from_fn(self.n(), self.n(), |i, j| {
            i != j && self.b.get(i, j) > T::zero()
        })
    }
}
