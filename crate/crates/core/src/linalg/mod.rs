//! Small dense real linear algebra kernel: storage, products, LU with partial
//! pivoting, and left null vectors.

mod lu;
mod matrix;

pub use lu::{inverse, lu_factor, solve, LuFactorization};
pub use matrix::Matrix;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{name} is numerically singular")]
    Singular { name: String },
    #[error("no column replacement yields a left null vector; nullity is not one")]
    DegenerateNullSpace,
}

/// Returns a nonzero `x` with `x·A ≈ 0`, normalized so that its entries sum to one.
///
/// Solves `Aᵀ xᵀ = 0` with one equation replaced by `Σ xⱼ = 1`. The equation
/// to drop is taken from the pivot order of `Aᵀ`: the row that pivoted last
/// (the most dependent one) is tried first. A candidate is accepted once
/// `‖x·A‖∞ ≤ tol · ‖A‖∞ · ‖x‖∞`.
///
/// The caller guarantees the left null space is one-dimensional.
pub fn left_null_vector<T: Scalar>(a: &Matrix<T>, tol: T) -> Result<Vec<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Shape {
            op: "left_null_vector",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let pivot_tol = T::precision(1e-12, 1e-6);
    let at = a.transpose();
    let order: Vec<usize> = lu_factor(&at, pivot_tol)?
        .permutation()
        .iter()
        .rev()
        .copied()
        .collect();
    let scale = a.norm_inf();

    for k in order {
        let system = Matrix::from_fn(n, n, |i, j| if i == k { T::one() } else { at.get(i, j) });
        let f = lu_factor(&system, pivot_tol)?;
        if f.is_singular() {
            continue;
        }
        let mut rhs = vec![T::zero(); n];
        rhs[k] = T::one();
        let x = f.solve_vec(&rhs)?;
        let x_norm = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let resid = a
            .left_mul(&x)?
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()));
        if resid <= tol * scale * x_norm {
            return Ok(x);
        }
    }
    Err(LinalgError::DegenerateNullSpace)
}
