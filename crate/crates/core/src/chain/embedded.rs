use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::IntensityMatrix;

/// Jump chain of an intensity matrix: `B = D·Q − D` with `D = diag(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedChain<T> {
    rates: Vec<T>,
    jump: Matrix<T>,
    zero_rate: Vec<bool>,
}

/// `d_i = −b_ii` (or 1 when `b_ii = 0`), `q_ij = b_ij / d_i` off the diagonal,
/// and `q_ii = 1` exactly for states with `b_ii = 0`, otherwise 0.
pub fn embedded_chain<T: Scalar>(b: &IntensityMatrix<T>) -> EmbeddedChain<T> {
    let n = b.n();
    let zero_rate: Vec<bool> = (0..n).map(|i| b.rate(i, i) == T::zero()).collect();
    let rates: Vec<T> = (0..n)
        .map(|i| {
            if zero_rate[i] {
                T::one()
            } else {
                b.exit_rate(i)
            }
        })
        .collect();
    let jump = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            if zero_rate[i] {
                T::one()
            } else {
                T::zero()
            }
        } else {
            b.rate(i, j) / rates[i]
        }
    });
    EmbeddedChain {
        rates,
        jump,
        zero_rate,
    }
}

impl<T: Scalar> EmbeddedChain<T> {
    /// Diagonal of `D`.
    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    /// The stochastic matrix `Q`.
    pub fn jump_matrix(&self) -> &Matrix<T> {
        &self.jump
    }

    /// `true` for states whose diagonal rate is zero, i.e. absorbing states.
    pub fn zero_rate_mask(&self) -> &[bool] {
        &self.zero_rate
    }

    pub fn is_absorbing(&self, i: usize) -> bool {
        self.zero_rate[i]
    }

    /// `D·Q − D`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.rates.len();
        Matrix::from_fn(n, n, |i, j| {
            let dq = self.rates[i] * self.jump.get(i, j);
            if i == j {
                dq - self.rates[i]
            } else {
                dq
            }
        })
    }
}
