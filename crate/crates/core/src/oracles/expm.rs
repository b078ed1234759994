use crate::chain::IntensityMatrix;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::OracleError;

/// Uniformization rate `μt` above which the interval is halved and the
/// result squared back.
const MAX_BASE_RATE: f64 = 8.0;

/// Default upper bound on the horizon searched by [`adaptive_horizon`].
pub const DEFAULT_HORIZON_CAP: f64 = 1_048_576.0;

/// `exp(tB)` by uniformization.
///
/// With `μ = max_i(−b_ii)` and `K = (B + μI)/μ` (nonnegative, row-stochastic),
/// `exp(tB) = Σ_k e^{−μt} (μt)^k / k! · K^k`. Every term is nonnegative, so
/// there is no cancellation. The series stops once the remaining Poisson mass
/// is below `1e−14`. For `μt > 8` the interval is split into `2^s` equal
/// pieces, the truncation budget is divided among them, and the piece is
/// squared `s` times with rows renormalized after each squaring.
pub fn transition_matrix<T: Scalar>(
    b: &IntensityMatrix<T>,
    t: T,
) -> Result<Matrix<T>, OracleError> {
    if t < T::zero() || !t.is_finite() {
        return Err(OracleError::Domain {
            what: "time",
            value: t.as_f64(),
        });
    }
    let n = b.n();
    let mu = (0..n).map(|i| b.exit_rate(i)).fold(T::zero(), T::max);
    if mu == T::zero() || t == T::zero() {
        return Ok(Matrix::identity(n));
    }

    let total = (mu * t).as_f64();
    let squarings = if total > MAX_BASE_RATE {
        (total / MAX_BASE_RATE).log2().ceil() as i32
    } else {
        0
    };
    let lambda = T::of(total / 2f64.powi(squarings));
    let budget = T::precision(1e-14, 1e-7) / T::of(2f64.powi(squarings));

    let k = Matrix::from_fn(n, n, |i, j| {
        let v = b.rate(i, j) / mu;
        if i == j {
            v + T::one()
        } else {
            v
        }
    });
    let mut weight = (-lambda).exp();
    let mut power = Matrix::identity(n);
    let mut sum = power.scale(weight);
    let mut step = 0usize;
    loop {
        step += 1;
        power = power.matmul(&k).expect("square");
        weight = weight * lambda / T::from_count(step);
        for (s, &p) in sum.as_mut_slice().iter_mut().zip(power.as_slice()) {
            *s += weight * p;
        }
        // tail after term `step` is at most w_{step+1} / (1 − λ/(step+2))
        let next = T::from_count(step + 1);
        if next + T::one() > lambda {
            let ratio = lambda / (next + T::one());
            let tail = weight * lambda / next / (T::one() - ratio);
            if tail < budget {
                break;
            }
        }
    }

    for _ in 0..squarings {
        sum = sum.matmul(&sum).expect("square");
        normalize_rows(&mut sum);
    }
    Ok(sum)
}

pub(crate) fn normalize_rows<T: Scalar>(m: &mut Matrix<T>) {
    for i in 0..m.rows() {
        let row = m.row_mut(i);
        let s: T = row.iter().copied().sum();
        if s > T::zero() {
            for v in row.iter_mut() {
                *v /= s;
            }
        }
    }
}

/// Smallest `t* = 2^k ≥ 1` with `‖exp(2t*B) − exp(t*B)‖max ≤ tol`, found by
/// doubling from `t = 1`. Fails once `t*` would exceed [`DEFAULT_HORIZON_CAP`].
pub fn adaptive_horizon<T: Scalar>(b: &IntensityMatrix<T>, tol: T) -> Result<T, OracleError> {
    adaptive_horizon_capped(b, tol, T::of(DEFAULT_HORIZON_CAP))
}

pub fn adaptive_horizon_capped<T: Scalar>(
    b: &IntensityMatrix<T>,
    tol: T,
    cap: T,
) -> Result<T, OracleError> {
    let mut t = T::one();
    let mut current = transition_matrix(b, t)?;
    loop {
        let mut doubled = current.matmul(&current).expect("square");
        normalize_rows(&mut doubled);
        if doubled.max_abs_diff(&current) <= tol {
            return Ok(t);
        }
        t = t + t;
        if t > cap {
            return Err(OracleError::SlowConvergence { cap: cap.as_f64() });
        }
        current = doubled;
    }
}
