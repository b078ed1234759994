use crate::chain::IntensityMatrix;
use crate::linalg::{lu_factor, LinalgError, Matrix};
use crate::scalar::Scalar;

use super::OracleError;

/// `z·(zI − B)⁻¹` for real `z > 0`, the scaled Laplace transform of
/// `t ↦ exp(tB)`. It tends to the final limit as `z → 0⁺`.
pub fn resolvent<T: Scalar>(b: &IntensityMatrix<T>, z: T) -> Result<Matrix<T>, OracleError> {
    if z <= T::zero() || !z.is_finite() {
        return Err(OracleError::Domain {
            what: "z",
            value: z.as_f64(),
        });
    }
    let n = b.n();
    let shifted = Matrix::from_fn(n, n, |i, j| {
        let v = -b.rate(i, j);
        if i == j {
            v + z
        } else {
            v
        }
    });
    let f = lu_factor(&shifted, T::precision(1e-12, 1e-6))?.named("zI - B");
    if f.is_singular() {
        return Err(LinalgError::Singular {
            name: f.name().to_owned(),
        }
        .into());
    }
    Ok(f.solve(&Matrix::identity(n).scale(z))?)
}

/// Estimate of `lim_{z→0⁺} z·(zI − B)⁻¹` from resolvents at `z`, `z/2` and
/// `z/4`, combined as `(8R(z/4) − 6R(z/2) + R(z)) / 3` so that the `O(z)` and
/// `O(z²)` terms cancel.
pub fn resolvent_limit<T: Scalar>(b: &IntensityMatrix<T>, z: T) -> Result<Matrix<T>, OracleError> {
    let r1 = resolvent(b, z)?;
    let r2 = resolvent(b, z / T::of(2.0))?;
    let r4 = resolvent(b, z / T::of(4.0))?;
    let three = T::of(3.0);
    let data = r4
        .as_slice()
        .iter()
        .zip(r2.as_slice())
        .zip(r1.as_slice())
        .map(|((&a, &c), &d)| (T::of(8.0) * a - T::of(6.0) * c + d) / three)
        .collect();
    Ok(Matrix::new(b.n(), b.n(), data)?)
}
