use crate::scalar::Scalar;

use super::{LinalgError, Matrix};

/// `PA = LU` with partial pivoting.
///
/// `L` (unit lower) and `U` are packed into one matrix. A factorization whose
/// pivots fall below the relative threshold is still returned, with
/// [`is_singular`](Self::is_singular) set, so that callers decide what a
/// singular matrix means for them.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    name: String,
    perm: Vec<usize>,
    factors: Matrix<T>,
    singular: bool,
    rcond: T,
}

/// Factors a square matrix. A pivot is flagged singular when its magnitude is at
/// most `pivot_tol` times the largest magnitude in its original row.
pub fn lu_factor<T: Scalar>(
    a: &Matrix<T>,
    pivot_tol: T,
) -> Result<LuFactorization<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Shape {
            op: "lu_factor",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let row_scale: Vec<T> = (0..n)
        .map(|i| a.row(i).iter().fold(T::zero(), |m, x| m.max(x.abs())))
        .collect();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut singular = false;

    for k in 0..n {
        let (p, pivot_abs) =
            (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold(
                    (k, -T::one()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if p != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(p, j));
                lu.set(p, j, tmp);
            }
            perm.swap(k, p);
        }
        if pivot_abs <= pivot_tol * row_scale[perm[k]] {
            singular = true;
        }
        if pivot_abs == T::zero() {
            continue;
        }
        let pivot = lu.get(k, k);
        for i in k + 1..n {
            let factor = lu.get(i, k) / pivot;
            lu.set(i, k, factor);
            if factor == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
        }
    }

    let (lo, hi) = (0..n)
        .map(|k| lu.get(k, k).abs())
        .fold((T::infinity(), T::zero()), |(lo, hi), d| {
            (lo.min(d), hi.max(d))
        });
    let rcond = if singular || hi == T::zero() {
        T::zero()
    } else {
        lo / hi
    };

    Ok(LuFactorization {
        name: "matrix".to_owned(),
        perm,
        factors: lu,
        singular,
        rcond,
    })
}

impl<T: Scalar> LuFactorization<T> {
    /// Names the factored matrix in singular-matrix errors (e.g. `"B_T"`).
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Ratio of the smallest to the largest pivot magnitude; zero when singular.
    /// A cheap indicator, not a true condition estimate.
    pub fn rcond_estimate(&self) -> T {
        self.rcond
    }

    /// Row `k` of `PA` is row `permutation()[k]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.factors.get(i, j),
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Less => T::zero(),
        })
    }

    pub fn upper(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i <= j {
                self.factors.get(i, j)
            } else {
                T::zero()
            }
        })
    }

    /// Solves `A X = rhs` column by column.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(LinalgError::Shape {
                op: "solve",
                left: (n, n),
                right: rhs.shape(),
            });
        }
        if self.singular {
            return Err(LinalgError::Singular {
                name: self.name.clone(),
            });
        }
        let lu = &self.factors;
        let mut x = Matrix::from_fn(n, rhs.cols(), |i, j| rhs.get(self.perm[i], j));
        for c in 0..rhs.cols() {
            for i in 1..n {
                let mut s = x.get(i, c);
                for k in 0..i {
                    s -= lu.get(i, k) * x.get(k, c);
                }
                x.set(i, c, s);
            }
            for i in (0..n).rev() {
                let mut s = x.get(i, c);
                for k in i + 1..n {
                    s -= lu.get(i, k) * x.get(k, c);
                }
                x.set(i, c, s / lu.get(i, i));
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        Ok(self.solve(&Matrix::column(rhs)?)?.as_slice().to_vec())
    }
}

/// Free-function form of [`LuFactorization::solve`].
pub fn solve<T: Scalar>(f: &LuFactorization<T>, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    f.solve(rhs)
}

pub fn inverse<T: Scalar>(a: &Matrix<T>, pivot_tol: T) -> Result<Matrix<T>, LinalgError> {
    lu_factor(a, pivot_tol)?.solve(&Matrix::identity(a.rows()))
}
