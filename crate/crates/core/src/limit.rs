//! The final limit `P = lim_{t→∞} exp(tB)` computed directly from the class
//! structure of `B`.
//!
//! Every recurrence class `J` contributes its stationary vector `p_J` as the
//! common row of `P_J`. A transient state `i` ends up in class `J` with
//! probability `f_{i,J}`, the solution of `B_T f = −B_{T,J} 𝟙`, and its row of
//! `P` is `Σ_J f_{i,J} p_J`. States are never permuted; all block operations
//! gather and scatter by index set.

use thiserror::Error;

use crate::chain::{classify_states, ClassStructure, IntensityMatrix};
use crate::linalg::{left_null_vector, lu_factor, LinalgError, LuFactorization, Matrix};
use crate::scalar::{Scalar, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("no recurrence class with id {0}")]
    UnknownClass(usize),
    #[error("there are no transient states")]
    NoTransientStates,
    #[error(
        "stationary vector of class {class_id} has non-positive entry {value} at state {state}"
    )]
    NumericalDegeneracy {
        class_id: usize,
        state: usize,
        value: f64,
    },
    #[error("probability {value} for state {state} is negative beyond round-off")]
    NegativeProbability { state: usize, value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Stationary distribution `p_J` of one recurrence class, embedded into the
/// full state space (zero off `J`).
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryVector<T> {
    pub class_id: usize,
    pub p: Vec<T>,
}

/// Entry probabilities `f_{i,J}` from transient states into recurrence classes.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable<T> {
    transient: Vec<usize>,
    // |T| x k, absent when T is empty
    f: Option<Matrix<T>>,
    classes: usize,
}

impl<T: Scalar> AbsorptionTable<T> {
    pub fn transient(&self) -> &[usize] {
        &self.transient
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.transient.is_empty()
    }

    /// `f_{i,J}` for transient state `i` and class `J`; `None` if `i` is not transient.
    pub fn get(&self, state: usize, class_id: usize) -> Option<T> {
        let row = self.transient.iter().position(|&t| t == state)?;
        self.f.as_ref().map(|f| f.get(row, class_id))
    }

    /// Column of `f_{·,J}` over the transient states, in ascending state order.
    pub fn column(&self, class_id: usize) -> Vec<T> {
        match &self.f {
            Some(f) => (0..f.rows()).map(|r| f.get(r, class_id)).collect(),
            None => Vec::new(),
        }
    }

    /// `Σ_J f_{i,J}` for each transient state.
    pub fn row_totals(&self) -> Vec<T> {
        self.f.as_ref().map(Matrix::row_sums).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinalLimit<T> {
    pub p: Matrix<T>,
    pub structure: ClassStructure,
    pub stationary: Vec<StationaryVector<T>>,
    pub absorption: AbsorptionTable<T>,
}

/// A broken invariant found by [`FinalLimit::check_invariants`].
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{invariant} violated: deviation {deviation:e} exceeds {bound:e}")]
pub struct InvariantViolation {
    pub invariant: &'static str,
    pub deviation: f64,
    pub bound: f64,
}

/// Bounds used by [`FinalLimit::check_invariants`].
#[derive(Debug, Clone, Copy)]
pub struct InvariantBounds<T> {
    pub row_sum: T,
    pub idempotence: T,
    /// Relative to `‖B‖max`.
    pub annihilation: T,
    pub absorption_total: T,
}

impl<T: Scalar> Default for InvariantBounds<T> {
    fn default() -> Self {
        Self {
            row_sum: T::precision(1e-12, 1e-5),
            idempotence: T::precision(1e-9, 1e-4),
            annihilation: T::precision(1e-9, 1e-4),
            absorption_total: T::precision(1e-9, 1e-4),
        }
    }
}

fn clamp_probability<T: Scalar>(v: T, state: usize, clamp: T) -> Result<T, LimitError> {
    if v >= T::zero() {
        Ok(v)
    } else if v >= -clamp {
        Ok(T::zero())
    } else {
        Err(LimitError::NegativeProbability {
            state,
            value: v.as_f64(),
        })
    }
}

/// Stationary vector of recurrence class `class_id`: the left null vector of
/// `B_J`, scaled to sum to one and padded with zeros.
pub fn stationary_distribution<T: Scalar>(
    b: &IntensityMatrix<T>,
    s: &ClassStructure,
    class_id: usize,
    tol: &Tolerances<T>,
) -> Result<StationaryVector<T>, LimitError> {
    let class = s
        .class(class_id)
        .ok_or(LimitError::UnknownClass(class_id))?;
    let block = b.matrix().select(class, class);
    let x = left_null_vector(&block, tol.null_space)?;
    let lambda: T = x.iter().copied().sum();
    let mut p = vec![T::zero(); b.n()];
    for (&j, &xj) in class.iter().zip(&x) {
        let v = xj / lambda;
        if v.is_nan() || v <= T::zero() {
            return Err(LimitError::NumericalDegeneracy {
                class_id,
                state: j,
                value: v.as_f64(),
            });
        }
        p[j] = v;
    }
    Ok(StationaryVector { class_id, p })
}

fn transient_factorization<T: Scalar>(
    b: &IntensityMatrix<T>,
    s: &ClassStructure,
    tol: &Tolerances<T>,
) -> Result<LuFactorization<T>, LimitError> {
    let t = s.transient();
    if t.is_empty() {
        return Err(LimitError::NoTransientStates);
    }
    let f = lu_factor(&b.matrix().select(t, t), tol.pivot)?.named("B_T");
    if f.is_singular() {
        return Err(LinalgError::Singular {
            name: f.name().to_owned(),
        }
        .into());
    }
    Ok(f)
}

fn absorption_with<T: Scalar>(
    b: &IntensityMatrix<T>,
    s: &ClassStructure,
    class_id: usize,
    bt: &LuFactorization<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<T>, LimitError> {
    let class = s
        .class(class_id)
        .ok_or(LimitError::UnknownClass(class_id))?;
    let t = s.transient();
    // −B_{T,J}·𝟙
    let rhs: Vec<T> = t
        .iter()
        .map(|&i| -class.iter().map(|&j| b.rate(i, j)).sum::<T>())
        .collect();
    let f = bt.solve_vec(&rhs)?;
    f.into_iter()
        .zip(t)
        .map(|(v, &i)| clamp_probability(v, i, tol.clamp))
        .collect()
}

/// `(f_{i,J})_{i∈T}` for one class, solving `B_T f = −B_{T,J} 𝟙` by LU.
pub fn absorption_vector<T: Scalar>(
    b: &IntensityMatrix<T>,
    s: &ClassStructure,
    class_id: usize,
    tol: &Tolerances<T>,
) -> Result<Vec<T>, LimitError> {
    s.class(class_id)
        .ok_or(LimitError::UnknownClass(class_id))?;
    let bt = transient_factorization(b, s, tol)?;
    absorption_with(b, s, class_id, &bt, tol)
}

/// [`final_limit_with`] using default tolerances.
pub fn final_limit<T: Scalar>(b: &IntensityMatrix<T>) -> Result<FinalLimit<T>, LimitError> {
    final_limit_with(b, &Tolerances::default())
}

pub fn final_limit_with<T: Scalar>(
    b: &IntensityMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<FinalLimit<T>, LimitError> {
    let n = b.n();
    let s = classify_states(b);
    let mut p = Matrix::zeros(n, n);

    let stationary = (0..s.num_classes())
        .map(|id| stationary_distribution(b, &s, id, tol))
        .collect::<Result<Vec<_>, _>>()?;
    for (class, pj) in s.classes().iter().zip(&stationary) {
        for &i in class {
            p.row_mut(i).copy_from_slice(&pj.p);
        }
    }

    let t = s.transient();
    let absorption = if t.is_empty() {
        AbsorptionTable {
            transient: Vec::new(),
            f: None,
            classes: s.num_classes(),
        }
    } else {
        let bt = transient_factorization(b, &s, tol)?;
        let mut f = Matrix::zeros(t.len(), s.num_classes());
        for (id, class) in s.classes().iter().enumerate() {
            let col = absorption_with(b, &s, id, &bt, tol)?;
            for (row, (&i, &fij)) in t.iter().zip(&col).enumerate() {
                f.set(row, id, fij);
                // p_ij = f_{i,J} p_jj
                for &j in class {
                    p.set(i, j, fij * p.get(j, j));
                }
            }
        }
        AbsorptionTable {
            transient: t.to_vec(),
            f: Some(f),
            classes: s.num_classes(),
        }
    };

    Ok(FinalLimit {
        p,
        structure: s,
        stationary,
        absorption,
    })
}

impl<T: Scalar> FinalLimit<T> {
    pub fn n(&self) -> usize {
        self.p.rows()
    }

    /// `P_{T,R} = −B_T⁻¹ B_{T,R} P_R` computed as one block solve. Returns a
    /// `|T| × |R|` matrix (rows and columns in ascending state order), or
    /// `None` when there are no transient states.
    pub fn transient_block(&self, b: &IntensityMatrix<T>) -> Result<Option<Matrix<T>>, LimitError> {
        let t = self.structure.transient();
        if t.is_empty() {
            return Ok(None);
        }
        let r = self.structure.recurrent();
        let bt = transient_factorization(b, &self.structure, &Tolerances::default())?;
        let rhs = b
            .matrix()
            .select(t, &r)
            .matmul(&self.p.select(&r, &r))?
            .scale(-T::one());
        Ok(Some(bt.solve(&rhs)?))
    }

    /// Checks stochasticity, vanishing transient columns, idempotence
    /// `P² = P`, annihilation `P·B = B·P = O`, equal rows within each class,
    /// positivity on each class block, and total absorption.
    pub fn check_invariants(
        &self,
        b: &IntensityMatrix<T>,
        bounds: &InvariantBounds<T>,
    ) -> Result<(), InvariantViolation> {
        let fail = |invariant, deviation: T, bound: T| {
            if deviation > bound || deviation.is_nan() {
                Err(InvariantViolation {
                    invariant,
                    deviation: deviation.as_f64(),
                    bound: bound.as_f64(),
                })
            } else {
                Ok(())
            }
        };
        let zero = T::zero();
        let p = &self.p;

        let row_dev = p
            .row_sums()
            .into_iter()
            .fold(zero, |m, s| m.max((s - T::one()).abs()));
        fail("row sums", row_dev, bounds.row_sum)?;
        let neg = p.as_slice().iter().fold(zero, |m, &v| m.max(-v));
        fail("nonnegativity", neg, zero)?;

        let transient_col = self
            .structure
            .transient()
            .iter()
            .flat_map(|&j| (0..self.n()).map(move |i| (i, j)))
            .fold(zero, |m, (i, j)| m.max(p.get(i, j).abs()));
        fail("zero transient columns", transient_col, zero)?;

        let pp = p.matmul(p).expect("square");
        fail("idempotence", pp.max_abs_diff(p), bounds.idempotence)?;

        let scale = bounds.annihilation * b.matrix().max_abs();
        fail(
            "P·B = O",
            p.matmul(b.matrix()).expect("square").max_abs(),
            scale,
        )?;
        fail(
            "B·P = O",
            b.matrix().matmul(p).expect("square").max_abs(),
            scale,
        )?;

        for class in self.structure.classes() {
            let first = p.row(class[0]);
            let spread = class
                .iter()
                .flat_map(|&i| p.row(i).iter().zip(first).map(|(&a, &c)| (a - c).abs()))
                .fold(zero, T::max);
            fail("equal rows within a class", spread, zero)?;
            let min = class
                .iter()
                .flat_map(|&i| class.iter().map(move |&j| (i, j)))
                .fold(T::infinity(), |m, (i, j)| m.min(p.get(i, j)));
            if min.is_nan() || min <= zero {
                return Err(InvariantViolation {
                    invariant: "positive class block",
                    deviation: min.as_f64(),
                    bound: 0.0,
                });
            }
        }

        let absorb_dev = self
            .absorption
            .row_totals()
            .into_iter()
            .fold(zero, |m, s| m.max((s - T::one()).abs()));
        fail("total absorption", absorb_dev, bounds.absorption_total)
    }
}
