//! Infinite products `M_i ⋯ M_1` over a finite ensemble: convergence traces,
//! λ^i rate checks, limits and empirical seminorm equivalence constants.
//!
//! Every ensemble member satisfies `M𝟏 = 𝟏`, so states and products are
//! carried as a consensus part plus a deviation (`x = r𝟏 + e`,
//! `Π = 𝟏c + D`). Multiplying only touches the deviation, which keeps its
//! relative accuracy even after it has decayed far below the consensus part.

mod equivalence;
mod limit;
mod trace;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::matcore::{equal_row_sum, EqualRowSumMatrix, Matrix, MatrixError};
use crate::seminorms::{ergodicity_coefficient, Seminorm, SeminormError};
use crate::Scalar;

pub use equivalence::{equivalence_ratios, estimate_equivalence, EquivalenceEstimate};
pub use limit::{product_limit, product_limit_with, ProductLimit, DEFAULT_LIMIT_TOL, DEFAULT_STEP_CAP};
pub use trace::{certify_rate, run_product, RateReport, SimulationTrace, TraceStep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProductsError {
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("ensemble member {index} is {rows}x{cols}, expected {expected}x{expected}")]
    Dimension {
        index: usize,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("ensemble member {index}: {source}")]
    Member { index: usize, source: MatrixError },
    #[error("ensemble member {index} has row sum {sigma}; products require row sums equal to 1")]
    RowSumNotOne { index: usize, sigma: f64 },
    #[error("schedule refers to member {index} but the ensemble has {len}")]
    ScheduleIndex { index: usize, len: usize },
    #[error("explicit schedule is empty")]
    EmptySchedule,
    #[error("initial vector has length {actual}, expected {expected}")]
    InitialLength { expected: usize, actual: usize },
    #[error("initial vector is zero")]
    ZeroInitial,
    #[error("steps must be at least 1")]
    NoSteps,
    #[error("values overflowed at step {step}")]
    Overflow { step: usize },
    #[error("rate certification refused: lambda = {lambda} is not below 1")]
    Refused { lambda: f64 },
    #[error("step cap {steps} reached with metric seminorm {achieved}")]
    StepCap { steps: usize, achieved: f64 },
    #[error("at least 2 samples are required")]
    TooFewSamples,
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Finite set of square matrices with unit row sums, together with the
/// largest value `lambda` of the chosen seminorm over the set.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEnsemble<T: Scalar> {
    matrices: Vec<Matrix<T>>,
    seminorm: Seminorm,
    values: Vec<T>,
    lambda: T,
}

impl<T: Scalar> MatrixEnsemble<T> {
    pub fn new(matrices: Vec<Matrix<T>>, seminorm: Seminorm) -> Result<Self, ProductsError> {
        let n = matrices.first().ok_or(ProductsError::EmptyEnsemble)?.rows();
        let tol = T::lit(T::VALIDATION_TOL);
        for (index, m) in matrices.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(ProductsError::Dimension {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected: n,
                });
            }
            let sigma = equal_row_sum(m, tol).ok_or_else(|| ProductsError::Member {
                index,
                source: EqualRowSumMatrix::new(m.clone(), tol)
                    .expect_err("row sums were found unequal"),
            })?;
            if (sigma - T::one()).abs() > tol {
                return Err(ProductsError::RowSumNotOne {
                    index,
                    sigma: sigma.as_f64(),
                });
            }
        }
        let values = matrices
            .iter()
            .map(|m| evaluate_deviation(seminorm, m))
            .collect::<Result<Vec<_>, _>>()?;
        let lambda = values.iter().copied().fold(T::zero(), T::max);
        Ok(Self {
            matrices,
            seminorm,
            values,
            lambda,
        })
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn seminorm(&self) -> Seminorm {
        self.seminorm
    }

    /// Seminorm of each member, in order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

/// Order in which ensemble members are applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Cyclic,
    /// Uniform independent choices from a ChaCha8 stream seeded with `seed`.
    Random { seed: u64 },
    /// Member indices, repeated cyclically when shorter than the run.
    Explicit { indices: Vec<usize> },
}

impl Schedule {
    pub(crate) fn sequence(&self, len: usize) -> Result<ScheduleIter, ProductsError> {
        match self {
            Schedule::Explicit { indices } => {
                if indices.is_empty() {
                    return Err(ProductsError::EmptySchedule);
                }
                if let Some(&index) = indices.iter().find(|&&i| i >= len) {
                    return Err(ProductsError::ScheduleIndex { index, len });
                }
            }
            Schedule::Cyclic | Schedule::Random { .. } => {}
        }
        Ok(ScheduleIter {
            schedule: self.clone(),
            len,
            pos: 0,
            rng: match self {
                Schedule::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
                _ => None,
            },
        })
    }
}

pub(crate) struct ScheduleIter {
    schedule: Schedule,
    len: usize,
    pos: usize,
    rng: Option<ChaCha8Rng>,
}

impl Iterator for ScheduleIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let k = match &self.schedule {
            Schedule::Cyclic => self.pos % self.len,
            Schedule::Explicit { indices } => indices[self.pos % indices.len()],
            Schedule::Random { .. } => self.rng.as_mut()?.random_range(0..self.len),
        };
        self.pos += 1;
        Some(k)
    }
}

/// Evaluates a shift-invariant seminorm on a deviation matrix `D` whose row
/// sums are equal up to rounding.
pub(crate) fn evaluate_deviation<T: Scalar>(
    seminorm: Seminorm,
    d: &Matrix<T>,
) -> Result<T, SeminormError> {
    match seminorm {
        Seminorm::Induced(crate::seminorms::PNorm::Inf) => Ok(ergodicity_coefficient(d).value),
        Seminorm::Induced(_) => {
            let tol = T::lit(T::FORMULA_TOL) * (T::one() + d.max_abs());
            let e = EqualRowSumMatrix::new(d.clone(), tol)?;
            seminorm.evaluate_checked(&e).map(|v| v.value)
        }
        _ => seminorm.evaluate(d).map(|v| v.value),
    }
}

/// `M D` re-centered: returns the column shift moved into the consensus part
/// and the new deviation.
pub(crate) fn advance_deviation<T: Scalar>(
    m: &Matrix<T>,
    d: &Matrix<T>,
) -> Result<(Vec<T>, Matrix<T>), MatrixError> {
    let md = m.matmul(d)?;
    let shift = md.column_means();
    let centered = Matrix::from_fn(md.rows(), md.cols(), |i, j| md[(i, j)] - shift[j]);
    Ok((shift, centered))
}
