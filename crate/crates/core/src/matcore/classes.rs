use super::{Matrix, MatrixError};
use crate::Scalar;

pub fn row_sums<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    m.row_iter().map(|r| r.iter().copied().sum()).collect()
}

/// Common row sum σ, if every row sum lies within `tol` of the mean row sum.
pub fn equal_row_sum<T: Scalar>(m: &Matrix<T>, tol: T) -> Option<T> {
    row_sum_spread(m).and_then(|(sigma, worst)| (worst.1 <= tol).then_some(sigma))
}

// (mean row sum, (row with the largest deviation, that deviation))
fn row_sum_spread<T: Scalar>(m: &Matrix<T>) -> Option<(T, (usize, T))> {
    let sums = row_sums(m);
    let sigma = sums.iter().copied().sum::<T>() / T::from_usize_lossy(sums.len());
    let worst = sums
        .iter()
        .enumerate()
        .map(|(i, &s)| (i, (s - sigma).abs()))
        .fold(None, |acc: Option<(usize, T)>, cur| match acc {
            Some(a) if a.1 >= cur.1 => Some(a),
            _ => Some(cur),
        })?;
    Some((sigma, worst))
}

/// A matrix all of whose row sums equal `row_sum` (σ).
#[derive(Clone, Debug, PartialEq)]
pub struct EqualRowSumMatrix<T> {
    base: Matrix<T>,
    row_sum: T,
}

impl<T: Scalar> EqualRowSumMatrix<T> {
    pub fn new(m: Matrix<T>, tol: T) -> Result<Self, MatrixError> {
        let (sigma, (row, deviation)) = row_sum_spread(&m).expect("matrix has rows");
        if deviation > tol {
            return Err(MatrixError::RowSum {
                row,
                sum: row_sums(&m)[row].as_f64(),
                target: sigma.as_f64(),
                deviation: deviation.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(Self {
            base: m,
            row_sum: sigma,
        })
    }

    /// Validates with the scalar's default tolerance.
    pub fn try_from_matrix(m: Matrix<T>) -> Result<Self, MatrixError> {
        Self::new(m, T::lit(T::VALIDATION_TOL))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.base
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.base
    }

    pub fn row_sum(&self) -> T {
        self.row_sum
    }
}

impl<T> AsRef<Matrix<T>> for EqualRowSumMatrix<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.base
    }
}

/// Nonnegative matrix with unit row sums.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix<T> {
    base: EqualRowSumMatrix<T>,
    doubly_stochastic: bool,
}

impl<T: Scalar> StochasticMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.base.base
    }

    pub fn equal_row_sum(&self) -> &EqualRowSumMatrix<T> {
        &self.base
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.base.base
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.doubly_stochastic
    }

    pub fn dim(&self) -> usize {
        self.base.base.rows()
    }
}

impl<T> AsRef<Matrix<T>> for StochasticMatrix<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.base.base
    }
}

/// Checks nonnegativity and unit row sums within `tol`. Entries in `[-tol, 0)`
/// are clamped to zero. The first violation found, scanning row by row, is
/// reported.
pub fn validate_stochastic<T: Scalar>(
    m: Matrix<T>,
    tol: T,
) -> Result<StochasticMatrix<T>, MatrixError> {
    let mut m = m;
    let (rows, cols) = (m.rows(), m.cols());
    for i in 0..rows {
        for j in 0..cols {
            let v = m[(i, j)];
            if v < -tol {
                return Err(MatrixError::NegativeEntry {
                    row: i,
                    col: j,
                    value: v.as_f64(),
                    tol: tol.as_f64(),
                });
            }
            if v < T::zero() {
                m[(i, j)] = T::zero();
            }
        }
        let sum: T = m.row(i).iter().copied().sum();
        let deviation = (sum - T::one()).abs();
        if deviation > tol {
            return Err(MatrixError::RowSum {
                row: i,
                sum: sum.as_f64(),
                target: 1.0,
                deviation: deviation.as_f64(),
                tol: tol.as_f64(),
            });
        }
    }
    let doubly_stochastic =
        m.is_square() && m.column_sums().iter().all(|&s| (s - T::one()).abs() <= tol);
    Ok(StochasticMatrix {
        base: EqualRowSumMatrix {
            base: m,
            row_sum: T::one(),
        },
        doubly_stochastic,
    })
}

impl<T: Scalar> TryFrom<Matrix<T>> for StochasticMatrix<T> {
    type Error = MatrixError;

    fn try_from(m: Matrix<T>) -> Result<Self, Self::Error> {
        validate_stochastic(m, T::lit(T::VALIDATION_TOL))
    }
}

impl<T: Scalar> From<StochasticMatrix<T>> for EqualRowSumMatrix<T> {
    fn from(s: StochasticMatrix<T>) -> Self {
        s.base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::counterexample_matrix;

    const TOL: f64 = 1e-12;

    #[test]
    fn symmetric_averaging_is_doubly_stochastic() {
        let m = Matrix::<f64>::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap();
        let s = validate_stochastic(m, TOL).unwrap();
        assert!(s.is_doubly_stochastic());
    }

    #[test]
    fn negative_entry_rejected() {
        let m = Matrix::<f64>::from_rows(&[[1.1, -0.1], [0.0, 1.0]]).unwrap();
        let err = validate_stochastic(m, TOL).unwrap_err();
        assert!(matches!(err, MatrixError::NegativeEntry { row: 0, col: 1, .. }));
    }

    #[test]
    fn tiny_negative_clamped() {
        let m = Matrix::<f64>::from_rows(&[[1.0 + 5e-13, -5e-13], [0.0, 1.0]]).unwrap();
        let s = validate_stochastic(m, TOL).unwrap();
        assert_eq!(s.matrix()[(0, 1)], 0.0);
    }

    #[test]
    fn counterexample_is_stochastic_not_doubly() {
        let s = validate_stochastic(counterexample_matrix::<f64>(), TOL).unwrap();
        assert!(!s.is_doubly_stochastic());
    }

    #[test]
    fn row_sum_violation_names_row() {
        let m = Matrix::<f64>::from_rows(&[[0.5, 0.5], [0.5, 0.6]]).unwrap();
        match validate_stochastic(m, TOL) {
            Err(MatrixError::RowSum { row, deviation, .. }) => {
                assert_eq!(row, 1);
                assert!((deviation - 0.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturbation_beyond_tol_always_errors() {
        for k in 1..20 {
            let eps = 2.0 * TOL * k as f64;
            let m = Matrix::<f64>::from_rows(&[[0.25, 0.75 + eps], [0.5, 0.5]]).unwrap();
            assert!(validate_stochastic(m, TOL).is_err());
        }
    }

    #[test]
    fn equal_row_sums() {
        let sto = Matrix::<f64>::from_rows(&[[0.3, 0.7], [1.0, 0.0]]).unwrap();
        assert_eq!(equal_row_sum(&sto, TOL), Some(1.0));
        let two = Matrix::<f64>::from_rows(&[[2.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_eq!(equal_row_sum(&two, TOL), Some(2.0));
        let bad = Matrix::<f64>::from_rows(&[[1.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(equal_row_sum(&bad, TOL), None);
        assert_eq!(row_sums(&bad), vec![1.0, 2.0]);
        assert!(EqualRowSumMatrix::new(bad, TOL).is_err());
    }
}
