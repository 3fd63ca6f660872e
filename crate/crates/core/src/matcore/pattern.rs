use super::Matrix;
use crate::Scalar;

/// Boolean support of a matrix: `bits[i][j]` is set when `|m_ij| > zero_tol`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

pub fn pattern<T: Scalar>(m: &Matrix<T>, zero_tol: T) -> PatternMatrix {
    PatternMatrix {
        rows: m.rows(),
        cols: m.cols(),
        bits: m.as_slice().iter().map(|x| x.abs() > zero_tol).collect(),
    }
}

impl PatternMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.cols..(i + 1) * self.cols]
    }

    /// Column indices where row `i` is nonzero.
    pub fn support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    /// Column indices where row `i` is zero.
    pub fn zero_set(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| !self.get(i, j)).collect()
    }

    /// True when rows `i` and `j` share at least one nonzero column.
    pub fn rows_overlap(&self, i: usize, j: usize) -> bool {
        self.row(i).iter().zip(self.row(j)).any(|(&a, &b)| a && b)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// The 0/1 matrix.
    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if self.get(i, j) {
                T::one()
            } else {
                T::zero()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::counterexample_matrix;

    #[test]
    fn identity_and_zero() {
        let p = pattern(&Matrix::<f64>::identity(3), 0.0);
        assert_eq!(p, pattern(&Matrix::<f64>::identity(3).scale(7.0), 0.0));
        assert_eq!(p.count(), 3);
        assert!(p.get(1, 1) && !p.get(0, 1));
        assert_eq!(pattern(&Matrix::<f64>::zeros(2, 3), 0.0).count(), 0);
    }

    #[test]
    fn counterexample_pattern_is_three_times_s() {
        let s = counterexample_matrix::<f64>();
        let p = pattern(&s, 0.0).to_matrix::<f64>();
        assert!(p.max_abs_diff(&s.scale(3.0)).unwrap() < 1e-15);
    }

    #[test]
    fn threshold_drops_small_entries() {
        let m = Matrix::<f64>::from_rows(&[[1e-14, 0.5]]).unwrap();
        assert_eq!(pattern(&m, 0.0).support(0), vec![0, 1]);
        assert_eq!(pattern(&m, 1e-12).support(0), vec![1]);
        assert_eq!(pattern(&m, 1e-12).zero_set(0), vec![0]);
    }
}
