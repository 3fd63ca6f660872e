use super::{Matrix, MatrixError};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum ProjectionForm<T> {
    /// `P = I − (1/n)𝟏𝟏′`, the orthogonal projection onto `𝟏^⊥`.
    Orthogonal,
    /// An arbitrary idempotent whose image is `span 𝟏`.
    OntoConsensus(Matrix<T>),
}

/// Projection associated with the consensus direction `𝟏`.
///
/// The orthogonal form annihilates `𝟏`; its complement `I − P` is a
/// projection onto `span 𝟏`, which is the other admissible form.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteringProjection<T> {
    n: usize,
    form: ProjectionForm<T>,
}

pub fn centering<T: Scalar>(n: usize) -> CenteringProjection<T> {
    assert!(n >= 1, "centering dimension must be positive");
    CenteringProjection {
        n,
        form: ProjectionForm::Orthogonal,
    }
}

impl<T: Scalar> CenteringProjection<T> {
    /// Accepts an idempotent `P` with `P𝟏 = 𝟏` and every column in `span 𝟏`.
    pub fn onto_consensus(p: Matrix<T>, tol: T) -> Result<Self, MatrixError> {
        if !p.is_square() {
            return Err(MatrixError::Projection("projection must be square".into()));
        }
        let sq = p.matmul(&p)?;
        let idem = sq.max_abs_diff(&p)?;
        if idem > tol {
            return Err(MatrixError::Projection(format!(
                "not idempotent: max |P² − P| = {}",
                idem.as_f64()
            )));
        }
        let ones = vec![T::one(); p.rows()];
        let p1 = p.mul_vec(&ones)?;
        if p1.iter().any(|&v| (v - T::one()).abs() > tol) {
            return Err(MatrixError::Projection("P𝟏 ≠ 𝟏".into()));
        }
        if !p.is_consensus(tol) {
            return Err(MatrixError::Projection("image is not span 𝟏".into()));
        }
        Ok(Self {
            n: p.rows(),
            form: ProjectionForm::OntoConsensus(p),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &ProjectionForm<T> {
        &self.form
    }

    pub fn matrix(&self) -> Matrix<T> {
        match &self.form {
            ProjectionForm::Orthogonal => {
                let inv = T::one() / T::from_usize_lossy(self.n);
                Matrix::from_fn(self.n, self.n, |i, j| {
                    if i == j {
                        T::one() - inv
                    } else {
                        -inv
                    }
                })
            }
            ProjectionForm::OntoConsensus(p) => p.clone(),
        }
    }

    /// `I − P`: swaps orientation between `𝟏^⊥`-type and `span 𝟏`-type.
    pub fn complement_matrix(&self) -> Matrix<T> {
        let p = self.matrix();
        Matrix::identity(self.n).sub(&p).expect("same shape")
    }

    /// `P·M` without materializing `P` when the form is orthogonal.
    pub fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
        if m.rows() != self.n {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.n,
                left_cols: self.n,
                right_rows: m.rows(),
                right_cols: m.cols(),
            });
        }
        match &self.form {
            ProjectionForm::Orthogonal => {
                let means = m.column_means();
                Ok(Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] - means[j]))
            }
            ProjectionForm::OntoConsensus(p) => p.matmul(m),
        }
    }

    /// `P·x` for a vector.
    pub fn apply_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n, "vector length must match projection");
        match &self.form {
            ProjectionForm::Orthogonal => {
                let mean = x.iter().copied().sum::<T>() / T::from_usize_lossy(self.n);
                x.iter().map(|&v| v - mean).collect()
            }
            ProjectionForm::OntoConsensus(p) => p.mul_vec(x).expect("dimension checked"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_matches_formula() {
        let p = centering::<f64>(2).matrix();
        assert_eq!(p.to_rows(), vec![vec![0.5, -0.5], vec![-0.5, 0.5]]);
    }

    #[test]
    fn n1_is_zero() {
        assert_eq!(centering::<f64>(1).matrix().to_rows(), vec![vec![0.0]]);
    }

    #[test]
    fn idempotent_and_annihilates_ones() {
        for n in 1..=12 {
            let proj = centering::<f64>(n);
            let p = proj.matrix();
            let p2 = p.matmul(&p).unwrap();
            assert!(p2.max_abs_diff(&p).unwrap() <= 1e-12);
            let p1 = p.mul_vec(&vec![1.0; n]).unwrap();
            assert!(p1.iter().all(|v| v.abs() <= 1e-12));
            let m = Matrix::<f64>::from_fn(n, 3, |i, j| (i * 3 + j) as f64 * 0.37 - 1.0);
            let fast = proj.apply(&m).unwrap();
            let slow = p.matmul(&m).unwrap();
            assert!(fast.max_abs_diff(&slow).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn complement_projects_onto_consensus() {
        let q = centering::<f64>(4).complement_matrix();
        let proj = CenteringProjection::onto_consensus(q, 1e-12).unwrap();
        assert_eq!(proj.dim(), 4);
        // an oblique projection 𝟏w′ with w′𝟏 = 1
        let w = [0.1, 0.2, 0.3, 0.4];
        let oblique = Matrix::<f64>::consensus(4, &w);
        assert!(CenteringProjection::onto_consensus(oblique, 1e-12).is_ok());
        assert!(CenteringProjection::onto_consensus(Matrix::<f64>::identity(4), 1e-12).is_err());
    }
}
