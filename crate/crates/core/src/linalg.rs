//! Symmetric eigenvalues by cyclic Jacobi rotations, and the spectral norm
//! built on top of them.

use thiserror::Error;

use crate::matcore::Matrix;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("eigensolver requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    /// Convergence is declared once the off-diagonal Frobenius norm is below
    /// `rel_tol · ‖A‖_F`; sweeps continue to machine precision while they
    /// still make progress.
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_sweeps: 100_000,
        }
    }
}

fn off_diagonal_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a symmetric matrix in descending order. Only the upper
/// triangle is trusted; the input is symmetrized first.
pub fn symmetric_eigenvalues<T: Scalar>(
    m: &Matrix<T>,
    opts: EigenOptions,
) -> Result<Vec<T>, EigenError> {
    if !m.is_square() {
        return Err(EigenError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let half = T::lit(0.5);
    let mut a: Vec<T> = Matrix::from_fn(n, n, |i, j| half * (m[(i, j)] + m[(j, i)])).into_vec();
    let scale = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    if scale == T::zero() || n == 1 {
        return Ok(sorted_diagonal(&a, n));
    }
    let target = T::lit(opts.rel_tol) * scale;
    let floor = T::epsilon() * scale;

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off > floor {
        if sweeps >= opts.max_sweeps {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
            }
        }
        let next = off_diagonal_norm(&a, n);
        // rounding floor reached: further sweeps cannot improve
        let stalled = next >= off;
        off = next;
        if stalled && off <= target {
            break;
        }
    }
    if off > target {
        return Err(EigenError::NoConvergence {
            sweeps,
            residual: off.as_f64(),
        });
    }
    Ok(sorted_diagonal(&a, n))
}

fn sorted_diagonal<T: Scalar>(a: &[T], n: usize) -> Vec<T> {
    let mut d: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    d.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    d
}

/// Gram matrix on the smaller side: `A′A` if `cols ≤ rows`, else `AA′`.
pub fn small_gram<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let (r, c) = (m.rows(), m.cols());
    if c <= r {
        Matrix::from_fn(c, c, |i, j| (0..r).map(|k| m[(k, i)] * m[(k, j)]).sum())
    } else {
        Matrix::from_fn(r, r, |i, j| {
            m.row(i).iter().zip(m.row(j)).map(|(&a, &b)| a * b).sum()
        })
    }
}

/// Singular values in descending order, via eigenvalues of the smaller Gram
/// matrix.
pub fn singular_values<T: Scalar>(
    m: &Matrix<T>,
    opts: EigenOptions,
) -> Result<Vec<T>, EigenError> {
    let eig = symmetric_eigenvalues(&small_gram(m), opts)?;
    Ok(eig.into_iter().map(|l| l.max(T::zero()).sqrt()).collect())
}

/// `‖A‖₂ = sqrt(λ_max(A′A))`.
pub fn spectral_norm<T: Scalar>(m: &Matrix<T>, opts: EigenOptions) -> Result<T, EigenError> {
    // scale to unit max-abs so tiny matrices keep their relative accuracy
    let s = m.max_abs();
    if s == T::zero() {
        return Ok(T::zero());
    }
    let scaled = m.scale(T::one() / s);
    Ok(singular_values(&scaled, opts)?[0] * s)
}
