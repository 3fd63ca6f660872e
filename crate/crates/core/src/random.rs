//! Random matrix families used by the simulator, the equivalence estimator
//! and the property tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{pattern, Matrix};
use crate::Scalar;

/// Square stochastic matrix whose entries are zero with probability
/// `zero_prob`, otherwise uniform in `[0.05, 1]` before row normalization.
/// Every row keeps at least one positive entry.
pub fn random_stochastic<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    zero_prob: f64,
    rng: &mut R,
) -> Matrix<T> {
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(zero_prob) {
                    0.0
                } else {
                    rng.random_range(0.05..=1.0)
                }
            })
            .collect();
        if row.iter().all(|&v| v == 0.0) {
            let k = rng.random_range(0..n);
            row[k] = rng.random_range(0.05..=1.0);
        }
        let s: f64 = row.iter().sum();
        rows.push(row.into_iter().map(|v| v / s).collect::<Vec<_>>());
    }
    Matrix::from_f64_rows(&rows).expect("nonempty rows")
}

/// Stochastic matrix with every entry strictly positive.
pub fn random_positive_stochastic<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<T> {
    random_stochastic(n, 0.0, rng)
}

/// Stochastic matrix with no two orthogonal rows, drawn by rejection from
/// [`random_stochastic`].
pub fn random_scrambling<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    zero_prob: f64,
    rng: &mut R,
) -> Matrix<T> {
    loop {
        let m: Matrix<T> = random_stochastic(n, zero_prob, rng);
        let pat = pattern(&m, T::zero());
        if (0..n).all(|i| (i + 1..n).all(|j| pat.rows_overlap(i, j))) {
            return m;
        }
    }
}

/// Gaussian `rows × cols` matrix plus the rank-one correction that makes
/// every row sum equal to 1.
pub fn random_equal_row_sum<T: Scalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<T> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let row: Vec<f64> = (0..cols).map(|_| StandardNormal.sample(rng)).collect();
        let fix = (1.0 - row.iter().sum::<f64>()) / cols as f64;
        data.extend(row.into_iter().map(|v| T::lit(v + fix)));
    }
    Matrix::new(rows, cols, data).expect("shape matches")
}

/// Gaussian matrix with no row-sum structure.
pub fn random_gaussian<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| {
        let g: f64 = StandardNormal.sample(rng);
        T::lit(g)
    })
}

/// Convex combination of `terms` uniformly random permutation matrices with
/// random positive weights.
pub fn random_doubly_stochastic<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    terms: usize,
    rng: &mut R,
) -> Matrix<T> {
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random_range(0.05..=1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = vec![0.0f64; n * n];
    let mut perm: Vec<usize> = (0..n).collect();
    for w in weights {
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            acc[i * n + j] += w / total;
        }
    }
    Matrix::new(n, n, acc.into_iter().map(T::lit).collect()).expect("shape matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{equal_row_sum, validate_stochastic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_have_their_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..7 {
            let s: Matrix<f64> = random_stochastic(n, 0.5, &mut rng);
            assert!(validate_stochastic(s, 1e-12).is_ok());
            let p: Matrix<f64> = random_positive_stochastic(n, &mut rng);
            assert!(p.as_slice().iter().all(|&v| v > 0.0));
            let e: Matrix<f64> = random_equal_row_sum(n, n + 1, &mut rng);
            let sigma = equal_row_sum(&e, 1e-12).unwrap();
            assert!((sigma - 1.0).abs() < 1e-12);
            let d: Matrix<f64> = random_doubly_stochastic(n, 3, &mut rng);
            assert!(validate_stochastic(d, 1e-12).unwrap().is_doubly_stochastic());
        }
    }

    #[test]
    fn scrambling_rows_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m: Matrix<f64> = random_scrambling(5, 0.5, &mut rng);
        let pat = pattern(&m, 0.0);
        for i in 0..5 {
            for j in 0..5 {
                assert!(pat.rows_overlap(i, j));
            }
        }
    }
}
