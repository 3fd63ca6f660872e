use serde::Serialize;

use super::{advance_deviation, MatrixEnsemble, ProductsError, Schedule};
use crate::matcore::Matrix;
use crate::seminorms::metric_p1;
use crate::Scalar;

pub const DEFAULT_LIMIT_TOL: f64 = 1e-12;
pub const DEFAULT_STEP_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductLimit<T: Scalar> {
    /// `M_k ⋯ M_1` at the stopping step.
    pub product: Matrix<T>,
    /// First row of `product`; every row agrees with it to within the tolerance.
    pub c: Vec<T>,
    pub steps: usize,
    /// Metric 1-seminorm of `product` when iteration stopped.
    pub achieved: T,
}

/// [`product_limit_with`] using the default step cap.
pub fn product_limit<T: Scalar>(
    ensemble: &MatrixEnsemble<T>,
    schedule: &Schedule,
    tol: T,
) -> Result<ProductLimit<T>, ProductsError> {
    product_limit_with(ensemble, schedule, tol, DEFAULT_STEP_CAP)
}

/// Multiplies ensemble members in schedule order until the metric 1-seminorm
/// of the running product drops below `tol`.
pub fn product_limit_with<T: Scalar>(
    ensemble: &MatrixEnsemble<T>,
    schedule: &Schedule,
    tol: T,
    max_steps: usize,
) -> Result<ProductLimit<T>, ProductsError> {
    if ensemble.lambda() >= T::one() {
        return Err(ProductsError::Refused {
            lambda: ensemble.lambda().as_f64(),
        });
    }
    let n = ensemble.dim();
    let inv_n = T::one() / T::from_usize_lossy(n);
    let mut base = vec![inv_n; n];
    let mut dev = Matrix::from_fn(n, n, |i, j| if i == j { T::one() - inv_n } else { -inv_n });
    let mut achieved = metric_p1(&dev).value;
    let mut steps = 0;
    let mut order = schedule.sequence(ensemble.len())?;
    while achieved >= tol {
        if steps == max_steps {
            return Err(ProductsError::StepCap {
                steps,
                achieved: achieved.as_f64(),
            });
        }
        let k = order.next().expect("schedules are infinite");
        let (shift, next) = advance_deviation(&ensemble.matrices()[k], &dev)?;
        dev = next;
        for (b, s) in base.iter_mut().zip(&shift) {
            *b += *s;
        }
        steps += 1;
        achieved = metric_p1(&dev).value;
    }
    let product = dev.add_to_rows(&base)?;
    let c = product.row(0).to_vec();
    Ok(ProductLimit {
        product,
        c,
        steps,
        achieved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::counterexample_matrix;
    use crate::matcore::row_sums;
    use crate::seminorms::{PNorm, Seminorm};

    #[test]
    fn lazy_averaging_limit() {
        let n = 4;
        let m = Matrix::<f64>::identity(n).scale(0.5).add(&Matrix::averaging(n).scale(0.5)).unwrap();
        let e = MatrixEnsemble::new(vec![m], Seminorm::Induced(PNorm::Inf)).unwrap();
        let l = product_limit(&e, &Schedule::Cyclic, 1e-12).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((l.product[(i, j)] - 0.25).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn counterexample_limit_is_stochastic_row() {
        let e = MatrixEnsemble::new(vec![counterexample_matrix::<f64>()], Seminorm::Ergodicity).unwrap();
        let l = product_limit(&e, &Schedule::Cyclic, 1e-12).unwrap();
        assert!(l.c.iter().all(|&v| v >= -1e-12));
        assert!((l.c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for s in row_sums(&l.product) {
            assert!((s - 1.0).abs() < 1e-12);
        }
        // every row reproduces c
        for i in 0..6 {
            for j in 0..6 {
                assert!((l.product[(i, j)] - l.c[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rank_one_member_converges_in_one_step() {
        let c0 = [0.1, 0.6, 0.3];
        let e = MatrixEnsemble::new(vec![Matrix::<f64>::consensus(3, &c0)], Seminorm::Metric(PNorm::One))
            .unwrap();
        let l = product_limit(&e, &Schedule::Cyclic, 1e-12).unwrap();
        assert_eq!(l.steps, 1);
        for (a, b) in l.c.iter().zip(&c0) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn refusal_and_step_cap() {
        let e = MatrixEnsemble::new(vec![Matrix::<f64>::identity(2)], Seminorm::Ergodicity).unwrap();
        assert!(matches!(
            product_limit(&e, &Schedule::Cyclic, 1e-12),
            Err(ProductsError::Refused { .. })
        ));
        let e = MatrixEnsemble::new(vec![counterexample_matrix::<f64>()], Seminorm::Ergodicity).unwrap();
        assert!(matches!(
            product_limit_with(&e, &Schedule::Cyclic, 1e-12, 3),
            Err(ProductsError::StepCap { steps: 3, .. })
        ));
    }
}
