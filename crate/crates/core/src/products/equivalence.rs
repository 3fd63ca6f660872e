use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ProductsError;
use crate::matcore::{EqualRowSumMatrix, Matrix};
use crate::random::random_equal_row_sum;
use crate::seminorms::Seminorm;
use crate::Scalar;

/// Samples whose first seminorm is at or below this are skipped.
pub const NEAR_CONSENSUS: f64 = 1e-8;

/// Extremes of `b(M) / a(M)` over the accepted samples. They are inner
/// estimates of the equivalence constants: `c_m ≤ c_min ≤ c_max ≤ c_M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceEstimate {
    pub a: Seminorm,
    pub b: Seminorm,
    pub c_min: f64,
    pub c_max: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub seed: Option<u64>,
}

fn value<T: Scalar>(s: Seminorm, m: &EqualRowSumMatrix<T>) -> Result<f64, ProductsError> {
    Ok(s.evaluate_checked(m)?.value.as_f64())
}

/// Ratio extremes over a given set of equal-row-sum matrices.
pub fn equivalence_ratios<'a, T: Scalar>(
    a: Seminorm,
    b: Seminorm,
    matrices: impl IntoIterator<Item = &'a EqualRowSumMatrix<T>>,
) -> Result<EquivalenceEstimate, ProductsError> {
    let mut est = EquivalenceEstimate {
        a,
        b,
        c_min: f64::INFINITY,
        c_max: f64::NEG_INFINITY,
        accepted: 0,
        rejected: 0,
        seed: None,
    };
    for m in matrices {
        let va = value(a, m)?;
        if va <= NEAR_CONSENSUS {
            est.rejected += 1;
            continue;
        }
        let ratio = if a == b { 1.0 } else { value(b, m)? / va };
        est.c_min = est.c_min.min(ratio);
        est.c_max = est.c_max.max(ratio);
        est.accepted += 1;
    }
    Ok(est)
}

/// Ratio extremes over `samples` random `n × n` matrices with unit row sums
/// (Gaussian plus a rank-one row-sum correction). Sample `k` is drawn from
/// ChaCha8 stream `k` under `seed`.
pub fn estimate_equivalence(
    a: Seminorm,
    b: Seminorm,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<EquivalenceEstimate, ProductsError> {
    if samples < 2 {
        return Err(ProductsError::TooFewSamples);
    }
    let draws = (0..samples).map(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let m: Matrix<f64> = random_equal_row_sum(n, n, &mut rng);
        EqualRowSumMatrix::new(m, 1e-12).expect("rows corrected to unit sum")
    });
    let draws: Vec<_> = draws.collect();
    let mut est = equivalence_ratios(a, b, &draws)?;
    est.seed = Some(seed);
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::counterexample_matrix;
    use crate::seminorms::PNorm;

    #[test]
    fn same_seminorm_gives_one() {
        let s = Seminorm::Metric(PNorm::Two);
        let e = estimate_equivalence(s, s, 4, 50, 1).unwrap();
        assert_eq!((e.c_min, e.c_max), (1.0, 1.0));
        assert_eq!(e.accepted, 50);
    }

    #[test]
    fn induced_is_dominated_by_metric() {
        let e = estimate_equivalence(
            Seminorm::Metric(PNorm::Inf),
            Seminorm::Induced(PNorm::Inf),
            4,
            200,
            2,
        )
        .unwrap();
        assert!(e.c_max <= 1.0 + 1e-9 && e.c_min > 0.0);
    }

    #[test]
    fn counterexample_ratio() {
        let s = EqualRowSumMatrix::new(counterexample_matrix::<f64>(), 1e-12).unwrap();
        let e = equivalence_ratios(Seminorm::Induced(PNorm::Inf), Seminorm::Metric(PNorm::Inf), [&s])
            .unwrap();
        assert!((e.c_min - 1.5).abs() < 1e-6 && (e.c_max - 1.5).abs() < 1e-6);
    }

    #[test]
    fn consensus_samples_are_rejected() {
        let c = EqualRowSumMatrix::new(Matrix::<f64>::consensus(3, &[0.2, 0.3, 0.5]), 1e-12).unwrap();
        let e = equivalence_ratios(Seminorm::Ergodicity, Seminorm::Metric(PNorm::One), [&c]).unwrap();
        assert_eq!((e.accepted, e.rejected), (0, 1));
        assert!(estimate_equivalence(Seminorm::Ergodicity, Seminorm::Ergodicity, 3, 1, 0).is_err());
    }
}
