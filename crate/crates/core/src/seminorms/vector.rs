use super::{Method, PNorm, SeminormKind, SeminormValue};
use crate::Scalar;

fn sorted<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));
    s
}

fn mean<T: Scalar>(x: &[T]) -> T {
    x.iter().copied().sum::<T>() / T::from_usize_lossy(x.len())
}

/// The minimizing shift `r = argmin_r ‖x − r𝟏‖_p`: the midrange for `∞`,
/// the lower median for `1`, the mean for `2`.
pub fn consensus_shift<T: Scalar>(x: &[T], p: PNorm) -> T {
    assert!(!x.is_empty(), "vector must be nonempty");
    match p {
        PNorm::Inf => {
            let (lo, hi) = min_max(x);
            lo + (hi - lo) / T::lit(2.0)
        }
        PNorm::One => sorted(x)[(x.len() - 1) / 2],
        PNorm::Two => mean(x),
    }
}

fn min_max<T: Scalar>(x: &[T]) -> (T, T) {
    x.iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// `|x|_p = min_c ‖x − c𝟏‖_p`.
pub fn vector_seminorm_value<T: Scalar>(x: &[T], p: PNorm) -> T {
    assert!(!x.is_empty(), "vector must be nonempty");
    match p {
        PNorm::Inf => {
            let (lo, hi) = min_max(x);
            (hi - lo) / T::lit(2.0)
        }
        PNorm::One => {
            let s = sorted(x);
            let q = s.len() / 2;
            let top: T = s[s.len() - q..].iter().copied().sum();
            let bottom: T = s[..q].iter().copied().sum();
            top - bottom
        }
        PNorm::Two => {
            let mu = mean(x);
            x.iter().map(|&v| (v - mu) * (v - mu)).sum::<T>().sqrt()
        }
    }
}

pub fn vector_seminorm<T: Scalar>(x: &[T], p: PNorm) -> SeminormValue<T> {
    SeminormValue::new(
        vector_seminorm_value(x, p),
        SeminormKind::Vector,
        p,
        Method::ExplicitFormula,
        T::FORMULA_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    // Golden-section minimization of ‖x − c𝟏‖_p over c ∈ [min, max].
    fn oracle(x: &[f64], p: PNorm) -> f64 {
        let f = |c: f64| -> f64 {
            match p {
                PNorm::One => x.iter().map(|v| (v - c).abs()).sum(),
                PNorm::Two => x.iter().map(|v| (v - c) * (v - c)).sum::<f64>().sqrt(),
                PNorm::Inf => x.iter().fold(0.0, |m, v| f64::max(m, (v - c).abs())),
            }
        };
        let (mut a, mut b) = min_max(x);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c1 = b - g * (b - a);
            let c2 = a + g * (b - a);
            if f(c1) <= f(c2) {
                b = c2;
            } else {
                a = c1;
            }
        }
        f((a + b) / 2.0)
    }

    #[test]
    fn examples() {
        assert_eq!(vector_seminorm_value(&[1.0, -1.0], PNorm::Inf), 1.0);
        for p in [PNorm::One, PNorm::Two, PNorm::Inf] {
            assert_eq!(vector_seminorm_value(&[3.5; 5], p), 0.0);
        }
        // oracle value for [0,1,5] at p = 1 is 5
        assert!((oracle(&[0.0, 1.0, 5.0], PNorm::One) - 5.0).abs() < 1e-9);
        assert_eq!(vector_seminorm_value(&[0.0, 1.0, 5.0], PNorm::One), 5.0);
    }

    #[test]
    fn agrees_with_scalar_minimization() {
        let xs: [&[f64]; 4] = [
            &[0.3, -1.2, 4.0, 2.2],
            &[1.0, 2.0],
            &[-5.0, 7.5, 0.0, 0.1, 0.2],
            &[2.0],
        ];
        for x in xs {
            for p in [PNorm::One, PNorm::Two, PNorm::Inf] {
                let v = vector_seminorm_value(x, p);
                assert!((v - oracle(x, p)).abs() < 1e-9, "{x:?} {p}");
                let r = consensus_shift(x, p);
                let at_r = oracle(&x.iter().map(|v| v - r).collect::<Vec<_>>(), p);
                assert!((at_r - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lower_median_for_even_length() {
        assert_eq!(consensus_shift(&[4.0, 1.0, 3.0, 2.0], PNorm::One), 2.0);
        assert_eq!(consensus_shift(&[4.0, 1.0, 3.0, 2.0], PNorm::Inf), 2.5);
    }
}
