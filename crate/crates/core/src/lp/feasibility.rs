use super::{solve, LinearProgram, LpError, LpStatus, Sense};
use crate::matcore::Matrix;
use crate::Scalar;

/// Optimal slack at or below this counts as "no strictly feasible point".
pub const STRICT_SLACK_THRESHOLD: f64 = 1e-9;
/// Farkas entries below this (after unit ∞-normalization) are zeroed.
pub const FARKAS_CLEAN: f64 = 1e-10;
/// Admissible negativity of `x′A` for a Farkas witness.
pub const FARKAS_TOL: f64 = 1e-8;

/// Outcome of testing `A y < 0, y ≥ 0`.
///
/// Either `witness_y` is set and `A·y ≤ −margin·𝟏` with `margin > 0`, or
/// `farkas_x` is set with `x ≥ 0`, `‖x‖_∞ = 1` and `x′A ≥ −1e−8`. Both
/// branches are re-verified against `A` when the value is built, so a value
/// of this type is always a sound certificate.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct StrictFeasibilityResult<T: Scalar> {
    pub feasible: bool,
    pub witness_y: Option<Vec<T>>,
    pub farkas_x: Option<Vec<T>>,
    pub margin: T,
}

impl<T: Scalar> StrictFeasibilityResult<T> {
    /// Wraps a candidate solution; fails unless `y ≥ 0` and `A y < 0`.
    pub fn from_solution(a: &Matrix<T>, y: Vec<T>) -> Result<Self, LpError> {
        if y.iter().any(|&v| v < T::zero()) {
            return Err(LpError::Certificate("witness y has a negative entry".into()));
        }
        let ay = a.mul_vec(&y).map_err(|e| LpError::Shape(e.to_string()))?;
        let margin = ay.iter().fold(T::infinity(), |m, &v| m.min(-v));
        if margin <= T::zero() {
            return Err(LpError::Certificate(format!(
                "A·y is not strictly negative (max entry {})",
                (-margin).as_f64()
            )));
        }
        Ok(Self {
            feasible: true,
            witness_y: Some(y),
            farkas_x: None,
            margin,
        })
    }

    /// Wraps a candidate alternative; fails unless `x ≥ 0`, `x ≠ 0` and
    /// `x′A ≥ −tol` entrywise. `x` is normalized to unit ∞-norm and cleaned.
    pub fn from_alternative(a: &Matrix<T>, x: Vec<T>) -> Result<Self, LpError> {
        let x = normalize_alternative(x)?;
        let xa = a.vec_mul(&x).map_err(|e| LpError::Shape(e.to_string()))?;
        let tol = T::lit(FARKAS_TOL) * a.max_abs().max(T::one());
        if let Some((k, &v)) = xa.iter().enumerate().find(|(_, &v)| v < -tol) {
            return Err(LpError::Certificate(format!(
                "x′A has entry {k} equal to {} < 0",
                v.as_f64()
            )));
        }
        Ok(Self {
            feasible: false,
            witness_y: None,
            farkas_x: Some(x),
            margin: T::zero(),
        })
    }
}

fn normalize_alternative<T: Scalar>(mut x: Vec<T>) -> Result<Vec<T>, LpError> {
    let tiny = T::lit(FARKAS_CLEAN);
    if x.iter().any(|&v| v < -tiny) {
        return Err(LpError::Certificate("Farkas vector has a negative entry".into()));
    }
    let norm = x.iter().fold(T::zero(), |m, &v| m.max(v));
    if norm <= T::zero() {
        return Err(LpError::Certificate("Farkas vector is zero".into()));
    }
    for v in &mut x {
        *v /= norm;
        if *v < tiny {
            *v = T::zero();
        }
    }
    Ok(x)
}

/// Decides whether some `y ≥ 0` satisfies `A y < 0` entrywise.
///
/// The system is homogeneous, so it is solved on the box `0 ≤ y ≤ 𝟏` as
/// `max s` subject to `A y + s𝟏 ≤ 0`, `s ≥ 0`; it is strictly feasible
/// exactly when the optimal `s` is positive. Otherwise the optimal duals
/// of the `A y + s𝟏 ≤ 0` rows give `x ≥ 0` with `𝟏′x = 1` and `x′A ≥ 0`.
pub fn strict_feasibility<T: Scalar>(a: &Matrix<T>) -> Result<StrictFeasibilityResult<T>, LpError> {
    if !a.is_square() {
        return Err(LpError::Shape(format!(
            "strict feasibility expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.max_abs();
    if scale == T::zero() {
        return StrictFeasibilityResult::from_alternative(a, vec![T::one(); n]);
    }
    let scaled = a.scale(T::one() / scale);

    let mut objective = vec![T::zero(); n + 1];
    objective[n] = T::one();
    let mut lp = LinearProgram::maximize(objective);
    for j in 0..n {
        lp.bound(j, T::zero(), T::one());
    }
    for i in 0..n {
        let mut row = scaled.row(i).to_vec();
        row.push(T::one());
        lp.constrain(row, Sense::Le, T::zero());
    }
    let out = solve(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(LpError::Status(out.status));
    }
    let slack = out.primal[n];
    if slack > T::lit(STRICT_SLACK_THRESHOLD) {
        let y: Vec<T> = out.primal[..n].iter().map(|&v| v.max(T::zero())).collect();
        StrictFeasibilityResult::from_solution(a, y)
    } else {
        let x: Vec<T> = out.duals[..n]
            .iter()
            .map(|&v| if v.abs() < T::lit(FARKAS_CLEAN) { T::zero() } else { v })
            .collect();
        StrictFeasibilityResult::from_alternative(a, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::counterexample_matrix;
    use crate::matcore::pattern;

    fn system_for(s: &Matrix<f64>) -> Matrix<f64> {
        let p = pattern(s, 0.0).to_matrix::<f64>();
        Matrix::filled(s.rows(), s.cols(), 1.0).sub(&p.scale(2.0)).unwrap()
    }

    #[test]
    fn all_positive_pattern_feasible_with_margin_n() {
        let n = 4;
        let a = Matrix::<f64>::filled(n, n, -1.0);
        let r = strict_feasibility(&a).unwrap();
        assert!(r.feasible);
        assert!((r.margin - n as f64).abs() < 1e-9, "margin {}", r.margin);
        let y = r.witness_y.unwrap();
        assert!(y.iter().all(|&v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn identity_pattern_infeasible() {
        let a = system_for(&Matrix::identity(2));
        let r = strict_feasibility(&a).unwrap();
        assert!(!r.feasible);
        let x = r.farkas_x.unwrap();
        let xa = a.vec_mul(&x).unwrap();
        assert!(xa.iter().all(|&v| v >= -1e-8));
    }

    #[test]
    fn counterexample_alternative_is_unique_ray() {
        let a = system_for(&counterexample_matrix());
        let r = strict_feasibility(&a).unwrap();
        assert!(!r.feasible);
        let x = r.farkas_x.unwrap();
        let expect = [0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        for (v, e) in x.iter().zip(expect) {
            assert!((v - e).abs() <= 1e-8, "{x:?}");
        }
    }

    #[test]
    fn scaling_does_not_change_verdict() {
        let a = system_for(&counterexample_matrix());
        assert_eq!(
            strict_feasibility(&a).unwrap().feasible,
            strict_feasibility(&a.scale(2.0)).unwrap().feasible
        );
        let b = Matrix::<f64>::filled(3, 3, -1.0);
        assert!(strict_feasibility(&b.scale(1e-6)).unwrap().feasible);
    }

    #[test]
    fn constructors_reject_bad_certificates() {
        let a = Matrix::<f64>::identity(2);
        assert!(StrictFeasibilityResult::from_solution(&a, vec![1.0, 1.0]).is_err());
        assert!(StrictFeasibilityResult::from_solution(&a.scale(-1.0), vec![1.0, 1.0]).is_ok());
        assert!(StrictFeasibilityResult::from_alternative(&a, vec![0.0, 0.0]).is_err());
        assert!(StrictFeasibilityResult::from_alternative(&a.scale(-1.0), vec![1.0, 0.0]).is_err());
        assert!(StrictFeasibilityResult::from_alternative(&a, vec![-1.0, 2.0]).is_err());
    }

    #[test]
    fn rejects_non_square() {
        assert!(strict_feasibility(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
