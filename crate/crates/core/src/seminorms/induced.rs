use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::metric::{eigen_options, ergodicity_with_pair};
use super::vector::vector_seminorm_value;
use super::{Method, PNorm, SeminormError, SeminormKind, SeminormValue};
use crate::linalg::spectral_norm;
use crate::matcore::{centering, EqualRowSumMatrix, Matrix};
use crate::Scalar;

/// Row pair `(u, v)` maximizing `Σ_k |m_uk − m_vk|`, and the sign vector
/// `z_k = sign(m_uk − m_vk)` (0 where the rows agree) attaining it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SignWitness {
    pub u: usize,
    pub v: usize,
    pub z: Vec<i8>,
}

impl SignWitness {
    pub fn as_vector<T: Scalar>(&self) -> Vec<T> {
        self.z.iter().map(|&s| T::lit(f64::from(s))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InducedInfValue<T: Scalar> {
    pub value: SeminormValue<T>,
    pub witness: SignWitness,
}

fn sign_vector<T: Scalar>(a: &[T], b: &[T]) -> Vec<i8> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            if d > T::zero() {
                1
            } else if d < T::zero() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Induced ∞-seminorm: equal to the coefficient of ergodicity on matrices
/// with equal row sums, with the maximizing sign vector as witness.
pub fn induced_pinf<T: Scalar>(m: &EqualRowSumMatrix<T>) -> InducedInfValue<T> {
    let mat = m.matrix();
    let (value, u, v) = ergodicity_with_pair(mat);
    let z = sign_vector(mat.row(u), mat.row(v));
    InducedInfValue {
        value: SeminormValue::new(
            value,
            SeminormKind::Induced,
            PNorm::Inf,
            Method::ExplicitFormula,
            T::FORMULA_TOL,
        ),
        witness: SignWitness { u, v, z },
    }
}

/// Induced 2-seminorm `‖P_n M P_m‖₂`.
///
/// Since `M𝟏 = σ𝟏`, `P_n M x` depends on `x` only through `P_m x`, so the
/// maximum over unit `|x|₂ = ‖P_m x‖₂` is the spectral norm of `P_n M P_m`.
pub fn induced_p2<T: Scalar>(m: &EqualRowSumMatrix<T>) -> Result<SeminormValue<T>, SeminormError> {
    let mat = m.matrix();
    let pm = centering::<T>(mat.rows()).apply(mat)?;
    let pmp = centering::<T>(mat.cols()).apply(&pm.transpose())?.transpose();
    let value = spectral_norm(&pmp, eigen_options::<T>())?;
    Ok(SeminormValue::new(
        value,
        SeminormKind::Induced,
        PNorm::Two,
        Method::Eigensolve,
        T::EIGEN_TOL,
    ))
}

/// Sign vectors `sign(m_i − m_j)` for every row pair; these contain the
/// maximizer of the ∞ case.
pub fn row_pair_sign_vectors<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let n = m.rows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let z = sign_vector(m.row(i), m.row(j));
            out.push(z.into_iter().map(|s| T::lit(f64::from(s))).collect());
        }
    }
    out
}

/// Row-pair sign vectors are always tried first when `rows ≤` this.
pub const SIGN_CANDIDATE_MAX_ROWS: usize = 12;

/// Monte-Carlo lower bound on `max |Mx|_p` over `|x|_p = 1`.
///
/// Candidate `k` (0-based) is drawn from its own ChaCha stream `k` under
/// `seed`, with standard normal entries, then scaled to unit vector
/// seminorm; candidates in `span 𝟏` are skipped. For matrices with at most
/// [`SIGN_CANDIDATE_MAX_ROWS`] rows the row-pair sign vectors are evaluated
/// as well. The result is nondecreasing in `trials` for a fixed seed.
pub fn induced_sampling_lower_bound<T: Scalar>(
    m: &EqualRowSumMatrix<T>,
    p: PNorm,
    trials: usize,
    seed: u64,
) -> SeminormValue<T> {
    let mat = m.matrix();
    let cols = mat.cols();
    let degenerate = T::lit(1e-12);
    let eval = |x: &[T]| -> Option<T> {
        let s = vector_seminorm_value(x, p);
        if s <= degenerate {
            return None;
        }
        let y = mat.mul_vec(x).expect("dimension matches");
        Some(vector_seminorm_value(&y, p) / s)
    };

    let mut best = T::zero();
    if mat.rows() <= SIGN_CANDIDATE_MAX_ROWS {
        for z in row_pair_sign_vectors(mat) {
            if let Some(v) = eval(&z) {
                best = best.max(v);
            }
        }
    }
    let mut x = vec![T::zero(); cols];
    for k in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        for xi in x.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut rng);
            *xi = T::lit(g);
        }
        if let Some(v) = eval(&x) {
            best = best.max(v);
        }
    }
    SeminormValue::new(
        best,
        SeminormKind::Induced,
        p,
        Method::SamplingLowerBound,
        T::FORMULA_TOL,
    )
}
