//! Matrix classification and per-step contraction certificates.

mod counterexample;

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::lp::{strict_feasibility, LpError, StrictFeasibilityResult};
use crate::matcore::{pattern, EqualRowSumMatrix, Matrix, MatrixError, StochasticMatrix};
use crate::seminorms::{
    induced_pinf, metric_pinf, vector_seminorm_value, PNorm, Seminorm, SeminormError,
};
use crate::Scalar;

pub use counterexample::{
    counterexample_farkas, counterexample_matrix, perturb_to_positive, verify_counterexample,
    CounterexampleOptions, CounterexampleReport, StepReport,
};

/// A seminorm value counts as contractive when it is below `1 − this`.
pub const CONTRACTIVE_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("LP verdict (strictly feasible = {feasible}) disagrees with metric ∞-seminorm {value}")]
    Inconsistent { feasible: bool, value: f64 },
    #[error("certificate failed re-verification: {0}")]
    Verification(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixClassReport {
    pub stochastic: bool,
    pub doubly_stochastic: bool,
    /// No two rows are orthogonal.
    pub scrambling: bool,
    /// Some column is strictly positive.
    pub positive_column: bool,
    pub positive_diagonal: bool,
    /// Some vertex reaches every vertex along arcs `i → j` with `s_ij > 0`.
    pub rooted: bool,
}

pub fn classify<T: Scalar>(s: &StochasticMatrix<T>) -> MatrixClassReport {
    let m = s.matrix();
    let pat = pattern(m, T::zero());
    let n = m.rows();
    let scrambling = (0..n).all(|i| (i + 1..n).all(|j| pat.rows_overlap(i, j)));
    let positive_column = (0..m.cols()).any(|j| (0..n).all(|i| pat.get(i, j)));
    let positive_diagonal = m.is_square() && (0..n).all(|i| pat.get(i, i));
    let rooted = m.is_square() && (0..n).any(|r| reaches_all(&pat, r));
    MatrixClassReport {
        stochastic: true,
        doubly_stochastic: s.is_doubly_stochastic(),
        scrambling,
        positive_column,
        positive_diagonal,
        rooted,
    }
}

fn reaches_all(pat: &crate::matcore::PatternMatrix, root: usize) -> bool {
    let n = pat.rows();
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        for j in pat.support(i) {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// `𝟏𝟏′ − 2[[S]]`: `−1` on the support of `S`, `+1` elsewhere.
pub fn contraction_system<T: Scalar>(s: &Matrix<T>) -> Matrix<T> {
    let pat = pattern(s, T::zero());
    Matrix::from_fn(s.rows(), s.cols(), |i, j| {
        if pat.get(i, j) {
            -T::one()
        } else {
            T::one()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness<T: Scalar> {
    /// `y ≥ 0` with `(𝟏𝟏′ − 2[[S]]) y ≤ −margin·𝟏`: proves `|S|_∞ < 1`.
    StrictlyFeasible { y: Vec<T>, margin: T },
    /// `x ≥ 0, x ≠ 0` with `x′(𝟏𝟏′ − 2[[S]]) ≥ 0`: proves `|S|_∞ = 1`.
    Farkas { x: Vec<T> },
    /// Row pair and sign vector attaining the coefficient of ergodicity.
    SignVector { u: usize, v: usize, z: Vec<i8> },
}

impl<T: Scalar> Witness<T> {
    pub fn from_strict(r: &StrictFeasibilityResult<T>) -> Self {
        match (&r.witness_y, &r.farkas_x) {
            (Some(y), _) => Witness::StrictlyFeasible {
                y: y.clone(),
                margin: r.margin,
            },
            (None, Some(x)) => Witness::Farkas { x: x.clone() },
            (None, None) => unreachable!("strict feasibility result always carries a certificate"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionCertificate<T: Scalar> {
    pub seminorm: Seminorm,
    pub value: T,
    pub contractive: bool,
    pub tolerance: T,
    pub witness: Option<Witness<T>>,
}

impl<T: Scalar> ContractionCertificate<T> {
    /// Re-checks the verdict and the attached witness against `m` by direct
    /// arithmetic.
    pub fn verify(&self, m: &Matrix<T>) -> Result<(), CertifyError> {
        let fail = |msg: String| Err(CertifyError::Verification(msg));
        let expect = self.value < T::one() - self.tolerance;
        if expect != self.contractive {
            return fail(format!(
                "value {} inconsistent with contractive = {}",
                self.value.as_f64(),
                self.contractive
            ));
        }
        match &self.witness {
            None => Ok(()),
            Some(Witness::StrictlyFeasible { y, .. }) => {
                if !self.contractive {
                    return fail("feasible witness attached to a non-contractive verdict".into());
                }
                StrictFeasibilityResult::from_solution(&contraction_system(m), y.clone())?;
                Ok(())
            }
            Some(Witness::Farkas { x }) => {
                if self.contractive {
                    return fail("Farkas witness attached to a contractive verdict".into());
                }
                StrictFeasibilityResult::from_alternative(&contraction_system(m), x.clone())?;
                Ok(())
            }
            Some(Witness::SignVector { u, v, z }) => {
                if z.len() != m.cols() || *u >= m.rows() || *v >= m.rows() {
                    return fail("sign vector has the wrong shape".into());
                }
                let zf: Vec<T> = z.iter().map(|&s| T::lit(f64::from(s))).collect();
                let mz = m.mul_vec(&zf)?;
                let attained = vector_seminorm_value(&mz, PNorm::Inf);
                let pair = (mz[*u] - mz[*v]).abs() / T::lit(2.0);
                let tol = T::lit(T::FORMULA_TOL) * (T::one() + self.value);
                if (pair - self.value).abs() > tol || attained + tol < self.value {
                    return fail(format!(
                        "sign vector attains {} but value is {}",
                        pair.as_f64(),
                        self.value.as_f64()
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Certifies `|S|_∞ < 1` (or its failure) through the strict feasibility of
/// `(𝟏𝟏′ − 2[[S]]) y < 0`, cross-checked against the LP value of `|S|_∞`.
pub fn certify_metric_inf<T: Scalar>(
    s: &StochasticMatrix<T>,
) -> Result<ContractionCertificate<T>, CertifyError> {
    let m = s.matrix();
    let verdict = strict_feasibility(&contraction_system(m))?;
    let value = metric_pinf(m)?.value;
    let tol = T::lit(CONTRACTIVE_TOL);
    if verdict.feasible != (value < T::one() - tol) {
        return Err(CertifyError::Inconsistent {
            feasible: verdict.feasible,
            value: value.as_f64(),
        });
    }
    let cert = ContractionCertificate {
        seminorm: Seminorm::Metric(PNorm::Inf),
        value,
        contractive: verdict.feasible,
        tolerance: tol,
        witness: Some(Witness::from_strict(&verdict)),
    };
    cert.verify(m)?;
    Ok(cert)
}

/// Certifies the induced ∞-seminorm (coefficient of ergodicity) with its
/// maximizing sign vector.
pub fn certify_induced_inf<T: Scalar>(
    m: &EqualRowSumMatrix<T>,
) -> Result<ContractionCertificate<T>, CertifyError> {
    let r = induced_pinf(m);
    let tol = T::lit(CONTRACTIVE_TOL);
    let value = r.value.value;
    let cert = ContractionCertificate {
        seminorm: Seminorm::Induced(PNorm::Inf),
        value,
        contractive: value < T::one() - tol,
        tolerance: tol,
        witness: Some(Witness::SignVector {
            u: r.witness.u,
            v: r.witness.v,
            z: r.witness.z,
        }),
    };
    cert.verify(m.matrix())?;
    Ok(cert)
}

/// Serialized as `{class, certificates, witnesses}`; each certificate refers
/// to its witness by index into `witnesses`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport<T: Scalar> {
    pub class: Option<MatrixClassReport>,
    pub certificates: Vec<CertificateEntry<T>>,
    pub witnesses: Vec<Witness<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateEntry<T: Scalar> {
    pub seminorm: Seminorm,
    pub value: T,
    pub contractive: bool,
    pub tolerance: T,
    pub witness: Option<usize>,
}

impl<T: Scalar> CertificationReport<T> {
    pub fn new(class: Option<MatrixClassReport>) -> Self {
        Self {
            class,
            certificates: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn push(&mut self, cert: ContractionCertificate<T>) {
        let witness = cert.witness.map(|w| {
            self.witnesses.push(w);
            self.witnesses.len() - 1
        });
        self.certificates.push(CertificateEntry {
            seminorm: cert.seminorm,
            value: cert.value,
            contractive: cert.contractive,
            tolerance: cert.tolerance,
            witness,
        });
    }

    pub fn all_contractive(&self) -> bool {
        self.certificates.iter().all(|c| c.contractive)
    }
}
