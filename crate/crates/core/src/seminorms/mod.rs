//! Vector and matrix consensus seminorms.
//!
//! Metric seminorms measure the distance `min_c ‖M − 𝟏c‖_p` to the nearest
//! matrix with identical rows. Induced seminorms are the operator bound
//! `max |Mx|_p` over vectors with unit vector seminorm, defined only for
//! matrices with equal row sums. For `p = ∞` the induced seminorm is the
//! coefficient of ergodicity.

mod induced;
mod metric;
mod vector;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::EigenError;
use crate::lp::LpError;
use crate::matcore::{EqualRowSumMatrix, Matrix, MatrixError};
use crate::Scalar;

pub use induced::{
    induced_p2, induced_pinf, induced_sampling_lower_bound, row_pair_sign_vectors,
    InducedInfValue, SignWitness,
};
pub use metric::{
    column_split, ergodicity_coefficient, ergodicity_with_pair, metric_p1, metric_p1_split,
    metric_p2, metric_pinf, metric_pinf_with_shift, ColumnSplit,
};
pub use vector::{consensus_shift, vector_seminorm, vector_seminorm_value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeminormError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{0} has no exact evaluation")]
    Unsupported(Seminorm),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PNorm {
    One,
    Two,
    Inf,
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PNorm::One => "1",
            PNorm::Two => "2",
            PNorm::Inf => "inf",
        })
    }
}

impl FromStr for PNorm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(PNorm::One),
            "2" => Ok(PNorm::Two),
            "inf" | "infinity" | "∞" => Ok(PNorm::Inf),
            other => Err(format!("unknown p {other:?} (expected 1, 2 or inf)")),
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormKind {
    Metric,
    Induced,
    Ergodicity,
    Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExplicitFormula,
    Lp,
    Eigensolve,
    /// The value is a certified lower bound, not an exact evaluation.
    SamplingLowerBound,
}

/// A computed seminorm together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormValue<T: Scalar> {
    pub value: T,
    pub kind: SeminormKind,
    pub p: PNorm,
    pub method: Method,
    pub tolerance: T,
}

impl<T: Scalar> SeminormValue<T> {
    fn new(value: T, kind: SeminormKind, p: PNorm, method: Method, tolerance: f64) -> Self {
        debug_assert!(value >= T::zero() || value.is_nan());
        Self {
            value: value.max(T::zero()),
            kind,
            p,
            method,
            tolerance: T::lit(tolerance),
        }
    }

    pub fn is_lower_bound(&self) -> bool {
        self.method == Method::SamplingLowerBound
    }
}

/// A matrix seminorm selectable at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Seminorm {
    Metric(PNorm),
    Induced(PNorm),
    /// Coefficient of ergodicity; defined for every matrix.
    Ergodicity,
}

impl Seminorm {
    /// The vector seminorm paired with this matrix seminorm.
    pub fn p(&self) -> PNorm {
        match self {
            Seminorm::Metric(p) | Seminorm::Induced(p) => *p,
            Seminorm::Ergodicity => PNorm::Inf,
        }
    }

    pub fn requires_equal_row_sums(&self) -> bool {
        matches!(self, Seminorm::Induced(_))
    }

    pub fn evaluate<T: Scalar>(&self, m: &Matrix<T>) -> Result<SeminormValue<T>, SeminormError> {
        match *self {
            Seminorm::Metric(PNorm::One) => Ok(metric_p1(m)),
            Seminorm::Metric(PNorm::Two) => metric_p2(m),
            Seminorm::Metric(PNorm::Inf) => metric_pinf(m),
            Seminorm::Ergodicity => Ok(ergodicity_coefficient(m)),
            Seminorm::Induced(p) => {
                let e = EqualRowSumMatrix::try_from_matrix(m.clone())?;
                self.evaluate_equal_row_sum(&e, p)
            }
        }
    }

    /// Like [`evaluate`](Self::evaluate), skipping the row-sum check for
    /// matrices already validated.
    pub fn evaluate_checked<T: Scalar>(
        &self,
        m: &EqualRowSumMatrix<T>,
    ) -> Result<SeminormValue<T>, SeminormError> {
        match *self {
            Seminorm::Induced(p) => self.evaluate_equal_row_sum(m, p),
            _ => self.evaluate(m.matrix()),
        }
    }

    fn evaluate_equal_row_sum<T: Scalar>(
        &self,
        m: &EqualRowSumMatrix<T>,
        p: PNorm,
    ) -> Result<SeminormValue<T>, SeminormError> {
        match p {
            PNorm::Inf => Ok(induced_pinf(m).value),
            PNorm::Two => induced_p2(m),
            PNorm::One => Err(SeminormError::Unsupported(*self)),
        }
    }
}

impl fmt::Display for Seminorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seminorm::Metric(p) => write!(f, "metric-{p}"),
            Seminorm::Induced(p) => write!(f, "induced-{p}"),
            Seminorm::Ergodicity => f.write_str("coe"),
        }
    }
}

impl FromStr for Seminorm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        if s == "coe" || s == "ergodicity" {
            return Ok(Seminorm::Ergodicity);
        }
        let (kind, p) = s
            .split_once('-')
            .ok_or_else(|| format!("unknown seminorm {s:?} (expected e.g. metric-inf, induced-2, coe)"))?;
        let p: PNorm = p.parse()?;
        match kind {
            "metric" => Ok(Seminorm::Metric(p)),
            "induced" => Ok(Seminorm::Induced(p)),
            other => Err(format!("unknown seminorm family {other:?}")),
        }
    }
}

impl Serialize for Seminorm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
