//! Consensus seminorms of matrices, checkable contraction certificates and
//! simulation of infinite stochastic matrix products.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`, or to `f32` for the `*32` forms.
//!
//! ```
//! use seminorm_core::{certify, seminorms, Matrix64};
//!
//! let s: Matrix64 = certify::counterexample_matrix();
//! let tau = seminorms::ergodicity_coefficient(&s).value;
//! let metric = seminorms::metric_pinf(&s).unwrap().value;
//! assert!((tau - 2.0 / 3.0).abs() < 1e-12);
//! assert!((metric - 1.0).abs() < 1e-7);
//! ```

pub mod certify;
pub mod linalg;
pub mod lp;
pub mod matcore;
pub mod products;
pub mod random;
mod scalar;
pub mod seminorms;

pub use matcore::{EqualRowSumMatrix, Matrix, MatrixError, StochasticMatrix};
pub use scalar::Scalar;
pub use seminorms::{PNorm, Seminorm, SeminormValue};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type StochasticMatrix64 = StochasticMatrix<f64>;
pub type StochasticMatrix32 = StochasticMatrix<f32>;
pub type EqualRowSumMatrix64 = EqualRowSumMatrix<f64>;
pub type EqualRowSumMatrix32 = EqualRowSumMatrix<f32>;
pub type SeminormValue64 = SeminormValue<f64>;
pub type ContractionCertificate64 = certify::ContractionCertificate<f64>;
pub type MatrixEnsemble64 = products::MatrixEnsemble<f64>;
pub type SimulationTrace64 = products::SimulationTrace<f64>;
