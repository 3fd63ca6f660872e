//! Small dense linear programming engine.
//!
//! [`solve`] handles general bounded LPs with a two-phase tableau simplex;
//! [`strict_feasibility`] decides whether a homogeneous system `A y < 0`
//! has a nonnegative solution and always returns a checkable certificate.

mod feasibility;
mod simplex;

use thiserror::Error;

use crate::Scalar;

pub use feasibility::{strict_feasibility, StrictFeasibilityResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Shape(String),
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InconsistentBounds { var: usize, lower: f64, upper: f64 },
    #[error("simplex iteration cap reached after {iterations} pivots (basis {basis:?})")]
    IterationLimit { iterations: usize, basis: Vec<usize> },
    #[error("certificate failed re-verification: {0}")]
    Certificate(String),
    #[error("unexpected LP status {0:?}")]
    Status(LpStatus),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

/// `min` (or `max`) `objective′x` subject to the constraints and per-variable
/// bounds. Bounds default to `[0, ∞)`; infinite values are allowed on either
/// side.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    maximize: bool,
    constraints: Vec<Constraint<T>>,
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn minimize(objective: Vec<T>) -> Self {
        let n = objective.len();
        Self {
            objective,
            maximize: false,
            constraints: Vec::new(),
            lower: vec![T::zero(); n],
            upper: vec![T::infinity(); n],
        }
    }

    pub fn maximize(objective: Vec<T>) -> Self {
        Self {
            maximize: true,
            ..Self::minimize(objective)
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, sense: Sense, rhs: T) -> &mut Self {
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn bound(&mut self, var: usize, lower: T, upper: T) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bound(var, T::neg_infinity(), T::infinity())
    }

    pub fn bounds(&self, var: usize) -> (T, T) {
        (self.lower[var], self.upper[var])
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if n == 0 {
            return Err(LpError::Shape("no variables".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Shape("objective has non-finite entries".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Shape(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
            if c.coeffs.iter().any(|a| !a.is_finite()) || !c.rhs.is_finite() {
                return Err(LpError::Shape(format!("constraint {i} has non-finite data")));
            }
        }
        for j in 0..n {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == T::infinity() || hi == T::neg_infinity()
            {
                return Err(LpError::InconsistentBounds {
                    var: j,
                    lower: lo.as_f64(),
                    upper: hi.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// `a_i′x` for constraint `i`.
    pub fn row_activity(&self, i: usize, x: &[T]) -> T {
        self.constraints[i]
            .coeffs
            .iter()
            .zip(x)
            .map(|(&a, &v)| a * v)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    /// Values of the original variables (empty when infeasible).
    pub primal: Vec<T>,
    /// One multiplier per user constraint, in the user's objective sense:
    /// `∂ objective / ∂ rhs_i`.
    pub duals: Vec<T>,
    pub objective: T,
    /// When infeasible: multipliers `u` on the user constraints from phase 1
    /// with `u′A ≤ 0` along every feasible direction of the variable bounds
    /// and `u′b > 0`.
    pub farkas: Option<Vec<T>>,
    /// Phase-1 sum of artificials left at termination.
    pub infeasibility: T,
    pub iterations: usize,
}

impl<T: Scalar> LpOutcome<T> {
    /// Largest violation of any constraint or bound by `primal`.
    pub fn max_violation(&self, lp: &LinearProgram<T>) -> T {
        let mut worst = T::zero();
        for (i, c) in lp.constraints.iter().enumerate() {
            let act = lp.row_activity(i, &self.primal);
            let v = match c.sense {
                Sense::Le => act - c.rhs,
                Sense::Ge => c.rhs - act,
                Sense::Eq => (act - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &x) in self.primal.iter().enumerate() {
            worst = worst.max(lp.lower[j] - x).max(x - lp.upper[j]);
        }
        worst
    }

    /// `max_i |y_i (a_i′x − b_i)|`.
    pub fn complementary_slackness_gap(&self, lp: &LinearProgram<T>) -> T {
        lp.constraints
            .iter()
            .enumerate()
            .zip(&self.duals)
            .map(|((i, c), &y)| (y * (lp.row_activity(i, &self.primal) - c.rhs)).abs())
            .fold(T::zero(), T::max)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub pivot_tol: f64,
    pub feas_tol: f64,
}

impl SolverOptions {
    pub fn for_scalar<T: Scalar>() -> Self {
        Self {
            max_iterations: 50_000,
            pivot_tol: T::PIVOT_TOL,
            feas_tol: T::LP_FEAS_TOL,
        }
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self::for_scalar::<f64>()
    }
}

pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>, LpError> {
    simplex::solve(lp, &SolverOptions::for_scalar::<T>())
}

pub fn solve_with<T: Scalar>(
    lp: &LinearProgram<T>,
    opts: &SolverOptions,
) -> Result<LpOutcome<T>, LpError> {
    simplex::solve(lp, opts)
}
