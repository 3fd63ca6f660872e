//! A scrambling 6×6 stochastic matrix whose metric ∞-seminorm is exactly 1,
//! so contraction in the coefficient of ergodicity does not imply contraction
//! in the metric seminorm.

use serde::Serialize;

use super::{classify, contraction_system};
use crate::lp::{strict_feasibility, StrictFeasibilityResult};
use crate::matcore::{validate_stochastic, Matrix};
use crate::seminorms::{ergodicity_coefficient, metric_pinf};
use crate::Scalar;

const PATTERN: [[u8; 6]; 6] = [
    [1, 0, 0, 1, 0, 1],
    [1, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 1],
    [0, 1, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 1],
];

/// Each row has three entries equal to 1/3.
pub fn counterexample_matrix<T: Scalar>() -> Matrix<T> {
    let third = T::one() / T::lit(3.0);
    Matrix::from_fn(6, 6, |i, j| {
        if PATTERN[i][j] == 1 {
            third
        } else {
            T::zero()
        }
    })
}

/// The nonnegative `x` with `x′(𝟏𝟏′ − 6S) = 0`: rows 2 through 5 of the
/// pattern cover every column exactly twice.
pub fn counterexample_farkas<T: Scalar>() -> Vec<T> {
    [0.0, 1.0, 1.0, 1.0, 1.0, 0.0].into_iter().map(T::lit).collect()
}

/// Adds `eps` to every zero entry and renormalizes the rows.
pub fn perturb_to_positive<T: Scalar>(m: &Matrix<T>, eps: T) -> Matrix<T> {
    let bumped = m.map(|v| if v == T::zero() { eps } else { v });
    let sums = crate::matcore::row_sums(&bumped);
    Matrix::from_fn(m.rows(), m.cols(), |i, j| bumped[(i, j)] / sums[i])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleOptions {
    /// Perturb the zero entries by this amount before checking.
    pub perturb: Option<f64>,
    /// Step 3 asserts `τ(S)` is below this.
    pub tau_threshold: f64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self {
            perturb: None,
            tau_threshold: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub options: CounterexampleOptions,
    pub matrix: Matrix<f64>,
    /// Steps actually run; checking stops at the first failure.
    pub steps: Vec<StepReport>,
    pub passed: bool,
    pub failed_step: Option<usize>,
    pub ergodicity: Option<f64>,
    pub metric_inf: Option<f64>,
    pub farkas_x: Option<Vec<f64>>,
}

pub const STEP_NAMES: [&str; 5] = [
    "stochastic",
    "scrambling",
    "ergodicity coefficient below threshold",
    "strict feasibility infeasible with known Farkas vector",
    "metric inf-seminorm equals one",
];

pub fn verify_counterexample(options: CounterexampleOptions) -> CounterexampleReport {
    let mut s = counterexample_matrix::<f64>();
    if let Some(eps) = options.perturb {
        s = perturb_to_positive(&s, eps);
    }
    let mut report = CounterexampleReport {
        options,
        matrix: s.clone(),
        steps: Vec::new(),
        passed: false,
        failed_step: None,
        ergodicity: None,
        metric_inf: None,
        farkas_x: None,
    };
    let record = |report: &mut CounterexampleReport, passed: bool, detail: String| {
        let step = report.steps.len() + 1;
        report.steps.push(StepReport {
            step,
            name: STEP_NAMES[step - 1],
            passed,
            detail,
        });
        if !passed {
            report.failed_step = Some(step);
        }
        passed
    };

    // 1
    let sto = match validate_stochastic(s.clone(), 1e-12) {
        Ok(sto) => {
            record(&mut report, true, "nonnegative, rows sum to 1".into());
            sto
        }
        Err(e) => {
            record(&mut report, false, e.to_string());
            return report;
        }
    };

    // 2
    let class = classify(&sto);
    if !record(
        &mut report,
        class.scrambling,
        format!("scrambling = {}", class.scrambling),
    ) {
        return report;
    }

    // 3
    let tau = ergodicity_coefficient(&s).value;
    report.ergodicity = Some(tau);
    if !record(
        &mut report,
        tau < options.tau_threshold,
        format!("tau = {tau} (threshold {})", options.tau_threshold),
    ) {
        return report;
    }

    // 4
    let a = contraction_system(&s);
    let step4 = strict_feasibility(&a).map_err(|e| e.to_string()).and_then(|r| {
        if r.feasible {
            return Err(format!("system is strictly feasible (margin {})", r.margin));
        }
        let x = r.farkas_x.expect("infeasible result carries x");
        let known = counterexample_farkas::<f64>();
        StrictFeasibilityResult::from_alternative(&a, known.clone())
            .map_err(|e| format!("known vector is not a Farkas certificate: {e}"))?;
        let diff = x
            .iter()
            .zip(&known)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        if diff > 1e-8 {
            return Err(format!("solver certificate {x:?} differs from the known vector by {diff}"));
        }
        Ok(x)
    });
    match step4 {
        Ok(x) => {
            report.farkas_x = Some(x.clone());
            record(&mut report, true, format!("infeasible, x = {x:?}"));
        }
        Err(detail) => {
            record(&mut report, false, detail);
            return report;
        }
    }

    // 5
    match metric_pinf(&s) {
        Ok(v) => {
            report.metric_inf = Some(v.value);
            let ok = (v.value - 1.0).abs() <= 1e-7;
            if !record(&mut report, ok, format!("|S|_inf = {}", v.value)) {
                return report;
            }
        }
        Err(e) => {
            record(&mut report, false, e.to_string());
            return report;
        }
    }
    report.passed = true;
    report
}
