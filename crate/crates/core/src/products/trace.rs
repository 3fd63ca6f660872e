use std::io::Write;

use serde::Serialize;

use super::{advance_deviation, evaluate_deviation, MatrixEnsemble, ProductsError, Schedule};
use crate::matcore::Matrix;
use crate::seminorms::{consensus_shift, vector_seminorm_value, PNorm, Seminorm};
use crate::Scalar;

/// Values are refused as overflow beyond this magnitude.
const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep<T: Scalar> {
    /// 1-based step index `i`.
    pub step: usize,
    /// Ensemble member applied at this step.
    pub member: usize,
    /// Chosen seminorm of the running product `M_i ⋯ M_1`.
    pub product_seminorm: T,
    /// Metric seminorm (same `p`) of the running product.
    pub rank_one_distance: T,
    /// `x_i = M_i x_{i−1}`.
    pub state: Vec<T>,
    /// `r_i = argmin_r ‖x_i − r𝟏‖_p`.
    pub shift: T,
    /// `r_i − r_{i−1}`, accumulated without cancellation against `r_{i−1}`.
    pub shift_increment: T,
    /// `‖e_i‖_p` with `e_i = x_i − 𝟏r_i`.
    pub residual: T,
    /// `|x_i|_p`.
    pub state_seminorm: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationTrace<T: Scalar> {
    pub seminorm: Seminorm,
    pub p: PNorm,
    pub lambda: T,
    pub schedule: Schedule,
    pub initial: Vec<T>,
    /// `|d|_p`.
    pub initial_seminorm: T,
    pub steps: Vec<TraceStep<T>>,
}

fn p_norm<T: Scalar>(x: &[T], p: PNorm) -> T {
    match p {
        PNorm::One => x.iter().map(|v| v.abs()).sum(),
        PNorm::Two => x.iter().map(|&v| v * v).sum::<T>().sqrt(),
        PNorm::Inf => x.iter().fold(T::zero(), |m, v| m.max(v.abs())),
    }
}

fn metric_with_p(p: PNorm) -> Seminorm {
    Seminorm::Metric(p)
}

fn finite_below_limit<T: Scalar>(xs: &[T]) -> bool {
    xs.iter().all(|v| v.is_finite() && v.abs().as_f64() <= OVERFLOW_LIMIT)
}

/// Iterates `x_i = M_i x_{i−1}` from `x_0 = d` for `steps` steps under
/// `schedule`, recording the state, its minimizing shift and residual, and
/// the seminorms of the running product.
pub fn run_product<T: Scalar>(
    ensemble: &MatrixEnsemble<T>,
    schedule: &Schedule,
    steps: usize,
    d: &[T],
) -> Result<SimulationTrace<T>, ProductsError> {
    if steps == 0 {
        return Err(ProductsError::NoSteps);
    }
    let n = ensemble.dim();
    if d.len() != n {
        return Err(ProductsError::InitialLength {
            expected: n,
            actual: d.len(),
        });
    }
    if d.iter().all(|&v| v == T::zero()) {
        return Err(ProductsError::ZeroInitial);
    }
    if !finite_below_limit(d) {
        return Err(ProductsError::Overflow { step: 0 });
    }
    let seminorm = ensemble.seminorm();
    let p = seminorm.p();
    let same_as_metric = seminorm == metric_with_p(p);

    let mut base = consensus_shift(d, p);
    let mut dev: Vec<T> = d.iter().map(|&v| v - base).collect();
    // the empty product I, minus its consensus part 𝟏(𝟏′/n)
    let inv_n = T::one() / T::from_usize_lossy(n);
    let mut prod_dev =
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() - inv_n } else { -inv_n });

    let mut out = Vec::with_capacity(steps);
    for (i, k) in schedule.sequence(ensemble.len())?.take(steps).enumerate() {
        let step = i + 1;
        let m = &ensemble.matrices()[k];

        let moved = m.mul_vec(&dev)?;
        let increment = consensus_shift(&moved, p);
        dev = moved.into_iter().map(|v| v - increment).collect();
        base += increment;

        prod_dev = advance_deviation(m, &prod_dev)?.1;
        if !finite_below_limit(&dev) || !finite_below_limit(prod_dev.as_slice()) {
            return Err(ProductsError::Overflow { step });
        }

        let product_seminorm = evaluate_deviation(seminorm, &prod_dev)?;
        let rank_one_distance = if same_as_metric {
            product_seminorm
        } else {
            evaluate_deviation(metric_with_p(p), &prod_dev)?
        };
        out.push(TraceStep {
            step,
            member: k,
            product_seminorm,
            rank_one_distance,
            state: dev.iter().map(|&v| v + base).collect(),
            shift: base,
            shift_increment: increment,
            residual: p_norm(&dev, p),
            state_seminorm: vector_seminorm_value(&dev, p),
        });
    }
    Ok(SimulationTrace {
        seminorm,
        p,
        lambda: ensemble.lambda(),
        schedule: schedule.clone(),
        initial: d.to_vec(),
        initial_seminorm: vector_seminorm_value(d, p),
        steps: out,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub lambda: f64,
    pub steps: usize,
    /// `|x_i|_p ≤ λ^i |d|_p` held at every recorded step.
    pub envelope_ok: bool,
    pub first_envelope_violation: Option<usize>,
    /// Smallest `K` with `|x_i|_p ≤ K λ^i |d|_p` over the trace.
    pub envelope_constant: f64,
    /// Product seminorm stayed below `λ^i` at every step.
    pub product_envelope_ok: bool,
    pub first_product_violation: Option<usize>,
    /// Smallest `C` with `|r_j − r_i| ≤ C λ^i` for all recorded `i < j`.
    pub cauchy_constant: f64,
    pub passed: bool,
    /// Relative slack allowed on every envelope comparison.
    pub tolerance: f64,
}

/// Checks the λ^i envelopes of a trace and fits the geometric constants.
///
/// Comparisons are done on logarithms so that `λ^i` underflowing to zero
/// does not register as a violation.
pub fn certify_rate<T: Scalar>(trace: &SimulationTrace<T>, lambda: T) -> Result<RateReport, ProductsError> {
    let lam = lambda.as_f64();
    if !(0.0..1.0).contains(&lam) {
        return Err(ProductsError::Refused { lambda: lam });
    }
    let slack = T::FORMULA_TOL;
    let log_lam = lam.ln();
    let log_d = trace.initial_seminorm.as_f64().ln();
    // ln of value / (λ^i · scale), −∞ when value is 0
    let log_ratio = |value: f64, i: usize, log_scale: f64| -> f64 {
        let log_pow = if i == 0 { 0.0 } else { i as f64 * log_lam };
        if value <= 0.0 {
            f64::NEG_INFINITY
        } else if log_pow == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            value.ln() - log_pow - log_scale
        }
    };
    let limit = (1.0 + slack).ln();

    let mut envelope_constant = 0.0f64;
    let mut first_envelope_violation = None;
    let mut first_product_violation = None;
    for s in &trace.steps {
        let r = log_ratio(s.state_seminorm.as_f64(), s.step, log_d);
        envelope_constant = envelope_constant.max(r.exp());
        if r > limit && first_envelope_violation.is_none() {
            first_envelope_violation = Some(s.step);
        }
        let r = log_ratio(s.product_seminorm.as_f64(), s.step, 0.0);
        if r > limit && first_product_violation.is_none() {
            first_product_violation = Some(s.step);
        }
    }
    if trace.initial_seminorm == T::zero() {
        envelope_constant = 0.0;
    }

    // |r_j − r_i| = |Σ_{i<k≤j} increment_k|; index i = 0 is the initial shift
    let inc: Vec<f64> = trace.steps.iter().map(|s| s.shift_increment.as_f64()).collect();
    let mut cauchy_constant = 0.0f64;
    for i in 0..inc.len() {
        let mut partial = 0.0f64;
        let mut worst = 0.0f64;
        for v in &inc[i..] {
            partial += v;
            worst = worst.max(partial.abs());
        }
        if worst > 0.0 {
            cauchy_constant = cauchy_constant.max(log_ratio(worst, i, 0.0).exp());
        }
    }

    let envelope_ok = first_envelope_violation.is_none();
    let product_envelope_ok = first_product_violation.is_none();
    Ok(RateReport {
        lambda: lam,
        steps: trace.steps.len(),
        envelope_ok,
        first_envelope_violation,
        envelope_constant,
        product_envelope_ok,
        first_product_violation,
        cauchy_constant,
        passed: envelope_ok && product_envelope_ok && cauchy_constant.is_finite(),
        tolerance: slack,
    })
}

impl<T: Scalar> SimulationTrace<T> {
    /// CSV with columns `step,product_seminorm,residual,r_i,lambda_pow_i`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "product_seminorm", "residual", "r_i", "lambda_pow_i"])?;
        let lam = self.lambda.as_f64();
        for s in &self.steps {
            w.write_record([
                s.step.to_string(),
                s.product_seminorm.as_f64().to_string(),
                s.residual.as_f64().to_string(),
                s.shift.as_f64().to_string(),
                lam.powi(s.step as i32).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
