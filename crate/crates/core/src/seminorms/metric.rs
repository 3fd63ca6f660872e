use super::{Method, PNorm, SeminormError, SeminormKind, SeminormValue};
use crate::linalg::{spectral_norm, EigenOptions};
use crate::lp::{solve, LinearProgram, LpError, LpStatus, Sense};
use crate::matcore::{centering, Matrix};
use crate::Scalar;

/// The `q = ⌊rows/2⌋` largest and smallest entries of one column.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ColumnSplit {
    pub column: usize,
    pub q: usize,
    pub top_indices: Vec<usize>,
    pub bottom_indices: Vec<usize>,
}

/// Ties are broken toward the lowest row index on both sides.
pub fn column_split<T: Scalar>(m: &Matrix<T>, column: usize) -> ColumnSplit {
    let n = m.rows();
    let q = n / 2;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        m[(a, column)]
            .partial_cmp(&m[(b, column)])
            .expect("finite entries")
            .then(a.cmp(&b))
    });
    let bottom_indices = order[..q].to_vec();
    let mut desc: Vec<usize> = (0..n).collect();
    desc.sort_by(|&a, &b| {
        m[(b, column)]
            .partial_cmp(&m[(a, column)])
            .expect("finite entries")
            .then(a.cmp(&b))
    });
    let mut top_indices = desc[..q].to_vec();
    // with ties the two selections could overlap; the top side then takes
    // the next candidates not already in the bottom set
    if top_indices.iter().any(|i| bottom_indices.contains(i)) {
        top_indices = desc
            .iter()
            .copied()
            .filter(|i| !bottom_indices.contains(i))
            .take(q)
            .collect();
    }
    ColumnSplit {
        column,
        q,
        top_indices,
        bottom_indices,
    }
}

fn split_value<T: Scalar>(m: &Matrix<T>, split: &ColumnSplit) -> T {
    let j = split.column;
    let top: T = split.top_indices.iter().map(|&i| m[(i, j)]).sum();
    let bottom: T = split.bottom_indices.iter().map(|&i| m[(i, j)]).sum();
    top - bottom
}

/// Metric 1-seminorm with the column achieving the maximum.
pub fn metric_p1_split<T: Scalar>(m: &Matrix<T>) -> (T, ColumnSplit) {
    (0..m.cols())
        .map(|j| {
            let s = column_split(m, j);
            (split_value(m, &s), s)
        })
        .fold(None, |best: Option<(T, ColumnSplit)>, cur| match best {
            Some(b) if b.0 >= cur.0 => Some(b),
            _ => Some(cur),
        })
        .expect("matrix has at least one column")
}

/// `|M|₁`: per column, the sum of its `q` largest entries minus the sum of
/// its `q` smallest, maximized over columns.
pub fn metric_p1<T: Scalar>(m: &Matrix<T>) -> SeminormValue<T> {
    let (value, _) = metric_p1_split(m);
    SeminormValue::new(
        value,
        SeminormKind::Metric,
        PNorm::One,
        Method::ExplicitFormula,
        T::FORMULA_TOL,
    )
}

pub(crate) fn eigen_options<T: Scalar>() -> EigenOptions {
    EigenOptions {
        rel_tol: T::EIGEN_TOL,
        ..EigenOptions::default()
    }
}

/// `|M|₂ = ‖PM‖₂ = sqrt(λ_max(M′PM))` with `P` the centering projection.
pub fn metric_p2<T: Scalar>(m: &Matrix<T>) -> Result<SeminormValue<T>, SeminormError> {
    let pm = centering::<T>(m.rows()).apply(m)?;
    let value = spectral_norm(&pm, eigen_options::<T>())?;
    Ok(SeminormValue::new(
        value,
        SeminormKind::Metric,
        PNorm::Two,
        Method::Eigensolve,
        T::EIGEN_TOL,
    ))
}

/// `|M|_∞` and a minimizing row `c`.
///
/// The matrix is centered by its column means and scaled to unit max-abs
/// before the Chebyshev LP
/// `min t  s.t.  −d_ij ≤ m_ij − c_j ≤ d_ij,  Σ_j d_ij ≤ t`
/// is solved. The reported value is `‖M − 𝟏c‖_∞` evaluated directly at the
/// returned `c`, so it is never below the true seminorm by more than
/// rounding.
pub fn metric_pinf_with_shift<T: Scalar>(
    m: &Matrix<T>,
) -> Result<(SeminormValue<T>, Vec<T>), SeminormError> {
    let (n, k) = (m.rows(), m.cols());
    let means = m.column_means();
    let centered = Matrix::from_fn(n, k, |i, j| m[(i, j)] - means[j]);
    let scale = centered.max_abs();
    let wrap = |v: T| {
        SeminormValue::new(v, SeminormKind::Metric, PNorm::Inf, Method::Lp, T::LP_FEAS_TOL)
    };
    if scale == T::zero() || n == 1 {
        return Ok((wrap(T::zero()), means));
    }
    let a = centered.scale(T::one() / scale);

    // variables: c_0..c_{k-1} (free), d_ij at k + i*k + j (≥ 0), t last
    let nv = k + n * k + 1;
    let t_idx = nv - 1;
    let mut objective = vec![T::zero(); nv];
    objective[t_idx] = T::one();
    let mut lp = LinearProgram::minimize(objective);
    for j in 0..k {
        lp.free(j);
    }
    for i in 0..n {
        for j in 0..k {
            let d = k + i * k + j;
            // m_ij − c_j ≤ d_ij   ⇔   −c_j − d_ij ≤ −m_ij
            let mut row = vec![T::zero(); nv];
            row[j] = -T::one();
            row[d] = -T::one();
            lp.constrain(row, Sense::Le, -a[(i, j)]);
            // c_j − m_ij ≤ d_ij   ⇔   c_j − d_ij ≤ m_ij
            let mut row = vec![T::zero(); nv];
            row[j] = T::one();
            row[d] = -T::one();
            lp.constrain(row, Sense::Le, a[(i, j)]);
        }
        let mut row = vec![T::zero(); nv];
        for j in 0..k {
            row[k + i * k + j] = T::one();
        }
        row[t_idx] = -T::one();
        lp.constrain(row, Sense::Le, T::zero());
    }
    let out = solve(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(LpError::Status(out.status).into());
    }
    let c: Vec<T> = (0..k).map(|j| means[j] + scale * out.primal[j]).collect();
    let value = m.sub(&Matrix::consensus(n, &c))?.norm_inf();
    Ok((wrap(value), c))
}

pub fn metric_pinf<T: Scalar>(m: &Matrix<T>) -> Result<SeminormValue<T>, SeminormError> {
    metric_pinf_with_shift(m).map(|(v, _)| v)
}

/// `½ max_{i,j} Σ_k |m_ik − m_jk|` and a maximizing row pair.
pub fn ergodicity_with_pair<T: Scalar>(m: &Matrix<T>) -> (T, usize, usize) {
    let n = m.rows();
    let mut best = (T::zero(), 0, 0);
    for u in 0..n {
        for v in u + 1..n {
            let d: T = m
                .row(u)
                .iter()
                .zip(m.row(v))
                .map(|(&a, &b)| (a - b).abs())
                .sum();
            if d > best.0 {
                best = (d, u, v);
            }
        }
    }
    (best.0 / T::lit(2.0), best.1, best.2)
}

/// Coefficient of ergodicity (Dobrushin coefficient); defined for any real
/// matrix.
pub fn ergodicity_coefficient<T: Scalar>(m: &Matrix<T>) -> SeminormValue<T> {
    let (value, _, _) = ergodicity_with_pair(m);
    SeminormValue::new(
        value,
        SeminormKind::Ergodicity,
        PNorm::Inf,
        Method::ExplicitFormula,
        T::FORMULA_TOL,
    )
}
