//! Independent reference computations shared by the integration tests. None
//! of these call into the library's seminorm code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use seminorm_core::Matrix64;

pub fn to_na(m: &Matrix64) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn singular_values_desc(m: &Matrix64) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// `min_c Σ_i |m_ij − c|` per column is attained at a median.
pub fn metric_p1_median(m: &Matrix64) -> f64 {
    (0..m.cols())
        .map(|j| {
            let mut col = m.column(j);
            col.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let med = col[col.len() / 2];
            col.iter().map(|v| (v - med).abs()).sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Nelder–Mead with dimension-adapted coefficients, restarted from the best
/// vertex until a restart no longer improves.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: &[f64], scale: f64) -> (Vec<f64>, f64) {
    let k = start.len();
    let kf = k as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / kf, 0.75 - 1.0 / (2.0 * kf), 1.0 - 1.0 / kf);
    let mut best = start.to_vec();
    let mut best_f = f(&best);
    let mut step = scale;
    for _restart in 0..50 {
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best.clone(), best_f)];
        for i in 0..k {
            let mut v = best.clone();
            v[i] += step;
            let fv = f(&v);
            simplex.push((v, fv));
        }
        for _ in 0..4000 * k.max(1) {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            if simplex[k].1 - simplex[0].1 <= 1e-15 * (1.0 + simplex[0].1.abs()) {
                break;
            }
            let centroid: Vec<f64> = (0..k)
                .map(|d| simplex[..k].iter().map(|v| v.0[d]).sum::<f64>() / kf)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                (0..k).map(|d| centroid[d] + t * (simplex[k].0[d] - centroid[d])).collect()
            };
            let xr = along(-alpha);
            let fr = f(&xr);
            if fr < simplex[0].1 {
                let xe = along(-alpha * gamma);
                let fe = f(&xe);
                simplex[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[k - 1].1 {
                simplex[k] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[k].1 {
                    let x = along(-rho);
                    let fx = f(&x);
                    (x, fx)
                } else {
                    let x = along(rho);
                    let fx = f(&x);
                    (x, fx)
                };
                if fc < simplex[k].1.min(fr) {
                    simplex[k] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for v in simplex.iter_mut().skip(1) {
                        for (e, o) in v.0.iter_mut().zip(&x0) {
                            *e = o + sigma * (*e - o);
                        }
                        v.1 = f(&v.0);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let improved = best_f - simplex[0].1;
        best = simplex[0].0.clone();
        best_f = simplex[0].1;
        step = (step * 0.1).max(1e-9);
        if improved <= 1e-14 && step < 1e-6 {
            break;
        }
    }
    (best, best_f)
}

/// `min_c ‖M − 𝟏c‖₂` by derivative-free descent from `c = 0`.
pub fn metric_p2_descent(m: &Matrix64) -> f64 {
    let a = to_na(m);
    let (n, k) = (m.rows(), m.cols());
    let f = |c: &[f64]| {
        let shifted = DMatrix::from_fn(n, k, |i, j| a[(i, j)] - c[j]);
        spectral_norm(&shifted)
    };
    let scale = m.max_abs().max(1e-3);
    nelder_mead(f, &vec![0.0; k], scale).1
}

/// `min_c max_i Σ_j |m_ij − c_j|` by a zooming grid over the box spanned by
/// the column ranges (the objective is convex and piecewise linear).
pub fn metric_pinf_grid(m: &Matrix64) -> f64 {
    let (n, k) = (m.rows(), m.cols());
    let f = |c: &[f64]| {
        (0..n)
            .map(|i| (0..k).map(|j| (m[(i, j)] - c[j]).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut lo: Vec<f64> = (0..k).map(|j| m.column(j).into_iter().fold(f64::INFINITY, f64::min)).collect();
    let mut hi: Vec<f64> = (0..k).map(|j| m.column(j).into_iter().fold(f64::NEG_INFINITY, f64::max)).collect();
    let points = 24usize;
    let mut best = (f64::INFINITY, vec![0.0; k]);
    for _level in 0..30 {
        let total = (points + 1).pow(k as u32);
        let mut c = vec![0.0; k];
        for idx in 0..total {
            let mut r = idx;
            for j in 0..k {
                let t = (r % (points + 1)) as f64 / points as f64;
                r /= points + 1;
                c[j] = lo[j] + t * (hi[j] - lo[j]);
            }
            let v = f(&c);
            if v < best.0 {
                best = (v, c.clone());
            }
        }
        for j in 0..k {
            let cell = (hi[j] - lo[j]) / points as f64;
            lo[j] = best.1[j] - 3.0 * cell;
            hi[j] = best.1[j] + 3.0 * cell;
        }
    }
    best.0
}

/// `½ max_{i,j} Σ_k |m_ik − m_jk|` written out directly.
pub fn ergodicity_direct(m: &Matrix64) -> f64 {
    let mut best = 0.0f64;
    for i in 0..m.rows() {
        for j in 0..m.rows() {
            let s: f64 = (0..m.cols()).map(|k| (m[(i, k)] - m[(j, k)]).abs()).sum();
            best = best.max(s / 2.0);
        }
    }
    best
}
