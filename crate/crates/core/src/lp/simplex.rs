//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! The user problem is rewritten in standard form `A u = b, u ≥ 0, b ≥ 0`:
//! finite lower bounds are shifted out, variables bounded only above are
//! reflected, free variables are split, finite upper bounds become extra
//! `≤` rows. Every row starts with an identity column (a slack for `≤`
//! rows, an artificial otherwise), so `B⁻¹` can be read off the tableau at
//! any time and the duals are `c_B′B⁻¹`.

use super::{LinearProgram, LpError, LpOutcome, LpStatus, Sense, SolverOptions};
use crate::Scalar;

struct VarMap<T> {
    offset: T,
    cols: Vec<(usize, T)>,
}

struct Row<T> {
    coeffs: Vec<T>,
    sense: Sense,
    rhs: T,
}

struct Tableau<T> {
    rows: usize,
    width: usize,
    data: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.data[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> T {
        self.data[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.at(r, c);
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<T> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f == T::zero() {
                continue;
            }
            for (v, &pr) in self.data[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.data[i * w + c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// `c_B′ B⁻¹`, reading `B⁻¹` from the initial identity columns.
    fn duals(&self, cost: &[T], identity_cols: &[usize]) -> Vec<T> {
        identity_cols
            .iter()
            .map(|&col| {
                (0..self.rows)
                    .map(|k| cost[self.basis[k]] * self.at(k, col))
                    .sum()
            })
            .collect()
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

fn run_simplex<T: Scalar>(
    tab: &mut Tableau<T>,
    cost: &[T],
    allowed: &[bool],
    opts: &SolverOptions,
    iterations: &mut usize,
) -> Result<Phase, LpError> {
    let cost_tol = T::lit(opts.pivot_tol);
    let pivot_tol = T::lit(opts.pivot_tol);
    let ncols = tab.width - 1;
    let mut in_basis = vec![false; ncols];
    for &b in &tab.basis {
        in_basis[b] = true;
    }
    loop {
        if *iterations >= opts.max_iterations {
            return Err(LpError::IterationLimit {
                iterations: *iterations,
                basis: tab.basis.clone(),
            });
        }
        // Bland: lowest-index improving column
        let entering = (0..ncols).find(|&j| {
            if !allowed[j] || in_basis[j] {
                return false;
            }
            let z: T = (0..tab.rows).map(|i| cost[tab.basis[i]] * tab.at(i, j)).sum();
            cost[j] - z < -cost_tol
        });
        let Some(j) = entering else {
            return Ok(Phase::Optimal);
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..tab.rows {
            let a = tab.at(i, j);
            if a <= pivot_tol {
                continue;
            }
            let ratio = tab.rhs(i).max(T::zero()) / a;
            leave = match leave {
                None => Some((i, ratio)),
                Some((r, best)) => {
                    let tie = (ratio - best).abs() <= pivot_tol * (T::one() + best.abs());
                    if ratio < best && !tie || tie && tab.basis[i] < tab.basis[r] {
                        Some((i, ratio))
                    } else {
                        Some((r, best))
                    }
                }
            };
        }
        let Some((r, _)) = leave else {
            return Ok(Phase::Unbounded);
        };
        in_basis[tab.basis[r]] = false;
        tab.pivot(r, j);
        in_basis[j] = true;
        *iterations += 1;
        let w = tab.width;
        for i in 0..tab.rows {
            let v = &mut tab.data[i * w + w - 1];
            if *v < T::zero() && *v > -pivot_tol {
                *v = T::zero();
            }
        }
    }
}

pub(super) fn solve<T: Scalar>(
    lp: &LinearProgram<T>,
    opts: &SolverOptions,
) -> Result<LpOutcome<T>, LpError> {
    lp.validate()?;
    let nvars = lp.objective.len();

    // variable substitution
    let mut maps = Vec::with_capacity(nvars);
    let mut ns = 0usize;
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for j in 0..nvars {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        let map = if lo.is_finite() {
            let col = ns;
            ns += 1;
            if hi.is_finite() {
                bound_rows.push((col, hi - lo));
            }
            VarMap {
                offset: lo,
                cols: vec![(col, T::one())],
            }
        } else if hi.is_finite() {
            let col = ns;
            ns += 1;
            VarMap {
                offset: hi,
                cols: vec![(col, -T::one())],
            }
        } else {
            let col = ns;
            ns += 2;
            VarMap {
                offset: T::zero(),
                cols: vec![(col, T::one()), (col + 1, -T::one())],
            }
        };
        maps.push(map);
    }

    let mut rows: Vec<Row<T>> = Vec::with_capacity(lp.constraints.len() + bound_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![T::zero(); ns];
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            rhs -= a * maps[j].offset;
            for &(col, sign) in &maps[j].cols {
                coeffs[col] += a * sign;
            }
        }
        rows.push(Row {
            coeffs,
            sense: c.sense,
            rhs,
        });
    }
    for &(col, width) in &bound_rows {
        let mut coeffs = vec![T::zero(); ns];
        coeffs[col] = T::one();
        rows.push(Row {
            coeffs,
            sense: Sense::Le,
            rhs: width,
        });
    }

    // b ≥ 0
    let mut row_sign = vec![T::one(); rows.len()];
    for (row, sign) in rows.iter_mut().zip(row_sign.iter_mut()) {
        if row.rhs < T::zero() {
            *sign = -T::one();
            row.rhs = -row.rhs;
            for a in &mut row.coeffs {
                *a = -*a;
            }
            row.sense = match row.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.sense != Sense::Le).count();
    let ncols = ns + n_slack + n_art;
    let width = ncols + 1;
    let mut data = vec![T::zero(); m * width];
    let mut basis = vec![0usize; m];
    let mut identity_cols = vec![0usize; m];
    let mut is_artificial = vec![false; ncols];
    let (mut next_slack, mut next_art) = (ns, ns + n_slack);
    for (i, row) in rows.iter().enumerate() {
        data[i * width..i * width + ns].copy_from_slice(&row.coeffs);
        data[i * width + width - 1] = row.rhs;
        match row.sense {
            Sense::Le => {
                data[i * width + next_slack] = T::one();
                identity_cols[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                data[i * width + next_slack] = -T::one();
                next_slack += 1;
                data[i * width + next_art] = T::one();
                identity_cols[i] = next_art;
                is_artificial[next_art] = true;
                next_art += 1;
            }
            Sense::Eq => {
                data[i * width + next_art] = T::one();
                identity_cols[i] = next_art;
                is_artificial[next_art] = true;
                next_art += 1;
            }
        }
        basis[i] = identity_cols[i];
    }
    let mut tab = Tableau {
        rows: m,
        width,
        data,
        basis,
    };
    let mut iterations = 0usize;
    let user_rows = lp.constraints.len();

    // phase 1
    if n_art > 0 {
        let cost1: Vec<T> = is_artificial
            .iter()
            .map(|&a| if a { T::one() } else { T::zero() })
            .collect();
        let all = vec![true; ncols];
        run_simplex(&mut tab, &cost1, &all, opts, &mut iterations)?;
        let infeas: T = (0..m)
            .filter(|&i| is_artificial[tab.basis[i]])
            .map(|i| tab.rhs(i))
            .sum();
        let bmax = rows.iter().fold(T::one(), |acc, r| acc.max(r.rhs));
        if infeas > T::lit(opts.feas_tol) * bmax {
            let y = tab.duals(&cost1, &identity_cols);
            let farkas: Vec<T> = (0..user_rows).map(|i| row_sign[i] * y[i]).collect();
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                duals: Vec::new(),
                objective: T::nan(),
                farkas: Some(farkas),
                infeasibility: infeas,
                iterations,
            });
        }
        // drive zero-level artificials out where possible
        for i in 0..m {
            if !is_artificial[tab.basis[i]] {
                continue;
            }
            let col = (0..ncols)
                .filter(|&j| !is_artificial[j])
                .max_by(|&a, &b| {
                    tab.at(i, a)
                        .abs()
                        .partial_cmp(&tab.at(i, b).abs())
                        .expect("finite tableau")
                });
            if let Some(j) = col {
                if tab.at(i, j).abs() > T::lit(opts.pivot_tol) {
                    tab.pivot(i, j);
                    iterations += 1;
                }
            }
        }
    }

    // phase 2
    let sense_sign = if lp.maximize { -T::one() } else { T::one() };
    let mut cost2 = vec![T::zero(); ncols];
    let mut constant = T::zero();
    for (j, map) in maps.iter().enumerate() {
        let c = sense_sign * lp.objective[j];
        constant += c * map.offset;
        for &(col, sign) in &map.cols {
            cost2[col] += c * sign;
        }
    }
    let allowed: Vec<bool> = is_artificial.iter().map(|&a| !a).collect();
    let phase = run_simplex(&mut tab, &cost2, &allowed, opts, &mut iterations)?;

    let mut u = vec![T::zero(); ncols];
    for i in 0..m {
        u[tab.basis[i]] = tab.rhs(i).max(T::zero());
    }
    let primal: Vec<T> = maps
        .iter()
        .map(|map| {
            map.offset
                + map
                    .cols
                    .iter()
                    .map(|&(col, sign)| sign * u[col])
                    .sum::<T>()
        })
        .collect();

    match phase {
        Phase::Unbounded => Ok(LpOutcome {
            status: LpStatus::Unbounded,
            primal,
            duals: Vec::new(),
            objective: if lp.maximize {
                T::infinity()
            } else {
                T::neg_infinity()
            },
            farkas: None,
            infeasibility: T::zero(),
            iterations,
        }),
        Phase::Optimal => {
            let internal: T = constant + (0..ncols).map(|j| cost2[j] * u[j]).sum::<T>();
            let y = tab.duals(&cost2, &identity_cols);
            let duals = (0..user_rows)
                .map(|i| sense_sign * row_sign[i] * y[i])
                .collect();
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                primal,
                duals,
                objective: sense_sign * internal,
                farkas: None,
                infeasibility: T::zero(),
                iterations,
            })
        }
    }
}
