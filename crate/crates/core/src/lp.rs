//! Dense phase-one simplex for feasibility problems `A x = b, x >= 0`.
//!
//! Problems here are tiny (a handful of rows, at most tens of thousands of
//! columns), so the tableau is kept dense and pivots follow Bland's rule:
//! the entering column is the lowest-index column with negative reduced cost,
//! and ratio-test ties leave by lowest basic index. That makes every solve
//! deterministic and cycle free.
//!
//! Besides a primal point the solver returns the phase-one duals. When the
//! phase-one optimum is positive they form a Farkas certificate
//! (`yᵀb > 0`, `yᵀa <= 0` for every column), and during column generation
//! they price new columns.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Phase-one objective below `feasibility_tol * max(1, |b|_inf)` counts as feasible.
    pub feasibility_tol: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-10,
            max_pivots: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub feasible: bool,
    /// Primal point (meaningful when `feasible`).
    pub x: Vec<f64>,
    /// Phase-one duals for the original rows.
    pub duals: Vec<f64>,
    /// Optimal phase-one objective (sum of artificial values).
    pub infeasibility: f64,
    /// Worst absolute residual of `A x = b` after polishing.
    pub residual: f64,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-11;

/// Solves `sum_j x_j * columns[j] = rhs`, `x >= 0`.
///
/// All columns must have `rhs.len()` entries.
pub fn solve_feasibility(columns: &[Vec<f64>], rhs: &[f64], opts: &LpOptions) -> LpSolution {
    let rows = rhs.len();
    let n = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));

    let scale = rhs.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let width = n + rows + 1;
    let rhs_col = n + rows;
    let mut signs = vec![1.0; rows];
    let mut tab = vec![vec![0.0; width]; rows];
    for i in 0..rows {
        if rhs[i] < 0.0 {
            signs[i] = -1.0;
        }
        for (j, col) in columns.iter().enumerate() {
            tab[i][j] = signs[i] * col[i];
        }
        tab[i][n + i] = 1.0;
        tab[i][rhs_col] = signs[i] * rhs[i];
    }
    // phase-one reduced costs; the last entry is minus the objective
    let mut cost = vec![0.0; width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[rhs_col] -= row[rhs_col];
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();

    let col_scale: Vec<f64> = (0..n)
        .map(|j| tab.iter().fold(1.0_f64, |m, r| m.max(r[j].abs())))
        .collect();

    let mut pivots = 0;
    while pivots < opts.max_pivots {
        let entering = (0..n).find(|&j| cost[j] < -1e-12 * col_scale[j]);
        let Some(e) = entering else { break };

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let a = tab[i][e];
            if a > PIVOT_EPS {
                let ratio = tab[i][rhs_col] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        if ratio < lr && !tie || tie && basis[i] < basis[li] {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry unless it is numerically negligible.
        let Some((r, _)) = leave else {
            cost[e] = 0.0;
            continue;
        };
        pivot(&mut tab, &mut cost, r, e);
        basis[r] = e;
        pivots += 1;
    }

    let infeasibility = -cost[rhs_col];
    let feasible = infeasibility <= opts.feasibility_tol * scale;

    // drive zero-valued artificials out of the basis where possible
    if feasible {
        for r in 0..rows {
            if basis[r] >= n {
                if let Some(j) = (0..n).find(|&j| tab[r][j].abs() > 1e-9) {
                    pivot(&mut tab, &mut cost, r, j);
                    basis[r] = j;
                }
            }
        }
    }

    let duals: Vec<f64> = (0..rows).map(|i| signs[i] * (1.0 - cost[n + i])).collect();

    let mut x = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[r][rhs_col].max(0.0);
        }
    }
    let mut residual = residual_of(columns, rhs, &x);
    if feasible {
        if let Some(polished) = polish(columns, rhs, &basis, n) {
            let pr = residual_of(columns, rhs, &polished);
            if pr <= residual {
                x = polished;
                residual = pr;
            }
        }
    }

    LpSolution {
        feasible,
        x,
        duals,
        infeasibility,
        residual,
        pivots,
    }
}

fn pivot(tab: &mut [Vec<f64>], cost: &mut [f64], r: usize, e: usize) {
    let inv = 1.0 / tab[r][e];
    for v in tab[r].iter_mut() {
        *v *= inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[e];
        if f != 0.0 {
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            row[e] = 0.0;
        }
    }
    let f = cost[e];
    if f != 0.0 {
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v -= f * p;
        }
        cost[e] = 0.0;
    }
}

fn residual_of(columns: &[Vec<f64>], rhs: &[f64], x: &[f64]) -> f64 {
    let mut acc = rhs.iter().map(|v| -v).collect::<Vec<_>>();
    for (col, &w) in columns.iter().zip(x) {
        if w != 0.0 {
            for (a, c) in acc.iter_mut().zip(col) {
                *a += w * c;
            }
        }
    }
    acc.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Re-solves the basic system directly, which removes the round-off the
/// tableau accumulated over many pivots.
fn polish(columns: &[Vec<f64>], rhs: &[f64], basis: &[usize], n: usize) -> Option<Vec<f64>> {
    let basic: Vec<usize> = basis.iter().copied().filter(|&b| b < n).collect();
    if basic.is_empty() {
        return None;
    }
    let rows = rhs.len();
    let a = DMatrix::from_fn(rows, basic.len(), |i, k| columns[basic[k]][i]);
    let b = DVector::from_column_slice(rhs);
    let sol = a.svd(true, true).solve(&b, 1e-13).ok()?;
    let mut x = vec![0.0; n];
    for (k, &j) in basic.iter().enumerate() {
        if sol[k] < -1e-9 {
            return None;
        }
        x[j] = sol[k].max(0.0);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0
        let cols = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let sol = solve_feasibility(&cols, &[1.0, 0.0], &LpOptions::default());
        assert!(sol.feasible);
        assert!((sol.x[0] - 0.5).abs() < 1e-14);
        assert!((sol.x[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn infeasible_system_yields_farkas_duals() {
        // x = -1 with x >= 0
        let cols = vec![vec![1.0]];
        let sol = solve_feasibility(&cols, &[-1.0], &LpOptions::default());
        assert!(!sol.feasible);
        let yb: f64 = -sol.duals[0];
        let ya: f64 = sol.duals[0] * 1.0;
        assert!(yb > 0.0);
        assert!(ya <= 1e-12);
    }

    #[test]
    fn convex_combination_with_redundant_row() {
        // weights of three points of a segment summing to one, duplicated row
        let cols = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![2.0, 1.0, 1.0],
        ];
        let sol = solve_feasibility(&cols, &[1.5, 1.0, 1.0], &LpOptions::default());
        assert!(sol.feasible);
        assert!(sol.residual < 1e-12);
        assert!(sol.x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // many identical columns; Bland's rule must not cycle
        let cols = vec![vec![1.0, 0.0, 1.0]; 20]
            .into_iter()
            .chain(std::iter::once(vec![0.0, 1.0, 1.0]))
            .collect::<Vec<_>>();
        let sol = solve_feasibility(&cols, &[0.0, 0.0, 0.0], &LpOptions::default());
        assert!(sol.feasible);
        assert!(sol.x.iter().all(|&v| v.abs() < 1e-15));
    }
}
