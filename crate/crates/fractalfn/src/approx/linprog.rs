//! A small dense-tableau simplex solver for the linear programs produced by
//! the differential-correction scheme: minimize `c . x` subject to
//! `A x <= b` with free variables and nonnegative right-hand sides.
//!
//! Free variables are split into positive and negative parts, slacks make the
//! constraints equalities, and since every `b_i >= 0` the slack basis is
//! feasible, so a single phase suffices. Leaving rows are chosen by the
//! largest pivot among near-minimal ratios, which keeps the tableau from
//! blowing up on the heavily degenerate vertices these problems produce;
//! after a long degenerate stall the rules switch to Bland's to rule out
//! cycling.

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-11;
const STALL_LIMIT: usize = 60;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Read the solution off the final basis. The basic values are recomputed
/// from the original column data with one clean dense solve, which strips the
/// roundoff the tableau accumulates across pivots; the tableau values are the
/// fallback when that system is numerically singular.
#[allow(clippy::too_many_arguments)]
fn extract_solution(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
    basis: &[usize],
    tab: &[Vec<f64>],
    n: usize,
    m: usize,
    cols: usize,
) -> LpSolution {
    // column `j` of the standard-form matrix [A | -A | I]
    let column = |j: usize, i: usize| -> f64 {
        if j < n {
            a[i][j]
        } else if j < 2 * n {
            -a[i][j - n]
        } else if j - 2 * n == i {
            1.0
        } else {
            0.0
        }
    };
    let basis_matrix: Vec<Vec<f64>> = (0..m)
        .map(|i| basis.iter().map(|&bv| column(bv, i)).collect())
        .collect();
    let basic_values = super::dense::solve_dense(basis_matrix, b.to_vec())
        .unwrap_or_else(|| (0..m).map(|i| tab[i][cols]).collect());
    let mut x = vec![0.0; n];
    for (&bv, &v) in basis.iter().zip(&basic_values) {
        if bv < n {
            x[bv] += v;
        } else if bv < 2 * n {
            x[bv - n] -= v;
        }
    }
    let objective = c.iter().zip(&x).map(|(cv, xv)| cv * xv).sum();
    LpSolution { x, objective }
}

/// Minimize `c . x` over free `x` subject to `a[i] . x <= b[i]`, `b[i] >= 0`.
/// Returns `None` when the problem is unbounded or the iteration cap trips.
pub fn solve_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<LpSolution> {
    let n = c.len();
    let m = a.len();
    debug_assert!(b.iter().all(|v| *v >= 0.0), "rhs must be nonnegative");
    // columns: x+ (n), x- (n), slacks (m)
    let cols = 2 * n + m;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![0.0; cols + 1];
        for j in 0..n {
            row[j] = a[i][j];
            row[n + j] = -a[i][j];
        }
        row[2 * n + i] = 1.0;
        row[cols] = b[i];
        tab.push(row);
    }
    // objective row (reduced costs for the slack basis are the raw costs)
    let mut obj = vec![0.0; cols + 1];
    for j in 0..n {
        obj[j] = c[j];
        obj[n + j] = -c[j];
    }
    tab.push(obj);

    let mut basis: Vec<usize> = (2 * n..2 * n + m).collect();
    let mut stall = 0usize;
    let mut last_obj = f64::INFINITY;
    let max_pivots = 200 * (m + cols + 10);
    for _ in 0..max_pivots {
        let bland = stall >= STALL_LIMIT;
        // entering column
        let mut enter = None;
        if bland {
            for j in 0..cols {
                if tab[m][j] < -COST_TOL {
                    enter = Some(j);
                    break;
                }
            }
        } else {
            let mut best = -COST_TOL;
            for j in 0..cols {
                if tab[m][j] < best {
                    best = tab[m][j];
                    enter = Some(j);
                }
            }
        }
        let Some(enter) = enter else {
            return Some(extract_solution(a, b, c, &basis, &tab, n, m, cols));
        };
        // minimal ratio over eligible rows
        let mut theta = f64::INFINITY;
        for i in 0..m {
            if tab[i][enter] > PIVOT_TOL {
                theta = theta.min(tab[i][cols].max(0.0) / tab[i][enter]);
            }
        }
        if theta.is_infinite() {
            return None; // unbounded
        }
        // leaving row: largest pivot among near-ties (smallest basis index
        // under Bland)
        let gate = theta + PIVOT_TOL * (1.0 + theta.abs());
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > PIVOT_TOL && tab[i][cols].max(0.0) / tab[i][enter] <= gate {
                match leave {
                    None => leave = Some(i),
                    Some(li) => {
                        let better = if bland {
                            basis[i] < basis[li]
                        } else {
                            tab[i][enter] > tab[li][enter]
                        };
                        if better {
                            leave = Some(i);
                        }
                    }
                }
            }
        }
        let leave = leave?;
        // pivot
        let piv = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v /= piv;
        }
        for i in 0..=m {
            if i != leave {
                let factor = tab[i][enter];
                if factor != 0.0 {
                    let (pivot_row, row) = if i < leave {
                        let (lo, hi) = tab.split_at_mut(leave);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = tab.split_at_mut(i);
                        (&lo[leave], &mut hi[0])
                    };
                    for j in 0..=cols {
                        row[j] -= factor * pivot_row[j];
                    }
                    // clip the tiny negative rhs values degeneracy produces
                    if i < m && row[cols] < 0.0 && row[cols] > -1e-12 {
                        row[cols] = 0.0;
                    }
                }
            }
        }
        basis[leave] = enter;
        let objective = -tab[m][cols];
        if objective < last_obj - 1e-13 * (1.0 + objective.abs()) {
            last_obj = objective;
            stall = 0;
        } else {
            stall += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_textbook_lp() {
        // min -x - 2y s.t. x + y <= 4, x <= 2, y <= 3, x >= 0, y >= 0
        let c = vec![-1.0, -2.0];
        let a = vec![
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let b = vec![4.0, 2.0, 3.0, 0.0, 0.0];
        let sol = solve_min(&c, &a, &b).unwrap();
        assert!((sol.objective - (-7.0)).abs() < 1e-9, "{:?}", sol);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn handles_free_variables() {
        // min x s.t. -x <= 5 (x >= -5)
        let sol = solve_min(&[1.0], &[vec![-1.0]], &[5.0]).unwrap();
        assert!((sol.x[0] + 5.0).abs() < 1e-9);
        assert!((sol.objective + 5.0).abs() < 1e-9);
    }

    #[test]
    fn detects_unbounded() {
        // min x with no lower bound
        assert!(solve_min(&[1.0], &[vec![1.0]], &[1.0]).is_none());
    }

    #[test]
    fn solves_correction_shaped_subproblem() {
        // Variables (p, q, d): minimize d subject to
        //   +(v_j q - p) - 2q - d <= 0,  -(v_j q - p) - 2q - d <= 0,  q <= 1
        // for v in {0, 2}. Hand optimum: q = 1, p = 1, d = -1.
        let c = vec![0.0, 0.0, 1.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for v in [0.0f64, 2.0] {
            a.push(vec![-1.0, v - 2.0, -1.0]);
            b.push(0.0);
            a.push(vec![1.0, -v - 2.0, -1.0]);
            b.push(0.0);
        }
        a.push(vec![0.0, 1.0, 0.0]);
        b.push(1.0);
        let sol = solve_min(&c, &a, &b).unwrap();
        assert!((sol.objective + 1.0).abs() < 1e-9, "{sol:?}");
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stays_feasible_on_degenerate_stack() {
        // many coincident constraints at the optimum
        let c = vec![0.0, 1.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..40 {
            let t = k as f64 / 39.0;
            a.push(vec![1.0 - t, -1.0]);
            b.push(0.0);
            a.push(vec![-(1.0 - t), -1.0]);
            b.push(0.0);
        }
        a.push(vec![1.0, 0.0]);
        b.push(1.0);
        let sol = solve_min(&c, &a, &b).unwrap();
        // d >= |(1-t) x| for all t, minimized over x <= 1: optimum x free, d = 0
        assert!(sol.objective.abs() < 1e-9);
    }
}
