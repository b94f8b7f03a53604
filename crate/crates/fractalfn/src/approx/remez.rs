//! Remez-style exchange iteration for discrete linear minimax over a Haar
//! basis: maintain a reference of `dim + 1` grid points, solve the
//! alternation system, and exchange the reference against the extrema of the
//! residual until the error is levelled.

use super::dense::solve_dense;
use super::Basis;

#[derive(Debug, Clone)]
pub struct ExchangeOutcome {
    pub coeffs: Vec<f64>,
    /// Grid sup-error of the returned coefficients.
    pub error: f64,
    pub iterations: usize,
    /// Levelled reference error `|lambda|` per iteration; nondecreasing for a
    /// healthy exchange.
    pub levels: Vec<f64>,
    /// True when the iteration levelled; false when it stagnated and the best
    /// iterate so far was returned.
    pub converged: bool,
}

/// Solve the alternation system on the reference: for each reference point i,
/// `sum_k c_k phi_k(x_i) + (-1)^i lambda = f_i`.
fn solve_reference(
    basis: &Basis,
    xs: &[f64],
    f_vals: &[f64],
    reference: &[usize],
) -> Option<(Vec<f64>, f64)> {
    let d = basis.dim();
    let rows = reference.len();
    let mut a = vec![vec![0.0; rows]; rows];
    let mut b = vec![0.0; rows];
    for (i, &j) in reference.iter().enumerate() {
        for k in 0..d {
            a[i][k] = basis.eval(k, xs[j]);
        }
        a[i][d] = if i % 2 == 0 { 1.0 } else { -1.0 };
        b[i] = f_vals[j];
    }
    let sol = solve_dense(a, b)?;
    let lambda = sol[rows - 1];
    Some((sol[..d].to_vec(), lambda))
}

fn residual(basis: &Basis, xs: &[f64], f_vals: &[f64], coeffs: &[f64]) -> Vec<f64> {
    xs.iter()
        .zip(f_vals)
        .map(|(&x, &fv)| {
            let mut t = 0.0;
            for (k, c) in coeffs.iter().enumerate() {
                t += c * basis.eval(k, x);
            }
            fv - t
        })
        .collect()
}

/// Segment the residual by sign and pick the largest deviation per segment.
/// For periodic grids the seam segments are merged when their signs agree.
fn extrema_candidates(errs: &[f64], periodic: bool) -> Vec<usize> {
    let scale = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut candidates: Vec<(usize, f64)> = Vec::new(); // (index, signed err)
    let mut cur_sign = 0i8;
    let mut best_idx = 0usize;
    let mut best_abs = -1.0f64;
    for (j, &e) in errs.iter().enumerate() {
        let s = if e > 0.0 {
            1
        } else if e < 0.0 {
            -1
        } else {
            cur_sign
        };
        if s == 0 {
            continue;
        }
        if s != cur_sign && cur_sign != 0 {
            candidates.push((best_idx, errs[best_idx]));
            best_abs = -1.0;
        }
        cur_sign = s;
        if e.abs() > best_abs {
            best_abs = e.abs();
            best_idx = j;
        }
    }
    if cur_sign != 0 {
        candidates.push((best_idx, errs[best_idx]));
    }
    if periodic && candidates.len() >= 2 {
        let first = candidates[0];
        let last = *candidates.last().unwrap();
        if first.1.signum() == last.1.signum() {
            // one cyclic segment: keep the stronger representative
            if first.1.abs() >= last.1.abs() {
                candidates.pop();
            } else {
                candidates.remove(0);
            }
        }
    }
    candidates.into_iter().map(|(j, _)| j).collect()
}

/// Discrete linear minimax of `f_vals` over the grid `xs` in the given basis.
pub fn linear_minimax(
    basis: &Basis,
    xs: &[f64],
    f_vals: &[f64],
    periodic: bool,
    max_iter: usize,
) -> ExchangeOutcome {
    let d = basis.dim();
    let target = d + 1;
    let j_count = xs.len();
    assert!(j_count >= 2 * target, "grid too coarse for the basis");

    let mut reference: Vec<usize> = (0..target)
        .map(|i| (i * (j_count - 1)) / (target - 1))
        .collect();
    reference.dedup();

    let mut best_coeffs = vec![0.0; d];
    let mut best_error = f_vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut levels = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        let Some((coeffs, lambda)) = solve_reference(basis, xs, f_vals, &reference) else {
            break;
        };
        let errs = residual(basis, xs, f_vals, &coeffs);
        let max_err = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        levels.push(lambda.abs());
        if max_err < best_error {
            best_error = max_err;
            best_coeffs = coeffs.clone();
        }
        // levelled: the worst grid error matches the reference error
        if max_err <= lambda.abs() * (1.0 + 1e-10) + 1e-14 * (1.0 + max_err) {
            converged = true;
            break;
        }
        let mut candidates = extrema_candidates(&errs, periodic);
        if candidates.len() < target {
            converged = max_err <= 1e-12 * (1.0 + best_error);
            break;
        }
        while candidates.len() > target {
            let first = errs[candidates[0]].abs();
            let last = errs[*candidates.last().unwrap()].abs();
            if first <= last {
                candidates.remove(0);
            } else {
                candidates.pop();
            }
        }
        if candidates == reference {
            converged = true;
            break;
        }
        reference = candidates;
    }

    ExchangeOutcome {
        coeffs: best_coeffs,
        error: best_error,
        iterations,
        levels,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Interval;
    use std::f64::consts::PI;

    fn periodic_grid(m: usize) -> Vec<f64> {
        (0..m)
            .map(|j| -PI + 2.0 * PI * j as f64 / m as f64)
            .collect()
    }

    #[test]
    fn reproduces_member_of_basis() {
        let basis = Basis::trig(2);
        let xs = periodic_grid(512);
        let f: Vec<f64> = xs
            .iter()
            .map(|x| 0.7 - 0.3 * x.cos() + (2.0 * x).sin())
            .collect();
        let out = linear_minimax(&basis, &xs, &f, true, 50);
        assert!(out.error <= 1e-12, "error {}", out.error);
    }

    #[test]
    fn next_degree_cosine_has_unit_error() {
        // best approximation of cos((m+1)x) from degree-m trig polynomials is 0
        for m in 0..=4usize {
            let basis = Basis::trig(m);
            let xs = periodic_grid(2048);
            let f: Vec<f64> = xs.iter().map(|x| ((m as f64 + 1.0) * x).cos()).collect();
            let out = linear_minimax(&basis, &xs, &f, true, 60);
            assert!(
                (out.error - 1.0).abs() <= 1e-3,
                "m={m}: error {}",
                out.error
            );
            let coeff_mag = out.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            assert!(coeff_mag <= 1e-2, "m={m}: coeffs {:?}", out.coeffs);
        }
    }

    #[test]
    fn levels_are_nondecreasing() {
        let basis = Basis::trig(3);
        let xs = periodic_grid(1024);
        let f: Vec<f64> = xs.iter().map(|x| x.sin().abs()).collect();
        let out = linear_minimax(&basis, &xs, &f, true, 60);
        for w in out.levels.windows(2) {
            assert!(
                w[1] >= w[0] * (1.0 - 1e-9),
                "levels dropped: {:?}",
                out.levels
            );
        }
        assert!(out.converged);
    }

    #[test]
    fn small_perturbation_splits_off() {
        // cos x + 0.1 cos 5x against degree 4: residual 0.1 cos 5x equioscillates
        let basis = Basis::trig(4);
        let xs = periodic_grid(4096);
        let f: Vec<f64> = xs.iter().map(|x| x.cos() + 0.1 * (5.0 * x).cos()).collect();
        let out = linear_minimax(&basis, &xs, &f, true, 60);
        assert!((out.error - 0.1).abs() <= 1e-3, "error {}", out.error);
        // coefficient of cos x is index 1 in the trig ordering
        assert!((out.coeffs[1] - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn chebyshev_basis_on_plain_interval() {
        // |x - 1/2| on [0,1] with affine polynomials: best error is 1/4
        let iv = Interval::new(0.0, 1.0).unwrap();
        let basis = Basis::chebyshev(1, iv);
        let xs: Vec<f64> = (0..1025).map(|j| j as f64 / 1024.0).collect();
        let f: Vec<f64> = xs.iter().map(|x| (x - 0.5).abs()).collect();
        let out = linear_minimax(&basis, &xs, &f, false, 50);
        assert!((out.error - 0.25).abs() <= 1e-3, "error {}", out.error);
    }
}
