//! Classical and fractal approximation errors: discrete minimax for
//! trigonometric polynomials (exchange iteration) and rational trigonometric
//! or rational algebraic functions (differential correction), the
//! Weierstrass-type constructive procedures, the non-negative fractal
//! approximant, and the minimax inequality checks that tie the fractal
//! operator to the classical errors.
//!
//! All minimax problems are solved on a fixed discrete grid (4096 points by
//! default); the resulting errors are discrete proxies for the continuous
//! minimax values. For smooth functions they sit within about a percent of
//! the continuous value, which is all the inequality checks need.

mod dense;
mod diffcorr;
mod linprog;
mod remez;

pub use diffcorr::CorrectionStatus;

use crate::domain::{Interval, Partition, SampledFunction, ScalingVector};
use crate::error::{Error, Result};
use crate::fractal::{fractal_operator_apply, FractalResult};
use crate::spaces::{
    bernstein_apply, modulus_of_continuity, varma_apply, BaseOperator, RationalTrig, TrigPoly,
};
use std::f64::consts::PI;

/// Default number of grid points for discrete minimax problems.
pub const DEFAULT_MINIMAX_GRID: usize = 4096;

/// A linear approximation basis: either the trigonometric system
/// `1, cos x, sin x, ..., cos mx, sin mx` or Chebyshev polynomials mapped
/// onto an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Trig { degree: usize },
    Chebyshev { degree: usize, interval: Interval },
}

impl Basis {
    pub fn trig(degree: usize) -> Self {
        Basis::Trig { degree }
    }

    pub fn chebyshev(degree: usize, interval: Interval) -> Self {
        Basis::Chebyshev { degree, interval }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Trig { degree } => 2 * degree + 1,
            Basis::Chebyshev { degree, .. } => degree + 1,
        }
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        match self {
            Basis::Trig { .. } => {
                if k == 0 {
                    1.0
                } else {
                    let freq = ((k + 1) / 2) as f64;
                    if k % 2 == 1 {
                        (freq * x).cos()
                    } else {
                        (freq * x).sin()
                    }
                }
            }
            Basis::Chebyshev { interval, .. } => {
                let u = 2.0 * (x - interval.lo()) / interval.span() - 1.0;
                let mut t0 = 1.0;
                let mut t1 = u;
                if k == 0 {
                    return t0;
                }
                for _ in 1..k {
                    let t2 = 2.0 * u * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                }
                t1
            }
        }
    }
}

/// A linear combination over a [`Basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFn {
    pub basis: Basis,
    pub coeffs: Vec<f64>,
}

impl BasisFn {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * self.basis.eval(k, x))
            .sum()
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }

    /// Coefficient-form trigonometric polynomial, when the basis is
    /// trigonometric.
    pub fn to_trig_poly(&self) -> Option<TrigPoly> {
        match self.basis {
            Basis::Trig { degree } => {
                let mut cos = vec![0.0; degree];
                let mut sin = vec![0.0; degree];
                for k in 1..self.coeffs.len() {
                    let freq = (k + 1) / 2;
                    if k % 2 == 1 {
                        cos[freq - 1] = self.coeffs[k];
                    } else {
                        sin[freq - 1] = self.coeffs[k];
                    }
                }
                Some(TrigPoly::new(self.coeffs[0], cos, sin))
            }
            _ => None,
        }
    }
}

/// A quotient of two [`BasisFn`]s with grid-positive denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRational {
    pub num: BasisFn,
    pub den: BasisFn,
}

impl BasisRational {
    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }

    /// Positive-denominator rational trigonometric form, when applicable.
    /// Fails when the denominator dips nonpositive between minimax grid
    /// points.
    pub fn to_rational_trig(&self) -> Option<RationalTrig> {
        let num = self.num.to_trig_poly()?;
        let den = self.den.to_trig_poly()?;
        RationalTrig::new(num, den).ok()
    }
}

/// The approximant found by a minimax solve.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    Linear(BasisFn),
    Rational(BasisRational),
}

impl Approximant {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Approximant::Linear(f) => f.eval(x),
            Approximant::Rational(r) => r.eval(x),
        }
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }
}

/// Convergence classification of a minimax solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    /// Exchange or correction stagnated; the best iterate was returned.
    Degraded,
    /// Differential correction rolled back after losing denominator
    /// positivity headroom.
    DenominatorFloor,
}

/// Result of a discrete минimax solve on the working grid.
#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub approximant: Approximant,
    /// Sup error over the working grid.
    pub error: f64,
    pub iterations: usize,
    /// Grid abscissae attaining nearly the full error with alternating signs.
    pub equioscillation_points: Vec<f64>,
    pub status: SolveStatus,
    /// Per-iteration levels: the levelled reference error for the exchange
    /// (nondecreasing), the working error for differential correction
    /// (decreasing).
    pub level_history: Vec<f64>,
}

fn periodic_working_grid(grid_m: usize) -> Vec<f64> {
    (0..grid_m)
        .map(|j| -PI + 2.0 * PI * j as f64 / grid_m as f64)
        .collect()
}

fn closed_working_grid(interval: Interval, grid_m: usize) -> Vec<f64> {
    (0..grid_m)
        .map(|j| interval.lo() + interval.span() * j as f64 / (grid_m - 1) as f64)
        .collect()
}

fn check_periodic_pi(f: &SampledFunction) -> Result<()> {
    let iv = f.interval();
    if (iv.lo() + PI).abs() > 1e-9 || (iv.hi() - PI).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "periodic minimax expects [-pi, pi], got [{}, {}]",
            iv.lo(),
            iv.hi()
        )));
    }
    let gap = (f.values()[0] - f.values()[f.sample_count() - 1]).abs();
    if gap > 1e-8 {
        return Err(Error::NotPeriodic { gap });
    }
    Ok(())
}

/// Grid points of near-maximal deviation with alternating signs, scanned left
/// to right.
fn equioscillation_points(xs: &[f64], errs: &[f64], error: f64) -> Vec<f64> {
    let gate = (1.0 - 1e-6) * error;
    let mut points = Vec::new();
    let mut last_sign = 0i8;
    for (j, &e) in errs.iter().enumerate() {
        if e.abs() >= gate && e.abs() > 0.0 {
            let s = if e > 0.0 { 1 } else { -1 };
            if s != last_sign {
                points.push(xs[j]);
                last_sign = s;
            }
        }
    }
    points
}

/// Discrete best sup-norm approximation of `f` by a trigonometric polynomial
/// of degree at most `m`, via exchange iteration on references of size
/// `2m + 2`.
pub fn minimax_trig(f: &SampledFunction, m: usize, grid_m: usize) -> Result<MinimaxResult> {
    check_periodic_pi(f)?;
    if grid_m < 16 * (2 * m + 2) {
        return Err(Error::InvalidArgument(format!(
            "grid_m = {grid_m} too coarse for degree {m}; need at least {}",
            16 * (2 * m + 2)
        )));
    }
    let basis = Basis::trig(m);
    let xs = periodic_working_grid(grid_m);
    let f_vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let out = remez::linear_minimax(&basis, &xs, &f_vals, true, 60);
    let approx = BasisFn {
        basis,
        coeffs: out.coeffs,
    };
    let errs: Vec<f64> = xs
        .iter()
        .zip(&f_vals)
        .map(|(&x, &fv)| fv - approx.eval(x))
        .collect();
    let error = errs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    debug_assert!((error - out.error).abs() <= 1e-9 * (1.0 + error));
    Ok(MinimaxResult {
        equioscillation_points: equioscillation_points(&xs, &errs, error),
        approximant: Approximant::Linear(approx),
        error,
        iterations: out.iterations,
        status: if out.converged {
            SolveStatus::Converged
        } else {
            SolveStatus::Degraded
        },
        level_history: out.levels,
    })
}

fn rational_minimax_on_grid(
    xs: Vec<f64>,
    f_vals: Vec<f64>,
    num_basis: Basis,
    den_basis: Basis,
    periodic: bool,
) -> MinimaxResult {
    let init = remez::linear_minimax(&num_basis, &xs, &f_vals, periodic, 60);
    let out = diffcorr::rational_minimax(&num_basis, &den_basis, &xs, &f_vals, init.coeffs, 300);
    let approx = BasisRational {
        num: BasisFn {
            basis: num_basis,
            coeffs: out.num_coeffs,
        },
        den: BasisFn {
            basis: den_basis,
            coeffs: out.den_coeffs,
        },
    };
    let errs: Vec<f64> = xs
        .iter()
        .zip(&f_vals)
        .map(|(&x, &fv)| fv - approx.eval(x))
        .collect();
    let error = errs.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    debug_assert!((error - out.error).abs() <= 1e-9 * (1.0 + error));
    MinimaxResult {
        equioscillation_points: equioscillation_points(&xs, &errs, error),
        approximant: Approximant::Rational(approx),
        error,
        iterations: out.iterations,
        status: match out.status {
            CorrectionStatus::Converged => SolveStatus::Converged,
            CorrectionStatus::Stagnated => SolveStatus::Degraded,
            CorrectionStatus::DenominatorFloor => SolveStatus::DenominatorFloor,
        },
        level_history: out.levels,
    }
}

/// Discrete best sup-norm approximation of `f` by a rational trigonometric
/// function of type `(m, n)` via differential correction, denominator
/// normalized to sup 1 and kept positive on the grid. `n = 0` degenerates to
/// the trigonometric case.
pub fn minimax_rational_trig(
    f: &SampledFunction,
    m: usize,
    n: usize,
    grid_m: usize,
) -> Result<MinimaxResult> {
    check_periodic_pi(f)?;
    if grid_m < 16 * (2 * m.max(n) + 2) {
        return Err(Error::InvalidArgument(format!(
            "grid_m = {grid_m} too coarse for type ({m}, {n})"
        )));
    }
    let xs = periodic_working_grid(grid_m);
    let f_vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    Ok(rational_minimax_on_grid(
        xs,
        f_vals,
        Basis::trig(m),
        Basis::trig(n),
        true,
    ))
}

/// Discrete best sup-norm approximation of `f` on its interval by an
/// algebraic rational function of type `(l, m)`, same correction scheme with
/// Chebyshev bases.
pub fn minimax_rational_poly(
    f: &SampledFunction,
    l: usize,
    m: usize,
    grid_m: usize,
) -> Result<MinimaxResult> {
    if grid_m < 16 * (l.max(m) + 2) {
        return Err(Error::InvalidArgument(format!(
            "grid_m = {grid_m} too coarse for type ({l}, {m})"
        )));
    }
    let iv = f.interval();
    let xs = closed_working_grid(iv, grid_m);
    let f_vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    Ok(rational_minimax_on_grid(
        xs,
        f_vals,
        Basis::chebyshev(l, iv),
        Basis::chebyshev(m, iv),
        false,
    ))
}

/// Outcome of the fractal minimax bound check: the classical error proxy, the
/// bound on the fractal minimax error it induces, and the witness distance
/// realized by perturbing the found approximant.
#[derive(Debug, Clone)]
pub struct FractalMinimaxReport {
    /// Discrete minimax error of the classical approximant (proxy for the
    /// true infimum).
    pub classical_error: f64,
    /// `(1 + |a|(c - 1))/(1 - |a|) E + (|a|/(1 - |a|)) c ||f||`, with `c` the
    /// catalogue bound for `||Id - L||`.
    pub bound: f64,
    /// `||f - F(r*)||` for the found approximant `r*`.
    pub witness: f64,
    pub solver_status: SolveStatus,
    /// Numerical slack suggested for comparisons.
    pub slack: f64,
    pub ok: bool,
}

/// Evaluates the upper bound for the fractal rational trigonometric minimax
/// error and verifies it against the witness `||f - F(r*)||`.
#[allow(clippy::too_many_arguments)]
pub fn fractal_minimax_bound(
    f: &SampledFunction,
    m: usize,
    n: usize,
    scaling: &ScalingVector,
    op: &BaseOperator,
    partition: &Partition,
    grid_m: usize,
    tol: f64,
) -> Result<FractalMinimaxReport> {
    let norms = op.norms().ok_or(Error::NormDataUnavailable)?;
    let solve = minimax_rational_trig(f, m, n, DEFAULT_MINIMAX_GRID)?;
    let a = scaling.sup_abs();
    let c = norms.id_minus_norm;
    let f_grid = f.resample(grid_m)?;
    let e = solve.error;
    let bound = (1.0 + a * (c - 1.0)) / (1.0 - a) * e + a / (1.0 - a) * c * f_grid.sup_norm();
    let r_star = solve.approximant.sample(f.interval(), grid_m)?;
    let perturbed = fractal_operator_apply(op, &r_star, partition, scaling, grid_m, tol)?;
    let witness = f_grid.sup_distance(&perturbed.values)?;
    let slack = 1e-4 + 10.0 * tol + 10.0 * perturbed.certified_gap;
    Ok(FractalMinimaxReport {
        classical_error: e,
        bound,
        witness,
        solver_status: solve.status,
        slack,
        ok: witness <= bound + slack,
    })
}

/// One entry of the corrected Bernstein chain check.
#[derive(Debug, Clone, Copy)]
pub struct ChainEntry {
    pub n: usize,
    /// `||f - F_{B_n}(r*)||`.
    pub lhs: f64,
    /// `||f - r*|| + (|a|/(1-|a|)) ||r* - B_n r*||`.
    pub rhs: f64,
    /// The Bernstein term `(|a|/(1-|a|)) ||r* - B_n r*||` alone.
    pub bernstein_term: f64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ChainReport {
    pub classical_distance: f64,
    pub entries: Vec<ChainEntry>,
    /// Bernstein terms never increase along the supplied degree list.
    pub trend_decreasing: bool,
    pub ok: bool,
    pub slack: f64,
}

/// Verifies, for each Bernstein degree, the corrected chain
/// `||f - F_{B_n}(r*)|| <= ||f - r*|| + (|a|/(1-|a|)) ||r* - B_n r*||`
/// with `r*` the discrete algebraic-rational minimax approximant of `f`.
#[allow(clippy::too_many_arguments)]
pub fn corrected_chain_check(
    f: &SampledFunction,
    l: usize,
    m: usize,
    scaling: &ScalingVector,
    partition: &Partition,
    n_list: &[usize],
    grid_m: usize,
    tol: f64,
) -> Result<ChainReport> {
    let solve = minimax_rational_poly(f, l, m, DEFAULT_MINIMAX_GRID)?;
    let f_grid = f.resample(grid_m)?;
    let r_star = solve.approximant.sample(f.interval(), grid_m)?;
    let classical_distance = f_grid.sup_distance(&r_star)?;
    let a = scaling.sup_abs();
    let factor = if a == 0.0 { 0.0 } else { a / (1.0 - a) };
    let mut entries = Vec::with_capacity(n_list.len());
    let mut slack: f64 = 1e-9;
    for &n in n_list {
        let op = BaseOperator::bernstein(n)?;
        let member = fractal_operator_apply(&op, &r_star, partition, scaling, grid_m, tol)?;
        let lhs = f_grid.sup_distance(&member.values)?;
        let bn = bernstein_apply(&r_star, n)?;
        let bernstein_term = factor * r_star.sup_distance(&bn)?;
        let rhs = classical_distance + bernstein_term;
        slack = slack.max(1e-9 + 10.0 * (tol + member.certified_gap));
        entries.push(ChainEntry {
            n,
            lhs,
            rhs,
            bernstein_term,
            ok: lhs <= rhs + 1e-9 + 10.0 * (tol + member.certified_gap),
        });
    }
    let trend_decreasing = entries
        .windows(2)
        .all(|w| w[1].bernstein_term <= w[0].bernstein_term + 1e-12);
    let ok = entries.iter().all(|e| e.ok);
    Ok(ChainReport {
        classical_distance,
        entries,
        trend_decreasing,
        ok,
        slack,
    })
}

/// The scale-vector threshold from the Weierstrass-type argument: any scaling
/// with `|alpha|_inf` strictly below the returned value keeps the fractal
/// perturbation of `t` within `epsilon/2` of `t`, hence within `epsilon` of
/// the target whenever `||f - t|| < epsilon/2`.
pub fn weierstrass_scale_threshold(
    epsilon: f64,
    t: &RationalTrig,
    op: &BaseOperator,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    let norms = op.norms().ok_or(Error::NormDataUnavailable)?;
    let iv = Interval::new(-PI, PI)?;
    let sup = t.sample(iv, DEFAULT_MINIMAX_GRID + 1)?.sup_norm();
    let product = norms.id_minus_norm * sup;
    let threshold = if product == 0.0 {
        1.0
    } else {
        (epsilon / 2.0) / (epsilon / 2.0 + product)
    };
    Ok(threshold.min(1.0 - 1e-9))
}

/// Builds a nonnegative fractal rational trigonometric approximant of a
/// nonnegative `f`: a fractal perturbation `t^alpha` with
/// `||f - t^alpha|| < epsilon/2`, lifted by `epsilon/2`. The base operator
/// must fix constants. Degrees escalate until the inner target is met.
#[allow(clippy::too_many_arguments)]
pub fn nonneg_fractal_approx(
    f: &SampledFunction,
    epsilon: f64,
    scaling: &ScalingVector,
    partition: &Partition,
    op: &BaseOperator,
    grid_m: usize,
    tol: f64,
    max_degree: usize,
) -> Result<(SampledFunction, f64)> {
    check_periodic_pi(f)?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    if f.min_value() < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "seed must be nonnegative; min value {}",
            f.min_value()
        )));
    }
    if !op.fixes_constants() {
        return Err(Error::InvalidArgument(
            "base operator must fix constant functions".into(),
        ));
    }
    let f_grid = f.resample(grid_m)?;
    let mut best_gap = f64::INFINITY;
    for total in 0..=(2 * max_degree) {
        for n in 0..=total.min(max_degree) {
            let m = total - n;
            if m > max_degree {
                continue;
            }
            let solve = minimax_rational_trig(f, m, n, DEFAULT_MINIMAX_GRID)?;
            if solve.error >= epsilon / 2.0 {
                best_gap = best_gap.min(solve.error);
                continue;
            }
            let t_s = solve.approximant.sample(f.interval(), grid_m)?;
            let perturbed = fractal_operator_apply(op, &t_s, partition, scaling, grid_m, tol)?;
            let half_gap = f_grid.sup_distance(&perturbed.values)?;
            best_gap = best_gap.min(half_gap);
            if half_gap < epsilon / 2.0 {
                let approximant = perturbed.values.map(|v| v + epsilon / 2.0);
                debug_assert!(approximant.min_value() >= -1e-12);
                let gap = f_grid.sup_distance(&approximant)?;
                return Ok((approximant, gap));
            }
        }
    }
    Err(Error::DegreeExhausted { best_gap })
}

/// Error report for the interpolating operator: the realized sup error, the
/// proven bound `2 w_f(pi sqrt(3)/n)`, and the corollary form
/// `2 w_f(2 pi sqrt(3)/(n+2))`.
#[derive(Debug, Clone, Copy)]
pub struct JacksonReport {
    pub actual: f64,
    pub bound: f64,
    pub corollary_bound: f64,
}

/// Measures `||f - V_n f||` against the modulus-of-continuity bounds.
pub fn jackson_error_report(f: &SampledFunction, n: u32) -> Result<JacksonReport> {
    let v = varma_apply(f, n)?;
    let actual = v.sup_distance(f)?;
    let sqrt3 = 3.0f64.sqrt();
    let bound = 2.0 * modulus_of_continuity(f, PI * sqrt3 / n as f64)?;
    let corollary_bound = 2.0 * modulus_of_continuity(f, 2.0 * PI * sqrt3 / (n as f64 + 2.0))?;
    Ok(JacksonReport {
        actual,
        bound,
        corollary_bound,
    })
}

/// The fractal perturbation `F(r)` of a minimax approximant shares the grid
/// with the seed, so downstream Weierstrass checks can compute distances; the
/// helper runs the full pipeline once.
pub struct PerturbedApproximant {
    pub result: FractalResult,
    pub approximant: Approximant,
}
