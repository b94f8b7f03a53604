//! Concrete function families: trigonometric polynomials, positive-denominator
//! rational trigonometric functions, the Bernstein operator, the Jackson
//! kernel with the Varma interpolating operator built from it, the modulus of
//! continuity, and the catalogue of base operators used to derive base
//! functions `b = Lf`.

use crate::domain::{Interval, SampledFunction};
use crate::error::{Error, Result};

/// Largest admissible Bernstein degree; floating-point binomials degrade past
/// this point.
pub const MAX_BERNSTEIN_DEGREE: usize = 60;

/// A trigonometric polynomial `a_0 + sum_k (a_k cos kx + b_k sin kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    constant: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    /// Build from a constant plus cosine/sine coefficient lists. The two
    /// lists may have different lengths; the shorter is padded with zeros.
    pub fn new(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        let m = cos.len().max(sin.len());
        let mut cos = cos;
        let mut sin = sin;
        cos.resize(m, 0.0);
        sin.resize(m, 0.0);
        TrigPoly { constant, cos, sin }
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn coeff_abs_sum(&self) -> f64 {
        self.constant.abs()
            + self.cos.iter().map(|c| c.abs()).sum::<f64>()
            + self.sin.iter().map(|c| c.abs()).sum::<f64>()
    }

    /// Exact trigonometric evaluation (no interpolation).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = self.constant;
        for k in 0..self.cos.len() {
            let kx = (k + 1) as f64 * x;
            acc += self.cos[k] * kx.cos() + self.sin[k] * kx.sin();
        }
        acc
    }

    /// Sample onto a uniform grid; endpoints are hit exactly.
    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }
}

/// A quotient of trigonometric polynomials with denominator positive on
/// `[-pi, pi]`, checked by dense sampling at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTrig {
    num: TrigPoly,
    den: TrigPoly,
}

impl RationalTrig {
    pub fn new(num: TrigPoly, den: TrigPoly) -> Result<Self> {
        let samples = 64 * (den.degree() + 1) + 1;
        let lo = -std::f64::consts::PI;
        let hi = std::f64::consts::PI;
        let mut min = f64::INFINITY;
        for j in 0..samples {
            let x = lo + (hi - lo) * j as f64 / (samples - 1) as f64;
            min = min.min(den.eval(x));
        }
        if !(min > 0.0) {
            return Err(Error::DenominatorNotPositive { min_value: min });
        }
        Ok(RationalTrig { num, den })
    }

    pub fn num(&self) -> &TrigPoly {
        &self.num
    }

    pub fn den(&self) -> &TrigPoly {
        &self.den
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }
}

/// Jackson kernel `J_n(x) = (sin(nx/2) / (n sin(x/2)))^2` with the removable
/// singularity at multiples of `2 pi` resolved to 1.
pub fn jackson_kernel(n: u32, x: f64) -> f64 {
    assert!(n >= 1, "jackson_kernel requires n >= 1");
    let half = 0.5 * x;
    let s = half.sin();
    if s.abs() < 1e-9 {
        return 1.0;
    }
    let q = (n as f64 * half).sin() / (n as f64 * s);
    q * q
}

/// Normalizing denominator of the Varma operator:
/// `1 - ((n^2 - 1)/(3 n^2)) (1 - cos(n x))`. Strictly positive for all x.
pub fn varma_denominator(n: u32, x: f64) -> f64 {
    let n2 = (n as f64) * (n as f64);
    1.0 - ((n2 - 1.0) / (3.0 * n2)) * (1.0 - (n as f64 * x).cos())
}

/// The positive linear interpolating operator built from squared Jackson
/// kernels at the nodes `x_kn = 2 k pi / n`, sampled on `f`'s grid.
pub fn varma_apply(f: &SampledFunction, n: u32) -> Result<SampledFunction> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "varma operator requires n >= 2, got {n}"
        )));
    }
    let iv = f.interval();
    let pi = std::f64::consts::PI;
    if (iv.lo() + pi).abs() > 1e-9 || (iv.hi() - pi).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "varma operator expects the interval [-pi, pi], got [{}, {}]",
            iv.lo(),
            iv.hi()
        )));
    }
    let gap = (f.values()[0] - f.values()[f.sample_count() - 1]).abs();
    if gap > 1e-8 {
        return Err(Error::NotPeriodic { gap });
    }
    // nodes 2k pi/n mapped into [-pi, pi) by periodicity
    let nodes: Vec<f64> = (0..n)
        .map(|k| {
            let x = 2.0 * k as f64 * pi / n as f64;
            if x >= pi {
                x - 2.0 * pi
            } else {
                x
            }
        })
        .collect();
    let node_values: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
    SampledFunction::from_fn(iv, f.sample_count(), |x| {
        let mut num = 0.0;
        for (xk, fk) in nodes.iter().zip(&node_values) {
            let j = jackson_kernel(n, x - xk);
            num += fk * j * j;
        }
        num / varma_denominator(n, x)
    })
}

fn binomials(n: usize) -> Vec<f64> {
    let mut c = vec![1.0; n + 1];
    for k in 1..=n {
        c[k] = c[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    c
}

/// Degree-`n` Bernstein polynomial of `f`, sampled on `f`'s grid. Endpoint
/// values are preserved exactly.
pub fn bernstein_apply(f: &SampledFunction, n: usize) -> Result<SampledFunction> {
    if n < 1 || n > MAX_BERNSTEIN_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "bernstein degree must be in 1..={MAX_BERNSTEIN_DEGREE}, got {n}"
        )));
    }
    let iv = f.interval();
    let coeffs: Vec<f64> = (0..=n)
        .map(|k| {
            let x = iv.lo() + (k as f64 / n as f64) * iv.span();
            f.eval(x.min(iv.hi()))
        })
        .collect();
    let binom = binomials(n);
    SampledFunction::from_fn(iv, f.sample_count(), |x| {
        let t = ((x - iv.lo()) / iv.span()).clamp(0.0, 1.0);
        // forward powers of t, backward powers of (1-t)
        let mut tp = vec![0.0; n + 1];
        let mut up = vec![0.0; n + 1];
        tp[0] = 1.0;
        for k in 1..=n {
            tp[k] = tp[k - 1] * t;
        }
        up[n] = 1.0;
        for k in (0..n).rev() {
            up[k] = up[k + 1] * (1.0 - t);
        }
        (0..=n).map(|k| coeffs[k] * binom[k] * tp[k] * up[k]).sum()
    })
}

/// Grid modulus of continuity: largest `|f(x_j) - f(x_k)|` over node pairs
/// with `|x_j - x_k| <= delta`. Computed exactly with a sliding-window
/// min/max pass.
pub fn modulus_of_continuity(f: &SampledFunction, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "modulus of continuity needs delta > 0, got {delta}"
        )));
    }
    let m = f.sample_count();
    let w = ((delta / f.step()) * (1.0 + 1e-12)).floor() as usize;
    let w = w.min(m - 1);
    if w == 0 {
        return Ok(0.0);
    }
    let values = f.values();
    let mut best: f64 = 0.0;
    // monotonic deques over windows of w+1 consecutive nodes
    let mut maxq: std::collections::VecDeque<usize> = Default::default();
    let mut minq: std::collections::VecDeque<usize> = Default::default();
    for j in 0..m {
        while let Some(&b) = maxq.back() {
            if values[b] <= values[j] {
                maxq.pop_back();
            } else {
                break;
            }
        }
        maxq.push_back(j);
        while let Some(&b) = minq.back() {
            if values[b] >= values[j] {
                minq.pop_back();
            } else {
                break;
            }
        }
        minq.push_back(j);
        if j >= w {
            while *maxq.front().unwrap() + w < j {
                maxq.pop_front();
            }
            while *minq.front().unwrap() + w < j {
                minq.pop_front();
            }
            best = best.max(values[*maxq.front().unwrap()] - values[*minq.front().unwrap()]);
        }
    }
    Ok(best)
}

/// Operator norm data for a base operator: the exact norm or a documented
/// upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNorms {
    /// `||L||` (exact for multiplication operators, 1 for Bernstein and
    /// composition).
    pub norm: f64,
    /// Upper bound for `||Id - L||` (exact for multiplication operators).
    pub id_minus_norm: f64,
    /// Whether `id_minus_norm` is exact rather than an upper bound.
    pub exact: bool,
}

/// The catalogue of base operators `L : C(I) -> C(I)` used to form base
/// functions `b = Lf`. Every kind matches `f` at the interval endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseOperator {
    /// Classical Bernstein operator of fixed degree.
    Bernstein(usize),
    /// Multiplication by a profile with value 1 at both endpoints.
    MultiplyByProfile(SampledFunction),
    /// Composition with an increasing bijection of the interval fixing the
    /// endpoints.
    ComposeWith(SampledFunction),
    /// A constant map onto an explicit base function.
    Explicit(SampledFunction),
}

impl BaseOperator {
    pub fn bernstein(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_BERNSTEIN_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "bernstein degree must be in 1..={MAX_BERNSTEIN_DEGREE}, got {n}"
            )));
        }
        Ok(BaseOperator::Bernstein(n))
    }

    pub fn multiply_by_profile(nu: SampledFunction) -> Result<Self> {
        let first = nu.values()[0];
        let last = nu.values()[nu.sample_count() - 1];
        if (first - 1.0).abs() > 1e-10 {
            return Err(Error::EndpointMismatch {
                end: "lo",
                expected: 1.0,
                actual: first,
            });
        }
        if (last - 1.0).abs() > 1e-10 {
            return Err(Error::EndpointMismatch {
                end: "hi",
                expected: 1.0,
                actual: last,
            });
        }
        Ok(BaseOperator::MultiplyByProfile(nu))
    }

    pub fn compose_with(phi: SampledFunction) -> Result<Self> {
        let iv = phi.interval();
        let first = phi.values()[0];
        let last = phi.values()[phi.sample_count() - 1];
        if (first - iv.lo()).abs() > 1e-10 * (1.0 + iv.span()) {
            return Err(Error::EndpointMismatch {
                end: "lo",
                expected: iv.lo(),
                actual: first,
            });
        }
        if (last - iv.hi()).abs() > 1e-10 * (1.0 + iv.span()) {
            return Err(Error::EndpointMismatch {
                end: "hi",
                expected: iv.hi(),
                actual: last,
            });
        }
        if phi.values().windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "composition map must be strictly increasing".into(),
            ));
        }
        Ok(BaseOperator::ComposeWith(phi))
    }

    pub fn explicit(b: SampledFunction) -> Self {
        BaseOperator::Explicit(b)
    }

    /// Apply the operator; the result lives on `f`'s grid.
    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        match self {
            BaseOperator::Bernstein(n) => bernstein_apply(f, *n),
            BaseOperator::MultiplyByProfile(nu) => {
                if !nu.interval().close_to(&f.interval()) {
                    return Err(Error::GridMismatch(
                        "profile interval differs from the function's".into(),
                    ));
                }
                SampledFunction::from_fn(f.interval(), f.sample_count(), |x| nu.eval(x) * f.eval(x))
            }
            BaseOperator::ComposeWith(phi) => {
                if !phi.interval().close_to(&f.interval()) {
                    return Err(Error::GridMismatch(
                        "composition map interval differs from the function's".into(),
                    ));
                }
                SampledFunction::from_fn(f.interval(), f.sample_count(), |x| f.eval(phi.eval(x)))
            }
            BaseOperator::Explicit(b) => b.resample(f.sample_count()),
        }
    }

    /// Operator norm data, where available. `Explicit` is not a linear
    /// operator, so it carries none.
    pub fn norms(&self) -> Option<OperatorNorms> {
        match self {
            BaseOperator::Bernstein(_) => Some(OperatorNorms {
                norm: 1.0,
                id_minus_norm: 2.0,
                exact: false,
            }),
            BaseOperator::MultiplyByProfile(nu) => Some(OperatorNorms {
                norm: nu.sup_norm(),
                id_minus_norm: nu.map(|v| 1.0 - v).sup_norm(),
                exact: true,
            }),
            BaseOperator::ComposeWith(_) => Some(OperatorNorms {
                norm: 1.0,
                id_minus_norm: 2.0,
                exact: false,
            }),
            BaseOperator::Explicit(_) => None,
        }
    }

    /// Whether `L(1) = 1` holds structurally.
    pub fn fixes_constants(&self) -> bool {
        match self {
            BaseOperator::Bernstein(_) => true,
            BaseOperator::ComposeWith(_) => true,
            BaseOperator::MultiplyByProfile(nu) => nu.map(|v| 1.0 - v).sup_norm() == 0.0,
            BaseOperator::Explicit(_) => false,
        }
    }
}

/// Apply a base operator and check the endpoint-matching contract
/// `(Lf)(x_0) = f(x_0)`, `(Lf)(x_N) = f(x_N)`.
pub fn base_operator_apply(op: &BaseOperator, f: &SampledFunction) -> Result<SampledFunction> {
    let b = op.apply(f)?;
    let m = f.sample_count();
    let lo_gap = (b.values()[0] - f.values()[0]).abs();
    if lo_gap > 1e-10 * (1.0 + f.sup_norm()) {
        return Err(Error::EndpointMismatch {
            end: "lo",
            expected: f.values()[0],
            actual: b.values()[0],
        });
    }
    let hi_gap = (b.values()[m - 1] - f.values()[m - 1]).abs();
    if hi_gap > 1e-10 * (1.0 + f.sup_norm()) {
        return Err(Error::EndpointMismatch {
            end: "hi",
            expected: f.values()[m - 1],
            actual: b.values()[m - 1],
        });
    }
    Ok(b)
}

/// The quadratic profile `nu(x) = 1 + c (x - x_0)(x - x_N) / span^2`, which
/// equals 1 at both endpoints for any `c`. On `[0, 1]` with `c = 1` this is
/// `1 + x(x - 1)`.
pub fn quadratic_profile(interval: Interval, c: f64, m: usize) -> Result<SampledFunction> {
    let span2 = interval.span() * interval.span();
    SampledFunction::from_fn(interval, m, |x| {
        1.0 + c * (x - interval.lo()) * (x - interval.hi()) / span2
    })
}

/// The power reparameterization `phi(x) = x_0 + span ((x - x_0)/span)^p`,
/// an increasing bijection of the interval fixing the endpoints (p > 0).
/// On `[0, 1]` with `p = 3` this is `x^3`.
pub fn power_reparameterization(interval: Interval, p: f64, m: usize) -> Result<SampledFunction> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "power reparameterization needs p > 0, got {p}"
        )));
    }
    SampledFunction::from_fn(interval, m, |x| {
        let t = ((x - interval.lo()) / interval.span()).clamp(0.0, 1.0);
        interval.lo() + interval.span() * t.powf(p)
    })
}
