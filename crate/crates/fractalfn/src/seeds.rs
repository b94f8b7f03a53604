//! Builtin seed functions used by the command-line tools, the verification
//! suite, and the demo: a rational trigonometric example built from squared
//! Jackson kernels, smooth and kinked periodic seeds, the exponential on the
//! unit interval, and a lacunary cosine sum as the rough case.

use crate::domain::{Interval, SampledFunction};
use crate::error::{Error, Result};
use crate::spaces::jackson_kernel;
use std::f64::consts::PI;

/// Named seed functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinSeed {
    /// `p(x)/q(x)` with `p(x) = 27 sum_k sin(2k pi/3) J_3^2(x - 2k pi/3)` and
    /// `q(x) = 19 + 8 cos(3x)`.
    Fig1,
    Sin,
    AbsSin,
    /// `e^x`, intended on `[0, 1]`.
    Exp01,
    /// Lacunary cosine sum `sum_{k=0}^{11} 0.55^k cos(2^k x)`.
    WeierstrassLike,
}

/// Numerator of the [`BuiltinSeed::Fig1`] quotient.
pub fn fig1_numerator(x: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..3u32 {
        let node = 2.0 * k as f64 * PI / 3.0;
        let j = jackson_kernel(3, x - node);
        acc += node.sin() * j * j;
    }
    27.0 * acc
}

/// Denominator of the [`BuiltinSeed::Fig1`] quotient; its minimum is 11.
pub fn fig1_denominator(x: f64) -> f64 {
    19.0 + 8.0 * (3.0 * x).cos()
}

impl BuiltinSeed {
    pub fn all() -> [BuiltinSeed; 5] {
        [
            BuiltinSeed::Fig1,
            BuiltinSeed::Sin,
            BuiltinSeed::AbsSin,
            BuiltinSeed::Exp01,
            BuiltinSeed::WeierstrassLike,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinSeed::Fig1 => "fig1",
            BuiltinSeed::Sin => "sin",
            BuiltinSeed::AbsSin => "abs_sin",
            BuiltinSeed::Exp01 => "exp01",
            BuiltinSeed::WeierstrassLike => "weierstrass_like",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown builtin seed '{name}'; available: fig1, sin, abs_sin, exp01, weierstrass_like"
                ))
            })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BuiltinSeed::Fig1 => fig1_numerator(x) / fig1_denominator(x),
            BuiltinSeed::Sin => x.sin(),
            BuiltinSeed::AbsSin => x.sin().abs(),
            BuiltinSeed::Exp01 => x.exp(),
            BuiltinSeed::WeierstrassLike => {
                let mut acc = 0.0;
                let mut amp = 1.0;
                let mut freq = 1.0;
                for _ in 0..12 {
                    acc += amp * (freq * x).cos();
                    amp *= 0.55;
                    freq *= 2.0;
                }
                acc
            }
        }
    }

    /// Interval the seed is normally studied on.
    pub fn natural_interval(&self) -> Interval {
        match self {
            BuiltinSeed::Fig1 | BuiltinSeed::Exp01 => Interval::new(0.0, 1.0).unwrap(),
            _ => Interval::new(-PI, PI).unwrap(),
        }
    }

    /// Whether the seed is continuous and `2 pi`-periodic on `[-pi, pi]`.
    pub fn is_periodic(&self) -> bool {
        !matches!(self, BuiltinSeed::Exp01)
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(interval, m, |x| self.eval(x))
    }
}
