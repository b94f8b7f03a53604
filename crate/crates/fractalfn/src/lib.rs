//! Fractal perturbations of continuous functions.
//!
//! The crate constructs alpha-fractal versions of sampled continuous
//! functions as fixed points of a contraction on grid-sampled function space,
//! provides the classical approximation machinery they are measured against
//! (trigonometric and rational trigonometric minimax, Bernstein and
//! Jackson-type operators), computes box-counting dimensions of the resulting
//! graphs, and verifies the quantitative bounds relating all of these on
//! concrete instances.

pub mod approx;
pub mod dimension;
pub mod domain;
pub mod error;
pub mod fractal;
pub mod seeds;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};

pub use domain::{
    build_affine_maps, sup_distance, sup_norm, AffineMapFamily, Interval, Partition,
    SampledFunction, ScalingVector,
};
pub use fractal::{alpha_fractal, BaseChoice, FractalResult, FractalSpec};
pub use spaces::{BaseOperator, RationalTrig, TrigPoly};
