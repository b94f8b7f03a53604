//! The alpha-fractal engine: computes the fractal perturbation of a seed
//! function as the fixed point of the associated contraction on grid-sampled
//! function space, exposes the induced fractal operator, and provides
//! residual and inequality checks for the operator-level bounds.
//!
//! On each subinterval `I_i` of the partition the fixed point satisfies
//! `g(x) = f(x) + alpha_i (g - b)(L_i^{-1}(x))`, where `b` is the base
//! function. Iteration starts from `g = f` and contracts at rate
//! `|alpha|_inf`; off-grid reads go through piecewise-linear interpolation,
//! which keeps the discrete map a sup-norm contraction with the same rate.

use crate::domain::{build_affine_maps, Partition, SampledFunction, ScalingVector};
use crate::error::{Error, Result};
use crate::spaces::{base_operator_apply, bernstein_apply, BaseOperator};

/// Absolute tolerance for the endpoint-matching requirement
/// `b(x_0) = f(x_0)`, `b(x_N) = f(x_N)`.
const ENDPOINT_TOL: f64 = 1e-8;

/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Default fixed-point tolerance for a given contraction magnitude: tighter
/// when the iteration converges fast, looser for strongly contracting rough
/// instances.
pub fn default_tol(scaling: &ScalingVector) -> f64 {
    if scaling.sup_abs() <= 0.5 {
        1e-9
    } else {
        1e-6
    }
}

/// How the base function of a fractal instance is obtained.
#[derive(Debug, Clone)]
pub enum BaseChoice {
    /// An explicitly given base function.
    Explicit(SampledFunction),
    /// Derived from the seed through a base operator, `b = Lf`.
    Operator(BaseOperator),
}

/// Everything that determines one alpha-fractal function: the seed `f`, the
/// partition, the per-subinterval scaling factors, and the base function.
#[derive(Debug, Clone)]
pub struct FractalSpec {
    pub seed: SampledFunction,
    pub partition: Partition,
    pub scaling: ScalingVector,
    pub base: BaseChoice,
}

impl FractalSpec {
    /// Validates the cross-field invariants: the partition spans the seed's
    /// interval and the scaling vector has one factor per subinterval.
    pub fn validate(&self) -> Result<()> {
        if !self.partition.interval().close_to(&self.seed.interval()) {
            return Err(Error::GridMismatch(format!(
                "partition spans [{}, {}] but seed lives on [{}, {}]",
                self.partition.interval().lo(),
                self.partition.interval().hi(),
                self.seed.interval().lo(),
                self.seed.interval().hi()
            )));
        }
        if self.scaling.len() != self.partition.subinterval_count() {
            return Err(Error::InvalidScaling(format!(
                "{} scaling factors for {} subintervals",
                self.scaling.len(),
                self.partition.subinterval_count()
            )));
        }
        Ok(())
    }
}

/// A converged fractal computation: the sampled fixed point plus its
/// convergence certificate.
#[derive(Debug, Clone)]
pub struct FractalResult {
    /// The alpha-fractal function on the evaluation grid.
    pub values: SampledFunction,
    /// Number of iteration sweeps performed.
    pub iterations: usize,
    /// Sup-distance between the last two iterates.
    pub final_step: f64,
    /// A posteriori bound on the distance to the true fixed point of the
    /// discrete contraction: `final_step * |alpha|/(1 - |alpha|)`.
    pub certified_gap: f64,
    /// Sup-norm of each iteration step, for contraction diagnostics.
    pub steps: Vec<f64>,
}

/// Resolve the base function of `spec` on an `m`-point grid.
fn base_on_grid(spec: &FractalSpec, f: &SampledFunction) -> Result<SampledFunction> {
    let b = match &spec.base {
        BaseChoice::Explicit(b) => {
            if !b.interval().close_to(&f.interval()) {
                return Err(Error::GridMismatch(
                    "base function interval differs from the seed's".into(),
                ));
            }
            b.resample(f.sample_count())?
        }
        BaseChoice::Operator(op) => base_operator_apply(op, f)?,
    };
    let m = f.sample_count();
    for (end, idx) in [("lo", 0usize), ("hi", m - 1)] {
        let gap = (b.values()[idx] - f.values()[idx]).abs();
        if gap > ENDPOINT_TOL {
            return Err(Error::EndpointMismatch {
                end,
                expected: f.values()[idx],
                actual: b.values()[idx],
            });
        }
    }
    Ok(b)
}

/// The base function of `spec` resolved on a `grid_m`-point uniform grid,
/// with the endpoint-matching contract checked.
pub fn resolve_base(spec: &FractalSpec, grid_m: usize) -> Result<SampledFunction> {
    let f = spec.seed.resample(grid_m)?;
    base_on_grid(spec, &f)
}

/// Computes the alpha-fractal function of `spec` on a `grid_m`-point uniform
/// grid by iterating the self-referential map until the certified gap drops
/// below `tol`.
pub fn alpha_fractal(
    spec: &FractalSpec,
    grid_m: usize,
    tol: f64,
    max_iter: usize,
) -> Result<FractalResult> {
    spec.validate()?;
    let n_sub = spec.partition.subinterval_count();
    if grid_m < 2 * n_sub + 1 {
        return Err(Error::InvalidArgument(format!(
            "grid_m = {grid_m} too coarse for {n_sub} subintervals; need at least {}",
            2 * n_sub + 1
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol must be > 0, got {tol}"
        )));
    }

    let f = spec.seed.resample(grid_m)?;
    let b = base_on_grid(spec, &f)?;
    let maps = build_affine_maps(&spec.partition);
    let a_sup = spec.scaling.sup_abs();

    // Per-node precomputation: scaling factor, interpolation stencil of the
    // preimage L_i^{-1}(x_j), and the base value read at that preimage.
    let m = f.sample_count();
    let mut alpha_at = vec![0.0; m];
    let mut stencil = vec![(0usize, 0.0f64); m];
    let mut b_read = vec![0.0; m];
    for j in 0..m {
        let x = f.node(j);
        let i = spec.partition.locate(x)?;
        let y = maps.inverse(i, x);
        let (k, w) = f.locate_weight(y);
        alpha_at[j] = spec.scaling.get(i);
        stencil[j] = (k, w);
        b_read[j] = if w == 0.0 {
            b.values()[k]
        } else {
            (1.0 - w) * b.values()[k] + w * b.values()[k + 1]
        };
    }

    // Stop when the remaining geometric tail is certified below tol.
    let step_threshold = if a_sup == 0.0 {
        f64::INFINITY
    } else {
        tol * (1.0 - a_sup) / a_sup
    };

    let mut cur: Vec<f64> = f.values().to_vec();
    let mut next = vec![0.0; m];
    let mut steps = Vec::new();
    let mut final_step;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut step: f64 = 0.0;
        for j in 0..m {
            let (k, w) = stencil[j];
            let g_read = if w == 0.0 {
                cur[k]
            } else {
                (1.0 - w) * cur[k] + w * cur[k + 1]
            };
            let v = f.values()[j] + alpha_at[j] * (g_read - b_read[j]);
            step = step.max((v - cur[j]).abs());
            next[j] = v;
        }
        std::mem::swap(&mut cur, &mut next);
        steps.push(step);
        final_step = step;
        if step <= step_threshold || step == 0.0 {
            break;
        }
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                iterations,
                final_step: step,
            });
        }
    }

    let certified_gap = if a_sup == 0.0 {
        0.0
    } else {
        final_step * a_sup / (1.0 - a_sup)
    };
    Ok(FractalResult {
        values: SampledFunction::from_values(f.interval(), cur)?,
        iterations,
        final_step,
        certified_gap,
        steps,
    })
}

/// Re-evaluates the self-referential equation on the result grid and returns
/// the largest pointwise defect
/// `|g(x) - f(x) - alpha_i (g - b)(L_i^{-1}(x))|`.
///
/// Reads go through the public piecewise-linear evaluation, independently of
/// the iteration internals.
pub fn self_referential_residual(result: &FractalResult, spec: &FractalSpec) -> Result<f64> {
    let g = &result.values;
    let m = g.sample_count();
    let f = spec.seed.resample(m)?;
    let b = base_on_grid(spec, &f)?;
    let maps = build_affine_maps(&spec.partition);
    let diff = g.zip_with(&b, |gv, bv| gv - bv)?;
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let x = g.node(j);
        let i = spec.partition.locate(x)?;
        let y = maps.inverse(i, x);
        let defect = g.values()[j] - f.values()[j] - spec.scaling.get(i) * diff.eval(y);
        worst = worst.max(defect.abs());
    }
    Ok(worst)
}

/// The fractal operator: sends `f` to its alpha-fractal function with base
/// `b = Lf`.
pub fn fractal_operator_apply(
    op: &BaseOperator,
    f: &SampledFunction,
    partition: &Partition,
    scaling: &ScalingVector,
    grid_m: usize,
    tol: f64,
) -> Result<FractalResult> {
    let spec = FractalSpec {
        seed: f.clone(),
        partition: partition.clone(),
        scaling: scaling.clone(),
        base: BaseChoice::Operator(op.clone()),
    };
    alpha_fractal(&spec, grid_m, tol, DEFAULT_MAX_ITER)
}

/// Left- and right-hand side of the uniform perturbation bound
/// `||g - f|| <= |alpha|/(1 - |alpha|) ||f - b||`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationBound {
    pub lhs: f64,
    pub rhs: f64,
}

/// Evaluates both sides of the perturbation bound for a converged result.
pub fn check_perturbation_bound(
    spec: &FractalSpec,
    result: &FractalResult,
) -> Result<PerturbationBound> {
    let m = result.values.sample_count();
    let f = spec.seed.resample(m)?;
    let b = base_on_grid(spec, &f)?;
    let a = spec.scaling.sup_abs();
    let lhs = result.values.sup_distance(&f)?;
    let rhs = if a == 0.0 {
        0.0
    } else {
        a / (1.0 - a) * f.sup_distance(&b)?
    };
    Ok(PerturbationBound { lhs, rhs })
}

/// Per-instance consequences of the operator-norm bounds: the deviation and
/// size of `F(f)` against the bounds derived from the catalogue's norm data.
#[derive(Debug, Clone, Copy)]
pub struct OperatorNormReport {
    /// `||F(f) - f||`.
    pub deviation: f64,
    /// `(|alpha|/(1-|alpha|)) ||Id - L|| ||f||`.
    pub deviation_bound: f64,
    /// `||F(f)||`.
    pub norm: f64,
    /// `(1 + (|alpha|/(1-|alpha|)) ||Id - L||) ||f||`.
    pub norm_bound: f64,
    pub ok: bool,
    /// Numerical slack granted on top of each bound.
    pub slack: f64,
}

/// Verifies `||F(f) - f|| <= (|a|/(1-|a|)) ||Id-L|| ||f||` and
/// `||F(f)|| <= (1 + (|a|/(1-|a|)) ||Id-L||) ||f||` on one instance.
pub fn check_operator_norm_bounds(
    op: &BaseOperator,
    f: &SampledFunction,
    partition: &Partition,
    scaling: &ScalingVector,
    grid_m: usize,
    tol: f64,
) -> Result<OperatorNormReport> {
    let norms = op.norms().ok_or(Error::NormDataUnavailable)?;
    let result = fractal_operator_apply(op, f, partition, scaling, grid_m, tol)?;
    let fg = f.resample(grid_m)?;
    let a = scaling.sup_abs();
    let factor = if a == 0.0 { 0.0 } else { a / (1.0 - a) };
    let deviation = result.values.sup_distance(&fg)?;
    let deviation_bound = factor * norms.id_minus_norm * fg.sup_norm();
    let norm = result.values.sup_norm();
    let norm_bound = (1.0 + factor * norms.id_minus_norm) * fg.sup_norm();
    let slack = 1e-9 + 10.0 * result.certified_gap;
    let ok = deviation <= deviation_bound + slack && norm <= norm_bound + slack;
    Ok(OperatorNormReport {
        deviation,
        deviation_bound,
        norm,
        norm_bound,
        ok,
        slack,
    })
}

/// The indexed family `{ F_{B_n}(f) : n in n_list }` realizing the
/// multi-valued fractal operator with Bernstein base functions.
pub fn bernstein_family(
    f: &SampledFunction,
    partition: &Partition,
    scaling: &ScalingVector,
    n_list: &[usize],
    grid_m: usize,
    tol: f64,
) -> Result<Vec<FractalResult>> {
    n_list
        .iter()
        .map(|&n| {
            let op = BaseOperator::bernstein(n)?;
            fractal_operator_apply(&op, f, partition, scaling, grid_m, tol)
        })
        .collect()
}

/// Outcome of the Lipschitz-process check on one pair of seeds.
#[derive(Debug, Clone, Copy)]
pub struct LipschitzReport {
    /// `||F_{B_n}(f) - F_{B_n}(g)||`.
    pub lhs: f64,
    /// `((1 + |alpha|)/(1 - |alpha|)) ||f - g||`.
    pub bound: f64,
    /// Largest deviation of `F_{B_n}(lambda f)` from `lambda F_{B_n}(f)`.
    pub homogeneity_gap: f64,
    /// Tolerance granted for the homogeneity identity.
    pub homogeneity_tol: f64,
    pub ok: bool,
}

/// Checks the Lipschitz bound of the set-valued Bernstein fractal operator
/// member-wise, plus positive homogeneity with `lambda = 2`.
pub fn check_lipschitz_process(
    f: &SampledFunction,
    g: &SampledFunction,
    partition: &Partition,
    scaling: &ScalingVector,
    n: usize,
    grid_m: usize,
    tol: f64,
) -> Result<LipschitzReport> {
    let op = BaseOperator::bernstein(n)?;
    let rf = fractal_operator_apply(&op, f, partition, scaling, grid_m, tol)?;
    let rg = fractal_operator_apply(&op, g, partition, scaling, grid_m, tol)?;
    let a = scaling.sup_abs();
    let lhs = rf.values.sup_distance(&rg.values)?;
    let fg = f.resample(grid_m)?.sup_distance(&g.resample(grid_m)?)?;
    let bound = (1.0 + a) / (1.0 - a) * fg;

    let lambda = 2.0;
    let scaled_seed = f.map(|v| lambda * v);
    let r_scaled = fractal_operator_apply(&op, &scaled_seed, partition, scaling, grid_m, tol)?;
    let homogeneity_gap = r_scaled.values.sup_distance(&rf.values.scale(lambda))?;
    let homogeneity_tol = 2.0 * tol + 2.0 * (rf.certified_gap + r_scaled.certified_gap);

    let slack = 1e-9 + 10.0 * (rf.certified_gap + rg.certified_gap);
    let ok = lhs <= bound + slack && homogeneity_gap <= homogeneity_tol;
    Ok(LipschitzReport {
        lhs,
        bound,
        homogeneity_gap,
        homogeneity_tol,
        ok,
    })
}

/// Convenience: the Bernstein base function `B_n(f)` on `f`'s grid.
pub fn bernstein_base(f: &SampledFunction, n: usize) -> Result<SampledFunction> {
    bernstein_apply(f, n)
}
