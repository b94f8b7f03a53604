//! Foundational domain types: intervals, partitions, scaling vectors, the
//! affine contraction maps of the underlying iterated function system, and
//! grid-sampled functions with sup-norm arithmetic.
//!
//! Everything here is immutable after construction and all operations are
//! pure; results do not depend on evaluation order.

use crate::error::{Error, Result};

/// Relative tolerance used when snapping evaluation points to grid nodes and
/// when accepting arguments that fall a rounding error outside the domain.
const SNAP_EPS: f64 = 1e-9;

/// A closed bounded interval `[lo, hi]` with `lo < hi` strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    /// True when the two intervals agree to within a relative rounding slop.
    pub fn close_to(&self, other: &Interval) -> bool {
        let scale = self.span().max(other.span());
        (self.lo - other.lo).abs() <= 1e-12 * scale && (self.hi - other.hi).abs() <= 1e-12 * scale
    }
}

/// A strictly increasing node sequence `x_0 < x_1 < ... < x_N` with `N >= 2`
/// subintervals. Subintervals are indexed `0..N` here; subinterval `i` is
/// `[x_i, x_{i+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    nodes: Vec<f64>,
}

impl Partition {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidPartition(format!(
                "need at least 3 nodes (2 subintervals), got {}",
                nodes.len()
            )));
        }
        for w in nodes.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidPartition(format!(
                    "nodes must be strictly increasing; {} !< {}",
                    w[0], w[1]
                )));
            }
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPartition("non-finite node".into()));
        }
        Ok(Partition { nodes })
    }

    /// Uniform partition of `interval` into `n` subintervals.
    pub fn uniform(interval: Interval, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 subintervals, got {n}"
            )));
        }
        let nodes = (0..=n)
            .map(|i| {
                if i == n {
                    interval.hi()
                } else {
                    interval.lo() + (i as f64 / n as f64) * interval.span()
                }
            })
            .collect();
        Partition::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn subinterval_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.nodes[0],
            hi: *self.nodes.last().unwrap(),
        }
    }

    /// Index `i` of the subinterval containing `x`, left-closed convention:
    /// `x in [x_i, x_{i+1})` maps to `i`, except `x = x_N` maps to `N-1`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        let iv = self.interval();
        let tol = SNAP_EPS * iv.span();
        if x < iv.lo() - tol || x > iv.hi() + tol {
            return Err(Error::OutOfDomain {
                x,
                lo: iv.lo(),
                hi: iv.hi(),
            });
        }
        let count = self.nodes.partition_point(|&v| v <= x);
        // count == 0 only when x sits a rounding error below x_0.
        Ok(count.max(1).min(self.subinterval_count()) - 1)
    }
}

/// Per-subinterval contraction factors `alpha_i` with `|alpha_i| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector {
    alphas: Vec<f64>,
}

impl ScalingVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidScaling("empty scaling vector".into()));
        }
        for (i, a) in alphas.iter().enumerate() {
            if !(a.abs() < 1.0) {
                return Err(Error::InvalidScaling(format!(
                    "|alpha_{i}| = {} must be strictly below 1",
                    a.abs()
                )));
            }
        }
        Ok(ScalingVector { alphas })
    }

    /// All components equal to `value`.
    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        ScalingVector::new(vec![value; n])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.alphas[i]
    }

    /// `|alpha|_inf`, the maximal contraction magnitude.
    pub fn sup_abs(&self) -> f64 {
        self.alphas.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn sum_abs(&self) -> f64 {
        self.alphas.iter().map(|a| a.abs()).sum()
    }
}

/// The family of affine homeomorphisms `L_i : [x_0, x_N] -> [x_i, x_{i+1}]`,
/// `L_i(x) = a_i x + c_i`, determined by the endpoint conditions
/// `L_i(x_0) = x_i` and `L_i(x_N) = x_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMapFamily {
    slopes: Vec<f64>,
    offsets: Vec<f64>,
    interval: Interval,
}

impl AffineMapFamily {
    pub fn from_partition(partition: &Partition) -> Self {
        let iv = partition.interval();
        let span = iv.span();
        let nodes = partition.nodes();
        let n = partition.subinterval_count();
        let mut slopes = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let a = (nodes[i + 1] - nodes[i]) / span;
            slopes.push(a);
            offsets.push(nodes[i] - a * iv.lo());
        }
        AffineMapFamily {
            slopes,
            offsets,
            interval: iv,
        }
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn slope(&self, i: usize) -> f64 {
        self.slopes[i]
    }

    pub fn offset(&self, i: usize) -> f64 {
        self.offsets[i]
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// `L_i(x)`.
    pub fn forward(&self, i: usize, x: f64) -> f64 {
        self.slopes[i] * x + self.offsets[i]
    }

    /// `L_i^{-1}(y)`, clamped to the parent interval against rounding spill.
    pub fn inverse(&self, i: usize, y: f64) -> f64 {
        let x = (y - self.offsets[i]) / self.slopes[i];
        x.clamp(self.interval.lo(), self.interval.hi())
    }
}

/// Builds the affine map family for a partition. The returned slopes sum to 1
/// and every map satisfies both endpoint identities.
pub fn build_affine_maps(partition: &Partition) -> AffineMapFamily {
    AffineMapFamily::from_partition(partition)
}

/// A continuous function represented by its values on a uniform grid over an
/// interval, both endpoints included. Evaluation between nodes is piecewise
/// linear; evaluation at a node returns the stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    interval: Interval,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn from_values(interval: Interval, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::GridMismatch(format!(
                "need at least 2 samples, got {}",
                values.len()
            )));
        }
        Ok(SampledFunction { interval, values })
    }

    /// Sample `f` at `m` uniform nodes spanning `interval`.
    pub fn from_fn<F: Fn(f64) -> f64>(interval: Interval, m: usize, f: F) -> Result<Self> {
        if m < 2 {
            return Err(Error::GridMismatch(format!(
                "need at least 2 samples, got {m}"
            )));
        }
        let step = interval.span() / (m - 1) as f64;
        let values = (0..m)
            .map(|j| {
                let x = if j == m - 1 {
                    interval.hi()
                } else {
                    interval.lo() + j as f64 * step
                };
                f(x)
            })
            .collect();
        Ok(SampledFunction { interval, values })
    }

    /// Constant function on `interval`.
    pub fn constant(interval: Interval, m: usize, value: f64) -> Result<Self> {
        SampledFunction::from_values(interval, vec![value; m])
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn sample_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.interval.span() / (self.values.len() - 1) as f64
    }

    /// Grid abscissa of node `j`.
    pub fn node(&self, j: usize) -> f64 {
        if j == self.values.len() - 1 {
            self.interval.hi()
        } else {
            self.interval.lo() + j as f64 * self.step()
        }
    }

    /// Piecewise-linear evaluation. Exact at grid nodes. Arguments are
    /// accepted up to a rounding-level overshoot outside the interval and
    /// clamped; anything further out is a caller bug.
    pub fn eval(&self, x: f64) -> f64 {
        let (j, w) = self.locate_weight(x);
        if w == 0.0 {
            self.values[j]
        } else {
            (1.0 - w) * self.values[j] + w * self.values[j + 1]
        }
    }

    /// Lower node index and interpolation weight for `x`; weight 0 means the
    /// value is taken from the node exactly.
    pub fn locate_weight(&self, x: f64) -> (usize, f64) {
        let m = self.values.len();
        let t = (x - self.interval.lo()) / self.step();
        let near = t.round();
        if (t - near).abs() <= SNAP_EPS {
            let j = (near as isize).clamp(0, (m - 1) as isize) as usize;
            return (j, 0.0);
        }
        assert!(
            t > 0.0 && t < (m - 1) as f64,
            "evaluation outside the sampled interval: x={x}, interval=[{}, {}]",
            self.interval.lo(),
            self.interval.hi()
        );
        let j = t.floor() as usize;
        (j, t - j as f64)
    }

    /// `max_j |f(x_j)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_j |f(x_j) - g(x_j)|` over the shared grid.
    pub fn sup_distance(&self, other: &SampledFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    fn check_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.values.len() != other.values.len() || !self.interval.close_to(&other.interval) {
            return Err(Error::GridMismatch(format!(
                "grids differ: {} samples on [{}, {}] vs {} samples on [{}, {}]",
                self.values.len(),
                self.interval.lo(),
                self.interval.hi(),
                other.values.len(),
                other.interval.lo(),
                other.interval.hi()
            )));
        }
        Ok(())
    }

    /// Pointwise combination over the shared grid.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(
        &self,
        other: &SampledFunction,
        f: F,
    ) -> Result<SampledFunction> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(SampledFunction {
            interval: self.interval,
            values,
        })
    }

    /// Pointwise map.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> SampledFunction {
        SampledFunction {
            interval: self.interval,
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> SampledFunction {
        self.map(|v| s * v)
    }

    /// Resample onto an `m`-node uniform grid over the same interval via
    /// piecewise-linear reads. Returns a bit-identical clone when the grid
    /// already matches.
    pub fn resample(&self, m: usize) -> Result<SampledFunction> {
        if m == self.values.len() {
            return Ok(self.clone());
        }
        SampledFunction::from_fn(self.interval, m, |x| self.eval(x))
    }
}

/// `max |f|` over the grid; free-function form.
pub fn sup_norm(f: &SampledFunction) -> f64 {
    f.sup_norm()
}

/// `max |f - g|` over the shared grid; free-function form.
pub fn sup_distance(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    f.sup_distance(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_rejects_degenerate() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn affine_maps_uniform_n4() {
        let p = Partition::uniform(unit(), 4).unwrap();
        let maps = build_affine_maps(&p);
        for i in 0..4 {
            assert!((maps.slope(i) - 0.25).abs() < 1e-15);
            assert!((maps.offset(i) - i as f64 / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn affine_maps_two_piece_symmetric() {
        // Hand algebra: L_i(x) = x/2 -/+ pi/2 on [-pi, pi].
        let p = Partition::new(vec![-PI, 0.0, PI]).unwrap();
        let maps = build_affine_maps(&p);
        assert!((maps.slope(0) - 0.5).abs() < 1e-15);
        assert!((maps.offset(0) + PI / 2.0).abs() < 1e-12);
        assert!((maps.slope(1) - 0.5).abs() < 1e-15);
        assert!((maps.offset(1) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn partition_rejects_repeated_node() {
        assert!(Partition::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
    }

    #[test]
    fn partition_rejects_too_few_nodes() {
        assert!(Partition::new(vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn locate_left_closed_convention() {
        let p = Partition::uniform(unit(), 10).unwrap();
        // 0.3 <= 0.35 < 0.4 -> zero-based index 3 (paper's i = 4).
        assert_eq!(p.locate(0.35).unwrap(), 3);
        // right endpoint goes to the last subinterval
        assert_eq!(p.locate(1.0).unwrap(), 9);
        // interior node exactly: left-closed, so x_3 starts subinterval 3
        assert_eq!(p.locate(p.nodes()[3]).unwrap(), 3);
        assert!(p.locate(1.5).is_err());
        assert!(p.locate(-0.1).is_err());
    }

    #[test]
    fn scaling_vector_strictness() {
        assert!(ScalingVector::new(vec![0.9, -0.9]).is_ok());
        assert!(ScalingVector::new(vec![1.0]).is_err());
        assert!(ScalingVector::new(vec![-1.0]).is_err());
        assert!(ScalingVector::new(vec![]).is_err());
        let s = ScalingVector::new(vec![0.3, -0.8, 0.1]).unwrap();
        assert_eq!(s.sup_abs(), 0.8);
        assert!((s.sum_abs() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn sup_norm_of_zero_and_sine() {
        let z = SampledFunction::constant(unit(), 64, 0.0).unwrap();
        assert_eq!(z.sup_norm(), 0.0);
        let iv = Interval::new(-PI, PI).unwrap();
        let s = SampledFunction::from_fn(iv, 4097, |x| x.sin()).unwrap();
        assert!((s.sup_norm() - 1.0).abs() < 1e-6);
        assert_eq!(s.sup_distance(&s).unwrap(), 0.0);
    }

    #[test]
    fn sup_distance_rejects_mismatched_grids() {
        let a = SampledFunction::constant(unit(), 16, 1.0).unwrap();
        let b = SampledFunction::constant(unit(), 17, 1.0).unwrap();
        assert!(a.sup_distance(&b).is_err());
    }

    #[test]
    fn eval_exact_on_nodes() {
        let f = SampledFunction::from_fn(unit(), 97, |x| (5.1 * x).sin()).unwrap();
        for j in 0..f.sample_count() {
            assert_eq!(f.eval(f.node(j)), f.values()[j]);
        }
    }

    #[test]
    fn eval_midpoint_is_mean() {
        let f = SampledFunction::from_values(unit(), vec![0.0, 2.0, 6.0]).unwrap();
        assert!((f.eval(0.25) - 1.0).abs() < 1e-12);
        assert!((f.eval(0.75) - 4.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn affine_roundtrip_and_slope_sum(raw in proptest::collection::vec(0.01f64..1.0, 2..12)) {
            // cumulative sums give strictly increasing nodes
            let mut nodes = vec![0.0];
            let mut acc = 0.0;
            for r in &raw {
                acc += r;
                nodes.push(acc);
            }
            let p = Partition::new(nodes).unwrap();
            let maps = build_affine_maps(&p);
            let iv = p.interval();
            let sum: f64 = maps.slopes().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            for i in 0..maps.len() {
                // endpoint identities
                prop_assert!((maps.forward(i, iv.lo()) - p.nodes()[i]).abs()
                    <= 1e-12 * iv.span());
                prop_assert!((maps.forward(i, iv.hi()) - p.nodes()[i + 1]).abs()
                    <= 1e-12 * iv.span());
                // L_i(L_i^{-1}(x)) = x on I_i
                for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let x = p.nodes()[i] + t * (p.nodes()[i + 1] - p.nodes()[i]);
                    let back = maps.forward(i, maps.inverse(i, x));
                    prop_assert!((back - x).abs() <= 1e-12 * (1.0 + x.abs()));
                }
            }
        }

        #[test]
        fn sup_distance_triangle_inequality(
            a in proptest::collection::vec(-10.0f64..10.0, 16),
            b in proptest::collection::vec(-10.0f64..10.0, 16),
            c in proptest::collection::vec(-10.0f64..10.0, 16),
        ) {
            let iv = Interval::new(0.0, 1.0).unwrap();
            let fa = SampledFunction::from_values(iv, a).unwrap();
            let fb = SampledFunction::from_values(iv, b).unwrap();
            let fc = SampledFunction::from_values(iv, c).unwrap();
            let ab = fa.sup_distance(&fb).unwrap();
            let bc = fb.sup_distance(&fc).unwrap();
            let ac = fa.sup_distance(&fc).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
        }

        #[test]
        fn monotone_data_evaluates_monotone(
            incr in proptest::collection::vec(0.0f64..1.0, 8),
            t1 in 0.0f64..1.0,
            t2 in 0.0f64..1.0,
        ) {
            let mut acc = 0.0;
            let values: Vec<f64> = incr.iter().map(|d| { acc += d; acc }).collect();
            let f = SampledFunction::from_values(unit(), values).unwrap();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(f.eval(lo) <= f.eval(hi) + 1e-12);
        }
    }
}
