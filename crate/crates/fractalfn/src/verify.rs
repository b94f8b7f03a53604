//! The verification suite: every quantitative bound the library implements,
//! checked on a fixed fixture corpus with explicit slacks. The suite is fully
//! deterministic (seeded generator, fixed check order, no timing data), so
//! two runs serialize to identical reports.

use crate::approx::{
    corrected_chain_check, fractal_minimax_bound, jackson_error_report, minimax_rational_trig,
    minimax_trig, nonneg_fractal_approx,
};
use crate::dimension::{box_count_estimate, dimension_preserving_sequence, solve_box_dimension};
use crate::domain::{build_affine_maps, Interval, Partition, SampledFunction, ScalingVector};
use crate::error::Result;
use crate::fractal::{
    alpha_fractal, check_lipschitz_process, check_operator_norm_bounds, check_perturbation_bound,
    fractal_operator_apply, self_referential_residual, BaseChoice, FractalSpec, DEFAULT_MAX_ITER,
};
use crate::seeds::BuiltinSeed;
use crate::spaces::{quadratic_profile, varma_apply, BaseOperator};
use serde::Serialize;
use std::f64::consts::PI;

/// One verified inequality: `lhs <= rhs + slack` when `passed`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub detail: String,
}

impl CheckEntry {
    fn bound(name: &str, lhs: f64, rhs: f64, slack: f64, detail: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            passed: lhs <= rhs + slack,
            lhs,
            rhs,
            slack,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n_checks: usize,
    pub n_failed: usize,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    fn from_checks(suite: &str, checks: Vec<CheckEntry>) -> Self {
        let n_failed = checks.iter().filter(|c| !c.passed).count();
        SuiteReport {
            suite: suite.into(),
            n_checks: checks.len(),
            n_failed,
            passed: n_failed == 0,
            checks,
        }
    }
}

/// Deterministic 64-bit generator (SplitMix64); stable across platforms and
/// releases, which keeps the fixture corpus frozen.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[(self.next_u64() % items.len() as u64) as usize]
    }
}

/// Run chunks of `items` across at most `threads` workers, preserving order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let threads = threads.max(1).min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let mut results: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (items_chunk, results_chunk) in items.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(|| {
                for (item, slot) in items_chunk.iter().zip(results_chunk.iter_mut()) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}

const GRID: usize = (1 << 12) + 1;
const TOL: f64 = 1e-8;

fn profile_base(interval: Interval) -> BaseOperator {
    BaseOperator::multiply_by_profile(quadratic_profile(interval, 1.0, GRID).unwrap()).unwrap()
}

fn seed_instances() -> Vec<(BuiltinSeed, SampledFunction, Partition)> {
    BuiltinSeed::all()
        .into_iter()
        .map(|seed| {
            let iv = seed.natural_interval();
            let f = seed.sample(iv, GRID).unwrap();
            let partition = Partition::uniform(iv, 8).unwrap();
            (seed, f, partition)
        })
        .collect()
}

/// A random trigonometric seed with small degree and bounded coefficients.
fn random_trig_seed(rng: &mut SplitMix64, m: usize) -> SampledFunction {
    let iv = Interval::new(-PI, PI).unwrap();
    let degree = 1 + (rng.next_u64() % 4) as usize;
    let mut cos = Vec::new();
    let mut sin = Vec::new();
    let constant = rng.uniform(-1.0, 1.0);
    for _ in 0..degree {
        cos.push(rng.uniform(-1.0, 1.0));
        sin.push(rng.uniform(-1.0, 1.0));
    }
    let t = crate::spaces::TrigPoly::new(constant, cos, sin);
    SampledFunction::from_fn(iv, m, |x| t.eval(x)).unwrap()
}

fn random_base(rng: &mut SplitMix64, interval: Interval) -> BaseOperator {
    if rng.next_u64() % 2 == 0 {
        profile_base(interval)
    } else {
        BaseOperator::bernstein(4 + (rng.next_u64() % 12) as usize).unwrap()
    }
}

fn check_degenerate_alpha_zero() -> CheckEntry {
    let mut worst: f64 = 0.0;
    let mut worst_seed = "";
    for (seed, f, partition) in seed_instances() {
        let spec = FractalSpec {
            seed: f.clone(),
            partition: partition.clone(),
            scaling: ScalingVector::uniform(8, 0.0).unwrap(),
            base: BaseChoice::Operator(profile_base(f.interval())),
        };
        let r = alpha_fractal(&spec, GRID, 1e-12, DEFAULT_MAX_ITER).unwrap();
        let d = r.values.sup_distance(&f).unwrap();
        if d > worst {
            worst = d;
            worst_seed = seed.name();
        }
    }
    CheckEntry::bound(
        "degenerate_alpha_zero",
        worst,
        0.0,
        1e-12,
        format!("worst seed: {worst_seed}"),
    )
}

fn check_degenerate_base_equals_seed() -> CheckEntry {
    let mut worst: f64 = 0.0;
    let mut worst_seed = "";
    for (seed, f, partition) in seed_instances() {
        let spec = FractalSpec {
            seed: f.clone(),
            partition: partition.clone(),
            scaling: ScalingVector::uniform(8, 0.5).unwrap(),
            base: BaseChoice::Explicit(f.clone()),
        };
        let r = alpha_fractal(&spec, GRID, 1e-12, DEFAULT_MAX_ITER).unwrap();
        let d = r.values.sup_distance(&f).unwrap();
        if d > worst {
            worst = d;
            worst_seed = seed.name();
        }
    }
    CheckEntry::bound(
        "degenerate_base_equals_seed",
        worst,
        0.0,
        1e-12,
        format!("worst seed: {worst_seed}"),
    )
}

fn check_residual_small_alpha() -> CheckEntry {
    let mut worst: f64 = 0.0;
    let mut worst_detail = String::new();
    for (seed, f, partition) in seed_instances() {
        for alpha in [0.3, 0.5] {
            for base in [
                BaseChoice::Operator(profile_base(f.interval())),
                BaseChoice::Operator(BaseOperator::bernstein(8).unwrap()),
            ] {
                let spec = FractalSpec {
                    seed: f.clone(),
                    partition: partition.clone(),
                    scaling: ScalingVector::uniform(8, alpha).unwrap(),
                    base,
                };
                let r = alpha_fractal(&spec, GRID, TOL, DEFAULT_MAX_ITER).unwrap();
                let res = self_referential_residual(&r, &spec).unwrap();
                if res > worst {
                    worst = res;
                    worst_detail = format!("{} alpha={alpha}", seed.name());
                }
            }
        }
    }
    CheckEntry::bound("residual_small_alpha", worst, 0.0, 1e-4, worst_detail)
}

/// The classic example configuration: the rational trigonometric seed on
/// `[0, 1]`, ten uniform subintervals, scaling 0.9, quadratic-profile base.
pub fn fig1_spec(grid_m: usize) -> FractalSpec {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let f = BuiltinSeed::Fig1.sample(iv, grid_m).unwrap();
    FractalSpec {
        seed: f,
        partition: Partition::uniform(iv, 10).unwrap(),
        scaling: ScalingVector::uniform(10, 0.9).unwrap(),
        base: BaseChoice::Operator(
            BaseOperator::multiply_by_profile(quadratic_profile(iv, 1.0, grid_m).unwrap()).unwrap(),
        ),
    }
}

fn check_residual_fig1() -> CheckEntry {
    let grid = (1 << 14) + 1;
    let spec = fig1_spec(grid);
    let r = alpha_fractal(&spec, grid, 1e-6, DEFAULT_MAX_ITER).unwrap();
    let res = self_referential_residual(&r, &spec).unwrap();
    CheckEntry::bound(
        "residual_fig1",
        res,
        0.0,
        5e-3,
        format!("iterations: {}", r.iterations),
    )
}

fn check_perturbation_bound_random(threads: usize) -> CheckEntry {
    let mut rng = SplitMix64::new(0x5EED_F00D);
    let mut instances = Vec::new();
    for k in 0..20 {
        let f = random_trig_seed(&mut rng, GRID);
        let n_sub = *rng.pick(&[4usize, 5, 8, 10]);
        // every fourth instance gets random non-dyadic nodes, which forces
        // interpolating reads inside the iteration
        let partition = if k % 4 == 3 {
            let iv = f.interval();
            let mut cuts: Vec<f64> = (0..n_sub - 1).map(|_| rng.uniform(0.05, 0.95)).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 0.01);
            let mut nodes = vec![iv.lo()];
            nodes.extend(cuts.iter().map(|t| iv.lo() + t * iv.span()));
            nodes.push(iv.hi());
            Partition::new(nodes).unwrap()
        } else {
            Partition::uniform(f.interval(), n_sub).unwrap()
        };
        let n_sub = partition.subinterval_count();
        let alphas: Vec<f64> = (0..n_sub).map(|_| rng.uniform(-0.8, 0.8)).collect();
        let scaling = ScalingVector::new(alphas).unwrap();
        let base = random_base(&mut rng, f.interval());
        instances.push(FractalSpec {
            seed: f,
            partition,
            scaling,
            base: BaseChoice::Operator(base),
        });
    }
    let margins = par_map(&instances, threads, |spec| {
        let r = alpha_fractal(spec, GRID, TOL, DEFAULT_MAX_ITER).unwrap();
        let pb = check_perturbation_bound(spec, &r).unwrap();
        pb.lhs - pb.rhs
    });
    let worst = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    CheckEntry::bound(
        "perturbation_bound_random",
        worst,
        0.0,
        1e-6,
        "20 random trig seeds, |alpha| <= 0.8, profile and polynomial bases",
    )
}

fn check_constant_fixed_point() -> CheckEntry {
    let mut worst: f64 = 0.0;
    for interval in [
        Interval::new(0.0, 1.0).unwrap(),
        Interval::new(-PI, PI).unwrap(),
    ] {
        for n in [4usize, 12] {
            for alpha in [0.3, 0.9] {
                let one = SampledFunction::constant(interval, GRID, 1.0).unwrap();
                let partition = Partition::uniform(interval, 8).unwrap();
                let scaling = ScalingVector::uniform(8, alpha).unwrap();
                let op = BaseOperator::bernstein(n).unwrap();
                let r =
                    fractal_operator_apply(&op, &one, &partition, &scaling, GRID, 1e-11).unwrap();
                worst = worst.max(r.values.sup_distance(&one).unwrap());
            }
        }
    }
    CheckEntry::bound(
        "constant_fixed_point",
        worst,
        0.0,
        1e-9,
        "polynomial bases fix the constant 1",
    )
}

fn check_node_interpolation() -> CheckEntry {
    let mut worst: f64 = 0.0;
    let mut worst_detail = String::new();
    for (seed, f, partition) in seed_instances() {
        for base in [
            BaseChoice::Operator(profile_base(f.interval())),
            BaseChoice::Operator(BaseOperator::bernstein(8).unwrap()),
        ] {
            let spec = FractalSpec {
                seed: f.clone(),
                partition: partition.clone(),
                scaling: ScalingVector::uniform(8, 0.5).unwrap(),
                base,
            };
            let r = alpha_fractal(&spec, GRID, TOL, DEFAULT_MAX_ITER).unwrap();
            for &x in partition.nodes() {
                let gap = (r.values.eval(x) - f.eval(x)).abs();
                if gap > worst {
                    worst = gap;
                    worst_detail = format!("{} node {x}", seed.name());
                }
            }
        }
    }
    CheckEntry::bound("node_interpolation", worst, 0.0, 1e-6, worst_detail)
}

fn check_operator_norm_consequences() -> CheckEntry {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut worst_detail = String::new();
    for (seed, f, partition) in seed_instances() {
        for op in [
            profile_base(f.interval()),
            BaseOperator::bernstein(8).unwrap(),
        ] {
            let scaling = ScalingVector::uniform(8, 0.5).unwrap();
            let rep = check_operator_norm_bounds(&op, &f, &partition, &scaling, GRID, TOL).unwrap();
            let margin = (rep.deviation - rep.deviation_bound).max(rep.norm - rep.norm_bound);
            if margin > worst {
                worst = margin;
                worst_detail = seed.name().to_string();
            }
        }
    }
    CheckEntry::bound(
        "operator_norm_consequences",
        worst,
        0.0,
        1e-7,
        format!("worst seed: {worst_detail}"),
    )
}

fn check_lipschitz_random(threads: usize) -> CheckEntry {
    let mut rng = SplitMix64::new(0xC0FFEE);
    let mut pairs = Vec::new();
    for i in 0..10 {
        let f = random_trig_seed(&mut rng, GRID);
        let g = random_trig_seed(&mut rng, GRID);
        let alpha = if i < 3 { 0.9 } else { rng.uniform(0.1, 0.8) };
        pairs.push((f, g, alpha));
    }
    let margins = par_map(&pairs, threads, |(f, g, alpha)| {
        let partition = Partition::uniform(f.interval(), 8).unwrap();
        let scaling = ScalingVector::uniform(8, *alpha).unwrap();
        let rep = check_lipschitz_process(f, g, &partition, &scaling, 6, GRID, TOL).unwrap();
        let homog_excess = (rep.homogeneity_gap - rep.homogeneity_tol).max(0.0);
        (rep.lhs - rep.bound).max(homog_excess)
    });
    let worst = margins.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    CheckEntry::bound(
        "lipschitz_process",
        worst,
        0.0,
        1e-6,
        "10 random pairs including |alpha| = 0.9 (constant 19); homogeneity lambda = 2",
    )
}

fn check_jackson_bounds() -> CheckEntry {
    let iv = Interval::new(-PI, PI).unwrap();
    let corpus: Vec<(&str, SampledFunction)> = vec![
        ("const", SampledFunction::constant(iv, GRID, 2.5).unwrap()),
        ("sin", BuiltinSeed::Sin.sample(iv, GRID).unwrap()),
        ("abs_sin", BuiltinSeed::AbsSin.sample(iv, GRID).unwrap()),
        (
            "raised_cos",
            SampledFunction::from_fn(iv, GRID, |x| 1.0 + x.cos()).unwrap(),
        ),
        (
            "weierstrass_like",
            BuiltinSeed::WeierstrassLike.sample(iv, GRID).unwrap(),
        ),
    ];
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut worst_detail = String::new();
    let mut node_worst: f64 = 0.0;
    for (name, f) in &corpus {
        for n in [2u32, 4, 8, 16] {
            let rep = jackson_error_report(f, n).unwrap();
            let margin = (rep.actual - rep.bound).max(rep.bound - rep.corollary_bound - 1e-12);
            if margin > worst {
                worst = margin;
                worst_detail = format!("{name} n={n}");
            }
            let v = varma_apply(f, n).unwrap();
            for k in 0..n {
                let mut xk = 2.0 * k as f64 * PI / n as f64;
                if xk >= PI {
                    xk -= 2.0 * PI;
                }
                node_worst = node_worst.max((v.eval(xk) - f.eval(xk)).abs());
            }
        }
    }
    let mut entry = CheckEntry::bound("jackson_bounds", worst, 0.0, 1e-3, worst_detail);
    if node_worst > 1e-8 {
        entry.passed = false;
        entry.detail = format!("{} / node interpolation gap {node_worst}", entry.detail);
    }
    entry
}

fn check_minimax_oracles() -> CheckEntry {
    let iv = Interval::new(-PI, PI).unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_detail = String::new();
    for m in 0..=6usize {
        let f = SampledFunction::from_fn(iv, GRID, |x| ((m as f64 + 1.0) * x).cos()).unwrap();
        let r = minimax_trig(&f, m, 4096).unwrap();
        let gap = (r.error - 1.0).abs();
        if gap > worst {
            worst = gap;
            worst_detail = format!("degree {m}");
        }
        // self-approximation of a member of the same class
        let t = crate::spaces::TrigPoly::new(0.3, vec![0.5; m.max(1)], vec![-0.2; m.max(1)]);
        let g = SampledFunction::from_fn(iv, GRID, |x| t.eval(x)).unwrap();
        let rs = minimax_trig(&g, m.max(1), 4096).unwrap();
        if rs.error > 1e-9 && rs.error > worst {
            worst = rs.error;
            worst_detail = format!("self-approximation degree {}", m.max(1));
        }
    }
    CheckEntry::bound(
        "minimax_oracles",
        worst,
        0.0,
        1e-3,
        format!("worst: {worst_detail}"),
    )
}

/// One row of the minimax table corpus.
pub struct TableRow {
    pub name: &'static str,
    pub seed: SampledFunction,
    pub m: usize,
    pub n: usize,
    pub partition: Partition,
    pub scaling: ScalingVector,
    pub base: BaseOperator,
    pub varma_n: u32,
}

/// The fixture corpus behind the minimax table and the witness-chain checks:
/// periodic seeds on `[-pi, pi]` paired with degrees, bases, and scalings.
pub fn minimax_table_corpus(grid_m: usize) -> Vec<TableRow> {
    let iv = Interval::new(-PI, PI).unwrap();
    let partition = Partition::uniform(iv, 8).unwrap();
    let rows: Vec<(&'static str, BuiltinSeed, usize, usize, f64, bool)> = vec![
        ("sin", BuiltinSeed::Sin, 2, 2, 0.3, true),
        ("abs_sin", BuiltinSeed::AbsSin, 3, 3, 0.6, false),
        ("fig1", BuiltinSeed::Fig1, 3, 3, 0.3, false),
        (
            "weierstrass_like",
            BuiltinSeed::WeierstrassLike,
            4,
            2,
            0.6,
            true,
        ),
    ];
    rows.into_iter()
        .map(|(name, seed, m, n, alpha, bernstein)| TableRow {
            name,
            seed: seed.sample(iv, grid_m).unwrap(),
            m,
            n,
            partition: partition.clone(),
            scaling: ScalingVector::uniform(8, alpha).unwrap(),
            base: if bernstein {
                BaseOperator::bernstein(8).unwrap()
            } else {
                BaseOperator::multiply_by_profile(quadratic_profile(iv, 1.0, grid_m).unwrap())
                    .unwrap()
            },
            varma_n: 8,
        })
        .collect()
}

fn check_error1a_witness_chain(threads: usize) -> CheckEntry {
    let corpus = minimax_table_corpus(GRID);
    let margins = par_map(&corpus, threads, |row| {
        let rep = fractal_minimax_bound(
            &row.seed,
            row.m,
            row.n,
            &row.scaling,
            &row.base,
            &row.partition,
            GRID,
            TOL,
        )
        .unwrap();
        (row.name, rep.witness - rep.bound)
    });
    let (name, worst) = margins
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    CheckEntry::bound(
        "error1a_witness_chain",
        worst,
        0.0,
        1e-4,
        format!("worst row: {name}"),
    )
}

fn check_corrected_bernstein_chain() -> CheckEntry {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let corpus: Vec<(&str, SampledFunction)> = vec![
        ("exp01", BuiltinSeed::Exp01.sample(iv, GRID).unwrap()),
        (
            "runge01",
            SampledFunction::from_fn(iv, GRID, |x| 1.0 / (1.0 + x * x)).unwrap(),
        ),
    ];
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.5).unwrap();
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut detail = String::new();
    for (name, f) in &corpus {
        let rep = corrected_chain_check(f, 2, 2, &scaling, &partition, &[4, 8, 16, 32], GRID, TOL)
            .unwrap();
        for e in &rep.entries {
            let margin = e.lhs - e.rhs;
            if margin > worst {
                worst = margin;
                detail = format!("{name} n={}", e.n);
            }
        }
        // every doubling must shave at least 5 percent off the polynomial term
        for w in rep.entries.windows(2) {
            let margin = w[1].bernstein_term - 0.95 * w[0].bernstein_term;
            if margin > worst {
                worst = margin;
                detail = format!("{name} decay {} -> {}", w[0].n, w[1].n);
            }
        }
    }
    CheckEntry::bound("corrected_bernstein_chain", worst, 0.0, 1e-7, detail)
}

fn check_density_trend() -> CheckEntry {
    let iv = Interval::new(-PI, PI).unwrap();
    let t = SampledFunction::from_fn(iv, GRID, |x| x.cos() / (2.0 + x.cos())).unwrap();
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.5).unwrap();
    let mut prev = f64::INFINITY;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut values = Vec::new();
    for n in [4usize, 8, 16, 32] {
        let op = BaseOperator::bernstein(n).unwrap();
        let r = fractal_operator_apply(&op, &t, &partition, &scaling, GRID, TOL).unwrap();
        let d = r.values.sup_distance(&t.resample(GRID).unwrap()).unwrap();
        values.push(format!("n={n}: {d:.3e}"));
        worst = worst.max(d - prev);
        prev = d;
    }
    CheckEntry::bound("density_trend", worst, 0.0, 1e-9, values.join(", "))
}

fn check_nonneg_construction() -> CheckEntry {
    let iv = Interval::new(-PI, PI).unwrap();
    let f = SampledFunction::from_fn(iv, GRID, |x| 1.0 + x.cos()).unwrap();
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.2).unwrap();
    let op = BaseOperator::bernstein(40).unwrap();
    match nonneg_fractal_approx(&f, 0.1, &scaling, &partition, &op, GRID, TOL, 3) {
        Ok((approximant, gap)) => {
            let mut entry = CheckEntry::bound(
                "nonneg_construction",
                gap,
                0.0,
                0.1 - 1e-12,
                format!("approximant min: {:.3e}", approximant.min_value()),
            );
            if approximant.min_value() < 0.0 {
                entry.passed = false;
            }
            entry
        }
        Err(e) => CheckEntry {
            name: "nonneg_construction".into(),
            passed: false,
            lhs: f64::NAN,
            rhs: 0.0,
            slack: 0.0,
            detail: format!("construction failed: {e}"),
        },
    }
}

fn check_weierstrass_pipeline() -> CheckEntry {
    // perturb the best rational approximant of the example seed with a scale
    // vector below the threshold and confirm the total error stays below eps
    let iv = Interval::new(-PI, PI).unwrap();
    let f = BuiltinSeed::Fig1.sample(iv, GRID).unwrap();
    let solve = minimax_rational_trig(&f, 3, 3, 4096).unwrap();
    let classical = solve.error;
    let eps = (2.5 * classical).max(0.05);
    let op = profile_base(iv);
    let t_s = solve.approximant.sample(iv, GRID).unwrap();
    let norms = op.norms().unwrap();
    let threshold = (eps / 2.0) / (eps / 2.0 + norms.id_minus_norm * t_s.sup_norm());
    let alpha = (0.99 * threshold).min(0.99);
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, alpha).unwrap();
    let r = fractal_operator_apply(&op, &t_s, &partition, &scaling, GRID, TOL).unwrap();
    let total = f.sup_distance(&r.values).unwrap();
    CheckEntry::bound(
        "weierstrass_pipeline",
        total,
        eps,
        0.0,
        format!("classical error {classical:.3e}, threshold {threshold:.3e}"),
    )
}

fn check_dimension_solver() -> CheckEntry {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let cases = [
        (10usize, 0.9, 1.0 + 9.0f64.log10()),
        (2, 0.9, 1.0 + 1.8f64.log2()),
        (4, 0.2, 1.0),
    ];
    let mut worst: f64 = 0.0;
    for (n, alpha, expected) in cases {
        let partition = Partition::uniform(unit, n).unwrap();
        let maps = build_affine_maps(&partition);
        let scaling = ScalingVector::uniform(n, alpha).unwrap();
        let (d, _) = solve_box_dimension(&scaling, &maps);
        worst = worst.max((d - expected).abs());
    }
    CheckEntry::bound(
        "dimension_solver",
        worst,
        0.0,
        1e-10,
        "closed forms: N=10 a=0.9, N=2 a=0.9, sub-unit sum",
    )
}

fn check_dimension_preserving_sequence() -> CheckEntry {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let f = BuiltinSeed::Exp01.sample(iv, GRID).unwrap();
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.6).unwrap();
    let rep =
        dimension_preserving_sequence(&f, &partition, &scaling, &[4, 8, 16], GRID, TOL, false)
            .unwrap();
    let d0 = rep.members[0].theoretical_d;
    let same = rep.members.iter().all(|m| m.theoretical_d == d0);
    let mut worst: f64 = f64::NEG_INFINITY;
    for w in rep.members.windows(2) {
        worst = worst.max(w[1].distance_to_seed - w[0].distance_to_seed);
    }
    let mut entry = CheckEntry::bound(
        "dimension_preserving_sequence",
        worst,
        0.0,
        1e-9,
        format!(
            "common D = {d0:.6}; distances: {}",
            rep.members
                .iter()
                .map(|m| format!("{:.3e}", m.distance_to_seed))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    if !same {
        entry.passed = false;
        entry.detail = format!("{} / theoretical D differs across members", entry.detail);
    }
    entry
}

fn check_box_counting() -> CheckEntry {
    let grid = (1 << 16) + 1;
    let spec = fig1_spec(grid);
    let r = alpha_fractal(&spec, grid, 1e-6, DEFAULT_MAX_ITER).unwrap();
    let (d_est, r2, _) = box_count_estimate(&r.values, 1.0 / 1024.0, 1.0 / 16.0, 7).unwrap();
    let target = 1.0 + 9.0f64.log10();
    let mut entry = CheckEntry::bound(
        "box_counting_fig1",
        (d_est - target).abs(),
        0.0,
        0.15,
        format!("estimate {d_est:.4} vs theory {target:.4}, r2 {r2:.4}"),
    );
    // smooth cross-check: an unperturbed smooth seed estimates near 1
    let iv = Interval::new(-PI, PI).unwrap();
    let smooth = BuiltinSeed::Sin.sample(iv, grid).unwrap();
    let (d_smooth, _, _) = box_count_estimate(&smooth, 1.0 / 1024.0, 1.0 / 16.0, 7).unwrap();
    if !(0.95..=1.1).contains(&d_smooth) {
        entry.passed = false;
        entry.detail = format!(
            "{} / smooth estimate {d_smooth:.4} outside [0.95, 1.1]",
            entry.detail
        );
    }
    entry
}

/// Runs the full fixture suite. `threads` caps the worker count for the
/// corpus-level checks; pass 0 to use all available cores.
pub fn run_full_suite(threads: usize) -> SuiteReport {
    let threads = if threads == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        threads
    };
    let checks = vec![
        check_degenerate_alpha_zero(),
        check_degenerate_base_equals_seed(),
        check_residual_small_alpha(),
        check_residual_fig1(),
        check_perturbation_bound_random(threads),
        check_constant_fixed_point(),
        check_node_interpolation(),
        check_operator_norm_consequences(),
        check_lipschitz_random(threads),
        check_jackson_bounds(),
        check_minimax_oracles(),
        check_error1a_witness_chain(threads),
        check_corrected_bernstein_chain(),
        check_density_trend(),
        check_nonneg_construction(),
        check_weierstrass_pipeline(),
        check_dimension_solver(),
        check_dimension_preserving_sequence(),
        check_box_counting(),
    ];
    SuiteReport::from_checks("full", checks)
}

/// Per-instance checks for a user-supplied configuration: the perturbation
/// bound, the self-referential residual, node interpolation (when the
/// partition nodes lie on the evaluation grid), operator-norm consequences
/// (when norm data exists), and the dimension solver residual.
pub fn instance_checks(spec: &FractalSpec, grid_m: usize, tol: f64) -> Result<Vec<CheckEntry>> {
    let mut checks = Vec::new();
    let r = alpha_fractal(spec, grid_m, tol, DEFAULT_MAX_ITER)?;

    let pb = check_perturbation_bound(spec, &r)?;
    checks.push(CheckEntry::bound(
        "perturbation_bound",
        pb.lhs,
        pb.rhs,
        1e-6 + 10.0 * (tol + r.certified_gap),
        "uniform distance against the scaling bound",
    ));

    let residual = self_referential_residual(&r, spec)?;
    let residual_gate = if spec.scaling.sup_abs() <= 0.5 {
        1e-4
    } else {
        5e-3
    };
    checks.push(CheckEntry::bound(
        "self_referential_residual",
        residual,
        0.0,
        residual_gate,
        format!("converged in {} iterations", r.iterations),
    ));

    let f = spec.seed.resample(grid_m)?;
    let step = f.step();
    let aligned = spec.partition.nodes().iter().all(|&x| {
        let t = (x - f.interval().lo()) / step;
        (t - t.round()).abs() <= 1e-9
    });
    if aligned {
        let worst = spec
            .partition
            .nodes()
            .iter()
            .map(|&x| (r.values.eval(x) - f.eval(x)).abs())
            .fold(0.0f64, f64::max)
            .max(0.0);
        checks.push(CheckEntry::bound(
            "node_interpolation",
            worst,
            0.0,
            1e-6,
            "partition nodes lie on the evaluation grid",
        ));
    }

    if let BaseChoice::Operator(op) = &spec.base {
        if op.norms().is_some() {
            let rep = check_operator_norm_bounds(
                op,
                &spec.seed,
                &spec.partition,
                &spec.scaling,
                grid_m,
                tol,
            )?;
            checks.push(CheckEntry::bound(
                "operator_norm_consequences",
                (rep.deviation - rep.deviation_bound).max(rep.norm - rep.norm_bound),
                0.0,
                rep.slack,
                "per-instance consequences of the operator-norm bounds",
            ));
        }
        if op.fixes_constants() {
            let one = SampledFunction::constant(f.interval(), grid_m, 1.0)?;
            let rc =
                fractal_operator_apply(op, &one, &spec.partition, &spec.scaling, grid_m, 1e-11)?;
            checks.push(CheckEntry::bound(
                "constant_fixed_point",
                rc.values.sup_distance(&one)?,
                0.0,
                1e-9,
                "base operator fixes constants",
            ));
        }
    }

    let maps = build_affine_maps(&spec.partition);
    let (d, saturated) = solve_box_dimension(&spec.scaling, &maps);
    let moran_residual = if spec.scaling.sum_abs() > 1.0 && !saturated {
        spec.scaling
            .alphas()
            .iter()
            .zip(maps.slopes())
            .map(|(al, a)| al.abs() * a.powf(d - 1.0))
            .sum::<f64>()
            - 1.0
    } else {
        0.0
    };
    checks.push(CheckEntry::bound(
        "dimension_solver_residual",
        moran_residual.abs(),
        0.0,
        1e-10,
        format!("theoretical D = {d:.8}"),
    ));

    Ok(checks)
}
