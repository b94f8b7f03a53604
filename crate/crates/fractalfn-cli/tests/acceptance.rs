//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p fractalfn-cli --test acceptance -- --nocapture`
//! to see every line.

use fractalfn::approx::{
    corrected_chain_check, fractal_minimax_bound, jackson_error_report, minimax_trig,
};
use fractalfn::dimension::{
    box_count_estimate, dimension_preserving_sequence, solve_box_dimension,
};
use fractalfn::domain::{build_affine_maps, Interval, Partition, SampledFunction, ScalingVector};
use fractalfn::fractal::{
    alpha_fractal, check_lipschitz_process, check_perturbation_bound, fractal_operator_apply,
    self_referential_residual, BaseChoice, FractalSpec, DEFAULT_MAX_ITER,
};
use fractalfn::seeds::BuiltinSeed;
use fractalfn::spaces::{quadratic_profile, varma_apply, BaseOperator, TrigPoly};
use fractalfn::verify::{fig1_spec, minimax_table_corpus, SplitMix64};
use std::f64::consts::PI;
use std::time::Instant;

const GRID_12: usize = (1 << 12) + 1;
const GRID_14: usize = (1 << 14) + 1;
const GRID_16: usize = (1 << 16) + 1;

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "{criterion}: {detail}");
}

fn five_seed_corpus(grid: usize) -> Vec<(BuiltinSeed, SampledFunction, Partition)> {
    BuiltinSeed::all()
        .into_iter()
        .map(|seed| {
            let iv = seed.natural_interval();
            (
                seed,
                seed.sample(iv, grid).unwrap(),
                Partition::uniform(iv, 8).unwrap(),
            )
        })
        .collect()
}

fn profile_base(iv: Interval, grid: usize) -> BaseOperator {
    BaseOperator::multiply_by_profile(quadratic_profile(iv, 1.0, grid).unwrap()).unwrap()
}

#[test]
fn c01_degenerate_exactness() {
    let mut worst: f64 = 0.0;
    let mut slowest = 0.0f64;
    for (_, f, partition) in five_seed_corpus(GRID_12) {
        for (scaling, base) in [
            (
                ScalingVector::uniform(8, 0.0).unwrap(),
                BaseChoice::Operator(BaseOperator::bernstein(8).unwrap()),
            ),
            (
                ScalingVector::uniform(8, 0.5).unwrap(),
                BaseChoice::Explicit(f.clone()),
            ),
        ] {
            let spec = FractalSpec {
                seed: f.clone(),
                partition: partition.clone(),
                scaling,
                base,
            };
            let start = Instant::now();
            let r = alpha_fractal(&spec, GRID_12, 1e-12, DEFAULT_MAX_ITER).unwrap();
            slowest = slowest.max(start.elapsed().as_secs_f64());
            worst = worst.max(r.values.sup_distance(&f).unwrap());
        }
    }
    report(
        "criterion 1 (degenerate exactness)",
        worst <= 1e-12 && slowest < 1.0,
        &format!("max |f_alpha - f| = {worst:.3e} over 10 runs, slowest {slowest:.3}s"),
    );
}

#[test]
fn c02_self_referential_residual() {
    let start = Instant::now();
    let mut worst_small: f64 = 0.0;
    for (_, f, partition) in five_seed_corpus(GRID_12) {
        for alpha in [0.3, 0.5] {
            let spec = FractalSpec {
                seed: f.clone(),
                partition: partition.clone(),
                scaling: ScalingVector::uniform(8, alpha).unwrap(),
                base: BaseChoice::Operator(profile_base(f.interval(), GRID_12)),
            };
            let r = alpha_fractal(&spec, GRID_12, 1e-8, DEFAULT_MAX_ITER).unwrap();
            worst_small = worst_small.max(self_referential_residual(&r, &spec).unwrap());
        }
    }
    let spec = fig1_spec(GRID_14);
    let r = alpha_fractal(&spec, GRID_14, 1e-6, DEFAULT_MAX_ITER).unwrap();
    let fig1_residual = self_referential_residual(&r, &spec).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 2 (self-referential residual)",
        worst_small <= 1e-4 && fig1_residual <= 5e-3 && elapsed < 10.0,
        &format!(
            "small-alpha residual {worst_small:.3e} (<= 1e-4), fig1 residual {fig1_residual:.3e} (<= 5e-3), {elapsed:.2}s"
        ),
    );
}

#[test]
fn c03_perturbation_bound_random() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xACCE97);
    let iv = Interval::new(-PI, PI).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..20 {
        let degree = 1 + (rng.next_u64() % 4) as usize;
        let constant = rng.uniform(-1.0, 1.0);
        let cos: Vec<f64> = (0..degree).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let sin: Vec<f64> = (0..degree).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let t = TrigPoly::new(constant, cos, sin);
        let f = SampledFunction::from_fn(iv, GRID_12, |x| t.eval(x)).unwrap();
        let n_sub = [4usize, 5, 8, 10][(rng.next_u64() % 4) as usize];
        let partition = Partition::uniform(iv, n_sub).unwrap();
        let alphas: Vec<f64> = (0..n_sub).map(|_| rng.uniform(-0.8, 0.8)).collect();
        let base = if k % 2 == 0 {
            profile_base(iv, GRID_12)
        } else {
            BaseOperator::bernstein(4 + (rng.next_u64() % 12) as usize).unwrap()
        };
        let spec = FractalSpec {
            seed: f,
            partition,
            scaling: ScalingVector::new(alphas).unwrap(),
            base: BaseChoice::Operator(base),
        };
        let r = alpha_fractal(&spec, GRID_12, 1e-8, DEFAULT_MAX_ITER).unwrap();
        let pb = check_perturbation_bound(&spec, &r).unwrap();
        worst = worst.max(pb.lhs - pb.rhs);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 3 (perturbation bound)",
        worst <= 1e-6 && elapsed < 30.0,
        &format!("max (lhs - rhs) = {worst:.3e} over 20 random instances, {elapsed:.2}s"),
    );
}

#[test]
fn c04_constant_fixed_point() {
    let mut worst: f64 = 0.0;
    for iv in [
        Interval::new(0.0, 1.0).unwrap(),
        Interval::new(-PI, PI).unwrap(),
    ] {
        let one = SampledFunction::constant(iv, GRID_12, 1.0).unwrap();
        let partition = Partition::uniform(iv, 8).unwrap();
        for alpha in [-0.5, 0.3, 0.6, 0.9] {
            for n in [4usize, 12, 30] {
                let scaling = ScalingVector::uniform(8, alpha).unwrap();
                let op = BaseOperator::bernstein(n).unwrap();
                let r = fractal_operator_apply(&op, &one, &partition, &scaling, GRID_12, 1e-11)
                    .unwrap();
                worst = worst.max(r.values.sup_distance(&one).unwrap());
            }
        }
    }
    report(
        "criterion 4 (constant fixed point)",
        worst <= 1e-9,
        &format!("max ||F(1) - 1|| = {worst:.3e} over the alpha/degree test set"),
    );
}

#[test]
fn c05_node_interpolation() {
    let mut worst: f64 = 0.0;
    for (_, f, partition) in five_seed_corpus(GRID_12) {
        for base in [
            BaseChoice::Operator(profile_base(f.interval(), GRID_12)),
            BaseChoice::Operator(BaseOperator::bernstein(8).unwrap()),
        ] {
            let spec = FractalSpec {
                seed: f.clone(),
                partition: partition.clone(),
                scaling: ScalingVector::uniform(8, 0.5).unwrap(),
                base,
            };
            let r = alpha_fractal(&spec, GRID_12, 1e-8, DEFAULT_MAX_ITER).unwrap();
            for &x in partition.nodes() {
                worst = worst.max((r.values.eval(x) - f.eval(x)).abs());
            }
        }
    }
    report(
        "criterion 5 (node interpolation)",
        worst <= 1e-6,
        &format!("max |f_alpha(x_i) - f(x_i)| = {worst:.3e} over all partition nodes"),
    );
}

#[test]
fn c06_dimension_solver() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let cases = [
        (10usize, 0.9, 1.0 + 9.0f64.log10()),
        (2, 0.9, 1.0 + 1.8f64.log2()),
        (4, 0.2, 1.0),
    ];
    let mut worst: f64 = 0.0;
    let mut prepared = Vec::new();
    for (n, alpha, expected) in cases {
        let partition = Partition::uniform(unit, n).unwrap();
        prepared.push((
            ScalingVector::uniform(n, alpha).unwrap(),
            build_affine_maps(&partition),
            expected,
        ));
    }
    let start = Instant::now();
    const REPS: usize = 100;
    for _ in 0..REPS {
        for (scaling, maps, expected) in &prepared {
            let (d, _) = solve_box_dimension(scaling, maps);
            worst = worst.max((d - expected).abs());
        }
    }
    let per_call = start.elapsed().as_secs_f64() / (REPS * prepared.len()) as f64;
    report(
        "criterion 6 (dimension solver)",
        worst <= 1e-10 && per_call < 1e-3,
        &format!(
            "max closed-form gap {worst:.3e}, {:.1} us per solve",
            per_call * 1e6
        ),
    );
}

#[test]
fn c07_box_counting() {
    let start = Instant::now();
    let spec = fig1_spec(GRID_16);
    let r = alpha_fractal(&spec, GRID_16, 1e-6, DEFAULT_MAX_ITER).unwrap();
    let (d_est, _, _) = box_count_estimate(&r.values, 1.0 / 1024.0, 1.0 / 16.0, 7).unwrap();
    let target = 1.0 + 9.0f64.log10();
    let smooth = BuiltinSeed::Sin
        .sample(Interval::new(-PI, PI).unwrap(), GRID_16)
        .unwrap();
    let (d_smooth, _, _) = box_count_estimate(&smooth, 1.0 / 1024.0, 1.0 / 16.0, 7).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 7 (box-counting cross-check)",
        (d_est - target).abs() <= 0.15 && (0.95..=1.1).contains(&d_smooth) && elapsed < 60.0,
        &format!(
            "fig1 estimate {d_est:.4} vs {target:.4} (tol 0.15), smooth {d_smooth:.4} in [0.95, 1.1], {elapsed:.1}s"
        ),
    );
}

#[test]
fn c08_jackson_bound() {
    let iv = Interval::new(-PI, PI).unwrap();
    let corpus: Vec<SampledFunction> = vec![
        SampledFunction::constant(iv, GRID_12, 1.5).unwrap(),
        BuiltinSeed::Sin.sample(iv, GRID_12).unwrap(),
        BuiltinSeed::AbsSin.sample(iv, GRID_12).unwrap(),
        SampledFunction::from_fn(iv, GRID_12, |x| 1.0 + x.cos()).unwrap(),
        BuiltinSeed::WeierstrassLike.sample(iv, GRID_12).unwrap(),
    ];
    let mut worst_bound = f64::NEG_INFINITY;
    let mut worst_node: f64 = 0.0;
    for f in &corpus {
        for n in [2u32, 4, 8, 16] {
            let rep = jackson_error_report(f, n).unwrap();
            worst_bound = worst_bound.max(rep.actual - rep.bound);
            let v = varma_apply(f, n).unwrap();
            for k in 0..n {
                let mut xk = 2.0 * k as f64 * PI / n as f64;
                if xk >= PI {
                    xk -= 2.0 * PI;
                }
                worst_node = worst_node.max((v.eval(xk) - f.eval(xk)).abs());
            }
        }
    }
    report(
        "criterion 8 (interpolation operator bound)",
        worst_bound <= 1e-3 && worst_node <= 1e-8,
        &format!(
            "max (actual - bound) = {worst_bound:.3e} (slack 1e-3), node interpolation gap {worst_node:.3e} (<= 1e-8)"
        ),
    );
}

/// Independent oracle: cyclic coordinate descent with ternary line search.
/// The objective (sup error over the grid) is convex in each coefficient.
fn coordinate_descent_minimax(xs: &[f64], f_vals: &[f64], m: usize, sweeps: usize) -> f64 {
    let dim = 2 * m + 1;
    let basis = |k: usize, x: f64| -> f64 {
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
    };
    let mut coeffs = vec![0.0; dim];
    let objective = |coeffs: &[f64]| -> f64 {
        xs.iter()
            .zip(f_vals)
            .map(|(&x, &fv)| {
                let t: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * basis(k, x))
                    .sum();
                (fv - t).abs()
            })
            .fold(0.0f64, f64::max)
    };
    for _ in 0..sweeps {
        for k in 0..dim {
            let mut lo = coeffs[k] - 2.0;
            let mut hi = coeffs[k] + 2.0;
            for _ in 0..80 {
                let u = lo + (hi - lo) / 3.0;
                let v = hi - (hi - lo) / 3.0;
                let mut cu = coeffs.clone();
                cu[k] = u;
                let mut cv = coeffs.clone();
                cv[k] = v;
                if objective(&cu) <= objective(&cv) {
                    hi = v;
                } else {
                    lo = u;
                }
            }
            coeffs[k] = 0.5 * (lo + hi);
        }
    }
    objective(&coeffs)
}

#[test]
fn c09_minimax_oracles() {
    let iv = Interval::new(-PI, PI).unwrap();
    let mut worst_vs_one: f64 = 0.0;
    let mut worst_vs_oracle: f64 = 0.0;
    let mut worst_self: f64 = 0.0;
    // the oracle runs on a coarser grid to stay fast; both solvers see the
    // same discrete problem there
    let oracle_grid = 512;
    let xs: Vec<f64> = (0..oracle_grid)
        .map(|j| -PI + 2.0 * PI * j as f64 / oracle_grid as f64)
        .collect();
    for m in 0..=6usize {
        let f = SampledFunction::from_fn(iv, GRID_12, |x| ((m as f64 + 1.0) * x).cos()).unwrap();
        let exchange = minimax_trig(&f, m, 4096).unwrap();
        worst_vs_one = worst_vs_one.max((exchange.error - 1.0).abs());
        let f_vals: Vec<f64> = xs.iter().map(|&x| ((m as f64 + 1.0) * x).cos()).collect();
        let oracle = coordinate_descent_minimax(&xs, &f_vals, m, 4);
        worst_vs_oracle = worst_vs_oracle.max((exchange.error - oracle).abs());
        // self-approximation of a class member
        let t = TrigPoly::new(0.4, vec![0.7; m + 1], vec![-0.3; m + 1]);
        let g = SampledFunction::from_fn(iv, GRID_12, |x| t.eval(x)).unwrap();
        let rs = minimax_trig(&g, m + 1, 4096).unwrap();
        worst_self = worst_self.max(rs.error);
    }
    report(
        "criterion 9 (minimax oracles)",
        worst_vs_one <= 1e-3 && worst_vs_oracle <= 1e-3 && worst_self <= 1e-9,
        &format!(
            "next-cosine error gap {worst_vs_one:.3e}, exchange vs descent oracle {worst_vs_oracle:.3e}, self-approximation {worst_self:.3e}"
        ),
    );
}

#[test]
fn c10_witness_chain() {
    let mut worst = f64::NEG_INFINITY;
    let mut detail = String::new();
    for row in minimax_table_corpus(GRID_12) {
        let rep = fractal_minimax_bound(
            &row.seed,
            row.m,
            row.n,
            &row.scaling,
            &row.base,
            &row.partition,
            GRID_12,
            1e-8,
        )
        .unwrap();
        if rep.witness - rep.bound > worst {
            worst = rep.witness - rep.bound;
            detail = format!(
                "worst row {} (witness {:.4}, bound {:.4})",
                row.name, rep.witness, rep.bound
            );
        }
    }
    report(
        "criterion 10 (minimax witness chain)",
        worst <= 1e-4,
        &format!("max (witness - bound) = {worst:.3e}; {detail}"),
    );
}

#[test]
fn c11_corrected_chain() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let corpus = [
        BuiltinSeed::Exp01.sample(iv, GRID_12).unwrap(),
        SampledFunction::from_fn(iv, GRID_12, |x| 1.0 / (1.0 + x * x)).unwrap(),
    ];
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.5).unwrap();
    let mut chain_ok = true;
    let mut decay_ok = true;
    let mut detail = String::new();
    for f in &corpus {
        let rep = corrected_chain_check(
            f,
            2,
            2,
            &scaling,
            &partition,
            &[4, 8, 16, 32],
            GRID_12,
            1e-8,
        )
        .unwrap();
        chain_ok &= rep.ok;
        for w in rep.entries.windows(2) {
            if w[1].bernstein_term > 0.95 * w[0].bernstein_term {
                decay_ok = false;
            }
        }
        detail = format!(
            "terms {:?}",
            rep.entries
                .iter()
                .map(|e| format!("{:.3e}", e.bernstein_term))
                .collect::<Vec<_>>()
        );
    }
    report(
        "criterion 11 (corrected chain)",
        chain_ok && decay_ok,
        &format!("chain holds for n in 4..32, each doubling cuts >= 5%; {detail}"),
    );
}

#[test]
fn c12_lipschitz_process() {
    let iv = Interval::new(-PI, PI).unwrap();
    let mut rng = SplitMix64::new(0x11B5);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_homog = f64::NEG_INFINITY;
    for i in 0..10 {
        let mk = |rng: &mut SplitMix64| {
            let t = TrigPoly::new(
                rng.uniform(-1.0, 1.0),
                vec![rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)],
                vec![rng.uniform(-1.0, 1.0)],
            );
            SampledFunction::from_fn(iv, GRID_12, move |x| t.eval(x)).unwrap()
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let alpha = if i < 3 { 0.9 } else { rng.uniform(0.1, 0.8) };
        let partition = Partition::uniform(iv, 8).unwrap();
        let scaling = ScalingVector::uniform(8, alpha).unwrap();
        let rep = check_lipschitz_process(&f, &g, &partition, &scaling, 6, GRID_12, 1e-8).unwrap();
        worst = worst.max(rep.lhs - rep.bound);
        worst_homog = worst_homog.max(rep.homogeneity_gap - rep.homogeneity_tol);
    }
    report(
        "criterion 12 (Lipschitz process)",
        worst <= 1e-6 && worst_homog <= 0.0,
        &format!(
            "max (lhs - (1+a)/(1-a)||f-g||) = {worst:.3e}, homogeneity excess {worst_homog:.3e}"
        ),
    );
}

#[test]
fn c13_dimension_preserving_sequence() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    let f = BuiltinSeed::Exp01.sample(iv, GRID_12).unwrap();
    let partition = Partition::uniform(iv, 8).unwrap();
    let scaling = ScalingVector::uniform(8, 0.6).unwrap();
    let rep =
        dimension_preserving_sequence(&f, &partition, &scaling, &[4, 8, 16], GRID_12, 1e-9, false)
            .unwrap();
    let d0 = rep.members[0].theoretical_d;
    let identical = rep.members.iter().all(|m| m.theoretical_d == d0);
    let decreasing = rep
        .members
        .windows(2)
        .all(|w| w[1].distance_to_seed <= w[0].distance_to_seed + 1e-12);
    report(
        "criterion 13 (dimension-preserving sequence)",
        identical && decreasing,
        &format!(
            "common D = {d0:.6} (exactly equal across members), distances {:?}",
            rep.members
                .iter()
                .map(|m| format!("{:.3e}", m.distance_to_seed))
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn c14_verify_suite_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_fractalfn");
    let dir = std::env::temp_dir().join(format!("fractalfn-acc-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("run{run}"));
        let output = std::process::Command::new(bin)
            .args(["verify", "--suite", "full", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(
            output.status.code(),
            Some(0),
            "verify suite failed: {}",
            String::from_utf8_lossy(&output.stdout)
        );
        let file = std::fs::read(out.join("verify.json")).unwrap();
        outputs.push((output.stdout, file));
    }
    let identical = outputs[0] == outputs[1];
    let elapsed = start.elapsed().as_secs_f64();
    let n_checks = serde_json::from_slice::<serde_json::Value>(&outputs[0].0)
        .ok()
        .and_then(|v| v["report"]["n_checks"].as_u64())
        .unwrap_or(0);
    let _ = std::fs::remove_dir_all(&dir);
    report(
        "criterion 14 (determinism)",
        identical && elapsed < 300.0 && n_checks >= 12,
        &format!(
            "two full-suite runs byte-identical (stdout and file), {n_checks} checks, {elapsed:.1}s"
        ),
    );
}
