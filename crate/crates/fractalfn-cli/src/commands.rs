//! Subcommand implementations. Every command reads a JSON config, writes its
//! artifacts under the output directory, prints a canonical JSON summary to
//! stdout, and maps failures onto the documented exit codes.

use crate::config::{build_instance, config_hash, ExperimentConfig, Instance, MinimaxParams};
use crate::output::{format_f64, polyline_svg, to_canonical_json, write_json};
use fractalfn::approx::{fractal_minimax_bound, SolveStatus};
use fractalfn::dimension::dimension_report;
use fractalfn::domain::build_affine_maps;
use fractalfn::error::Error as LibError;
use fractalfn::fractal::{alpha_fractal, resolve_base, BaseChoice, FractalSpec};
use fractalfn::seeds::BuiltinSeed;
use fractalfn::spaces::modulus_of_continuity;
use fractalfn::verify::{instance_checks, par_map, run_full_suite, SuiteReport};
use serde_json::json;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure carrying its exit code and a JSON-serializable body.
pub struct Failure {
    pub code: i32,
    pub body: serde_json::Value,
}

impl Failure {
    fn config(messages: Vec<String>, hash: &str) -> Self {
        Failure {
            code: EXIT_CONFIG,
            body: json!({
                "error": {"kind": "config", "messages": messages},
                "config_hash": hash,
                "version": VERSION,
            }),
        }
    }

    fn io(err: std::io::Error, hash: &str) -> Self {
        Failure {
            code: EXIT_IO,
            body: json!({
                "error": {"kind": "io", "messages": [err.to_string()]},
                "config_hash": hash,
                "version": VERSION,
            }),
        }
    }

    fn lib(err: LibError, hash: &str) -> Self {
        let (code, kind) = match &err {
            LibError::NonConvergence { .. } => (EXIT_NUMERIC, "non_convergence"),
            _ => (EXIT_CONFIG, "config"),
        };
        Failure {
            code,
            body: json!({
                "error": {"kind": kind, "messages": [err.to_string()]},
                "config_hash": hash,
                "version": VERSION,
            }),
        }
    }
}

fn print_body(body: &serde_json::Value) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(to_canonical_json(body).as_bytes());
}

fn emit(result: Result<serde_json::Value, Failure>) -> i32 {
    match result {
        Ok(body) => {
            print_body(&body);
            EXIT_OK
        }
        Err(f) => {
            print_body(&f.body);
            f.code
        }
    }
}

struct Loaded {
    config: ExperimentConfig,
    hash: String,
}

fn load_config(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::io(e, "unavailable"))?;
    let hash = config_hash(&bytes);
    let config: ExperimentConfig = serde_json::from_slice(&bytes)
        .map_err(|e| Failure::config(vec![format!("config parse error: {e}")], &hash))?;
    Ok(Loaded { config, hash })
}

fn build(loaded: &Loaded, grid_override: Option<usize>) -> Result<Instance, Failure> {
    let mut instance =
        build_instance(&loaded.config).map_err(|errs| Failure::config(errs, &loaded.hash))?;
    if let Some(grid) = grid_override {
        // rebuild the seed on the overridden grid through the same pipeline
        if grid < 2 * instance.spec.partition.subinterval_count() + 1 {
            return Err(Failure::config(
                vec![format!("--grid {grid} too coarse for the partition")],
                &loaded.hash,
            ));
        }
        instance.grid_m = grid;
    }
    Ok(instance)
}

pub fn cmd_render(
    config_path: &Path,
    out_dir: &Path,
    grid_override: Option<usize>,
    svg_flag: bool,
) -> i32 {
    emit(render_inner(config_path, out_dir, grid_override, svg_flag))
}

fn render_inner(
    config_path: &Path,
    out_dir: &Path,
    grid_override: Option<usize>,
    svg_flag: bool,
) -> Result<serde_json::Value, Failure> {
    let loaded = load_config(config_path)?;
    let instance = build(&loaded, grid_override)?;
    let hash = loaded.hash.clone();
    let spec = &instance.spec;
    let grid_m = instance.grid_m;
    let result = alpha_fractal(spec, grid_m, instance.tol, instance.max_iter)
        .map_err(|e| Failure::lib(e, &hash))?;
    let f = spec
        .seed
        .resample(grid_m)
        .map_err(|e| Failure::lib(e, &hash))?;
    let b = resolve_base(spec, grid_m).map_err(|e| Failure::lib(e, &hash))?;

    std::fs::create_dir_all(out_dir).map_err(|e| Failure::io(e, &hash))?;
    let csv_path = out_dir.join("graph.csv");
    let g = &result.values;
    crate::output::write_csv(
        &csv_path,
        &["x", "f", "b", "f_alpha"],
        (0..grid_m).map(|j| vec![g.node(j), f.values()[j], b.values()[j], g.values()[j]]),
    )
    .map_err(|e| Failure::io(e, &hash))?;
    let mut outputs = vec![csv_path.display().to_string()];

    let want_svg = svg_flag
        || loaded
            .config
            .render
            .as_ref()
            .map(|r| r.svg)
            .unwrap_or(false);
    if want_svg {
        let xs: Vec<f64> = (0..grid_m).map(|j| g.node(j)).collect();
        let svg = polyline_svg(&xs, g.values());
        let svg_path = out_dir.join("graph.svg");
        std::fs::write(&svg_path, svg).map_err(|e| Failure::io(e, &hash))?;
        outputs.push(svg_path.display().to_string());
    }

    let quotient = loaded
        .config
        .render
        .as_ref()
        .map(|r| r.quotient)
        .unwrap_or(false);
    if quotient {
        let Some((p, q)) = &instance.rational_parts else {
            return Err(Failure::config(
                vec!["quotient rendering needs a rational or fig1 seed".into()],
                &hash,
            ));
        };
        let BaseChoice::Operator(op) = &spec.base else {
            return Err(Failure::config(
                vec!["quotient rendering needs an operator base".into()],
                &hash,
            ));
        };
        let run_part = |part: &fractalfn::domain::SampledFunction| {
            let part_spec = FractalSpec {
                seed: part.clone(),
                partition: spec.partition.clone(),
                scaling: spec.scaling.clone(),
                base: BaseChoice::Operator(op.clone()),
            };
            alpha_fractal(&part_spec, grid_m, instance.tol, instance.max_iter)
        };
        let p_alpha = run_part(p).map_err(|e| Failure::lib(e, &hash))?;
        let q_alpha = run_part(q).map_err(|e| Failure::lib(e, &hash))?;
        let q_min = q_alpha.values.min_value();
        if q_min <= 0.0 {
            return Err(Failure {
                code: EXIT_NUMERIC,
                body: json!({
                    "error": {
                        "kind": "denominator_not_positive",
                        "messages": [format!(
                            "perturbed denominator dips to {q_min}; quotient undefined"
                        )],
                    },
                    "config_hash": hash,
                    "version": VERSION,
                }),
            });
        }
        let quotient_path = out_dir.join("quotient.csv");
        crate::output::write_csv(
            &quotient_path,
            &["x", "p_alpha", "q_alpha", "quotient"],
            (0..grid_m).map(|j| {
                let pv = p_alpha.values.values()[j];
                let qv = q_alpha.values.values()[j];
                vec![g.node(j), pv, qv, pv / qv]
            }),
        )
        .map_err(|e| Failure::io(e, &hash))?;
        outputs.push(quotient_path.display().to_string());
    }

    Ok(json!({
        "command": "render",
        "config_hash": hash,
        "version": VERSION,
        "seed": instance.seed_label,
        "grid_m": grid_m,
        "iterations": result.iterations,
        "certified_gap": result.certified_gap,
        "outputs": outputs,
    }))
}

pub fn cmd_dimension(config_path: &Path, out_dir: &Path, grid_override: Option<usize>) -> i32 {
    emit(dimension_inner(config_path, out_dir, grid_override))
}

fn dimension_inner(
    config_path: &Path,
    out_dir: &Path,
    grid_override: Option<usize>,
) -> Result<serde_json::Value, Failure> {
    let loaded = load_config(config_path)?;
    let instance = build(&loaded, grid_override)?;
    let hash = loaded.hash.clone();
    let spec = &instance.spec;
    let params = loaded.config.dimension.clone().unwrap_or_default();
    let maps = build_affine_maps(&spec.partition);
    let graph = if params.estimate {
        let result = alpha_fractal(spec, instance.grid_m, instance.tol, instance.max_iter)
            .map_err(|e| Failure::lib(e, &hash))?;
        Some(result.values)
    } else {
        None
    };
    let f = spec
        .seed
        .resample(instance.grid_m)
        .map_err(|e| Failure::lib(e, &hash))?;
    let report = dimension_report(
        &spec.scaling,
        &maps,
        graph.as_ref(),
        Some((&f, &spec.partition)),
        params.min_scale,
        params.max_scale,
        params.n_scales,
    )
    .map_err(|e| Failure::lib(e, &hash))?;

    std::fs::create_dir_all(out_dir).map_err(|e| Failure::io(e, &hash))?;
    let body = json!({
        "command": "dimension",
        "config_hash": hash,
        "version": VERSION,
        "seed": instance.seed_label,
        "report": report,
    });
    write_json(&out_dir.join("dimension.json"), &body).map_err(|e| Failure::io(e, &hash))?;
    Ok(body)
}

pub fn cmd_verify(
    config_path: Option<&Path>,
    suite: Option<&str>,
    out_dir: &Path,
    grid_override: Option<usize>,
    threads: usize,
) -> i32 {
    match verify_inner(config_path, suite, out_dir, grid_override, threads) {
        Ok((body, passed)) => {
            print_body(&body);
            if passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(f) => {
            print_body(&f.body);
            f.code
        }
    }
}

fn verify_inner(
    config_path: Option<&Path>,
    suite: Option<&str>,
    out_dir: &Path,
    grid_override: Option<usize>,
    threads: usize,
) -> Result<(serde_json::Value, bool), Failure> {
    let (report, hash): (SuiteReport, String) = match (suite, config_path) {
        (Some("full"), _) => (run_full_suite(threads), "builtin-suite".into()),
        (Some(other), _) => {
            return Err(Failure::config(
                vec![format!("unknown suite '{other}'; available: full")],
                "unavailable",
            ));
        }
        (None, Some(path)) => {
            let loaded = load_config(path)?;
            let instance = build(&loaded, grid_override)?;
            let checks = instance_checks(&instance.spec, instance.grid_m, instance.tol)
                .map_err(|e| Failure::lib(e, &loaded.hash))?;
            let n_failed = checks.iter().filter(|c| !c.passed).count();
            (
                SuiteReport {
                    suite: "config".into(),
                    n_checks: checks.len(),
                    n_failed,
                    passed: n_failed == 0,
                    checks,
                },
                loaded.hash,
            )
        }
        (None, None) => {
            return Err(Failure::config(
                vec!["verify needs --config <path> or --suite full".into()],
                "unavailable",
            ));
        }
    };
    let passed = report.passed;
    let body = json!({
        "command": "verify",
        "config_hash": hash,
        "version": VERSION,
        "report": report,
    });
    std::fs::create_dir_all(out_dir).map_err(|e| Failure::io(e, &hash))?;
    write_json(&out_dir.join("verify.json"), &body).map_err(|e| Failure::io(e, &hash))?;
    Ok((body, passed))
}

pub fn cmd_minimax(
    config_path: &Path,
    out_dir: &Path,
    grid_override: Option<usize>,
    threads: usize,
) -> i32 {
    emit(minimax_inner(config_path, out_dir, grid_override, threads))
}

fn minimax_inner(
    config_path: &Path,
    out_dir: &Path,
    grid_override: Option<usize>,
    threads: usize,
) -> Result<serde_json::Value, Failure> {
    let loaded = load_config(config_path)?;
    let instance = build(&loaded, grid_override)?;
    let hash = loaded.hash.clone();
    let spec = &instance.spec;
    let iv = spec.seed.interval();
    if (iv.lo() + PI).abs() > 1e-9 || (iv.hi() - PI).abs() > 1e-9 {
        return Err(Failure::config(
            vec![format!(
                "minimax tables need the interval [-pi, pi], got [{}, {}]",
                iv.lo(),
                iv.hi()
            )],
            &hash,
        ));
    }
    let BaseChoice::Operator(op) = &spec.base else {
        return Err(Failure::config(
            vec!["minimax tables need an operator base with norm data".into()],
            &hash,
        ));
    };
    if op.norms().is_none() {
        return Err(Failure::config(
            vec!["minimax tables need an operator base with norm data".into()],
            &hash,
        ));
    }
    let params: MinimaxParams = match &loaded.config.minimax {
        Some(p) => MinimaxParams {
            m: p.m,
            n: p.n,
            bernstein_list: p.bernstein_list.clone(),
            varma_n: p.varma_n,
        },
        None => {
            return Err(Failure::config(
                vec!["minimax needs a `minimax` section with degrees m and n".into()],
                &hash,
            ));
        }
    };

    let grid_m = instance.grid_m;
    // corpus rows: a member of the class, the next cosine, the periodic
    // builtin seeds, and the configured seed itself
    let m = params.m;
    let mut corpus: Vec<(String, fractalfn::domain::SampledFunction)> = Vec::new();
    let member = fractalfn::spaces::TrigPoly::new(0.3, vec![0.5; m.max(1)], vec![-0.2; m.max(1)]);
    corpus.push((
        "trig_member".into(),
        fractalfn::domain::SampledFunction::from_fn(iv, grid_m, |x| member.eval(x)).unwrap(),
    ));
    corpus.push((
        "next_cosine".into(),
        fractalfn::domain::SampledFunction::from_fn(iv, grid_m, |x| ((m as f64 + 1.0) * x).cos())
            .unwrap(),
    ));
    for seed in [
        BuiltinSeed::Sin,
        BuiltinSeed::AbsSin,
        BuiltinSeed::Fig1,
        BuiltinSeed::WeierstrassLike,
    ] {
        corpus.push((seed.name().into(), seed.sample(iv, grid_m).unwrap()));
    }
    let f0 = &spec.seed;
    if (f0.values()[0] - f0.values()[f0.sample_count() - 1]).abs() <= 1e-8 {
        corpus.push((
            format!("config:{}", instance.seed_label),
            f0.resample(grid_m).unwrap(),
        ));
    }

    #[derive(serde::Serialize)]
    struct Row {
        name: String,
        m: usize,
        n: usize,
        e_proxy: f64,
        fractal_bound: f64,
        witness: f64,
        jackson_bound: f64,
        solver_status: String,
    }

    let rows: Vec<Result<Row, String>> = par_map(&corpus, threads, |(name, f)| {
        let rep = fractal_minimax_bound(
            f,
            params.m,
            params.n,
            &spec.scaling,
            op,
            &spec.partition,
            grid_m,
            instance.tol,
        )
        .map_err(|e| format!("{name}: {e}"))?;
        let jackson = 2.0
            * modulus_of_continuity(f, PI * 3.0f64.sqrt() / params.varma_n as f64)
                .map_err(|e| format!("{name}: {e}"))?;
        Ok(Row {
            name: name.clone(),
            m: params.m,
            n: params.n,
            e_proxy: rep.classical_error,
            fractal_bound: rep.bound,
            witness: rep.witness,
            jackson_bound: jackson,
            solver_status: match rep.solver_status {
                SolveStatus::Converged => "converged".into(),
                SolveStatus::Degraded => "degraded".into(),
                SolveStatus::DenominatorFloor => "denominator_floor".into(),
            },
        })
    });
    let mut table = Vec::new();
    for row in rows {
        match row {
            Ok(r) => table.push(r),
            Err(msg) => {
                return Err(Failure::lib(LibError::InvalidArgument(msg), &hash));
            }
        }
    }

    std::fs::create_dir_all(out_dir).map_err(|e| Failure::io(e, &hash))?;
    let csv_path = out_dir.join("minimax.csv");
    {
        let file = std::fs::File::create(&csv_path).map_err(|e| Failure::io(e, &hash))?;
        let mut w = std::io::BufWriter::new(file);
        writeln!(
            w,
            "name,m,n,e_proxy,fractal_bound,witness,jackson_bound,solver_status"
        )
        .map_err(|e| Failure::io(e, &hash))?;
        for r in &table {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.name,
                r.m,
                r.n,
                format_f64(r.e_proxy),
                format_f64(r.fractal_bound),
                format_f64(r.witness),
                format_f64(r.jackson_bound),
                r.solver_status
            )
            .map_err(|e| Failure::io(e, &hash))?;
        }
    }

    let body = json!({
        "command": "minimax",
        "config_hash": hash,
        "version": VERSION,
        "rows": table,
        "outputs": [csv_path.display().to_string()],
    });
    write_json(&out_dir.join("minimax.json"), &body).map_err(|e| Failure::io(e, &hash))?;
    Ok(body)
}
