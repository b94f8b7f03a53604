//! Browser bindings for the fractal perturbation explorer. Three operations
//! back the demo page: rendering the perturbed graph, sweeping the
//! theoretical box dimension over the scaling magnitude, and evaluating the
//! perturbation bound for the current parameters.
//!
//! Every export takes a JSON parameter object and returns a JSON string, so
//! the page needs no generated glue beyond the wasm-bindgen loader.

use fractalfn::dimension::solve_box_dimension;
use fractalfn::domain::{build_affine_maps, Partition, ScalingVector};
use fractalfn::fractal::{
    alpha_fractal, check_perturbation_bound, default_tol, BaseChoice, FractalSpec, DEFAULT_MAX_ITER,
};
use fractalfn::seeds::BuiltinSeed;
use fractalfn::spaces::{power_reparameterization, quadratic_profile, BaseOperator};
use serde::Deserialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoParams {
    seed: String,
    #[serde(default = "default_subintervals")]
    n_subintervals: usize,
    #[serde(default)]
    alpha: f64,
    #[serde(default = "default_base")]
    base: String,
    #[serde(default = "default_grid")]
    grid: usize,
}

fn default_subintervals() -> usize {
    10
}
fn default_base() -> String {
    "profile".into()
}
fn default_grid() -> usize {
    2049
}

struct Built {
    spec: FractalSpec,
    grid: usize,
    tol: f64,
}

fn build(params: &DemoParams) -> Result<Built, String> {
    let seed = BuiltinSeed::from_name(&params.seed).map_err(|e| e.to_string())?;
    let iv = seed.natural_interval();
    let grid = params.grid.clamp(257, 1 << 17);
    if !(params.alpha.abs() < 1.0) {
        return Err(format!(
            "alpha must satisfy |alpha| < 1, got {}",
            params.alpha
        ));
    }
    if !(2..=64).contains(&params.n_subintervals) {
        return Err(format!(
            "n_subintervals must be between 2 and 64, got {}",
            params.n_subintervals
        ));
    }
    let f = seed.sample(iv, grid).map_err(|e| e.to_string())?;
    let partition = Partition::uniform(iv, params.n_subintervals).map_err(|e| e.to_string())?;
    let scaling =
        ScalingVector::uniform(params.n_subintervals, params.alpha).map_err(|e| e.to_string())?;
    let base = match params.base.as_str() {
        "profile" => BaseOperator::multiply_by_profile(
            quadratic_profile(iv, 1.0, grid).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?,
        "bernstein" => BaseOperator::bernstein(8).map_err(|e| e.to_string())?,
        "compose" => BaseOperator::compose_with(
            power_reparameterization(iv, 3.0, grid).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?,
        other => {
            return Err(format!(
                "unknown base '{other}'; use profile, bernstein, compose"
            ))
        }
    };
    Ok(Built {
        spec: FractalSpec {
            seed: f,
            partition,
            scaling,
            base: BaseChoice::Operator(base),
        },
        grid,
        tol: 1e-7,
    })
}

fn render_graph_impl(params_json: &str) -> Result<serde_json::Value, String> {
    let params: DemoParams = serde_json::from_str(params_json).map_err(|e| e.to_string())?;
    let built = build(&params)?;
    let tol = built.tol.max(default_tol(&built.spec.scaling) / 10.0);
    let r =
        alpha_fractal(&built.spec, built.grid, tol, DEFAULT_MAX_ITER).map_err(|e| e.to_string())?;
    let f = built
        .spec
        .seed
        .resample(built.grid)
        .map_err(|e| e.to_string())?;
    let g = &r.values;
    let xs: Vec<f64> = (0..built.grid).map(|j| g.node(j)).collect();
    let maps = build_affine_maps(&built.spec.partition);
    let (d, _) = solve_box_dimension(&built.spec.scaling, &maps);
    Ok(json!({
        "x": xs,
        "f": f.values(),
        "f_alpha": g.values(),
        "theoretical_d": d,
        "iterations": r.iterations,
        "certified_gap": r.certified_gap,
    }))
}

fn dimension_curve_impl(params_json: &str) -> Result<serde_json::Value, String> {
    let params: DemoParams = serde_json::from_str(params_json).map_err(|e| e.to_string())?;
    let seed = BuiltinSeed::from_name(&params.seed).map_err(|e| e.to_string())?;
    let iv = seed.natural_interval();
    let partition = Partition::uniform(iv, params.n_subintervals).map_err(|e| e.to_string())?;
    let maps = build_affine_maps(&partition);
    let steps = 99;
    let mut alphas = Vec::with_capacity(steps);
    let mut d_values = Vec::with_capacity(steps);
    for k in 0..steps {
        let a = (k + 1) as f64 / (steps + 1) as f64;
        let scaling =
            ScalingVector::uniform(params.n_subintervals, a).map_err(|e| e.to_string())?;
        let (d, _) = solve_box_dimension(&scaling, &maps);
        alphas.push(a);
        d_values.push(d);
    }
    Ok(json!({ "alphas": alphas, "d_values": d_values }))
}

fn perturbation_bound_impl(params_json: &str) -> Result<serde_json::Value, String> {
    let params: DemoParams = serde_json::from_str(params_json).map_err(|e| e.to_string())?;
    let built = build(&params)?;
    let r = alpha_fractal(&built.spec, built.grid, built.tol, DEFAULT_MAX_ITER)
        .map_err(|e| e.to_string())?;
    let pb = check_perturbation_bound(&built.spec, &r).map_err(|e| e.to_string())?;
    let f = built
        .spec
        .seed
        .resample(built.grid)
        .map_err(|e| e.to_string())?;
    let b = fractalfn::fractal::resolve_base(&built.spec, built.grid).map_err(|e| e.to_string())?;
    Ok(json!({
        "lhs": pb.lhs,
        "rhs": pb.rhs,
        "alpha_sup": built.spec.scaling.sup_abs(),
        "seed_base_distance": f.sup_distance(&b).map_err(|e| e.to_string())?,
    }))
}

fn to_output(result: Result<serde_json::Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(msg) => json!({ "error": msg }).to_string(),
    }
}

/// Graph of the seed and its fractal perturbation, plus the theoretical box
/// dimension for the current parameters.
#[wasm_bindgen]
pub fn render_graph(params_json: &str) -> String {
    to_output(render_graph_impl(params_json))
}

/// Theoretical box dimension as a function of the uniform scaling magnitude.
#[wasm_bindgen]
pub fn dimension_curve(params_json: &str) -> String {
    to_output(dimension_curve_impl(params_json))
}

/// Both sides of the uniform perturbation bound for the current parameters.
#[wasm_bindgen]
pub fn perturbation_bound(params_json: &str) -> String {
    to_output(perturbation_bound_impl(params_json))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_returns_arrays_and_dimension() {
        let out = render_graph_impl(
            r#"{"seed": "fig1", "n_subintervals": 10, "alpha": 0.9, "base": "profile", "grid": 1025}"#,
        )
        .unwrap();
        assert_eq!(out["x"].as_array().unwrap().len(), 1025);
        assert_eq!(out["f_alpha"].as_array().unwrap().len(), 1025);
        let d = out["theoretical_d"].as_f64().unwrap();
        assert!((d - (1.0 + 9.0f64.log10())).abs() < 1e-9);
    }

    #[test]
    fn dimension_curve_is_monotone() {
        let out = dimension_curve_impl(r#"{"seed": "sin", "n_subintervals": 8}"#).unwrap();
        let ds: Vec<f64> = out["d_values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert!(ds.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert_eq!(ds.len(), 99);
    }

    #[test]
    fn perturbation_bound_holds_in_demo() {
        let out = perturbation_bound_impl(
            r#"{"seed": "sin", "n_subintervals": 8, "alpha": 0.5, "base": "bernstein", "grid": 1025}"#,
        )
        .unwrap();
        let lhs = out["lhs"].as_f64().unwrap();
        let rhs = out["rhs"].as_f64().unwrap();
        assert!(lhs <= rhs + 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn errors_come_back_as_json() {
        let out = to_output(render_graph_impl(r#"{"seed": "nope"}"#));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"]
            .as_str()
            .unwrap()
            .contains("unknown builtin seed"));
    }
}
