//! JSON experiment configuration: parsing, validation that reports every
//! violation at once, and construction of the library-level objects.

use fractalfn::domain::{Interval, Partition, SampledFunction, ScalingVector};
use fractalfn::fractal::{default_tol, BaseChoice, FractalSpec};
use fractalfn::seeds::BuiltinSeed;
use fractalfn::spaces::{power_reparameterization, quadratic_profile, BaseOperator, TrigPoly};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: SeedConfig,
    /// Defaults to the seed's natural interval.
    #[serde(default)]
    pub interval: Option<[f64; 2]>,
    pub partition: PartitionConfig,
    pub scaling: ScalingConfig,
    pub base: BaseConfig,
    #[serde(default)]
    pub grid_m: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub render: Option<RenderParams>,
    #[serde(default)]
    pub dimension: Option<DimensionParams>,
    #[serde(default)]
    pub minimax: Option<MinimaxParams>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedConfig {
    /// One of: fig1, sin, abs_sin, exp01, weierstrass_like.
    Builtin(String),
    Trig(TrigCoeffs),
    Rational {
        num: TrigCoeffs,
        den: TrigCoeffs,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigCoeffs {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigCoeffs {
    fn to_poly(&self) -> TrigPoly {
        TrigPoly::new(self.constant, self.cos.clone(), self.sin.clone())
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PartitionConfig {
    Uniform(usize),
    Nodes(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalingConfig {
    Uniform(f64),
    List(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseConfig {
    /// Bernstein operator of the given degree.
    Bernstein(usize),
    /// Multiplication by `1 + c (x - x_0)(x - x_N) / span^2`.
    MultiplyProfile { c: f64 },
    /// Composition with `x_0 + span ((x - x_0)/span)^p`.
    ComposePower { p: f64 },
    /// The base function equals the seed (degenerate perturbation).
    SeedItself,
    /// Explicit base values on a uniform grid over the interval.
    Explicit(Vec<f64>),
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RenderParams {
    #[serde(default)]
    pub svg: bool,
    /// Also render the quotient of the separately perturbed numerator and
    /// denominator (rational seeds only).
    #[serde(default)]
    pub quotient: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionParams {
    #[serde(default = "default_true")]
    pub estimate: bool,
    #[serde(default = "default_min_scale")]
    pub min_scale: f64,
    #[serde(default = "default_max_scale")]
    pub max_scale: f64,
    #[serde(default = "default_n_scales")]
    pub n_scales: usize,
}

fn default_true() -> bool {
    true
}
fn default_min_scale() -> f64 {
    1.0 / 1024.0
}
fn default_max_scale() -> f64 {
    1.0 / 16.0
}
fn default_n_scales() -> usize {
    7
}

impl Default for DimensionParams {
    fn default() -> Self {
        DimensionParams {
            estimate: true,
            min_scale: default_min_scale(),
            max_scale: default_max_scale(),
            n_scales: default_n_scales(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimaxParams {
    pub m: usize,
    pub n: usize,
    #[serde(default = "default_bernstein_list")]
    pub bernstein_list: Vec<usize>,
    #[serde(default = "default_varma_n")]
    pub varma_n: u32,
}

fn default_bernstein_list() -> Vec<usize> {
    vec![4, 8, 16, 32]
}
fn default_varma_n() -> u32 {
    8
}

/// A validated, constructed experiment instance.
pub struct Instance {
    pub spec: FractalSpec,
    pub grid_m: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Numerator/denominator pair when the seed is a quotient, for
    /// quotient-mode rendering.
    pub rational_parts: Option<(SampledFunction, SampledFunction)>,
    pub seed_label: String,
}

/// Validates the configuration and builds the instance; returns every
/// violation found, not just the first.
pub fn build_instance(config: &ExperimentConfig) -> Result<Instance, Vec<String>> {
    let mut errors = Vec::new();

    // resolve the interval
    let builtin = match &config.seed {
        SeedConfig::Builtin(name) => match BuiltinSeed::from_name(name) {
            Ok(seed) => Some(seed),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        },
        _ => None,
    };
    let interval = match config.interval {
        Some([lo, hi]) => match Interval::new(lo, hi) {
            Ok(iv) => Some(iv),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        },
        None => match (&config.seed, builtin) {
            (SeedConfig::Builtin(_), Some(seed)) => Some(seed.natural_interval()),
            (SeedConfig::Builtin(_), None) => None,
            // trig and rational seeds live on the period by default
            _ => Some(Interval::new(-std::f64::consts::PI, std::f64::consts::PI).unwrap()),
        },
    };

    let partition = interval.and_then(|iv| {
        let result = match &config.partition {
            PartitionConfig::Uniform(n) => Partition::uniform(iv, *n),
            PartitionConfig::Nodes(nodes) => {
                let built = Partition::new(nodes.clone());
                if let Ok(p) = &built {
                    if !p.interval().close_to(&iv) {
                        errors.push(format!(
                            "partition nodes span [{}, {}] but the interval is [{}, {}]",
                            p.interval().lo(),
                            p.interval().hi(),
                            iv.lo(),
                            iv.hi()
                        ));
                        return None;
                    }
                }
                built
            }
        };
        match result {
            Ok(p) => Some(p),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        }
    });

    let scaling = partition.as_ref().and_then(|p| {
        let n = p.subinterval_count();
        let result = match &config.scaling {
            ScalingConfig::Uniform(a) => ScalingVector::uniform(n, *a),
            ScalingConfig::List(list) => {
                if list.len() != n {
                    errors.push(format!(
                        "scaling list has {} entries for {} subintervals",
                        list.len(),
                        n
                    ));
                    return None;
                }
                ScalingVector::new(list.clone())
            }
        };
        match result {
            Ok(s) => Some(s),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        }
    });

    let grid_m = config.grid_m.unwrap_or((1 << 14) + 1);
    if let Some(p) = &partition {
        if grid_m < 2 * p.subinterval_count() + 1 {
            errors.push(format!(
                "grid_m = {grid_m} too coarse for {} subintervals",
                p.subinterval_count()
            ));
        }
    }
    if let Some(t) = config.tol {
        if !(t > 0.0) {
            errors.push(format!("tol must be positive, got {t}"));
        }
    }
    if let Some(mi) = config.max_iter {
        if mi == 0 {
            errors.push("max_iter must be at least 1".into());
        }
    }

    let Some(interval) = interval else {
        return Err(errors);
    };

    // seed samples and optional quotient structure
    let (seed_fn, rational_parts, seed_label): (
        Option<SampledFunction>,
        Option<(SampledFunction, SampledFunction)>,
        String,
    ) = match &config.seed {
        SeedConfig::Builtin(name) => match builtin {
            Some(seed) => {
                let sampled = seed.sample(interval, grid_m).ok();
                let parts = if seed == BuiltinSeed::Fig1 {
                    Some((
                        SampledFunction::from_fn(
                            interval,
                            grid_m,
                            fractalfn::seeds::fig1_numerator,
                        )
                        .unwrap(),
                        SampledFunction::from_fn(
                            interval,
                            grid_m,
                            fractalfn::seeds::fig1_denominator,
                        )
                        .unwrap(),
                    ))
                } else {
                    None
                };
                (sampled, parts, name.clone())
            }
            None => (None, None, name.clone()),
        },
        SeedConfig::Trig(coeffs) => {
            let t = coeffs.to_poly();
            (
                SampledFunction::from_fn(interval, grid_m, |x| t.eval(x)).ok(),
                None,
                "trig".into(),
            )
        }
        SeedConfig::Rational { num, den } => {
            let p = num.to_poly();
            let q = den.to_poly();
            let den_min = (0..=(64 * (q.degree() + 1)))
                .map(|j| {
                    let x =
                        interval.lo() + interval.span() * j as f64 / (64 * (q.degree() + 1)) as f64;
                    q.eval(x)
                })
                .fold(f64::INFINITY, f64::min);
            if den_min <= 0.0 {
                errors.push(format!(
                    "rational seed denominator is not positive on the interval (min {den_min})"
                ));
                (None, None, "rational".into())
            } else {
                let ps = SampledFunction::from_fn(interval, grid_m, |x| p.eval(x)).unwrap();
                let qs = SampledFunction::from_fn(interval, grid_m, |x| q.eval(x)).unwrap();
                (
                    SampledFunction::from_fn(interval, grid_m, |x| p.eval(x) / q.eval(x)).ok(),
                    Some((ps, qs)),
                    "rational".into(),
                )
            }
        }
    };

    // base operator
    let base = match &config.base {
        BaseConfig::Bernstein(n) => match BaseOperator::bernstein(*n) {
            Ok(op) => Some(BaseChoice::Operator(op)),
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        },
        BaseConfig::MultiplyProfile { c } => quadratic_profile(interval, *c, grid_m)
            .and_then(BaseOperator::multiply_by_profile)
            .map(|op| Some(BaseChoice::Operator(op)))
            .unwrap_or_else(|e| {
                errors.push(e.to_string());
                None
            }),
        BaseConfig::ComposePower { p } => power_reparameterization(interval, *p, grid_m)
            .and_then(BaseOperator::compose_with)
            .map(|op| Some(BaseChoice::Operator(op)))
            .unwrap_or_else(|e| {
                errors.push(e.to_string());
                None
            }),
        BaseConfig::SeedItself => seed_fn.clone().map(BaseChoice::Explicit),
        BaseConfig::Explicit(values) => {
            match SampledFunction::from_values(interval, values.clone()) {
                Ok(b) => {
                    if let Some(f) = &seed_fn {
                        let b_res = b.resample(grid_m).unwrap();
                        let lo_gap = (b_res.values()[0] - f.values()[0]).abs();
                        let hi_gap = (b_res.values()[grid_m - 1] - f.values()[grid_m - 1]).abs();
                        if lo_gap > 1e-8 || hi_gap > 1e-8 {
                            errors.push(format!(
                                "explicit base does not match the seed at the endpoints \
                                 (gaps {lo_gap:.3e}, {hi_gap:.3e}; tolerance 1e-8)"
                            ));
                        }
                    }
                    Some(BaseChoice::Explicit(b))
                }
                Err(e) => {
                    errors.push(e.to_string());
                    None
                }
            }
        }
    };

    let (Some(seed_fn), Some(partition), Some(scaling), Some(base)) =
        (seed_fn, partition, scaling, base)
    else {
        if errors.is_empty() {
            errors.push("configuration could not be constructed".into());
        }
        return Err(errors);
    };

    let tol = config.tol.unwrap_or_else(|| default_tol(&scaling));
    let spec = FractalSpec {
        seed: seed_fn,
        partition,
        scaling,
        base,
    };
    if let Err(e) = spec.validate() {
        errors.push(e.to_string());
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(Instance {
        spec,
        grid_m,
        tol,
        max_iter: config
            .max_iter
            .unwrap_or(fractalfn::fractal::DEFAULT_MAX_ITER),
        rational_parts,
        seed_label,
    })
}

/// FNV-1a hash of the raw configuration bytes, hex-encoded; embedded in every
/// output for provenance.
pub fn config_hash(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
