//! Run configuration: JSON ingestion and validation.
//!
//! Complex values are two-element `[re, im]` arrays whose parts are either
//! JSON numbers or strings (`"1/3"`, `"-0.25"`, `"2e-3"`). Both are read
//! into exact rationals, so a config means the same thing in every backend.

use std::path::Path;

use num_complex::Complex;
use r2pencil_core::algebra::{parse_rational, Exact, Scalar};
use r2pencil_core::recurrence::{ParamSeq, Validation};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A rejected configuration, with the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error at {path}: {reason}")]
pub struct ConfigError {
    pub path: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Random,
    Explicit,
    Preset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Exact,
    Both,
}

impl Backend {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "float" => Ok(Self::Float),
            "exact" => Ok(Self::Exact),
            "both" => Ok(Self::Both),
            other => Err(ConfigError::new("backend", format!("unknown backend {other:?}"))),
        }
    }

    pub fn runs_float(self) -> bool {
        matches!(self, Self::Float | Self::Both)
    }

    pub fn runs_exact(self) -> bool {
        matches!(self, Self::Exact | Self::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    S1,
    S2,
}

impl Preset {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "s1" => Ok(Self::S1),
            "s2" => Ok(Self::S2),
            other => Err(ConfigError::new("preset", format!("unknown preset {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S1 => "s1",
            Self::S2 => "s2",
        }
    }
}

/// Which suites `verify` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteSelection {
    /// Characteristic polynomial and eigenpairs.
    Pencil,
    /// Recurrences, moments, functional consistency, biorthogonality.
    Biorth,
    /// The transform suites (needs unimodular `beta` and one `alpha`).
    Christoffel,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitParams {
    pub alpha: Vec<Exact>,
    /// Includes `beta_0 = 0`.
    pub beta: Vec<Exact>,
    pub e: Vec<Exact>,
    pub d: Vec<Exact>,
    pub c: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub float_tol: f64,
    pub root_tol: f64,
    /// Normalized eigenvector residual bound.
    pub eig_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            float_tol: 1e-9,
            root_tol: 1e-10,
            eig_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    /// Working depth; for explicit and preset instances, defaults to what the
    /// parameters support.
    pub n: Option<usize>,
    pub min_abs: f64,
    pub max_abs: f64,
    pub unimodular: bool,
    pub preset: Option<Preset>,
    pub explicit: Option<ExplicitParams>,
    pub moments: Option<(Exact, Exact)>,
    /// `None` means: run when the instance has the required shape.
    pub christoffel: Option<bool>,
    pub z_hat: Option<Exact>,
    pub tolerances: Tolerances,
    pub backend: Backend,
    pub suite: SuiteSelection,
    /// Depth cap for the exact backend.
    pub exact_max_n: usize,
    /// Depth cap for the float backend.
    pub float_max_n: usize,
}

pub const DEFAULT_N: usize = 8;
pub const DEFAULT_EXACT_MAX_N: usize = 8;
pub const DEFAULT_FLOAT_MAX_N: usize = 16;
pub const BACKEND_ENV: &str = "R2PENCIL_BACKEND";

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Random,
            seed: 0,
            n: None,
            min_abs: 0.5,
            max_abs: 2.0,
            unimodular: false,
            preset: None,
            explicit: None,
            moments: None,
            christoffel: None,
            z_hat: None,
            tolerances: Tolerances::default(),
            backend: Backend::Both,
            suite: SuiteSelection::All,
            exact_max_n: DEFAULT_EXACT_MAX_N,
            float_max_n: DEFAULT_FLOAT_MAX_N,
        }
    }
}

impl RunConfig {
    pub fn random(seed: u64, n: usize) -> Self {
        Self {
            seed,
            n: Some(n),
            ..Self::default()
        }
    }

    pub fn preset(preset: Preset) -> Self {
        Self {
            mode: Mode::Preset,
            preset: Some(preset),
            ..Self::default()
        }
    }

    /// Replaces the backend with the value of `R2PENCIL_BACKEND`, if set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(BACKEND_ENV) {
            self.backend = Backend::parse(&v).map_err(|e| ConfigError::new(BACKEND_ENV, e.reason))?;
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    seed: Option<u64>,
    #[serde(alias = "n", rename = "N")]
    depth: Option<usize>,
    min_abs: Option<f64>,
    max_abs: Option<f64>,
    unimodular: Option<bool>,
    preset: Option<String>,
    params: Option<RawParams>,
    moments: Option<RawMoments>,
    christoffel: Option<RawChristoffel>,
    tolerances: Option<RawTolerances>,
    backend: Option<String>,
    suite: Option<SuiteSelection>,
    exact_max_n: Option<usize>,
    float_max_n: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: Vec<Value>,
    beta: Vec<Value>,
    e: Vec<Value>,
    d: Vec<Value>,
    c: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMoments {
    m0: Value,
    m1: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChristoffel {
    enabled: Option<bool>,
    z_hat: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    float_tol: Option<f64>,
    root_tol: Option<f64>,
    eig_tol: Option<f64>,
}

fn parse_part(v: &Value, path: &str) -> Result<num_rational::BigRational, ConfigError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(ConfigError::new(path, "expected a number or a numeric string")),
    };
    parse_rational(&text).map_err(|e| ConfigError::new(path, e.to_string()))
}

/// Reads one `[re, im]` pair.
pub fn parse_complex(v: &Value, path: &str) -> Result<Exact, ConfigError> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex::new(
            parse_part(&parts[0], &format!("{path}[0]"))?,
            parse_part(&parts[1], &format!("{path}[1]"))?,
        )),
        _ => Err(ConfigError::new(path, "expected a two-element [re, im] array")),
    }
}

fn parse_list(vs: &[Value], path: &str) -> Result<Vec<Exact>, ConfigError> {
    vs.iter()
        .enumerate()
        .map(|(i, v)| parse_complex(v, &format!("{path}[{i}]")))
        .collect()
}

fn positive_tol(v: Option<f64>, default: f64, path: &str) -> Result<f64, ConfigError> {
    match v {
        None => Ok(default),
        Some(x) if x.is_finite() && x >= 0.0 => Ok(x),
        Some(_) => Err(ConfigError::new(path, "must be a finite non-negative number")),
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::new("$", e.to_string()))?;
    let d = RunConfig::default();
    let tol = raw.tolerances.unwrap_or(RawTolerances {
        float_tol: None,
        root_tol: None,
        eig_tol: None,
    });
    let mut cfg = RunConfig {
        mode: raw.mode.unwrap_or(Mode::Random),
        seed: raw.seed.unwrap_or(d.seed),
        n: raw.depth,
        min_abs: raw.min_abs.unwrap_or(d.min_abs),
        max_abs: raw.max_abs.unwrap_or(d.max_abs),
        unimodular: raw.unimodular.unwrap_or(false),
        preset: raw.preset.as_deref().map(Preset::parse).transpose()?,
        explicit: None,
        moments: None,
        christoffel: None,
        z_hat: None,
        tolerances: Tolerances {
            float_tol: positive_tol(tol.float_tol, d.tolerances.float_tol, "tolerances.float_tol")?,
            root_tol: positive_tol(tol.root_tol, d.tolerances.root_tol, "tolerances.root_tol")?,
            eig_tol: positive_tol(tol.eig_tol, d.tolerances.eig_tol, "tolerances.eig_tol")?,
        },
        backend: raw.backend.as_deref().map(Backend::parse).transpose()?.unwrap_or(d.backend),
        suite: raw.suite.unwrap_or(d.suite),
        exact_max_n: raw.exact_max_n.unwrap_or(d.exact_max_n),
        float_max_n: raw.float_max_n.unwrap_or(d.float_max_n),
    };
    if let Some(m) = raw.moments {
        cfg.moments = Some((parse_complex(&m.m0, "moments.m0")?, parse_complex(&m.m1, "moments.m1")?));
    }
    if let Some(ch) = raw.christoffel {
        cfg.christoffel = ch.enabled;
        cfg.z_hat = ch.z_hat.as_ref().map(|v| parse_complex(v, "christoffel.z_hat")).transpose()?;
    }
    if let Some(p) = raw.params {
        cfg.explicit = Some(ExplicitParams {
            alpha: parse_list(&p.alpha, "params.alpha")?,
            beta: parse_list(&p.beta, "params.beta")?,
            e: parse_list(&p.e, "params.e")?,
            d: parse_list(&p.d, "params.d")?,
            c: parse_list(&p.c, "params.c")?,
        });
    }
    validate(&cfg)?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(path.display().to_string(), e.to_string()))?;
    parse_config(&text)
}

/// Checks cross-field constraints, including the parameter invariants of an
/// explicit instance.
pub fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if !(cfg.min_abs > 0.0 && cfg.min_abs <= cfg.max_abs && cfg.max_abs.is_finite()) {
        return Err(ConfigError::new("min_abs", "need 0 < min_abs <= max_abs < inf"));
    }
    // the sampling lattice has step 1/64, so the annulus must contain a point
    if cfg.max_abs < 1.0 / 64.0 {
        return Err(ConfigError::new("max_abs", "must be at least 1/64"));
    }
    if cfg.n == Some(0) {
        return Err(ConfigError::new("N", "must be at least 1"));
    }
    match cfg.mode {
        Mode::Preset if cfg.preset.is_none() => {
            return Err(ConfigError::new("preset", "required when mode is \"preset\""));
        }
        Mode::Explicit => {
            let Some(p) = &cfg.explicit else {
                return Err(ConfigError::new("params", "required when mode is \"explicit\""));
            };
            explicit_params(p)?;
        }
        _ => {}
    }
    Ok(())
}

/// Builds the validated parameter sequence of an explicit instance.
pub fn explicit_params(p: &ExplicitParams) -> Result<ParamSeq<Exact>, ConfigError> {
    ParamSeq::new(
        p.alpha.clone(),
        p.beta.clone(),
        p.e.clone(),
        p.d.clone(),
        p.c.clone(),
        Validation::Full,
    )
    .map_err(|e| match e {
        r2pencil_core::Error::InvalidParam { field, index, reason } => {
            ConfigError::new(format!("params.{field}[{index}]"), format!("{field}[{index}] {reason}"))
        }
        other => ConfigError::new("params", other.to_string()),
    })
}

/// `[re, im]` JSON for a value, as exact text.
pub fn complex_json(x: &Exact) -> Value {
    let (re, im) = x.to_text();
    Value::Array(vec![Value::String(re), Value::String(im)])
}

/// An explicit-mode config document reproducing `params`.
pub fn explicit_config_json(params: &ParamSeq<Exact>, n: usize) -> Value {
    let list = |v: &[Exact]| Value::Array(v.iter().map(complex_json).collect());
    serde_json::json!({
        "mode": "explicit",
        "N": n,
        "params": {
            "alpha": list(params.alphas()),
            "beta": list(params.betas()),
            "e": list(params.es()),
            "d": list(params.ds()),
            "c": list(params.cs()),
        }
    })
}
