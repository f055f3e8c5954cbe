//! Scenario files: flat `key = value` lines with dotted section keys.
//!
//! ```text
//! # delta-mirror limit
//! photon.frac_bandwidth = 0.1
//! photon.theta_deg = 0
//! photon.refr_index = 1
//! photon.pol_plus = 1, 0
//! photon.pol_minus = 0, 0
//! mirror.sigma_x_over_lambda = 0.01
//! mirror.center_over_lambda = 0
//! bounces = 1
//! grids.points_per_axis = 256
//! grids.span_sigmas = 5
//! output.format = csv
//! output.path = delta.csv
//! ```
//!
//! Every key is optional except `mirror.sigma_x_over_lambda`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub frac_bandwidth: f64,
    pub theta_deg: f64,
    pub refr_index: f64,
    pub pol_plus: Complex64,
    pub pol_minus: Complex64,
    pub sigma_x_over_lambda: f64,
    pub center_over_lambda: f64,
    pub bounces: u32,
    pub points_per_axis: usize,
    pub span_sigmas: f64,
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            frac_bandwidth: 0.1,
            theta_deg: 0.0,
            refr_index: 1.0,
            pol_plus: Complex64::new(1.0, 0.0),
            pol_minus: Complex64::new(0.0, 0.0),
            sigma_x_over_lambda: f64::NAN,
            center_over_lambda: 0.0,
            bounces: 1,
            points_per_axis: 256,
            span_sigmas: 5.0,
            format: Format::Csv,
            path: None,
        }
    }
}

const KEYS: [&str; 12] = [
    "photon.frac_bandwidth",
    "photon.theta_deg",
    "photon.refr_index",
    "photon.pol_plus",
    "photon.pol_minus",
    "mirror.sigma_x_over_lambda",
    "mirror.center_over_lambda",
    "bounces",
    "grids.points_per_axis",
    "grids.span_sigmas",
    "output.format",
    "output.path",
];

/// A parsed config and the warnings raised while loading it.
#[derive(Debug, Default)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub warnings: Vec<String>,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Loaded, CliError> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if entries.insert(key, value.trim()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }

    let mut c = ScenarioConfig::default();
    for (&key, &value) in &entries {
        match key {
            "photon.frac_bandwidth" => c.frac_bandwidth = number(key, value)?,
            "photon.theta_deg" => c.theta_deg = number(key, value)?,
            "photon.refr_index" => c.refr_index = number(key, value)?,
            "photon.pol_plus" => c.pol_plus = complex(key, value)?,
            "photon.pol_minus" => c.pol_minus = complex(key, value)?,
            "mirror.sigma_x_over_lambda" => c.sigma_x_over_lambda = number(key, value)?,
            "mirror.center_over_lambda" => c.center_over_lambda = number(key, value)?,
            "bounces" => c.bounces = integer(key, value)?,
            "grids.points_per_axis" => c.points_per_axis = integer(key, value)?,
            "grids.span_sigmas" => c.span_sigmas = number(key, value)?,
            "output.format" => {
                c.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(invalid(key, "must be `csv` or `json`")),
                }
            }
            "output.path" => {
                if value.is_empty() {
                    return Err(invalid(key, "must not be empty"));
                }
                c.path = Some(PathBuf::from(value));
            }
            _ => unreachable!(),
        }
    }
    if !entries.contains_key("mirror.sigma_x_over_lambda") {
        return Err(CliError::Config("missing key `mirror.sigma_x_over_lambda`".into()));
    }

    let mut warnings = Vec::new();
    let pol_norm = (c.pol_plus.norm_sqr() + c.pol_minus.norm_sqr()).sqrt();
    if !(pol_norm > 0.0 && pol_norm.is_finite()) {
        return Err(invalid("photon.pol_plus", "polarization must be nonzero"));
    }
    if (pol_norm - 1.0).abs() > 1e-12 {
        warnings.push(format!("polarization norm {pol_norm} renormalized to 1"));
        c.pol_plus /= pol_norm;
        c.pol_minus /= pol_norm;
    }
    c.validate()?;
    Ok(Loaded { config: c, warnings })
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.frac_bandwidth > 0.0 && self.frac_bandwidth < 0.3) {
            return Err(invalid("photon.frac_bandwidth", "must lie in (0, 0.3)"));
        }
        if !(self.theta_deg >= 0.0 && self.theta_deg < 90.0) {
            return Err(invalid("photon.theta_deg", "must lie in [0, 90)"));
        }
        if !(self.refr_index >= 1.0 && self.refr_index.is_finite()) {
            return Err(invalid("photon.refr_index", "must be at least 1"));
        }
        if !(self.sigma_x_over_lambda > 0.0 && self.sigma_x_over_lambda.is_finite()) {
            return Err(invalid("mirror.sigma_x_over_lambda", "must be positive"));
        }
        if !self.center_over_lambda.is_finite() {
            return Err(invalid("mirror.center_over_lambda", "must be finite"));
        }
        if self.bounces == 0 {
            return Err(invalid("bounces", "must be at least 1"));
        }
        if self.points_per_axis < 16 {
            return Err(invalid("grids.points_per_axis", "must be at least 16"));
        }
        if !(self.span_sigmas > 0.0 && self.span_sigmas.is_finite()) {
            return Err(invalid("grids.span_sigmas", "must be positive"));
        }
        Ok(())
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

fn invalid(key: &str, reason: &str) -> CliError {
    CliError::Config(format!("`{key}` {reason}"))
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| invalid(key, "must be a finite number"))
}

fn integer<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse::<T>().map_err(|_| invalid(key, "must be a nonnegative integer"))
}

fn complex(key: &str, value: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(number(key, re)?, 0.0)),
        [re, im] => Ok(Complex64::new(number(key, re)?, number(key, im)?)),
        _ => Err(invalid(key, "must be `re` or `re, im`")),
    }
}
