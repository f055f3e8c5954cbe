use rayon::prelude::*;

use qmirror::ElementBudget;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::scenario::{self, RunRecord};

pub const MAX_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SigmaXOverLambda,
    FracBandwidth,
    Bounces,
    RefrIndex,
}

impl Axis {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "sigma_x_over_lambda" => Ok(Axis::SigmaXOverLambda),
            "frac_bandwidth" => Ok(Axis::FracBandwidth),
            "bounces" => Ok(Axis::Bounces),
            "refr_index" => Ok(Axis::RefrIndex),
            _ => Err(CliError::Config(format!(
                "unknown sweep axis `{name}` (expected sigma_x_over_lambda, frac_bandwidth, bounces or refr_index)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::SigmaXOverLambda => "sigma_x_over_lambda",
            Axis::FracBandwidth => "frac_bandwidth",
            Axis::Bounces => "bounces",
            Axis::RefrIndex => "refr_index",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig, CliError> {
        let mut c = base.clone();
        match self {
            Axis::SigmaXOverLambda => c.sigma_x_over_lambda = value,
            Axis::FracBandwidth => c.frac_bandwidth = value,
            Axis::RefrIndex => c.refr_index = value,
            Axis::Bounces => {
                let n = value.round();
                if (value - n).abs() > 1e-9 || !(1.0..=u32::MAX as f64).contains(&n) {
                    return Err(CliError::Config(format!("bounces value {value} is not a positive integer")));
                }
                c.bounces = n as u32;
            }
        }
        Ok(c)
    }
}

/// `points` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(CliError::Config(format!("--points must lie in 2..={MAX_POINTS}")));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Config("--from and --to must be finite".into()));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { to } else { from + step * i as f64 })
        .collect())
}

pub fn check_values(values: &[f64]) -> Result<(), CliError> {
    if !(2..=MAX_POINTS).contains(&values.len()) {
        return Err(CliError::Config(format!("a sweep needs 2..={MAX_POINTS} values")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub record: Option<RunRecord>,
    pub error: Option<String>,
    /// Exit code this row contributes (0 when clean).
    pub code: u8,
}

/// Runs every value concurrently; rows come back in axis order.
///
/// Every swept config is checked before anything runs, so a bad axis value is
/// a config error rather than a row failure.
pub fn run(base: &ScenarioConfig, axis: Axis, values: &[f64], budget: ElementBudget) -> Result<Vec<SweepRow>, CliError> {
    check_values(values)?;
    let configs = values
        .iter()
        .map(|&v| {
            let c = axis.apply(base, v)?;
            scenario::check(&c).map_err(|e| CliError::Config(format!("{} = {v}: {e}", axis.name())))?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(configs
        .par_iter()
        .zip(values)
        .map(|(c, &value)| match scenario::run(c, budget, true) {
            Ok(record) => {
                let error = record.problem();
                let code = if error.is_some() { 3 } else { 0 };
                SweepRow {
                    axis,
                    value,
                    record: Some(record),
                    error,
                    code,
                }
            }
            Err(e) => SweepRow {
                axis,
                value,
                record: None,
                code: e.exit_code(),
                error: Some(e.to_string()),
            },
        })
        .collect())
}
