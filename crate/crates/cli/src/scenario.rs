//! Turning a config into states and a run record.
//!
//! Configs are read at fixed vacuum frequency ω = 1: the photon central
//! wavenumber in the medium is `k = n`, and mirror lengths are given in vacuum
//! wavelengths `λ = 2π`.

use std::f64::consts::PI;

use qmirror::entanglement::coupling;
use qmirror::observables::{momentum_report, required_mirror_points, CONSERVATION_TOLERANCE};
use qmirror::{
    classicality_report, joint_state_position, make_gaussian_photon_at, make_mirror_gaussian,
    purity_oracle, schmidt, ElementBudget, MirrorState, PhotonSpectrum, PolarizationPair,
};

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Purity change allowed when both grids are refined by a factor of two.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

/// Smallest mirror span, in σ_x, used for momentum statistics.
const MOMENTUM_SPAN_SIGMAS: f64 = 8.0;

pub const VACUUM_WAVELENGTH: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub entropy_bits: f64,
    pub purity: f64,
    pub product_fidelity: f64,
    pub displaced_marginal_fidelity: f64,
    pub kick: f64,
    pub kick_expected: f64,
    pub conservation_residual: f64,
    pub g: f64,
    pub converged: bool,
    pub aliased: bool,
}

impl RunRecord {
    /// Why this record should not be trusted, if it shouldn't.
    pub fn problem(&self) -> Option<String> {
        if self.aliased {
            Some("momentum window aliased".into())
        } else if self.conservation_residual >= CONSERVATION_TOLERANCE {
            Some(format!("conservation residual {:e} above bound", self.conservation_residual))
        } else if !self.converged {
            Some("purity not converged under grid doubling".into())
        } else {
            None
        }
    }
}

pub fn photon(c: &ScenarioConfig, points: usize) -> Result<PhotonSpectrum, CliError> {
    let pol = PolarizationPair::normalized(c.pol_plus, c.pol_minus)?;
    Ok(make_gaussian_photon_at(
        c.refr_index,
        c.frac_bandwidth,
        c.theta_deg.to_radians(),
        c.refr_index,
        pol,
        c.span_sigmas,
        points,
    )?)
}

pub fn mirror(c: &ScenarioConfig, span: f64, points: usize) -> Result<MirrorState, CliError> {
    Ok(make_mirror_gaussian(
        c.sigma_x_over_lambda * VACUUM_WAVELENGTH,
        c.center_over_lambda * VACUUM_WAVELENGTH,
        span,
        points,
    )?)
}

/// Builds both states without running anything, to surface config problems early.
pub fn check(c: &ScenarioConfig) -> Result<(), CliError> {
    c.validate()?;
    photon(c, c.points_per_axis)?;
    mirror(c, c.span_sigmas, c.points_per_axis)?;
    Ok(())
}

fn purity_at(c: &ScenarioConfig, points: usize, budget: ElementBudget) -> Result<(f64, f64, f64), CliError> {
    let ph = photon(c, points)?;
    let m = mirror(c, c.span_sigmas, points)?;
    let joint = joint_state_position(&ph, &m, c.bounces, budget)?;
    let sd = schmidt(&joint)?;
    Ok((sd.purity, sd.entropy_bits, coupling(&ph, &m, c.bounces)))
}

pub fn run(c: &ScenarioConfig, budget: ElementBudget, check_convergence: bool) -> Result<RunRecord, CliError> {
    c.validate()?;
    let ph = photon(c, c.points_per_axis)?;
    let m = mirror(c, c.span_sigmas, c.points_per_axis)?;
    let joint = joint_state_position(&ph, &m, c.bounces, budget)?;
    let report = classicality_report(&joint, &ph, &m)?;

    let converged = if check_convergence {
        let (fine, _, _) = purity_at(c, 2 * c.points_per_axis, budget)?;
        (fine - report.purity).abs() < CONVERGENCE_TOLERANCE
    } else {
        true
    };

    // momentum statistics need a wider mirror sample than the Schmidt cut
    let sigma_x = c.sigma_x_over_lambda * VACUUM_WAVELENGTH;
    let span = c.span_sigmas.max(MOMENTUM_SPAN_SIGMAS);
    let max_kick = 2.0 * c.bounces as f64 * ph.kz(ph.len() - 1);
    let points = required_mirror_points(sigma_x, span, max_kick).max(c.points_per_axis);
    let wide = mirror(c, span, points)?;
    let momentum = momentum_report(&ph, &wide, c.bounces, budget)?;

    let record = RunRecord {
        entropy_bits: report.entropy_bits,
        purity: report.purity,
        product_fidelity: report.product_fidelity,
        displaced_marginal_fidelity: report.displaced_marginal_fidelity,
        kick: momentum.kick(),
        kick_expected: momentum.kick_expected,
        conservation_residual: momentum.conservation_residual,
        g: report.coupling_g,
        converged,
        aliased: momentum.aliased,
    };
    let finite = [
        record.entropy_bits,
        record.purity,
        record.product_fidelity,
        record.displaced_marginal_fidelity,
        record.kick,
        record.conservation_residual,
        record.g,
    ]
    .iter()
    .all(|v| v.is_finite());
    if !finite {
        return Err(CliError::Numerical("non-finite value in run record".into()));
    }
    Ok(record)
}

/// One classical-limit diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRecord {
    pub limit: &'static str,
    pub sigma_x_over_lambda: f64,
    pub frac_bandwidth: f64,
    pub purity: f64,
    /// Present when the grids are small enough for the brute-force oracle.
    pub oracle_purity: Option<f64>,
    pub product_fidelity: f64,
    pub displaced_marginal_fidelity: f64,
    pub entropy_bits: f64,
    pub g: f64,
    pub holds: bool,
}

/// Delta-mirror limit (σ_x = λ/100) and monochromatic limit (bandwidth 1e-4),
/// each with every other setting taken from `c`.
pub fn limits(c: &ScenarioConfig, budget: ElementBudget) -> Result<Vec<LimitRecord>, CliError> {
    let delta = ScenarioConfig {
        sigma_x_over_lambda: 0.01,
        ..c.clone()
    };
    let mono = ScenarioConfig {
        frac_bandwidth: 1e-4,
        ..c.clone()
    };
    let mut out = Vec::new();
    for (limit, cfg) in [("delta_mirror", delta), ("monochromatic", mono)] {
        cfg.validate()?;
        let ph = photon(&cfg, cfg.points_per_axis)?;
        let m = mirror(&cfg, cfg.span_sigmas, cfg.points_per_axis)?;
        let joint = joint_state_position(&ph, &m, cfg.bounces, budget)?;
        let r = classicality_report(&joint, &ph, &m)?;
        let oracle_purity = if cfg.points_per_axis <= qmirror::entanglement::ORACLE_MAX_POINTS {
            Some(purity_oracle(&ph, &m, cfg.bounces)?)
        } else {
            None
        };
        let holds = match limit {
            "delta_mirror" => r.purity > 0.999 && r.product_fidelity > 0.999,
            _ => r.displaced_marginal_fidelity > 1.0 - 1e-6 && r.entropy_bits < 1e-3,
        };
        out.push(LimitRecord {
            limit,
            sigma_x_over_lambda: cfg.sigma_x_over_lambda,
            frac_bandwidth: cfg.frac_bandwidth,
            purity: r.purity,
            oracle_purity,
            product_fidelity: r.product_fidelity,
            displaced_marginal_fidelity: r.displaced_marginal_fidelity,
            entropy_bits: r.entropy_bits,
            g: r.coupling_g,
            holds,
        });
    }
    Ok(out)
}
