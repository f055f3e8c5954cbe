//! Momentum transfer, its conservation, and radiation pressure in a medium.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{transform, window_is_faithful};
use crate::grid::Grid1D;
use crate::reflection::{joint_state_momentum, ElementBudget};
use crate::state::{make_gaussian_photon_at, make_mirror_gaussian, MirrorState, PhotonSpectrum, PolarizationPair};
use crate::units::HBAR_SI;

/// Conservation residual bound, in units of ħk₀.
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

/// Half-width, in mirror momentum standard deviations, kept clear between
/// the displaced distributions and the edges of the momentum window.
pub const MOMENTUM_WINDOW_SIGMAS: f64 = 8.0;

/// Mirror momentum statistics before and after reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumReport {
    pub mirror_mean_before: f64,
    pub mirror_mean_after: f64,
    /// `2N⟨k_z⟩`.
    pub kick_expected: f64,
    /// `|(after − before) − kick_expected|`.
    pub conservation_residual: f64,
    pub mirror_variance_before: f64,
    pub mirror_variance_after: f64,
    /// L1 distance between the mirror marginal of the joint state and
    /// `Σ_k |ψ(k)|² |φ̃(p − 2N k_z)|²` evaluated independently.
    pub marginal_l1_error: f64,
    /// Set when the momentum window cannot hold every displaced row.
    pub aliased: bool,
}

impl MomentumReport {
    /// Momentum actually transferred to the mirror.
    pub fn kick(&self) -> f64 {
        self.mirror_mean_after - self.mirror_mean_before
    }

    pub fn is_conserved(&self) -> bool {
        !self.aliased && self.conservation_residual < CONSERVATION_TOLERANCE
    }
}

/// Mirror momentum before and after `bounces` reflections.
///
/// The mirror marginal is read off the momentum-basis joint state on a
/// reciprocal momentum grid covering one full period of the transform, at
/// twice the position resolution, centered on the span of zero and all kicks.
pub fn momentum_report(
    photon: &PhotonSpectrum,
    mirror: &MirrorState,
    bounces: u32,
    budget: ElementBudget,
) -> Result<MomentumReport> {
    let n = bounces as f64;
    let kicks: Vec<f64> = (0..photon.len()).map(|i| 2.0 * n * photon.kz(i)).collect();
    let (q_lo, q_hi) = kicks
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    // the window holds the mirror distribution before and after the kicks
    let (q_lo, q_hi) = (q_lo.min(0.0), q_hi.max(0.0));
    let (mean_p, sigma_p) = mirror.momentum_moments()?;
    let zgrid = mirror.zgrid();
    let pgrid = Grid1D::reciprocal(zgrid, 2 * mirror.len(), mean_p + 0.5 * (q_lo + q_hi))?;
    let faithful = window_is_faithful(
        zgrid,
        &pgrid,
        mean_p,
        sigma_p,
        (q_lo, q_hi),
        MOMENTUM_WINDOW_SIGMAS,
    );

    let joint = joint_state_momentum(photon, mirror, &pgrid, bounces, budget)?;
    let after = joint.mirror_marginal();
    let before: Vec<f64> = transform(mirror.amplitude(), zgrid, &pgrid, 0.0)
        .iter()
        .map(|a| a.norm_sqr())
        .collect();
    let convolved = kick_convolution(photon, mirror, &kicks, &pgrid);
    let marginal_l1_error = pgrid.integrate(after.iter().zip(&convolved).map(|(a, c)| (a - c).abs()));

    let (mean_before, var_before) = distribution_moments(&pgrid, &before);
    let (mean_after, var_after) = distribution_moments(&pgrid, &after);
    let kick_expected = 2.0 * n * photon.mean_kz();
    let residual = ((mean_after - mean_before) - kick_expected).abs();
    if !(residual.is_finite() && var_after.is_finite()) {
        return Err(Error::Numerical("non-finite momentum moments".into()));
    }
    Ok(MomentumReport {
        mirror_mean_before: mean_before,
        mirror_mean_after: mean_after,
        kick_expected,
        conservation_residual: residual,
        mirror_variance_before: var_before,
        mirror_variance_after: var_after,
        marginal_l1_error,
        aliased: !faithful || joint.aliased(),
    })
}

/// Smallest mirror grid size at which [`momentum_report`] stays faithful for
/// a Gaussian mirror of spread `sigma_x` sampled over `±span·σ_x`, with
/// `max_kick` the largest kick magnitude.
pub fn required_mirror_points(sigma_x: f64, span: f64, max_kick: f64) -> usize {
    let sigma_p = 0.5 / sigma_x;
    let period = max_kick + 2.0 * (MOMENTUM_WINDOW_SIGMAS + 1.0) * sigma_p;
    let dz = 2.0 * PI / period;
    (2.0 * span * sigma_x / dz).ceil() as usize + 2
}

fn distribution_moments(grid: &Grid1D, density: &[f64]) -> (f64, f64) {
    let total: f64 = density.iter().sum();
    let mean = grid.points().zip(density).map(|(p, d)| p * d).sum::<f64>() / total;
    let var = grid
        .points()
        .zip(density)
        .map(|(p, d)| (p - mean).powi(2) * d)
        .sum::<f64>()
        / total;
    (mean, var)
}

/// `Σ_i |ψ_i|² Δk |φ̃(p − q_i)|²` through the autocorrelation of φ:
/// `|φ̃(p − q)|² = (Δz²/2π) Σ_m R_m e^{−i(p−q)mΔz}` with `R_m = Σ_l φ_l φ*_{l−m}`.
fn kick_convolution(
    photon: &PhotonSpectrum,
    mirror: &MirrorState,
    kicks: &[f64],
    pgrid: &Grid1D,
) -> Vec<f64> {
    let phi = mirror.amplitude();
    let nz = phi.len() as isize;
    let dz = mirror.zgrid().step();
    let weights = photon.weights();
    let lags: Vec<isize> = (-(nz - 1)..nz).collect();
    let coeff: Vec<Complex64> = lags
        .par_iter()
        .map(|&m| {
            let autocorr: Complex64 = (m.max(0)..nz.min(nz + m))
                .map(|l| phi[l as usize] * phi[(l - m) as usize].conj())
                .sum();
            let photon_char: Complex64 = weights
                .iter()
                .zip(kicks)
                .map(|(w, q)| Complex64::cis(q * m as f64 * dz) * w)
                .sum();
            autocorr * photon_char
        })
        .collect();
    let pre = dz * dz / (2.0 * PI);
    (0..pgrid.count())
        .into_par_iter()
        .map(|j| {
            let p = pgrid.point(j);
            let step = Complex64::cis(-p * dz);
            let mut phase = Complex64::cis(p * (nz - 1) as f64 * dz);
            let mut acc = Complex64::default();
            for c in &coeff {
                acc += c * phase;
                phase *= step;
            }
            acc.re * pre
        })
        .collect()
}

/// Fractional bandwidth of the narrowband photons used by [`minkowski_scan`].
pub const MINKOWSKI_BANDWIDTH: f64 = 1e-3;

/// One refractive index of a [`minkowski_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiRow {
    pub refr_index: f64,
    /// Central wavenumber `nω` in the medium.
    pub k_center: f64,
    /// Measured mirror momentum gain.
    pub kick: f64,
    /// `2N⟨k_z⟩` of the photon.
    pub kick_expected: f64,
    pub conservation_residual: f64,
    /// Minkowski photon momentum `nω` (units ħ = c = 1).
    pub minkowski_momentum: f64,
    /// Abraham photon momentum `ω/n`, reported for comparison only.
    pub abraham_momentum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiScan {
    pub omega: f64,
    pub theta: f64,
    pub rows: Vec<MinkowskiRow>,
    /// Least-squares slope of kick against `n`.
    pub slope: f64,
    /// `2ω cos θ`.
    pub slope_expected: f64,
}

impl MinkowskiScan {
    pub fn slope_relative_error(&self) -> f64 {
        ((self.slope - self.slope_expected) / self.slope_expected).abs()
    }
}

/// Momentum kick on a mirror immersed in media of different refractive index
/// at fixed photon frequency `ω`.
///
/// Every row uses a narrowband photon centered on `k = nω` and a Gaussian
/// mirror with position spread of one vacuum wavelength `2π/ω`.
pub fn minkowski_scan(omega_fixed: f64, theta: f64, n_values: &[f64]) -> Result<MinkowskiScan> {
    if !(omega_fixed > 0.0 && omega_fixed.is_finite()) {
        return Err(Error::param("omega_fixed", "must be positive"));
    }
    if n_values.len() < 2 {
        return Err(Error::param("n_values", "need at least two refractive indices"));
    }
    let mirror = make_mirror_gaussian(2.0 * PI / omega_fixed, 0.0, 8.0, 256)?;
    let rows = n_values
        .par_iter()
        .map(|&n| {
            let photon = make_gaussian_photon_at(
                n * omega_fixed,
                MINKOWSKI_BANDWIDTH,
                theta,
                n,
                PolarizationPair::PLUS,
                5.0,
                256,
            )?;
            let report = momentum_report(&photon, &mirror, 1, ElementBudget::default())?;
            if report.aliased {
                return Err(Error::Numerical(format!("momentum window aliased at n = {n}")));
            }
            Ok(MinkowskiRow {
                refr_index: n,
                k_center: n * omega_fixed,
                kick: report.kick(),
                kick_expected: report.kick_expected,
                conservation_residual: report.conservation_residual,
                minkowski_momentum: n * omega_fixed,
                abraham_momentum: omega_fixed / n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = least_squares_slope(rows.iter().map(|r| (r.refr_index, r.kick)))
        .ok_or_else(|| Error::param("n_values", "refractive indices must not all be equal"))?;
    Ok(MinkowskiScan {
        omega: omega_fixed,
        theta,
        rows,
        slope,
        slope_expected: 2.0 * omega_fixed * theta.cos(),
    })
}

/// Slope of the least-squares line through `(x, y)` pairs.
pub fn least_squares_slope(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.into_iter().collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Coupling at or above which entanglement effects are expected.
pub const ENTANGLING_MIN_COUPLING: f64 = 0.316_227_766_016_837_94; // 10^(-1/2)
/// Coupling below which the mirror behaves classically.
pub const CLASSICAL_MAX_COUPLING: f64 = 0.031_622_776_601_683_79; // 10^(-3/2)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Classical,
    Intermediate,
    Entangling,
}

impl Verdict {
    fn from_coupling(c: f64) -> Self {
        if c >= ENTANGLING_MIN_COUPLING {
            Verdict::Entangling
        } else if c >= CLASSICAL_MAX_COUPLING {
            Verdict::Intermediate
        } else {
            Verdict::Classical
        }
    }

    /// Whether the regime is sufficient to observe photon–mirror entanglement.
    pub fn is_sufficient(self) -> bool {
        self == Verdict::Entangling
    }
}

/// Order-of-magnitude regime estimate for a physical oscillator mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// Ground-state position spread `√(ħ/2m₀ω₀)` in meters.
    pub delta_x_m: f64,
    /// The same spread in internal units (`k·Δx`).
    pub delta_x_internal: f64,
    /// `Q·k·Δx = Q·Δx/ƛ`: phase spread of `Q` reflections across the mirror
    /// wave function.
    pub coupling: f64,
    /// Position spread at which the coupling reaches one, `λ/(2πQ)`.
    pub threshold_delta_x_m: f64,
    /// `m₀ω₀` of a ground-state oscillator with the threshold spread.
    pub threshold_mass_freq: f64,
    pub verdict: Verdict,
}

/// Regime of a ground-state oscillator mirror with `m₀ω₀ = mass_freq_product`
/// (kg/s) hit by light of wavelength `wavelength_m` (meters) reflected `q`
/// times in a cavity.
pub fn regime_threshold(mass_freq_product: f64, wavelength_m: f64, q: u64) -> Result<RegimeReport> {
    if !(mass_freq_product > 0.0 && mass_freq_product.is_finite()) {
        return Err(Error::param("mass_freq_product", "must be positive"));
    }
    if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
        return Err(Error::param("wavelength_m", "must be positive"));
    }
    if q == 0 {
        return Err(Error::param("Q", "must be at least 1"));
    }
    let qf = q as f64;
    let k = 2.0 * PI / wavelength_m;
    let delta_x_m = (HBAR_SI / (2.0 * mass_freq_product)).sqrt();
    let coupling = qf * k * delta_x_m;
    let threshold_delta_x_m = 1.0 / (qf * k);
    Ok(RegimeReport {
        delta_x_m,
        delta_x_internal: k * delta_x_m,
        coupling,
        threshold_delta_x_m,
        threshold_mass_freq: HBAR_SI / (2.0 * threshold_delta_x_m * threshold_delta_x_m),
        verdict: Verdict::from_coupling(coupling),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_gaussian_photon;

    fn report(frac: f64, theta: f64, sigma_x: f64, n: u32) -> MomentumReport {
        let ph = make_gaussian_photon(frac, theta, 1.0, PolarizationPair::PLUS, 5.0, 128).unwrap();
        let m = make_mirror_gaussian(sigma_x, 0.0, 8.0, 256).unwrap();
        momentum_report(&ph, &m, n, ElementBudget::default()).unwrap()
    }

    #[test]
    fn normal_incidence_kick_is_two() {
        let r = report(1e-4, 0.0, 2.0 * PI, 1);
        assert!(!r.aliased);
        assert!((r.kick() - 2.0).abs() < 1e-9);
        assert!(r.conservation_residual < CONSERVATION_TOLERANCE);
    }

    #[test]
    fn oblique_kick_is_two_cos_theta() {
        let r = report(1e-4, PI / 3.0, 2.0 * PI, 1);
        assert!((r.kick() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kick_is_linear_in_bounces() {
        let one = report(0.05, 0.2, 3.0, 1);
        let three = report(0.05, 0.2, 3.0, 3);
        assert!((three.kick() - 3.0 * one.kick()).abs() < 1e-10);
    }

    #[test]
    fn marginal_is_the_kick_convolution() {
        let r = report(0.1, 0.4, 1.0, 2);
        assert!(r.marginal_l1_error < 1e-8, "{}", r.marginal_l1_error);
        assert!(r.mirror_variance_after > r.mirror_variance_before);
    }

    #[test]
    fn regime_rejects_nonpositive_inputs() {
        assert!(regime_threshold(0.0, 5e-7, 1).is_err());
        assert!(regime_threshold(1e-8, -1.0, 1).is_err());
        assert!(regime_threshold(1e-8, 5e-7, 0).is_err());
    }

    #[test]
    fn least_squares_slope_of_a_line() {
        let s = least_squares_slope([(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!((s - 2.0).abs() < 1e-15);
        assert!(least_squares_slope([(1.0, 1.0), (1.0, 2.0)]).is_none());
    }

    #[test]
    fn minkowski_scan_needs_two_indices() {
        assert!(minkowski_scan(1.0, 0.0, &[1.0]).is_err());
        assert!(minkowski_scan(1.0, 0.0, &[1.5, 1.5]).is_err());
    }
}
