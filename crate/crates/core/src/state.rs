//! Photon and mirror state types and their Gaussian constructors.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::Grid1D;

/// Normalization tolerance for tabulated photon and mirror states.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance on |c₊|² + |c₋|² = 1.
pub const POLARIZATION_TOLERANCE: f64 = 1e-12;

/// Helicity coefficients `(c₊, c₋)` of the photon, constant across the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationPair {
    c_plus: Complex64,
    c_minus: Complex64,
}

impl PolarizationPair {
    pub const PLUS: Self = Self {
        c_plus: Complex64::new(1.0, 0.0),
        c_minus: Complex64::new(0.0, 0.0),
    };
    pub const MINUS: Self = Self {
        c_plus: Complex64::new(0.0, 0.0),
        c_minus: Complex64::new(1.0, 0.0),
    };

    pub fn new(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let norm = c_plus.norm_sqr() + c_minus.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > POLARIZATION_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: POLARIZATION_TOLERANCE,
            });
        }
        Ok(Self { c_plus, c_minus })
    }

    /// Rescales `(c₊, c₋)` to unit norm. Fails only for the zero pair.
    pub fn normalized(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let norm = (c_plus.norm_sqr() + c_minus.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("pol", "polarization pair has zero norm"));
        }
        Ok(Self {
            c_plus: c_plus / norm,
            c_minus: c_minus / norm,
        })
    }

    pub fn c_plus(&self) -> Complex64 {
        self.c_plus
    }

    pub fn c_minus(&self) -> Complex64 {
        self.c_minus
    }

    /// Coefficients after one reflection: `c₊ ↔ c₋`.
    pub fn swapped(&self) -> Self {
        Self {
            c_plus: self.c_minus,
            c_minus: self.c_plus,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_plus.norm_sqr() + self.c_minus.norm_sqr()
    }
}

/// Whether a beam travels toward the mirror or away from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Incident,
    Reflected,
}

impl Propagation {
    pub fn flipped(self) -> Self {
        match self {
            Propagation::Incident => Propagation::Reflected,
            Propagation::Reflected => Propagation::Incident,
        }
    }
}

/// Spectral amplitude ψ(k) of a paraxial single-photon beam.
///
/// The grid runs over the wavenumber magnitude `k`; only the normal component
/// `k_z = k cos θ` couples to the mirror. The frequency of each component is
/// `ω = k / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSpectrum {
    grid: Grid1D,
    amplitude: Vec<Complex64>,
    theta: f64,
    refr_index: f64,
    k_center: f64,
    pol: PolarizationPair,
    direction: Propagation,
}

impl PhotonSpectrum {
    /// Wraps tabulated amplitudes. The amplitudes must already be normalized.
    pub fn new(
        grid: Grid1D,
        amplitude: Vec<Complex64>,
        theta: f64,
        refr_index: f64,
        k_center: f64,
        pol: PolarizationPair,
    ) -> Result<Self> {
        let spectrum = Self::unchecked(grid, amplitude, theta, refr_index, k_center, pol)?;
        let norm = spectrum.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(spectrum)
    }

    /// Wraps tabulated amplitudes and rescales them to unit norm on the grid.
    pub fn normalized(
        grid: Grid1D,
        mut amplitude: Vec<Complex64>,
        theta: f64,
        refr_index: f64,
        k_center: f64,
        pol: PolarizationPair,
    ) -> Result<Self> {
        let norm = grid.integrate(amplitude.iter().map(|a| a.norm_sqr()));
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("amplitude", format!("not normalizable (norm {norm})")));
        }
        let scale = norm.sqrt().recip();
        amplitude.iter_mut().for_each(|a| *a *= scale);
        Self::new(grid, amplitude, theta, refr_index, k_center, pol)
    }

    fn unchecked(
        grid: Grid1D,
        amplitude: Vec<Complex64>,
        theta: f64,
        refr_index: f64,
        k_center: f64,
        pol: PolarizationPair,
    ) -> Result<Self> {
        if amplitude.len() != grid.count() {
            return Err(Error::Grid(format!(
                "{} amplitudes for a grid of {} points",
                amplitude.len(),
                grid.count()
            )));
        }
        if amplitude.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::param("amplitude", "non-finite entries"));
        }
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::param("theta", format!("need 0 <= θ < π/2, got {theta}")));
        }
        if !(refr_index >= 1.0 && refr_index.is_finite()) {
            return Err(Error::param("refr_index", format!("need n >= 1, got {refr_index}")));
        }
        if !(k_center > 0.0 && k_center.is_finite()) {
            return Err(Error::param("k_center", format!("need k₀ > 0, got {k_center}")));
        }
        if grid.start() <= 0.0 {
            return Err(Error::Grid(format!(
                "wavenumber grid reaches k = {} <= 0",
                grid.start()
            )));
        }
        Ok(Self {
            grid,
            amplitude,
            theta,
            refr_index,
            k_center,
            pol,
            direction: Propagation::Incident,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn refr_index(&self) -> f64 {
        self.refr_index
    }

    /// Nominal central wavenumber used to build the spectrum.
    pub fn k_center(&self) -> f64 {
        self.k_center
    }

    pub fn pol(&self) -> PolarizationPair {
        self.pol
    }

    pub fn direction(&self) -> Propagation {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    pub fn k(&self, i: usize) -> f64 {
        self.grid.point(i)
    }

    /// Normal wavevector component `k cos θ`.
    pub fn kz(&self, i: usize) -> f64 {
        self.k(i) * self.theta.cos()
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.k(i) / self.refr_index
    }

    /// Quadrature weights `|ψ_i|² Δk`.
    pub fn weights(&self) -> Vec<f64> {
        let dk = self.grid.step();
        self.amplitude.iter().map(|a| a.norm_sqr() * dk).collect()
    }

    pub fn norm(&self) -> f64 {
        self.grid.integrate(self.amplitude.iter().map(|a| a.norm_sqr()))
    }

    pub fn mean_k(&self) -> f64 {
        self.weighted_mean(|i| self.k(i))
    }

    pub fn variance_k(&self) -> f64 {
        let mean = self.mean_k();
        self.weighted_mean(|i| (self.k(i) - mean).powi(2))
    }

    pub fn mean_kz(&self) -> f64 {
        self.weighted_mean(|i| self.kz(i))
    }

    pub fn std_kz(&self) -> f64 {
        let mean = self.mean_kz();
        self.weighted_mean(|i| (self.kz(i) - mean).powi(2)).sqrt()
    }

    fn weighted_mean(&self, f: impl Fn(usize) -> f64) -> f64 {
        let dk = self.grid.step();
        let total: f64 = self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * dk;
        self.amplitude
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * f(i))
            .sum::<f64>()
            * dk
            / total
    }

    pub(crate) fn with_reflection(
        &self,
        amplitude: Vec<Complex64>,
        pol: PolarizationPair,
    ) -> Self {
        Self {
            amplitude,
            pol,
            direction: self.direction.flipped(),
            ..self.clone()
        }
    }
}

/// Gaussian photon spectrum centered on `k₀ = 1` (internal units).
///
/// `ψ(k) ∝ exp(−(k−1)²/(4σ_k²))` with `σ_k = k0_frac_bandwidth`, sampled on
/// `[1 − sσ_k, 1 + sσ_k]` and renormalized on the grid.
pub fn make_gaussian_photon(
    k0_frac_bandwidth: f64,
    theta: f64,
    n: f64,
    pol: PolarizationPair,
    grid_span_sigmas: f64,
    npoints: usize,
) -> Result<PhotonSpectrum> {
    make_gaussian_photon_at(1.0, k0_frac_bandwidth, theta, n, pol, grid_span_sigmas, npoints)
}

/// Gaussian photon spectrum centered on an arbitrary `k_center`, with
/// `σ_k = frac_bandwidth · k_center`.
pub fn make_gaussian_photon_at(
    k_center: f64,
    frac_bandwidth: f64,
    theta: f64,
    n: f64,
    pol: PolarizationPair,
    grid_span_sigmas: f64,
    npoints: usize,
) -> Result<PhotonSpectrum> {
    if !(frac_bandwidth > 0.0 && frac_bandwidth < 0.3) {
        return Err(Error::param(
            "frac_bandwidth",
            format!("need 0 < σ_k/k₀ < 0.3, got {frac_bandwidth}"),
        ));
    }
    if npoints < 16 {
        return Err(Error::param("npoints", format!("need at least 16, got {npoints}")));
    }
    if !(grid_span_sigmas > 0.0 && grid_span_sigmas.is_finite()) {
        return Err(Error::param("grid_span_sigmas", "must be positive"));
    }
    if !(k_center > 0.0 && k_center.is_finite()) {
        return Err(Error::param("k_center", format!("need k₀ > 0, got {k_center}")));
    }
    let sigma = frac_bandwidth * k_center;
    let lo = k_center - grid_span_sigmas * sigma;
    if lo <= 0.0 {
        return Err(Error::Grid(format!(
            "wavenumber grid extends to k = {lo} <= 0; reduce the bandwidth or the span"
        )));
    }
    let grid = Grid1D::from_range(lo, k_center + grid_span_sigmas * sigma, npoints)?;
    let amplitude = grid
        .points()
        .map(|k| Complex64::new((-(k - k_center).powi(2) / (4.0 * sigma * sigma)).exp(), 0.0))
        .collect();
    PhotonSpectrum::normalized(grid, amplitude, theta, n, k_center, pol)
}

/// Mirror position wave function φ(z_m).
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorState {
    zgrid: Grid1D,
    amplitude: Vec<Complex64>,
}

impl MirrorState {
    pub fn new(zgrid: Grid1D, amplitude: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(zgrid, amplitude, NORM_TOLERANCE)
    }

    pub(crate) fn with_tolerance(
        zgrid: Grid1D,
        amplitude: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self> {
        if amplitude.len() != zgrid.count() {
            return Err(Error::Grid(format!(
                "{} amplitudes for a grid of {} points",
                amplitude.len(),
                zgrid.count()
            )));
        }
        let norm = zgrid.integrate(amplitude.iter().map(|a| a.norm_sqr()));
        if !norm.is_finite() || (norm - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { norm, tolerance });
        }
        Ok(Self { zgrid, amplitude })
    }

    /// Wraps tabulated amplitudes and rescales them to unit norm on the grid.
    pub fn normalized(zgrid: Grid1D, mut amplitude: Vec<Complex64>) -> Result<Self> {
        let norm = zgrid.integrate(amplitude.iter().map(|a| a.norm_sqr()));
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("amplitude", format!("not normalizable (norm {norm})")));
        }
        let scale = norm.sqrt().recip();
        amplitude.iter_mut().for_each(|a| *a *= scale);
        Self::new(zgrid, amplitude)
    }

    pub fn zgrid(&self) -> &Grid1D {
        &self.zgrid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.zgrid.integrate(self.amplitude.iter().map(|a| a.norm_sqr()))
    }

    pub fn mean_z(&self) -> f64 {
        self.zgrid
            .integrate(self.zgrid.points().zip(&self.amplitude).map(|(z, a)| z * a.norm_sqr()))
            / self.norm()
    }

    pub fn std_z(&self) -> f64 {
        let mean = self.mean_z();
        (self.zgrid.integrate(
            self.zgrid
                .points()
                .zip(&self.amplitude)
                .map(|(z, a)| (z - mean).powi(2) * a.norm_sqr()),
        ) / self.norm())
        .sqrt()
    }

    /// Momentum-space phase-gradient estimate of ⟨p⟩, reduced to the first
    /// Brillouin zone `(−π/Δz, π/Δz]`.
    pub fn momentum_center(&self) -> f64 {
        let lag: Complex64 = self
            .amplitude
            .windows(2)
            .map(|w| w[0].conj() * w[1])
            .sum();
        if lag.norm() == 0.0 {
            0.0
        } else {
            lag.arg() / self.zgrid.step()
        }
    }

    /// Momentum-space reciprocal grid of `oversample · N` points covering one
    /// full period of the transform, centered on [`Self::momentum_center`].
    pub fn natural_momentum_grid(&self, oversample: usize) -> Result<Grid1D> {
        Grid1D::reciprocal(
            &self.zgrid,
            self.len() * oversample.max(1),
            self.momentum_center(),
        )
    }

    /// Mean and standard deviation of the mirror momentum.
    pub fn momentum_moments(&self) -> Result<(f64, f64)> {
        let pgrid = self.natural_momentum_grid(2)?;
        let amp = fourier::transform(&self.amplitude, &self.zgrid, &pgrid, 0.0);
        Ok(moments(&pgrid, &amp))
    }

    /// The state multiplied by `e^{iqz}`: its momentum distribution displaced by `q`.
    pub fn boosted(&self, q: f64) -> Self {
        let amplitude = self
            .zgrid
            .points()
            .zip(&self.amplitude)
            .map(|(z, a)| a * Complex64::cis(q * z))
            .collect();
        Self {
            zgrid: self.zgrid,
            amplitude,
        }
    }
}

/// Gaussian mirror wave function `φ(z) ∝ exp(−(z−c)²/(4σ_x²))` on
/// `[c − sσ_x, c + sσ_x]`, as for an oscillator ground state with
/// `σ_x = √(ħ/2m₀ω₀)`.
pub fn make_mirror_gaussian(
    sigma_x: f64,
    center: f64,
    grid_span_sigmas: f64,
    npoints: usize,
) -> Result<MirrorState> {
    if !(sigma_x > 0.0 && sigma_x.is_finite()) {
        return Err(Error::param("sigma_x", format!("must be positive, got {sigma_x}")));
    }
    if npoints < 16 {
        return Err(Error::param("npoints", format!("need at least 16, got {npoints}")));
    }
    if !(grid_span_sigmas > 0.0 && grid_span_sigmas.is_finite()) {
        return Err(Error::param("grid_span_sigmas", "must be positive"));
    }
    if !center.is_finite() {
        return Err(Error::param("center", "must be finite"));
    }
    let half = grid_span_sigmas * sigma_x;
    let zgrid = Grid1D::from_range(center - half, center + half, npoints)?;
    let amplitude = zgrid
        .points()
        .map(|z| Complex64::new((-(z - center).powi(2) / (4.0 * sigma_x * sigma_x)).exp(), 0.0))
        .collect();
    MirrorState::normalized(zgrid, amplitude)
}

/// Mirror momentum wave function φ̃(p_m) sampled on a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorMomentumState {
    pub(crate) pgrid: Grid1D,
    pub(crate) amplitude: Vec<Complex64>,
    pub(crate) aliased: bool,
}

impl MirrorMomentumState {
    pub fn pgrid(&self) -> &Grid1D {
        &self.pgrid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    /// Set when the momentum grid cannot represent the transform faithfully.
    pub fn aliased(&self) -> bool {
        self.aliased
    }

    pub fn norm(&self) -> f64 {
        self.pgrid.integrate(self.amplitude.iter().map(|a| a.norm_sqr()))
    }

    pub fn mean_p(&self) -> f64 {
        moments(&self.pgrid, &self.amplitude).0
    }

    pub fn std_p(&self) -> f64 {
        moments(&self.pgrid, &self.amplitude).1
    }
}

/// Mean and standard deviation of the coordinate under `|amp|²`.
pub(crate) fn moments(grid: &Grid1D, amp: &[Complex64]) -> (f64, f64) {
    let total: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
    let mean = grid.points().zip(amp).map(|(x, a)| x * a.norm_sqr()).sum::<f64>() / total;
    let var = grid
        .points()
        .zip(amp)
        .map(|(x, a)| (x - mean).powi(2) * a.norm_sqr())
        .sum::<f64>()
        / total;
    (mean, var.sqrt())
}

/// Minimum-uncertainty momentum spread `1/(2σ_x)` of a Gaussian mirror.
pub fn gaussian_momentum_spread(sigma_x: f64) -> f64 {
    0.5 / sigma_x
}
