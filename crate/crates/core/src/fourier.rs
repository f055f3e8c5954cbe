//! Position ↔ momentum transform of the mirror wave function.
//!
//! The transform is the Riemann-sum quadrature of
//!
//! ```text
//! φ̃(p) = (2π)^{-1/2} ∫ φ(z) e^{-ipz} dz        (ħ = 1)
//! ```
//!
//! evaluated at arbitrary momentum samples. When the momentum grid is a
//! reciprocal grid of the position grid (`Δp·Δz·M = 2π` for an integer
//! `M ≥ N_z`, see [`Grid1D::reciprocal`]) the sum is evaluated with a
//! zero-padded FFT and is an exact isometry; otherwise it is summed
//! directly.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::state::{MirrorMomentumState, MirrorState};

/// Relative slack when deciding whether `2π/(ΔpΔz)` is an integer.
const RECIPROCAL_SLACK: f64 = 1e-9;

/// Width, in momentum standard deviations, that a momentum grid must cover on
/// each side of ⟨p⟩ before the transform is trusted.
pub const ALIAS_HALF_WIDTH_SIGMAS: f64 = 2.0;

/// Size of the zero-padded FFT that evaluates the transform from `zgrid` to
/// `pgrid`, if the two grids are reciprocal.
pub fn fft_size(zgrid: &Grid1D, pgrid: &Grid1D) -> Option<usize> {
    let m = 2.0 * PI / (zgrid.step() * pgrid.step());
    let rounded = m.round();
    if rounded >= zgrid.count() as f64 && (m - rounded).abs() <= RECIPROCAL_SLACK * rounded {
        Some(rounded as usize)
    } else {
        None
    }
}

/// A transform between a fixed position grid and a fixed momentum grid,
/// reusable across many rows.
pub struct Transform {
    zgrid: Grid1D,
    pgrid: Grid1D,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl Transform {
    pub fn new(zgrid: Grid1D, pgrid: Grid1D) -> Self {
        let fft = fft_size(&zgrid, &pgrid).map(|m| FftPlanner::new().plan_fft_forward(m));
        Self { zgrid, pgrid, fft }
    }

    /// Forces direct summation even on reciprocal grids.
    pub fn direct(zgrid: Grid1D, pgrid: Grid1D) -> Self {
        Self {
            zgrid,
            pgrid,
            fft: None,
        }
    }

    pub fn uses_fft(&self) -> bool {
        self.fft.is_some()
    }

    /// Writes `φ̃(p_j − shift)` for every momentum sample into `out`.
    pub fn apply_into(&self, values: &[Complex64], shift: f64, out: &mut [Complex64]) {
        assert_eq!(values.len(), self.zgrid.count());
        assert_eq!(out.len(), self.pgrid.count());
        match &self.fft {
            Some(fft) => self.apply_fft(fft.as_ref(), values, shift, out),
            None => self.apply_direct(values, shift, out),
        }
    }

    pub fn apply(&self, values: &[Complex64], shift: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.pgrid.count()];
        self.apply_into(values, shift, &mut out);
        out
    }

    fn prefactor(&self) -> f64 {
        self.zgrid.step() / (2.0 * PI).sqrt()
    }

    fn apply_fft(&self, fft: &dyn Fft<f64>, values: &[Complex64], shift: f64, out: &mut [Complex64]) {
        let m = fft.len();
        let dz = self.zgrid.step();
        let z0 = self.zgrid.start();
        let p0 = self.pgrid.start() - shift;
        let dp = self.pgrid.step();

        let mut buf = vec![Complex64::default(); m];
        for (l, (b, v)) in buf.iter_mut().zip(values).enumerate() {
            *b = v * Complex64::cis(-p0 * l as f64 * dz);
        }
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut buf, &mut scratch);

        let pre = self.prefactor();
        for (j, o) in out.iter_mut().enumerate() {
            let p = p0 + j as f64 * dp;
            *o = buf[j % m] * Complex64::cis(-p * z0) * pre;
        }
    }

    fn apply_direct(&self, values: &[Complex64], shift: f64, out: &mut [Complex64]) {
        let dz = self.zgrid.step();
        let z0 = self.zgrid.start();
        let pre = self.prefactor();
        for (j, o) in out.iter_mut().enumerate() {
            let p = self.pgrid.point(j) - shift;
            let step = Complex64::cis(-p * dz);
            let mut phase = Complex64::cis(-p * z0);
            let mut acc = Complex64::default();
            for v in values {
                acc += v * phase;
                phase *= step;
            }
            *o = acc * pre;
        }
    }
}

/// `φ̃(p_j − shift)` on `pgrid` for samples `values` on `zgrid`.
pub fn transform(values: &[Complex64], zgrid: &Grid1D, pgrid: &Grid1D, shift: f64) -> Vec<Complex64> {
    Transform::new(*zgrid, *pgrid).apply(values, shift)
}

/// Same as [`transform`] but always summed directly.
pub fn transform_direct(
    values: &[Complex64],
    zgrid: &Grid1D,
    pgrid: &Grid1D,
    shift: f64,
) -> Vec<Complex64> {
    Transform::direct(*zgrid, *pgrid).apply(values, shift)
}

/// Inverse quadrature `φ(z_l) = (2π)^{-1/2} Σ_j φ̃(p_j) e^{ip_j z_l} Δp`.
pub fn inverse_transform(values: &[Complex64], pgrid: &Grid1D, zgrid: &Grid1D) -> Vec<Complex64> {
    assert_eq!(values.len(), pgrid.count());
    let dp = pgrid.step();
    let p0 = pgrid.start();
    let pre = dp / (2.0 * PI).sqrt();
    zgrid
        .points()
        .map(|z| {
            let step = Complex64::cis(z * dp);
            let mut phase = Complex64::cis(z * p0);
            let mut acc = Complex64::default();
            for v in values {
                acc += v * phase;
                phase *= step;
            }
            acc * pre
        })
        .collect()
}

/// Whether `pgrid` faithfully holds a momentum distribution with mean `mean`
/// and spread `sigma`, displaced by every shift in `[shift_lo, shift_hi]`.
///
/// Three conditions: the window fits inside one period of the transform (no
/// replicas), the momentum step resolves the full position extent (so the
/// Riemann sum of `|φ̃|²` is exact), and each displaced distribution sits at
/// least `half_width_sigmas · sigma` inside the window.
pub fn window_is_faithful(
    zgrid: &Grid1D,
    pgrid: &Grid1D,
    mean: f64,
    sigma: f64,
    (shift_lo, shift_hi): (f64, f64),
    half_width_sigmas: f64,
) -> bool {
    let slack = 1.0 + RECIPROCAL_SLACK;
    let fits_period = pgrid.extent() <= zgrid.dual_period() * slack;
    let resolves = pgrid.step() * zgrid.extent() <= 2.0 * PI * slack;
    let lo = mean + shift_lo - half_width_sigmas * sigma;
    let hi = mean + shift_hi + half_width_sigmas * sigma;
    let covers = pgrid.start() <= lo && pgrid.end() >= hi;
    fits_period && resolves && covers
}

/// Transforms the mirror wave function onto `pgrid`.
///
/// The result is flagged as aliased when `pgrid` misses `⟨p⟩ ± 2Δp`, spans
/// more than one period of the transform, or is too coarse for the position
/// extent.
pub fn mirror_to_momentum(m: &MirrorState, pgrid: &Grid1D) -> Result<MirrorMomentumState> {
    let (mean, sigma) = m.momentum_moments()?;
    let aliased = !window_is_faithful(
        m.zgrid(),
        pgrid,
        mean,
        sigma,
        (0.0, 0.0),
        ALIAS_HALF_WIDTH_SIGMAS,
    );
    let amplitude = transform(m.amplitude(), m.zgrid(), pgrid, 0.0);
    if amplitude.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(Error::Numerical("non-finite momentum amplitude".into()));
    }
    Ok(MirrorMomentumState {
        pgrid: *pgrid,
        amplitude,
        aliased,
    })
}

/// Inverse of [`mirror_to_momentum`]. Exact on reciprocal grids; on other
/// grids the result must still be normalized within `1e-8`.
pub fn momentum_to_mirror(mp: &MirrorMomentumState, zgrid: &Grid1D) -> Result<MirrorState> {
    let amplitude = inverse_transform(mp.amplitude(), mp.pgrid(), zgrid);
    MirrorState::with_tolerance(*zgrid, amplitude, 1e-8)
}
