//! Internal unit conventions.
//!
//! Everything in this crate is dimensionless: ħ = 1, c = 1, and lengths are
//! measured in units of 1/k₀, where k₀ is the central photon wavenumber in
//! the medium. Momenta are therefore in units of ħk₀ and the central
//! wavelength is 2π. SI values only appear in
//! [`regime_threshold`](crate::observables::regime_threshold).

use std::f64::consts::PI;

/// Marker for the dimensionless unit system used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitSystem;

impl UnitSystem {
    /// Reduced Planck constant in internal units.
    pub const HBAR: f64 = 1.0;
    /// Speed of light in internal units.
    pub const C: f64 = 1.0;
    /// Central photon wavenumber in the medium.
    pub const K0: f64 = 1.0;
    /// Central photon wavelength, 2π/k₀.
    pub const LAMBDA0: f64 = 2.0 * PI;

    /// Converts a length given in central wavelengths into internal units.
    pub fn length_from_wavelengths(x: f64) -> f64 {
        x * Self::LAMBDA0
    }

    /// Converts an internal length into central wavelengths.
    pub fn length_in_wavelengths(x: f64) -> f64 {
        x / Self::LAMBDA0
    }
}

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
