//! Single-photon reflection off a quantum mirror.
//!
//! A perfectly conducting mirror imposes boundary conditions on the photon
//! wave function: every plane-wave component `|k±⟩` is mapped to
//! `|k′∓⟩` with a phase `−e^{2i(k·ẑ)z₀}` that depends on the mirror position.
//! When the mirror itself is a quantum particle with wave function `φ(z)`,
//! that phase entangles the two, and in the mirror momentum basis it appears
//! as a momentum kick of `2ħ(k·ẑ)` per reflection.
//!
//! The crate builds the post-reflection joint state on discretized grids,
//! quantifies the photon–mirror entanglement through its Schmidt spectrum and
//! checks momentum conservation, the classical limits and the scaling of the
//! kick with the refractive index of the surrounding medium.
//!
//! All quantities are dimensionless; see [`units`].

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod observables;
pub mod reflection;
pub mod state;
pub mod units;

pub use entanglement::{classicality_report, purity_oracle, schmidt, ClassicalityReport, SchmidtData};
pub use error::{Error, Result};
pub use fourier::{mirror_to_momentum, momentum_to_mirror};
pub use grid::Grid1D;
pub use observables::{
    minkowski_scan, momentum_report, regime_threshold, MinkowskiScan, MomentumReport, RegimeReport,
    Verdict,
};
pub use reflection::{
    boundary_residual, build_frames, joint_state_momentum, joint_state_position, reflect_fixed_mirror,
    reflect_plane_wave, reflect_wavevector, ElementBudget, Helicity, JointState, MirrorBasis,
    PlaneWave, PolarizationFrame, PolarizationMap,
};
pub use state::{
    make_gaussian_photon, make_gaussian_photon_at, make_mirror_gaussian, MirrorMomentumState,
    MirrorState, PhotonSpectrum, PolarizationPair, Propagation,
};
pub use units::UnitSystem;

pub use num_complex::Complex64;
