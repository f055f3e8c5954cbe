//! Plane-wave reflection by a perfect conductor and the joint photon–mirror
//! states built from it.
//!
//! The conductor fills `r·ẑ_m > z₀`. An incident component with wavevector
//! `k` and helicity `±` is accompanied by a reflected component with
//! `k′ = k − 2(k·ẑ_m)ẑ_m`, the opposite helicity and amplitude
//! `−A e^{2i(k·ẑ_m)z₀}`, so that the surface-parallel electric field cancels
//! on the plane `z = z₀`.

mod joint;

use nalgebra::{Unit, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::PhotonSpectrum;

pub use joint::{
    joint_state_momentum, joint_state_position, ElementBudget, JointState, MirrorBasis,
    PolarizationMap, SUPPORT_HALF_WIDTH_SIGMAS,
};

pub type Vec3 = Vector3<f64>;
type CVec3 = Vector3<Complex64>;

/// Tolerance for the orthonormality of polarization frames.
pub const FRAME_TOLERANCE: f64 = 1e-12;

/// Circular polarization (helicity) of a plane-wave component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

/// Monochromatic photon wave-function component `û_{k±} A e^{ik·r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub kvec: Vec3,
    pub helicity: Helicity,
    pub amplitude: Complex64,
    /// Coordinate of the mirror plane along ẑ_m.
    pub z0: f64,
}

impl PlaneWave {
    /// An incident wave: `|k| > 0` and `k·ẑ_m > 0`.
    pub fn incident(kvec: Vec3, helicity: Helicity, amplitude: Complex64, z0: f64) -> Result<Self> {
        let w = Self {
            kvec,
            helicity,
            amplitude,
            z0,
        };
        if !w.is_incident() {
            return Err(Error::Contract(format!(
                "wavevector {:?} does not propagate toward the mirror",
                kvec.as_slice()
            )));
        }
        Ok(w)
    }

    pub fn is_incident(&self) -> bool {
        self.kvec.norm() > 0.0 && self.kvec.z > 0.0
    }

    /// Complex field `û_{k±} A e^{ik·r}` at `r`, using the given frame.
    pub fn field(&self, frame: &PolarizationFrame, r: &Vec3) -> CVec3 {
        frame.unit_vector(self.helicity) * (self.amplitude * Complex64::cis(self.kvec.dot(r)))
    }
}

/// Right-handed orthonormal triad `(x̂, ŷ, k̂)` attached to a wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationFrame {
    pub xhat: Vec3,
    pub yhat: Vec3,
    pub khat: Vec3,
}

impl PolarizationFrame {
    /// Circular polarization vector `û_{k±} = (x̂ ± iŷ)/√2`.
    pub fn unit_vector(&self, helicity: Helicity) -> CVec3 {
        let s = helicity.sign();
        (self.xhat.map(|x| Complex64::new(x, 0.0)) + self.yhat.map(|y| Complex64::new(0.0, s * y)))
            .unscale(2f64.sqrt())
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn orthonormality_error(&self) -> f64 {
        let d = [
            self.xhat.norm() - 1.0,
            self.yhat.norm() - 1.0,
            self.khat.norm() - 1.0,
            self.xhat.dot(&self.yhat),
            self.yhat.dot(&self.khat),
            self.khat.dot(&self.xhat),
        ];
        let handed = (self.xhat.cross(&self.yhat) - self.khat).amax();
        d.iter().map(|v| v.abs()).fold(handed, f64::max)
    }
}

/// A perfectly conducting plane `r·n̂ = position` filling `r·n̂ > position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorPlane {
    pub normal: Unit<Vec3>,
    pub position: f64,
}

impl MirrorPlane {
    /// The plane `z = z₀` with the conductor above it.
    pub fn at_z(z0: f64) -> Self {
        Self {
            normal: Vec3::z_axis(),
            position: z0,
        }
    }

    pub fn new(normal: Vec3, position: f64) -> Result<Self> {
        if !(normal.norm() > 0.0) {
            return Err(Error::Contract("mirror normal must be nonzero".into()));
        }
        Ok(Self {
            normal: Unit::new_normalize(normal),
            position,
        })
    }

    /// `k − 2(k·n̂)n̂`.
    pub fn reflect_vector(&self, k: &Vec3) -> Vec3 {
        k - 2.0 * k.dot(&self.normal) * self.normal.into_inner()
    }

    /// Incident and reflected frames for a wave with wavevector `k`.
    ///
    /// `ŷ ∝ n̂ × k` (a fixed vector perpendicular to n̂ at normal incidence),
    /// `x̂ = ŷ × k̂`; the reflected frame uses `ŷ′ = −ŷ`, `x̂′ = ŷ′ × k̂′`.
    pub fn frames(&self, k: &Vec3) -> Result<(PolarizationFrame, PolarizationFrame)> {
        let kn = k.norm();
        if !(kn > 0.0 && kn.is_finite()) {
            return Err(Error::Contract("degenerate wavevector k = 0".into()));
        }
        let n = self.normal.into_inner();
        if k.dot(&n).abs() <= 1e-15 * kn {
            return Err(Error::Contract("wavevector parallel to the mirror surface".into()));
        }
        let khat = k / kn;
        let cross = n.cross(&khat);
        let yhat = if cross.norm() > 1e-12 {
            cross.normalize()
        } else {
            fixed_transverse(&n)
        };
        let xhat = yhat.cross(&khat);
        let khat_r = self.reflect_vector(&khat);
        let yhat_r = -yhat;
        let xhat_r = yhat_r.cross(&khat_r);
        Ok((
            PolarizationFrame { xhat, yhat, khat },
            PolarizationFrame {
                xhat: xhat_r,
                yhat: yhat_r,
                khat: khat_r,
            },
        ))
    }

    /// The reflected wave: flipped helicity, amplitude `−A e^{2i(k·n̂)d}`.
    pub fn reflect(&self, w: &PlaneWave) -> Result<PlaneWave> {
        let kn = w.kvec.dot(&self.normal);
        if !(kn > 0.0) {
            return Err(Error::Contract(format!(
                "wave with k·n = {kn} does not propagate toward the mirror"
            )));
        }
        Ok(PlaneWave {
            kvec: self.reflect_vector(&w.kvec),
            helicity: w.helicity.flipped(),
            amplitude: -w.amplitude * Complex64::cis(2.0 * kn * self.position),
            z0: w.z0,
        })
    }

    /// Max surface-parallel magnitude of incident + reflected field over
    /// `points`, which must lie on the plane.
    pub fn residual_with_frames(
        &self,
        w: &PlaneWave,
        frames: &(PolarizationFrame, PolarizationFrame),
        points: &[Vec3],
    ) -> Result<f64> {
        if points.is_empty() {
            return Err(Error::Contract("need at least one surface point".into()));
        }
        let reflected = self.reflect(w)?;
        let n = self.normal.into_inner().map(|x| Complex64::new(x, 0.0));
        let mut worst: f64 = 0.0;
        for r in points {
            let off = r.dot(&self.normal) - self.position;
            if off.abs() > 1e-9 * (1.0 + r.norm()) {
                return Err(Error::Contract(format!(
                    "sample point {:?} is {off:e} off the mirror surface",
                    r.as_slice()
                )));
            }
            let total = w.field(&frames.0, r) + reflected.field(&frames.1, r);
            let normal_part = n * total.dot(&n);
            let parallel = total - normal_part;
            worst = worst.max(parallel.norm());
        }
        Ok(worst)
    }
}

fn fixed_transverse(n: &Vec3) -> Vec3 {
    let e = if n.y.abs() < 0.9 { Vec3::y() } else { Vec3::x() };
    (e - e.dot(n) * n).normalize()
}

/// `k′ = k − 2(k·ẑ_m)ẑ_m` for an incident wavevector (`k·ẑ_m > 0`).
pub fn reflect_wavevector(k: &Vec3) -> Result<Vec3> {
    if !(k.z > 0.0) {
        return Err(Error::Contract(format!(
            "k·ẑ_m = {} <= 0: not an incident wavevector",
            k.z
        )));
    }
    Ok(MirrorPlane::at_z(0.0).reflect_vector(k))
}

/// Polarization frames of the incident wave and its reflection off `z = const`.
pub fn build_frames(k: &Vec3) -> Result<(PolarizationFrame, PolarizationFrame)> {
    MirrorPlane::at_z(0.0).frames(k)
}

/// Reflection of a plane wave off the mirror at `z = w.z0`.
pub fn reflect_plane_wave(w: &PlaneWave) -> Result<PlaneWave> {
    MirrorPlane::at_z(w.z0).reflect(w)
}

/// Max surface-parallel electric field of incident + reflected waves at the
/// sample points on `z = w.z0`, with frames from [`build_frames`].
pub fn boundary_residual(w: &PlaneWave, sample_points: &[Vec3]) -> Result<f64> {
    let frames = build_frames(&w.kvec)?;
    MirrorPlane::at_z(w.z0).residual_with_frames(w, &frames, sample_points)
}

/// Reflection of a photon beam by a classical mirror fixed at `z₀`.
///
/// Each component picks up `e^{2ik_z z₀}` and the helicities swap; the
/// common factor −1 is dropped as a global phase.
pub fn reflect_fixed_mirror(photon: &PhotonSpectrum, z0: f64) -> PhotonSpectrum {
    let amplitude = photon
        .amplitude()
        .iter()
        .enumerate()
        .map(|(i, a)| a * Complex64::cis(2.0 * photon.kz(i) * z0))
        .collect();
    photon.with_reflection(amplitude, photon.pol().swapped())
}
