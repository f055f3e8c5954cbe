//! Schmidt decomposition of the photon–mirror state and the classical-limit
//! diagnostics built on it.
//!
//! Polarization is left out of the bipartition: the helicity swap is the same
//! for every `k` (see [`PolarizationMap`](crate::reflection::PolarizationMap)),
//! so it factors out and cannot carry entanglement.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{transform, transform_direct};
use crate::grid::Grid1D;
use crate::reflection::{JointState, MirrorBasis};
use crate::state::{MirrorState, PhotonSpectrum};

/// Schmidt probabilities above this count toward the Schmidt rank.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// Largest grid, per axis, accepted by [`purity_oracle`].
pub const ORACLE_MAX_POINTS: usize = 512;

/// Schmidt spectrum of a bipartite pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtData {
    /// Descending, as returned by the SVD of the quadrature-scaled amplitude.
    pub singular_values: Vec<f64>,
    /// Squared singular values, normalized to sum to one.
    pub schmidt_probs: Vec<f64>,
    pub entropy_bits: f64,
    /// `Σ p²`, the purity of either reduced state.
    pub purity: f64,
    pub rank_eps: usize,
}

impl SchmidtData {
    pub fn from_singular_values(mut singular_values: Vec<f64>) -> Result<Self> {
        if singular_values.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::Numerical("invalid singular values".into()));
        }
        singular_values.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = singular_values.iter().map(|s| s * s).sum();
        if !(total > 0.0) {
            return Err(Error::Numerical("zero state".into()));
        }
        let schmidt_probs: Vec<f64> = singular_values.iter().map(|s| s * s / total).collect();
        let entropy_bits = schmidt_probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum::<f64>()
            .max(0.0);
        let purity = schmidt_probs.iter().map(|p| p * p).sum();
        let rank_eps = schmidt_probs.iter().filter(|&&p| p > RANK_THRESHOLD).count();
        Ok(Self {
            singular_values,
            schmidt_probs,
            entropy_bits,
            purity,
            rank_eps,
        })
    }

    pub fn max_prob(&self) -> f64 {
        self.schmidt_probs.first().copied().unwrap_or(0.0)
    }

    /// Fidelity `max |⟨a⊗b|Ψ⟩| = √p_max` to the closest product state.
    pub fn product_fidelity(&self) -> f64 {
        self.max_prob().sqrt()
    }
}

/// Schmidt decomposition of the joint state.
///
/// The amplitude is scaled by `√(Δk·Δm)` before the SVD so the spectrum
/// approximates that of the continuous state and does not depend on the grid
/// once the grid is converged.
pub fn schmidt(joint: &JointState) -> Result<SchmidtData> {
    if joint.amp().iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(Error::Numerical("joint amplitude has non-finite entries".into()));
    }
    let norm = joint.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized {
            norm,
            tolerance: 1e-6,
        });
    }
    singular_values(joint.scaled_matrix()).and_then(SchmidtData::from_singular_values)
}

fn singular_values(m: DMatrix<Complex64>) -> Result<Vec<f64>> {
    // the SVD is cheaper on the wide orientation
    let m = if m.nrows() > m.ncols() { m.adjoint() } else { m };
    m.try_svd(false, false, f64::EPSILON, 0)
        .map(|svd| svd.singular_values.iter().copied().collect())
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))
}

/// Purity `Tr ρ_photon²` by direct double quadrature in the mirror momentum
/// basis, without any matrix factorization.
///
/// `K(k, p) = ψ(k) φ̃(p − 2N k_z)` is evaluated by direct summation,
/// `ρ(k, k′) = ∫ K(k,p) K*(k′,p) dp` and `Tr ρ² = ∬ |ρ(k,k′)|² dk dk′`.
pub fn purity_oracle(photon: &PhotonSpectrum, mirror: &MirrorState, bounces: u32) -> Result<f64> {
    for n in [photon.len(), mirror.len()] {
        if n > ORACLE_MAX_POINTS {
            return Err(Error::Budget {
                requested: n,
                budget: ORACLE_MAX_POINTS,
            });
        }
    }
    let kicks: Vec<f64> = (0..photon.len())
        .map(|i| 2.0 * bounces as f64 * photon.kz(i))
        .collect();
    let pgrid = Grid1D::reciprocal(
        mirror.zgrid(),
        2 * mirror.len(),
        mirror.momentum_center() + 2.0 * bounces as f64 * photon.mean_kz(),
    )?;
    let dp = pgrid.step();
    let dk = photon.grid().step();

    let kernel: Vec<Vec<Complex64>> = kicks
        .par_iter()
        .zip(photon.amplitude())
        .map(|(&q, &psi)| {
            transform_direct(mirror.amplitude(), mirror.zgrid(), &pgrid, q)
                .into_iter()
                .map(|v| v * psi)
                .collect()
        })
        .collect();

    let n = kernel.len();
    let sum_sq: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for i2 in i..n {
                let rho: Complex64 = kernel[i]
                    .iter()
                    .zip(&kernel[i2])
                    .map(|(a, b)| a * b.conj())
                    .sum::<Complex64>()
                    * dp;
                let w = if i2 == i { 1.0 } else { 2.0 };
                acc += w * rho.norm_sqr();
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let purity = sum_sq * dk * dk;
    if !purity.is_finite() {
        return Err(Error::Numerical("purity oracle produced a non-finite value".into()));
    }
    Ok(purity)
}

/// How close the post-reflection state is to each classical limit.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalityReport {
    /// `√p_max`: fidelity of the joint state to the closest product state.
    pub product_fidelity: f64,
    /// `√⟨χ|ρ_mirror|χ⟩` with `χ̃(p) = φ̃(p − 2N⟨k_z⟩)`, the rigidly displaced
    /// mirror state of the monochromatic limit.
    pub displaced_marginal_fidelity: f64,
    /// Dimensionless coupling `g = 2N σ_{k_z} σ_x`.
    pub coupling_g: f64,
    pub entropy_bits: f64,
    pub purity: f64,
}

/// Classical-limit diagnostics for a joint state built from `photon` and `mirror`.
///
/// Fidelities follow the root convention `F(ψ, ρ) = √⟨ψ|ρ|ψ⟩`.
pub fn classicality_report(
    joint: &JointState,
    photon: &PhotonSpectrum,
    mirror: &MirrorState,
) -> Result<ClassicalityReport> {
    let sd = schmidt(joint)?;
    let n = joint.bounces() as f64;
    let kick = 2.0 * n * photon.mean_kz();

    let mgrid = joint.mirror_grid();
    let reference: Vec<Complex64> = match joint.basis() {
        MirrorBasis::Position => mirror.boosted(kick).amplitude().to_vec(),
        MirrorBasis::Momentum => transform(mirror.amplitude(), mirror.zgrid(), mgrid, kick),
    };
    let ref_norm = mgrid.integrate(reference.iter().map(|a| a.norm_sqr()));
    let dm = mgrid.step();
    let dk = joint.photon_grid().step();
    let overlap_sq: f64 = joint
        .amp()
        .row_iter()
        .map(|row| {
            let o: Complex64 = row
                .iter()
                .zip(&reference)
                .map(|(a, r)| r.conj() * a)
                .sum::<Complex64>()
                * dm;
            o.norm_sqr()
        })
        .sum::<f64>()
        * dk
        / ref_norm;

    Ok(ClassicalityReport {
        product_fidelity: sd.product_fidelity(),
        displaced_marginal_fidelity: overlap_sq.sqrt(),
        coupling_g: coupling(photon, mirror, joint.bounces()),
        entropy_bits: sd.entropy_bits,
        purity: sd.purity,
    })
}

/// `g = 2N σ_{k_z} σ_x`, the spread of coupling phases across the state.
pub fn coupling(photon: &PhotonSpectrum, mirror: &MirrorState, bounces: u32) -> f64 {
    2.0 * bounces as f64 * photon.std_kz() * mirror.std_z()
}
