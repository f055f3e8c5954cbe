use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{window_is_faithful, Transform};
use crate::grid::Grid1D;
use crate::state::{MirrorState, PhotonSpectrum, PolarizationPair};

/// Half-width, in mirror momentum standard deviations, of the support that a
/// momentum grid must hold around every displaced row.
pub const SUPPORT_HALF_WIDTH_SIGMAS: f64 = 6.0;

/// Upper bound on the number of complex entries of a joint-state matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementBudget(pub usize);

impl ElementBudget {
    pub const DEFAULT: Self = Self(1 << 22);

    fn check(self, rows: usize, cols: usize) -> Result<()> {
        let requested = rows.saturating_mul(cols);
        if requested > self.0 {
            return Err(Error::Budget {
                requested,
                budget: self.0,
            });
        }
        Ok(())
    }
}

impl Default for ElementBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Basis of the mirror factor of a [`JointState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorBasis {
    Position,
    Momentum,
}

/// Net helicity mapping after all bounces.
///
/// The mapping is the same for every `k`, so polarization factors out of the
/// joint amplitude and never enters the Schmidt decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationMap {
    pub incident: PolarizationPair,
    pub outgoing: PolarizationPair,
    /// `true` for an odd number of bounces (`c₊ ↔ c₋`).
    pub swapped: bool,
}

impl PolarizationMap {
    fn after(incident: PolarizationPair, bounces: u32) -> Self {
        let swapped = bounces % 2 == 1;
        Self {
            incident,
            outgoing: if swapped { incident.swapped() } else { incident },
            swapped,
        }
    }
}

/// Photon–mirror amplitude after reflection, indexed `(photon k, mirror sample)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    photon_grid: Grid1D,
    mirror_grid: Grid1D,
    basis: MirrorBasis,
    amp: DMatrix<Complex64>,
    pol_map: PolarizationMap,
    bounces: u32,
    aliased: bool,
}

impl JointState {
    pub fn photon_grid(&self) -> &Grid1D {
        &self.photon_grid
    }

    pub fn mirror_grid(&self) -> &Grid1D {
        &self.mirror_grid
    }

    pub fn basis(&self) -> MirrorBasis {
        self.basis
    }

    pub fn amp(&self) -> &DMatrix<Complex64> {
        &self.amp
    }

    pub fn pol_map(&self) -> PolarizationMap {
        self.pol_map
    }

    pub fn bounces(&self) -> u32 {
        self.bounces
    }

    /// Set when the momentum grid does not hold every displaced row.
    pub fn aliased(&self) -> bool {
        self.aliased
    }

    /// Area element `Δk · Δ(mirror)` of the quadrature.
    pub fn cell(&self) -> f64 {
        self.photon_grid.step() * self.mirror_grid.step()
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.cell()
    }

    /// Amplitude matrix scaled by `√(Δk·Δmirror)`, whose Frobenius norm is the state norm.
    pub fn scaled_matrix(&self) -> DMatrix<Complex64> {
        &self.amp * Complex64::new(self.cell().sqrt(), 0.0)
    }

    /// Mirror probability density `Σ_k |amp|² Δk` on the mirror grid.
    pub fn mirror_marginal(&self) -> Vec<f64> {
        let dk = self.photon_grid.step();
        self.amp
            .column_iter()
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum::<f64>() * dk)
            .collect()
    }

    /// Photon probability density `Σ_m |amp|² Δm` on the photon grid.
    pub fn photon_marginal(&self) -> Vec<f64> {
        let dm = self.mirror_grid.step();
        self.amp
            .row_iter()
            .map(|r| r.iter().map(|a| a.norm_sqr()).sum::<f64>() * dm)
            .collect()
    }

    /// Same state multiplied by a global phase.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        Self {
            amp: &self.amp * Complex64::cis(phase),
            ..self.clone()
        }
    }
}

fn fill_rows(
    rows: usize,
    cols: usize,
    row: impl Fn(usize, &mut [Complex64]) + Sync,
) -> DMatrix<Complex64> {
    let mut data = vec![Complex64::default(); rows * cols];
    data.par_chunks_mut(cols)
        .enumerate()
        .for_each(|(i, chunk)| row(i, chunk));
    DMatrix::from_row_slice(rows, cols, &data)
}

/// Momentum kick `2N k_z` carried by each photon row.
pub(crate) fn kicks(photon: &PhotonSpectrum, bounces: u32) -> Vec<f64> {
    (0..photon.len())
        .map(|i| 2.0 * bounces as f64 * photon.kz(i))
        .collect()
}

/// Joint state in the mirror position basis after `bounces` reflections:
/// `amp[i][j] = ψ(k_i) φ(z_j) e^{2iN k_{z,i} z_j}`.
///
/// `bounces = 0` gives the uncoupled product state.
pub fn joint_state_position(
    photon: &PhotonSpectrum,
    mirror: &MirrorState,
    bounces: u32,
    budget: ElementBudget,
) -> Result<JointState> {
    let (rows, cols) = (photon.len(), mirror.len());
    budget.check(rows, cols)?;
    let q = kicks(photon, bounces);
    let psi = photon.amplitude();
    let phi = mirror.amplitude();
    let zgrid = *mirror.zgrid();
    let amp = fill_rows(rows, cols, |i, out| {
        for (j, o) in out.iter_mut().enumerate() {
            *o = psi[i] * phi[j] * Complex64::cis(q[i] * zgrid.point(j));
        }
    });
    Ok(JointState {
        photon_grid: *photon.grid(),
        mirror_grid: zgrid,
        basis: MirrorBasis::Position,
        amp,
        pol_map: PolarizationMap::after(photon.pol(), bounces),
        bounces,
        aliased: false,
    })
}

/// Joint state in the mirror momentum basis:
/// `amp[i][j] = ψ(k_i) φ̃(p_j − 2N k_{z,i})`.
///
/// Flagged as aliased when some displaced row's support (±6 momentum
/// standard deviations) leaves `pgrid`, or when `pgrid` cannot represent the
/// transform (see [`window_is_faithful`]).
pub fn joint_state_momentum(
    photon: &PhotonSpectrum,
    mirror: &MirrorState,
    pgrid: &Grid1D,
    bounces: u32,
    budget: ElementBudget,
) -> Result<JointState> {
    let (rows, cols) = (photon.len(), pgrid.count());
    budget.check(rows, cols)?;
    let q = kicks(photon, bounces);
    let (q_lo, q_hi) = q
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let (mean, sigma) = mirror.momentum_moments()?;
    let faithful = window_is_faithful(
        mirror.zgrid(),
        pgrid,
        mean,
        sigma,
        (q_lo, q_hi),
        SUPPORT_HALF_WIDTH_SIGMAS,
    );

    let transform = Transform::new(*mirror.zgrid(), *pgrid);
    let psi = photon.amplitude();
    let phi = mirror.amplitude();
    let amp = fill_rows(rows, cols, |i, out| {
        transform.apply_into(phi, q[i], out);
        out.iter_mut().for_each(|o| *o *= psi[i]);
    });
    if amp.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(Error::Numerical("non-finite joint amplitude".into()));
    }
    let mut state = JointState {
        photon_grid: *photon.grid(),
        mirror_grid: *pgrid,
        basis: MirrorBasis::Momentum,
        amp,
        pol_map: PolarizationMap::after(photon.pol(), bounces),
        bounces,
        aliased: false,
    };
    state.aliased = !faithful || (state.norm() - 1.0).abs() > 1e-9;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::transform_direct;
    use crate::state::{make_gaussian_photon, make_mirror_gaussian};
    use std::f64::consts::PI;

    fn photon(frac: f64) -> PhotonSpectrum {
        make_gaussian_photon(frac, 0.3, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap()
    }

    #[test]
    fn position_state_is_normalized_product_magnitudes() {
        let ph = photon(0.1);
        let m = make_mirror_gaussian(2.0, 0.5, 5.0, 96).unwrap();
        let js = joint_state_position(&ph, &m, 1, ElementBudget::default()).unwrap();
        assert!((js.norm() - 1.0).abs() < 1e-9);
        for i in 0..ph.len() {
            for j in 0..m.len() {
                let expect = ph.amplitude()[i].norm() * m.amplitude()[j].norm();
                assert!((js.amp()[(i, j)].norm() - expect).abs() <= 1e-15 * expect.max(1.0));
            }
        }
        assert_eq!(js.basis(), MirrorBasis::Position);
    }

    #[test]
    fn two_bounces_square_the_coupling_phase() {
        let ph = photon(0.1);
        let m = make_mirror_gaussian(2.0, 0.0, 5.0, 96).unwrap();
        let one = joint_state_position(&ph, &m, 1, ElementBudget::default()).unwrap();
        let two = joint_state_position(&ph, &m, 2, ElementBudget::default()).unwrap();
        for i in 0..ph.len() {
            for j in 0..m.len() {
                let extra = Complex64::cis(2.0 * ph.kz(i) * m.zgrid().point(j));
                assert!((two.amp()[(i, j)] - one.amp()[(i, j)] * extra).norm() < 1e-12);
            }
        }
        assert!(one.pol_map().swapped);
        assert!(!two.pol_map().swapped);
        assert_eq!(one.pol_map().outgoing, PolarizationPair::MINUS);
        assert_eq!(two.pol_map().outgoing, PolarizationPair::PLUS);
    }

    #[test]
    fn delta_mirror_reproduces_fixed_mirror_phase() {
        let ph = photon(0.1);
        let z0 = 1.3;
        let m = make_mirror_gaussian(2.0 * PI / 1e4, z0, 5.0, 64).unwrap();
        let js = joint_state_position(&ph, &m, 1, ElementBudget::default()).unwrap();
        let dz = m.zgrid().step();
        for i in 0..ph.len() {
            // project each row on the mirror state
            let overlap: Complex64 = (0..m.len())
                .map(|j| m.amplitude()[j].conj() * js.amp()[(i, j)] * dz)
                .sum();
            let ratio = overlap / ph.amplitude()[i];
            let expect = 2.0 * ph.kz(i) * z0;
            let dphase = (ratio * Complex64::cis(-expect)).arg();
            assert!(dphase.abs() < 1e-6, "row {i}: phase error {dphase}");
            assert!((ratio.norm() - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn momentum_rows_are_displaced_transforms() {
        let ph = photon(0.05);
        let m = make_mirror_gaussian(1.5, 0.2, 5.0, 128).unwrap();
        let pgrid = Grid1D::reciprocal(m.zgrid(), 256, 2.0 * ph.mean_kz()).unwrap();
        let jp = joint_state_position(&ph, &m, 1, ElementBudget::default()).unwrap();
        let jm = joint_state_momentum(&ph, &m, &pgrid, 1, ElementBudget::default()).unwrap();
        assert!(!jm.aliased());
        assert!((jm.norm() - 1.0).abs() < 1e-12);
        let mut worst: f64 = 0.0;
        for i in 0..ph.len() {
            let row: Vec<Complex64> = jp.amp().row(i).iter().copied().collect();
            let via = transform_direct(&row, m.zgrid(), &pgrid, 0.0);
            for (j, v) in via.iter().enumerate() {
                worst = worst.max((v - jm.amp()[(i, j)]).norm());
            }
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }

    #[test]
    fn narrow_momentum_grid_is_aliased() {
        let ph = photon(0.1);
        let m = make_mirror_gaussian(1.5, 0.0, 5.0, 128).unwrap();
        let pgrid = Grid1D::from_range(-1.0, 1.0, 128).unwrap();
        let jm = joint_state_momentum(&ph, &m, &pgrid, 1, ElementBudget::default()).unwrap();
        assert!(jm.aliased());
    }

    #[test]
    fn budget_guard() {
        let ph = photon(0.1);
        let m = make_mirror_gaussian(1.5, 0.0, 5.0, 128).unwrap();
        let err = joint_state_position(&ph, &m, 1, ElementBudget(1000)).unwrap_err();
        assert!(matches!(err, Error::Budget { requested: 8192, budget: 1000 }));
    }

    #[test]
    fn marginals_sum_to_one() {
        let ph = photon(0.1);
        let m = make_mirror_gaussian(1.5, 0.0, 5.0, 128).unwrap();
        let js = joint_state_position(&ph, &m, 3, ElementBudget::default()).unwrap();
        let pm: f64 = js.photon_marginal().iter().sum::<f64>() * ph.grid().step();
        let mm: f64 = js.mirror_marginal().iter().sum::<f64>() * m.zgrid().step();
        assert!((pm - 1.0).abs() < 1e-12);
        assert!((mm - 1.0).abs() < 1e-12);
    }
}
