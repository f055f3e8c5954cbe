use std::f64::consts::PI;

use qmirror::fourier::transform;
use qmirror::observables::momentum_report;
use qmirror::reflection::Vec3;
use qmirror::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAMBDA: f64 = 2.0 * PI;

#[test]
fn narrow_mirror_momentum_spread() {
    let sigma = LAMBDA / 100.0;
    let m = make_mirror_gaussian(sigma, 0.0, 5.0, 256).unwrap();
    let mp = mirror_to_momentum(&m, &m.natural_momentum_grid(2).unwrap()).unwrap();
    let expected = 1.0 / (2.0 * sigma);
    assert!(((mp.std_p() - expected) / expected).abs() < 0.01);
}

#[test]
fn translated_mirror_phase_ramp_slope() {
    let a = 3.7;
    let m0 = make_mirror_gaussian(LAMBDA, 0.0, 5.0, 256).unwrap();
    let ma = make_mirror_gaussian(LAMBDA, a, 5.0, 256).unwrap();
    let pgrid = Grid1D::from_range(-0.3, 0.3, 61).unwrap();
    let f0 = transform(m0.amplitude(), m0.zgrid(), &pgrid, 0.0);
    let fa = transform(ma.amplitude(), ma.zgrid(), &pgrid, 0.0);
    // unwrapped arg(φ̃_a/φ̃_0), then a least-squares line
    let mut phases = Vec::new();
    let mut prev = 0.0;
    for (x, y) in f0.iter().zip(&fa) {
        let mut ph = (y / x).arg();
        while ph - prev > PI {
            ph -= 2.0 * PI;
        }
        while ph - prev < -PI {
            ph += 2.0 * PI;
        }
        phases.push(ph);
        prev = ph;
    }
    let slope =
        qmirror::observables::least_squares_slope(pgrid.points().zip(phases.iter().copied())).unwrap();
    assert!((slope + a).abs() < 1e-6, "slope {slope}");
}

#[test]
fn boundary_residual_at_sixty_degrees_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let k = Vec3::new((PI / 3.0).sin(), 0.0, (PI / 3.0).cos());
    let z0 = 0.4;
    let pts: Vec<Vec3> = (0..100)
        .map(|_| Vec3::new(rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0), z0))
        .collect();
    for h in [Helicity::Plus, Helicity::Minus] {
        let w = PlaneWave::incident(k, h, Complex64::new(1.0, 0.0), z0).unwrap();
        assert!(boundary_residual(&w, &pts).unwrap() < 1e-12);
    }
}

#[test]
fn fixed_mirror_keeps_spectral_magnitudes() {
    let ph = make_gaussian_photon(0.1, 0.5, 1.0, PolarizationPair::PLUS, 5.0, 128).unwrap();
    let r = reflect_fixed_mirror(&ph, 2.3);
    for (a, b) in ph.amplitude().iter().zip(r.amplitude()) {
        assert!((a.norm() - b.norm()).abs() < 1e-15);
    }
    assert_eq!(r.pol(), PolarizationPair::MINUS);
    assert!((r.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn momentum_rows_peak_at_their_kick() {
    let ph = make_gaussian_photon(0.1, 0.3, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap();
    let m = make_mirror_gaussian(LAMBDA, 0.0, 5.0, 128).unwrap();
    let n = 2;
    let pgrid = Grid1D::reciprocal(m.zgrid(), 1024, 2.0).unwrap();
    let j = joint_state_momentum(&ph, &m, &pgrid, n, ElementBudget::default()).unwrap();
    let reference: Vec<f64> = transform(m.amplitude(), m.zgrid(), &pgrid, 0.0)
        .iter()
        .map(|a| a.norm())
        .collect();
    for i in [0, 20, 31, 63] {
        let row: Vec<f64> = j.amp().row(i).iter().map(|a| a.norm()).collect();
        let best_lag = (-(pgrid.count() as isize) / 2..pgrid.count() as isize / 2)
            .max_by(|&a, &b| {
                cross(&row, &reference, a).partial_cmp(&cross(&row, &reference, b)).unwrap()
            })
            .unwrap();
        let measured = best_lag as f64 * pgrid.step();
        let kick = 2.0 * n as f64 * ph.kz(i);
        assert!((measured - kick).abs() <= pgrid.step(), "row {i}: {measured} vs {kick}");
    }
}

fn cross(row: &[f64], reference: &[f64], lag: isize) -> f64 {
    (0..row.len() as isize)
        .filter_map(|j| {
            let r = j - lag;
            (r >= 0 && (r as usize) < reference.len()).then(|| row[j as usize] * reference[r as usize])
        })
        .sum()
}

#[test]
fn monochromatic_momentum_marginal_is_displaced() {
    let ph = make_gaussian_photon(1e-4, 0.0, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap();
    let m = make_mirror_gaussian(LAMBDA, 0.0, 5.0, 128).unwrap();
    let pgrid = Grid1D::reciprocal(m.zgrid(), 256, 1.0).unwrap();
    let j = joint_state_momentum(&ph, &m, &pgrid, 1, ElementBudget::default()).unwrap();
    let r = classicality_report(&j, &ph, &m).unwrap();
    assert!(r.displaced_marginal_fidelity > 1.0 - 1e-6);
}

#[test]
fn kicks_from_momentum_report() {
    let m = make_mirror_gaussian(LAMBDA, 0.0, 8.0, 256).unwrap();
    let mono = make_gaussian_photon(1e-4, 0.0, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap();
    let r = momentum_report(&mono, &m, 1, ElementBudget::default()).unwrap();
    assert!((r.kick() - 2.0).abs() < 1e-9);

    let oblique = make_gaussian_photon(1e-4, PI / 3.0, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap();
    let r = momentum_report(&oblique, &m, 1, ElementBudget::default()).unwrap();
    assert!((r.kick() - 1.0).abs() < 1e-9);

    let broad = make_gaussian_photon(0.05, 0.2, 1.0, PolarizationPair::PLUS, 5.0, 64).unwrap();
    let one = momentum_report(&broad, &m, 1, ElementBudget::default()).unwrap();
    let three = momentum_report(&broad, &m, 3, ElementBudget::default()).unwrap();
    assert!((three.kick() - 3.0 * one.kick()).abs() < 1e-10);
}

#[test]
fn minkowski_examples() {
    let omega = 0.8;
    let scan = minkowski_scan(omega, 0.0, &[1.0, 1.33, 1.5]).unwrap();
    assert!(((scan.slope - 2.0 * omega) / (2.0 * omega)).abs() < 1e-9);
    let vacuum = &scan.rows[0];
    assert!((vacuum.kick - 2.0 * omega).abs() < 1e-9);
    for row in &scan.rows {
        assert!((row.kick - 2.0 * row.refr_index * omega).abs() < 1e-9);
        assert!((row.abraham_momentum - omega / row.refr_index).abs() < 1e-15);
    }

    let tilted = minkowski_scan(omega, PI / 4.0, &[1.0, 1.33, 1.5]).unwrap();
    let expected = 2.0 * omega * (PI / 4.0).cos();
    assert!(((tilted.slope - expected) / expected).abs() < 1e-9);
}

#[test]
fn regime_examples() {
    let r = regime_threshold(1e-8, 500e-9, 1).unwrap();
    assert!(r.threshold_delta_x_m > 1e-7 / 3.0 && r.threshold_delta_x_m < 3e-7);

    let cavity = regime_threshold(1e-8, 500e-9, 1_000_000).unwrap();
    assert!(cavity.delta_x_m > 1e-13 / 3.0 && cavity.delta_x_m < 3e-13);
    assert_eq!(cavity.verdict, Verdict::Entangling);

    let heavy = regime_threshold(1e-6, 500e-9, 1_000_000).unwrap();
    assert!(!heavy.verdict.is_sufficient());
}
