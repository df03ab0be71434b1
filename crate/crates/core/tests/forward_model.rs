mod common;

use common::{pair, wg};
use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wqed_core::prelude::*;
use wqed_core::waveguide_model::{collective_reflection, matrix_amplitudes, two_emitter_amplitudes};

fn random_lossless_array(rng: &mut ChaCha8Rng) -> EmitterArray {
    let n = rng.random_range(1..=6);
    let mut z = rng.random_range(-1.0..1.0);
    let emitters = (0..n)
        .map(|_| {
            let e = Emitter::new(z, rng.random_range(0.1..5.0), 0.0).with_detuning(rng.random_range(-2.0..2.0));
            z += rng.random_range(0.005..0.8);
            e
        })
        .collect();
    EmitterArray::new(emitters, RateUnit::Guided).unwrap()
}

#[test]
fn lossless_arrays_conserve_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut evaluations = 0;
    while evaluations < 100_000 {
        let arr = random_lossless_array(&mut rng);
        for _ in 0..100 {
            let detuning = rng.random_range(-50.0..50.0);
            let a = scattering_amplitudes(&arr, detuning, &wg()).unwrap();
            let total = a.reflectivity() + a.transmissivity();
            assert!((total - 1.0).abs() < 1e-12, "R+T = {total} for {arr:?} at {detuning}");
            evaluations += 1;
        }
    }
}

#[test]
fn pair_matrix_form_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = uniform_grid(-60.0, 60.0, 10_000).unwrap();
    for _ in 0..100 {
        let d = rng.random_range(0.01..1.5);
        let gamma_wg = rng.random_range(0.1..10.0);
        let gamma_free = rng.random_range(0.0..5.0);
        let arr = pair(d, gamma_wg, gamma_free);
        for &x in &grid {
            let lhs = matrix_amplitudes(&arr, x, &wg()).unwrap();
            let rhs = two_emitter_amplitudes(&arr, x, &wg()).unwrap();
            assert!((lhs.r - rhs.r).norm() < 1e-12, "r mismatch at d={d}, x={x}");
            assert!((lhs.t - rhs.t).norm() < 1e-12, "t mismatch at d={d}, x={x}");
        }
    }
}

#[test]
fn collective_decomposition_reproduces_reflection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let d = rng.random_range(0.005..0.1);
        let arr = pair(d, rng.random_range(0.5..10.0), rng.random_range(0.0..3.0));
        let detuning = rng.random_range(-40.0..40.0);
        let direct = scattering_amplitudes(&arr, detuning, &wg()).unwrap().r;
        let split: Complex64 = collective_reflection(&arr, detuning, &wg()).unwrap();
        assert!((direct - split).norm() < 1e-10, "{direct} vs {split}");
    }
}

#[test]
fn lossless_dip_follows_tangent_law() {
    let gamma = 1.0;
    for i in 1..=24 {
        let d = 0.01 * i as f64;
        let arr = pair(d, gamma, 0.0);
        let model = ForwardModel::new(arr, wg());
        let expected = -0.5 * gamma * (TAU * d).tan();
        let half = 2.0 * expected.abs().max(gamma);
        let grid = uniform_grid(expected - half, expected + half, 4001).unwrap();
        let features = find_extrema(&model.spectrum(&grid).unwrap(), &model).unwrap();
        let dip = features.deepest_dip().unwrap();
        let k = wg().wavenumber(dip.center);
        let law = -0.5 * gamma * (k * d).tan();
        assert!(((dip.center - law) / law).abs() < 1e-3, "d={d}: {} vs {law}", dip.center);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lossy_arrays_are_passive(
        d in 0.005f64..1.0,
        gamma_wg in 0.1f64..10.0,
        gamma_free in 0.0f64..10.0,
        third in 0.005f64..1.0,
        detuning in -100.0f64..100.0,
    ) {
        let arr = EmitterArray::new(
            vec![
                Emitter::new(0.0, gamma_wg, gamma_free),
                Emitter::new(d, gamma_wg * 0.7, gamma_free * 1.3),
                Emitter::new(d + third, gamma_wg, gamma_free).with_detuning(0.5),
            ],
            RateUnit::FreeSpace,
        ).unwrap();
        let a = scattering_amplitudes(&arr, detuning, &wg()).unwrap();
        prop_assert!(a.reflectivity() + a.transmissivity() <= 1.0 + 1e-12);
        prop_assert!(a.reflectivity() >= 0.0 && a.transmissivity() >= 0.0);
    }

    #[test]
    fn reflection_magnitude_ignores_global_offset(
        d in 0.01f64..1.0,
        offset in -5.0f64..5.0,
        gamma_free in 0.0f64..3.0,
        detuning in -30.0f64..30.0,
    ) {
        let base = pair(d, 2.0, gamma_free);
        let moved = EmitterArray::new(
            base.emitters().iter().map(|e| Emitter { position: e.position + offset, ..*e }).collect(),
            RateUnit::FreeSpace,
        ).unwrap();
        let a = scattering_amplitudes(&base, detuning, &wg()).unwrap();
        let b = scattering_amplitudes(&moved, detuning, &wg()).unwrap();
        prop_assert!((a.r.norm() - b.r.norm()).abs() < 1e-12);
        prop_assert!((a.t - b.t).norm() < 1e-12);
    }
}

#[test]
fn spectrum_is_identical_across_runs() {
    let arr = EmitterArray::chain(4, 0.05, 5.0, 1.0, RateUnit::FreeSpace).unwrap();
    let grid = uniform_grid(-200.0, 200.0, 5001).unwrap();
    let a = compute_spectrum(&arr, &grid, &wg()).unwrap();
    let b = compute_spectrum(&arr, &grid, &wg()).unwrap();
    let bits = |s: &Spectrum| s.r().iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    for (i, &x) in grid.iter().enumerate().step_by(97) {
        let point = scattering_amplitudes(&arr, x, &wg()).unwrap();
        assert_eq!(point.r, a.r()[i]);
    }
}

#[test]
fn narrow_subradiant_lines_stay_passive() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let d = rng.random_range(0.003..0.05);
        let gamma_wg = rng.random_range(1.0..20.0);
        let gamma_free = rng.random_range(0.1..3.0);
        let modes = wqed_core::waveguide_model::CollectiveModes::new(d, gamma_wg, gamma_free, &wg()).unwrap();
        let (center, width) = modes.subradiant();
        let arr = pair(d, gamma_wg, gamma_free);
        for x in uniform_grid(center - 3.0 * width, center + 3.0 * width, 301).unwrap() {
            let a = scattering_amplitudes(&arr, x, &wg()).unwrap();
            let total = a.reflectivity() + a.transmissivity();
            assert!(total <= 1.0 + 1e-12, "d={d} Γ={gamma_wg} γ={gamma_free} at {x}: R+T={total}");
        }
    }
}
