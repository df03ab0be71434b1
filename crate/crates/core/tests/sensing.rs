mod common;

use common::relative;
use proptest::prelude::*;
use wqed_core::prelude::*;
use wqed_core::sensing::{dd_estimate_cubic, strain_to_dd, temperature_to_dd};

fn config(baseline: f64, branch: ProbeBranch) -> SensingConfig {
    SensingConfig::new(baseline, 10.0, 1.0, branch).unwrap()
}

#[test]
fn small_shifts_map_linearly() {
    for branch in [ProbeBranch::Superradiant, ProbeBranch::Subradiant] {
        let cfg = config(0.01, branch);
        let mut last = f64::INFINITY;
        for eps in [1.0, 0.1, 0.01, 0.001] {
            let one = peak_shift_to_dd(eps, &cfg).unwrap();
            let two = peak_shift_to_dd(2.0 * eps, &cfg).unwrap();
            let deviation = (two / one - 2.0).abs() / 2.0;
            assert!(deviation <= last + 1e-12, "{branch:?} eps={eps}");
            last = deviation;
        }
        assert!(last < 0.01, "{branch:?}: {last}");
    }
}

#[test]
fn exact_and_near_field_estimates_agree() {
    for baseline in [0.002, 0.005, 0.01] {
        for branch in [ProbeBranch::Superradiant, ProbeBranch::Subradiant] {
            let cfg = config(baseline, branch);
            for shift in [-50.0, -1.0, -0.05, 0.05, 1.0, 50.0] {
                let exact = peak_shift_to_dd(shift, &cfg).unwrap();
                let approx = dd_estimate_cubic(shift, &cfg).unwrap();
                assert!(relative(approx, exact) < 0.15, "d={baseline} {branch:?} shift={shift}: {approx} vs {exact}");
            }
        }
    }
}

#[test]
fn closer_pairs_are_more_sensitive() {
    let shift = 0.5;
    let baselines: Vec<f64> = (0..=9).map(|i| 0.005 + 0.005 * i as f64).collect();
    for branch in [ProbeBranch::Superradiant, ProbeBranch::Subradiant] {
        let dds: Vec<f64> = baselines
            .iter()
            .map(|&d| peak_shift_to_dd(shift, &config(d, branch)).unwrap().abs())
            .collect();
        assert!(dds.windows(2).all(|w| w[0] < w[1]), "{branch:?}: {dds:?}");
    }
}

#[test]
fn shift_and_inverse_are_consistent() {
    let cfg = config(0.01, ProbeBranch::Superradiant);
    for dd in [-1e-3, -1e-5, 1e-7, 1e-4] {
        let shift = peak_shift(dd, &cfg).unwrap();
        let back = peak_shift_to_dd(shift, &cfg).unwrap();
        assert!(relative(back, dd) < 1e-8, "{dd}: {back}");
    }
}

proptest! {
    #[test]
    fn unit_conversion_inverts(dd in -1e-2f64..1e-2) {
        prop_assume!(dd != 0.0);
        let cfg = config(0.01, ProbeBranch::Superradiant);
        let (microstrain, kelvin) = dd_to_strain_temperature(dd, &cfg);
        prop_assert!(relative(strain_to_dd(microstrain, &cfg), dd) < 1e-12);
        prop_assert!(relative(temperature_to_dd(kelvin, &cfg), dd) < 1e-12);
    }
}

#[test]
fn readings_flag_resolution_and_thermal_floor() {
    let cfg = config(0.01, ProbeBranch::Subradiant);
    let tiny = read_shift(0.001, &cfg).unwrap();
    assert!(!tiny.resolvable);
    assert!(tiny.below_thermal_floor);
    let large = read_shift(-1000.0, &cfg.with_branch(ProbeBranch::Superradiant)).unwrap();
    assert!(large.resolvable);
    assert!(!large.below_thermal_floor);
    assert!(large.dd > 0.0);
}

#[test]
fn detection_limit_sits_at_the_resolution_threshold() {
    for branch in [ProbeBranch::Superradiant, ProbeBranch::Subradiant] {
        let cfg = config(0.01, branch);
        let limit = min_detectable(&cfg).unwrap();
        let shift = peak_shift(limit.dd, &cfg).unwrap().abs().max(peak_shift(-limit.dd, &cfg).unwrap().abs());
        assert!(relative(shift, limit.shift) < 1e-3 || shift >= limit.shift);
    }
}
