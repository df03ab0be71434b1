//! Acceptance gate. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{features_for, pair, relative, resolving_grid, wg};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wqed_core::inversion::{lossless_dip_law, collective_peaks};
use wqed_core::prelude::*;
use wqed_core::sensing::dd_to_picometres;
use wqed_core::waveguide_model::{matrix_amplitudes, two_emitter_amplitudes};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn refined_dip(d: f64, gamma: f64) -> f64 {
    let model = ForwardModel::new(pair(d, gamma, 0.0), wg());
    let expected = lossless_dip_law(d, gamma, &wg());
    let half = 2.0 * expected.abs().max(gamma);
    let grid = uniform_grid(expected - half, expected + half, 4001).unwrap();
    let features = find_extrema(&model.spectrum(&grid).unwrap(), &model).unwrap();
    features.deepest_dip().unwrap().center
}

fn dip_law() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let d = 0.01 + 0.23 * i as f64 / 49.0;
        let dip = refined_dip(d, 1.0);
        let law = -0.5 * (wg().k_a() * d).tan();
        worst = worst.max(relative(dip, law));
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-3 && elapsed < Duration::from_secs(10),
        format!("max relative error {worst:.2e} over 50 separations in {elapsed:.2?}"),
    )
}

fn worked_lossless() -> Outcome {
    let a = refined_dip(0.05, 1.0);
    let b = refined_dip(0.15, 1.0);
    check(
        within(a, -0.162, 0.002) && within(b, -0.688, 0.002),
        format!("d=0.05 -> {a:.5}, d=0.15 -> {b:.5}"),
    )
}

fn gradient_branches() -> Outcome {
    let gradient = 2.0;
    let mut detail = Vec::new();
    let mut ok = true;
    for (d, splitting, branch) in [(0.55, 1.1, 1u32), (1.05, 2.1, 2)] {
        let arr = apply_gradient_field(&pair(d, 1.0, 0.0), gradient);
        let grid = uniform_grid(-3.0, gradient * d + 3.0, 8001).unwrap();
        let features = features_for(arr, &grid);
        let measured = wqed_core::inversion::peak_splitting(&features).map_err(|e| e.to_string())?;
        let found = disambiguate_branch(&features, gradient, 0.05, &BranchSearch::for_linewidth(1.0), &wg())
            .map_err(|e| e.to_string())?;
        ok &= within(measured, splitting, 0.05) && found.branch == branch;
        detail.push(format!("d={d}: splitting {measured:.4}, n={}", found.branch));
    }
    check(ok, detail.join("; "))
}

fn lossy_case_one() -> Outcome {
    let grid = resolving_grid(0.05, 2.0, 1.0, 20001);
    let features = features_for(pair(0.05, 2.0, 1.0), &grid);
    let (sup, sub) = collective_peaks(&features).map_err(|e| e.to_string())?;
    let (w_sup, w_sub) = (sup.fwhm.unwrap_or(f64::NAN), sub.fwhm.unwrap_or(f64::NAN));
    let result = invert_lossy(&features, &SeparationSearch::default(), &wg()).map_err(|e| e.to_string())?;
    let RateEstimate::Identical(rates) = result.rates else { return Err("expected identical rates".into()) };
    let ok = within(sup.center.abs(), 23.388, 0.01)
        && within(sub.center.abs(), 23.388, 0.01)
        && within(w_sup, 5.88, 0.02)
        && within(w_sub, 0.12, 0.02)
        && within(sup.height, 0.44, 0.005)
        && within(rates.gamma_wg, 1.99, 0.03)
        && within(rates.gamma_free, 1.01, 0.03)
        && within(result.separation, 0.0502, 0.0005)
        && result.residual <= 0.01;
    check(
        ok,
        format!(
            "peaks {:.4}/{:.4}, FWHM {w_sup:.4}/{w_sub:.4}, R {:.4}, Γ={:.4} γ={:.4} d={:.5} δS={:.1e}",
            sup.center, sub.center, sup.height, rates.gamma_wg, rates.gamma_free, result.separation, result.residual
        ),
    )
}

fn lossy_case_two() -> Outcome {
    let grid = resolving_grid(0.08, 2.0, 1.0, 20001);
    let features = features_for(pair(0.08, 2.0, 1.0), &grid);
    let (sup, sub) = collective_peaks(&features).map_err(|e| e.to_string())?;
    let (w_sup, w_sub) = (sup.fwhm.unwrap_or(f64::NAN), sub.fwhm.unwrap_or(f64::NAN));
    let result = invert_lossy(&features, &SeparationSearch::default(), &wg()).map_err(|e| e.to_string())?;
    let ok = within(sup.center, 5.732, 0.01)
        && within(sub.center, -5.752, 0.01)
        && within(w_sup, 5.76, 0.02)
        && within(w_sub, 0.32, 0.02)
        && within(result.separation, 0.0808, 0.001);
    check(
        ok,
        format!("peaks {:.4}/{:.4}, FWHM {w_sup:.4}/{w_sub:.4}, d={:.5}", sup.center, sub.center, result.separation),
    )
}

fn counting() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let lossless = EmitterArray::chain(n, 0.05, 1.0, 0.0, RateUnit::Guided).unwrap();
        let lossy = EmitterArray::chain(n, 0.05, 5.0, 1.0, RateUnit::FreeSpace).unwrap();
        for (arr, regime) in [(lossless, Regime::Lossless), (lossy, Regime::Lossy)] {
            let (lo, hi) = default_scan_window(&arr, &wg()).unwrap();
            let count = count_emitters(&features_for(arr, &uniform_grid(lo, hi, 8001).unwrap()), regime);
            let expected_features = if regime == Regime::Lossless { n - 1 } else { n };
            ok &= count.emitters == n && count.features == expected_features;
            detail.push(format!("{regime:?} N={n}: {} features", count.features));
        }
    }
    check(ok, detail.join(", "))
}

fn non_identical() -> Outcome {
    let (gradient, d) = (6.0, 2.1);
    let arr = apply_gradient_field(
        &EmitterArray::new(vec![Emitter::new(0.0, 1.0, 0.5), Emitter::new(d, 1.5, 0.9)], RateUnit::Guided).unwrap(),
        gradient,
    );
    let grid = uniform_grid(-10.0, gradient * d + 10.0, 40001).unwrap();
    let features = features_for(arr, &grid);
    let splitting = wqed_core::inversion::peak_splitting(&features).map_err(|e| e.to_string())?;
    let result = extract_per_emitter(&features, gradient).map_err(|e| e.to_string())?;
    let RateEstimate::PerEmitter(rates) = &result.rates else { return Err("expected per-emitter rates".into()) };
    let ok = within(splitting, 12.6, 0.1)
        && within(rates[0].gamma_wg, 0.97, 0.05)
        && within(rates[0].gamma_free, 0.48, 0.05)
        && within(rates[1].gamma_wg, 1.58, 0.08)
        && within(rates[1].gamma_free, 0.88, 0.08)
        && within(result.separation, 2.1, 0.02);
    check(
        ok,
        format!(
            "splitting {splitting:.4}, Γ1={:.3} γ1={:.3} Γ2={:.3} γ2={:.3}, d={:.4}",
            rates[0].gamma_wg, rates[0].gamma_free, rates[1].gamma_wg, rates[1].gamma_free, result.separation
        ),
    )
}

fn sensing_shifts() -> Outcome {
    let sup = SensingConfig::new(0.01, 10.0, 1.0, ProbeBranch::Superradiant).map_err(|e| e.to_string())?;
    let sub = sup.with_branch(ProbeBranch::Subradiant);
    let shift_sup = peak_shift(-1e-4, &sup).map_err(|e| e.to_string())?;
    let shift_sub = peak_shift(1e-7, &sub).map_err(|e| e.to_string())?;
    let pm = dd_to_picometres(1e-4, &sup);
    let (microstrain, kelvin) = dd_to_strain_temperature(1e-4, &sup);
    let ok = within(shift_sup.abs(), 92.0, 3.0)
        && within(shift_sub.abs(), 0.09, 0.01)
        && within(pm, 155.0, 1e-9)
        && within(microstrain, 124.0, 1e-9)
        && within(kelvin, 12.4, 1e-9);
    check(
        ok,
        format!("|δω| {:.3} and {:.4}; {pm} pm -> {microstrain} με / {kelvin} K", shift_sup.abs(), shift_sub.abs()),
    )
}

fn lossless_round_trip(rng: &mut ChaCha8Rng) -> (usize, f64) {
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let d = rng.random_range(0.001..=0.24);
        let dip = refined_dip(d, 1.0);
        let err = invert_dip_lossless(dip, 1.0, 0, &wg()).map_or(f64::INFINITY, |r| relative(r, d));
        worst = worst.max(err);
        failures += usize::from(err.is_nan() || err >= 1e-3);
    }
    (failures, worst)
}

fn lossy_round_trip(rng: &mut ChaCha8Rng) -> (usize, String) {
    let mut failures = Vec::new();
    for _ in 0..100 {
        let d = rng.random_range(0.02..=0.2);
        let ratio = rng.random_range(1.0..=10.0);
        let features = features_for(pair(d, ratio, 1.0), &resolving_grid(d, ratio, 1.0, 20001));
        let passed = match invert_lossy(&features, &SeparationSearch::default(), &wg()) {
            Ok(InversionResult { separation, rates: RateEstimate::Identical(rates), .. }) => {
                relative(separation, d) < 0.02
                    && relative(rates.gamma_wg, ratio) < 0.03
                    && relative(rates.gamma_free, 1.0) < 0.03
            }
            _ => false,
        };
        if !passed {
            failures.push(d);
        }
    }
    let smallest = failures.iter().copied().fold(f64::INFINITY, f64::min);
    (failures.len(), format!("smallest failing d {smallest:.4}"))
}

fn properties() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(409);

    let mut worst_energy = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=5);
        let spacing = rng.random_range(0.01..0.6);
        let arr = EmitterArray::chain(n, spacing, rng.random_range(0.2..5.0), 0.0, RateUnit::Guided).unwrap();
        for _ in 0..100 {
            let a = scattering_amplitudes(&arr, rng.random_range(-40.0..40.0), &wg()).unwrap();
            worst_energy = worst_energy.max((a.reflectivity() + a.transmissivity() - 1.0).abs());
        }
    }

    let mut worst_pair = 0.0f64;
    let grid = uniform_grid(-50.0, 50.0, 10_000).unwrap();
    for _ in 0..100 {
        let arr = pair(rng.random_range(0.01..1.0), rng.random_range(0.2..8.0), rng.random_range(0.0..4.0));
        for &x in &grid {
            let lhs = matrix_amplitudes(&arr, x, &wg()).unwrap();
            let rhs = two_emitter_amplitudes(&arr, x, &wg()).unwrap();
            worst_pair = worst_pair.max((lhs.r - rhs.r).norm()).max((lhs.t - rhs.t).norm());
        }
    }

    let (lossless_failures, lossless_worst) = lossless_round_trip(&mut rng);
    let (lossy_failures, lossy_detail) = lossy_round_trip(&mut rng);
    let elapsed = start.elapsed();
    check(
        worst_energy < 1e-12 && worst_pair < 1e-12 && lossless_failures == 0 && lossy_failures == 0,
        format!(
            "energy {worst_energy:.1e}, pair form {worst_pair:.1e}, lossless round trip {lossless_failures}/200 failed \
             (worst {lossless_worst:.1e}), lossy round trip {lossy_failures}/100 failed ({lossy_detail}), {elapsed:.2?}"
        ),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [Criterion; 9] = [
        ("1 dip law", dip_law),
        ("2 worked lossless dips", worked_lossless),
        ("3 gradient branch recovery", gradient_branches),
        ("4 lossy inversion d=0.05", lossy_case_one),
        ("5 lossy inversion d=0.08", lossy_case_two),
        ("6 emitter counting", counting),
        ("7 non-identical extraction", non_identical),
        ("8 sensing shifts", sensing_shifts),
        ("9 property suites", properties),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("total {elapsed:.2?}");
    assert!(elapsed < Duration::from_secs(60), "acceptance run took {elapsed:.2?}");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn rounded_dip_detuning_is_a_reflection_zero() {
    let arr = pair(0.05, 1.0, 0.0);
    let reflectivity = scattering_amplitudes(&arr, -0.162, &wg()).unwrap().reflectivity();
    assert!(reflectivity < 1e-4, "|r|² at -0.162 = {reflectivity:.3e}");
}
