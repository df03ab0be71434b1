use wqed_wasm::{chain_spectrum, read};

#[test]
fn lossless_pair_spectrum_has_the_dip() {
    let view = chain_spectrum(2, 0.05, 1.0, 0.0, -2.0, 2.0, 801).unwrap();
    assert_eq!(view.detuning().len(), 801);
    let dips = view.dips();
    assert_eq!(dips.len(), 1);
    assert!((dips[0] + 0.16246).abs() < 1e-4);
    assert!(view.reflectivity().iter().zip(view.transmissivity()).all(|(r, t)| (r + t - 1.0).abs() < 1e-12));
}

#[test]
fn lossy_chain_shows_one_peak_per_emitter() {
    let view = chain_spectrum(3, 0.05, 5.0, 1.0, -80.0, 80.0, 4001).unwrap();
    assert_eq!(view.peaks().len(), 3);
}

#[test]
fn readings_match_the_library() {
    let r = read(0.01, 10.0, 1.0, true, 92.4886872).unwrap();
    assert!((r.dd + 1e-4).abs() < 1e-7);
    assert!((r.microstrain + 124.0).abs() < 0.1);
    assert!(r.resolvable);
    assert!(r.limit > 0.0);
}

#[test]
fn bad_input_is_an_error() {
    assert!(chain_spectrum(0, 0.05, 1.0, 0.0, -1.0, 1.0, 10).is_err());
    assert!(read(-0.01, 10.0, 1.0, true, 1.0).is_err());
}
