use hybridlight::catgen::{condition_smsv, condition_smsv_numeric, decompose_into_sdlps, scan_beta};
use hybridlight::states::build_smsv;
use hybridlight::{BeamSplitterParams, Cutoff, Error, FockVector, Parity, ParitySign, SmsvSpec};

#[test]
fn closed_form_matches_pipeline() {
    for r in [0.2f64, 0.5, 0.8] {
        let spec = SmsvSpec::new(r).unwrap();
        for t in [0.5, 0.7, 0.9] {
            let bs = BeamSplitterParams::new(t).unwrap();
            for n in 0..=4 {
                let closed = condition_smsv(&spec, bs, n, Cutoff::Auto).unwrap();
                let numeric = condition_smsv_numeric(&spec, bs, n, Cutoff::Auto).unwrap();
                assert!(closed.state.max_abs_diff(&numeric.state) < 1e-10, "r={r} t={t} n={n}");
                assert!((closed.probability - numeric.probability).abs() < 1e-10);
                assert_eq!(closed.parity, Parity::of(n));
            }
        }
    }
}

#[test]
fn outcome_probabilities_sum_to_one() {
    let spec = SmsvSpec::new(0.5).unwrap();
    let c = build_smsv(&spec, Cutoff::Auto).unwrap().cutoff();
    let bs = BeamSplitterParams::new(0.7).unwrap();
    let total: f64 = (0..=c)
        .map(|n| match condition_smsv(&spec, bs, n, Cutoff::Auto) {
            Ok(cat) => cat.probability,
            Err(Error::EmptyOutcome { probability, .. }) => probability,
            Err(e) => panic!("{e}"),
        })
        .sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn vacuum_outcome_is_attenuated_squeezed_vacuum() {
    let spec = SmsvSpec::new(0.4).unwrap();
    let t = 0.6f64;
    let y0 = condition_smsv(&spec, BeamSplitterParams::new(t).unwrap(), 0, Cutoff::Auto).unwrap();
    let src = build_smsv(&spec, Cutoff::Auto).unwrap();
    let amps: Vec<f64> = src.amps().iter().enumerate().map(|(k, a)| a.re * t.powi(k as i32)).collect();
    let expected = FockVector::from_real(&amps).normalized().unwrap();
    assert!(y0.state.max_abs_diff(&expected) < 1e-12);
}

#[test]
fn decomposition_reproduces_matched_amplitudes() {
    let spec = SmsvSpec::new(0.3).unwrap();
    let bs = BeamSplitterParams::new(0.7).unwrap();
    for n in [0, 1] {
        let y = condition_smsv(&spec, bs, n, Cutoff::Auto).unwrap();
        let sign = ParitySign::from_parity(Parity::of(n));
        let d = decompose_into_sdlps(&y.state, 2, sign, 0.6).unwrap();
        assert!(d.matched_residual < 1e-10);
        assert!(d.fidelity > 0.9 && d.fidelity <= 1.0 + 1e-12);
    }
}

#[test]
fn beta_scan_reaches_high_fidelity() {
    let y0 = condition_smsv(&SmsvSpec::new(0.3).unwrap(), BeamSplitterParams::new(0.7).unwrap(), 0, Cutoff::Auto).unwrap();
    let d = scan_beta(&y0.state, 2, ParitySign::Plus, (0.2, 1.5), 27).unwrap();
    assert!(d.fidelity >= 0.99, "{}", d.fidelity);
    assert!(d.beta_used >= 0.2 && d.beta_used <= 1.5);
}

#[test]
fn decomposition_errors() {
    let y1 = condition_smsv(&SmsvSpec::new(0.3).unwrap(), BeamSplitterParams::new(0.7).unwrap(), 1, Cutoff::Auto).unwrap();
    assert!(matches!(decompose_into_sdlps(&y1.state, 2, ParitySign::Plus, 0.6), Err(Error::ParityMismatch(_))));
    assert!(decompose_into_sdlps(&y1.state, 2, ParitySign::Minus, 0.0).is_err());
    let tiny = decompose_into_sdlps(&y1.state, 3, ParitySign::Minus, 1e-4);
    assert!(matches!(tiny, Err(Error::IllConditioned { .. })));
}
