use hybridlight::entangle::{generate_hybrid, ExperimentConfig, Source};
use hybridlight::states::build_sdlps;
use hybridlight::wigner::wigner_point;
use hybridlight::{Cutoff, DelocalizedPhoton, FockVectorF32, ParitySign, SdlpsSpec};

#[test]
fn f32_state_building() {
    let v: FockVectorF32 = build_sdlps(&SdlpsSpec::new(1, ParitySign::Minus, 1.0f32).unwrap(), Cutoff::Auto).unwrap();
    assert!((v.norm() - 1.0).abs() < 1e-5);
    assert!(wigner_point(&v, 0.0, 0.0).is_finite());
}

#[test]
fn f32_heralding_agrees_with_f64() {
    let run32 = {
        let src = Source::Sdlps(SdlpsSpec::new(0, ParitySign::Minus, 0.5f32).unwrap());
        generate_hybrid(&ExperimentConfig::new(src, DelocalizedPhoton::balanced(), 0.25, 1).unwrap(), Cutoff::Auto).unwrap()
    };
    let run64 = {
        let src = Source::Sdlps(SdlpsSpec::new(0, ParitySign::Minus, 0.5f64).unwrap());
        generate_hybrid(&ExperimentConfig::new(src, DelocalizedPhoton::balanced(), 0.25, 1).unwrap(), Cutoff::Auto).unwrap()
    };
    assert!((run32.negativity as f64 - run64.negativity).abs() < 1e-4);
    assert!((run32.probability as f64 - run64.probability).abs() < 1e-4);
}
