use hybridlight::fock::displaced_number_state;
use hybridlight::states::{
    analytic_overlap, build_sdlps, build_smsv, build_superposition, normalization_factor, photon_statistics,
    sdlps_branch_norm, sdlps_paper_phase,
};
use hybridlight::{Cutoff, Error, FockVector, Parity, ParitySign, SdlpsSpec, SmsvSpec, SuperpositionSpec};
use num_complex::Complex;

const SIGNS: [ParitySign; 2] = [ParitySign::Plus, ParitySign::Minus];

#[test]
fn sdlps_states_have_pure_parity() {
    for sign in SIGNS {
        for l in 0..=4 {
            for beta in [0.3f64, 1.0, 2.0] {
                let v = build_sdlps(&SdlpsSpec::new(l, sign, beta).unwrap(), Cutoff::Auto).unwrap();
                let wrong = v.sector_mass(sign.parity().flip());
                assert!(wrong < 1e-12, "l={l} β={beta} {sign:?}: {wrong}");
                assert!(v.is_normalized(1e-12));
            }
        }
    }
}

#[test]
fn analytic_normalization_matches_branch_norm() {
    for sign in SIGNS {
        for l in 0..=4 {
            for beta in [0.5f64, 1.0, 2.0] {
                let spec = SdlpsSpec::new(l, sign, beta).unwrap();
                let numeric = sdlps_branch_norm(&spec, Cutoff::Auto);
                let analytic = 1.0 / normalization_factor(l, sign, beta).unwrap();
                assert!((numeric - analytic).abs() < 1e-9, "l={l} β={beta} {sign:?}");
            }
        }
    }
}

#[test]
fn analytic_overlaps_match_numeric() {
    for sign in SIGNS {
        for beta in [0.5f64, 1.0, 2.0] {
            let states: Vec<FockVector<f64>> = (0..=3)
                .map(|l| sdlps_paper_phase(&SdlpsSpec::new(l, sign, beta).unwrap(), Cutoff::Fixed(60)).unwrap())
                .collect();
            for k in 0..=3 {
                for m in 0..=3 {
                    let numeric = states[k].inner(&states[m]).re;
                    let analytic = analytic_overlap(k, m, sign, beta).unwrap();
                    assert!((numeric - analytic).abs() < 1e-9, "k={k} m={m} β={beta} {sign:?}");
                }
            }
        }
    }
}

#[test]
fn overlaps_decay_with_separation() {
    let near = analytic_overlap::<f64>(0, 1, ParitySign::Plus, 1.0).unwrap().abs();
    let far = analytic_overlap::<f64>(0, 1, ParitySign::Plus, 4.0).unwrap().abs();
    assert!(far < near);
    assert!(far < 1e-3);
}

#[test]
fn cat_limit_is_coherent_superposition() {
    let beta = 1.3;
    let spec = SdlpsSpec::new(0, ParitySign::Plus, beta).unwrap();
    let v = sdlps_paper_phase(&spec, Cutoff::Fixed(50)).unwrap();
    let a = displaced_number_state(0, Complex::new(-beta, 0.0), 50);
    let b = displaced_number_state(0, Complex::new(beta, 0.0), 50);
    let manual = a.add(&b).normalized().unwrap();
    assert!(manual.max_abs_diff(&v) < 1e-12);
}

#[test]
fn odd_states_vanish_at_origin() {
    let spec = SdlpsSpec::new(0, ParitySign::Minus, 0.0).unwrap();
    assert!(matches!(build_sdlps(&spec, Cutoff::Fixed(10)), Err(Error::DegenerateState(_))));
    let spec = SdlpsSpec::new(1, ParitySign::Plus, 0.0).unwrap();
    assert!(build_sdlps(&spec, Cutoff::Fixed(10)).is_err());
    let spec = SdlpsSpec::<f64>::new(1, ParitySign::Minus, 0.0).unwrap();
    let v = build_sdlps(&spec, Cutoff::Fixed(10)).unwrap();
    assert!((v.amp(1).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn superposition_carries_single_parity() {
    let spec = SuperpositionSpec::new(ParitySign::Plus, 1.0, vec![1.0, 1.0]).unwrap();
    let s = build_superposition(&spec, Cutoff::Auto, false).unwrap();
    assert_eq!(s.state.parity(1e-12), Some(Parity::Even));
    assert!(s.truncation_fidelity.is_none());
    let t = build_superposition(&spec, Cutoff::Auto, true).unwrap();
    let f = t.truncation_fidelity.unwrap();
    assert!(f > 0.0 && f <= 1.0 + 1e-12);
}

#[test]
fn fano_factors() {
    let coherent = displaced_number_state(0, Complex::new(1.7f64, 0.4), 80);
    assert!((photon_statistics(&coherent).unwrap().fano - 1.0).abs() < 1e-9);
    let fock = FockVector::<f64>::basis(3, 6).unwrap();
    assert_eq!(photon_statistics(&fock).unwrap().fano, 0.0);
    assert!(matches!(photon_statistics(&FockVector::<f64>::basis(0, 3).unwrap()), Err(Error::FanoUndefined)));
    for (l, sign) in [(0, ParitySign::Minus), (1, ParitySign::Plus)] {
        let v = build_sdlps(&SdlpsSpec::new(l, sign, 0.3).unwrap(), Cutoff::Auto).unwrap();
        assert!(photon_statistics(&v).unwrap().fano < 1.0);
    }
}

#[test]
fn two_term_superpositions_at_small_beta() {
    // constructive interference on |0⟩ makes the even mixture super-Poissonian
    let even = SuperpositionSpec::new(ParitySign::Plus, 0.3, vec![1.0, 1.0]).unwrap();
    let v = build_superposition(&even, Cutoff::Auto, false).unwrap().state;
    assert!(photon_statistics(&v).unwrap().fano > 1.0);
    let odd = SuperpositionSpec::new(ParitySign::Minus, 0.3, vec![1.0, 1.0]).unwrap();
    let v = build_superposition(&odd, Cutoff::Auto, false).unwrap().state;
    assert!(photon_statistics(&v).unwrap().fano < 1.0);
}

#[test]
fn squeezed_vacuum_is_even_and_normalized() {
    let v = build_smsv(&SmsvSpec::new(0.6).unwrap(), Cutoff::Auto).unwrap();
    assert_eq!(v.parity(1e-15), Some(Parity::Even));
    assert!(v.is_normalized(1e-12));
    let mean = photon_statistics(&v).unwrap().mean;
    assert!((mean - 0.6f64.sinh().powi(2)).abs() < 1e-10);
    assert!(SmsvSpec::new(2.5).is_err());
}
