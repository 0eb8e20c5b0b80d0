use hybridlight::fock::{displaced_fock_coeff, displaced_number_state, displacement_block, displacement_matrix, coherent_norm, operator_matrices};
use hybridlight::linalg::{expm, CMatrix};
use hybridlight::{Error, FockVector, Parity};
use num_complex::Complex;

const ALPHAS: [f64; 3] = [0.3, 1.0, 2.5];

#[test]
fn coefficients_match_matrix_exponential() {
    let cutoff = 80;
    let ops = operator_matrices::<f64>(cutoff).unwrap();
    for &a in &ALPHAS {
        let alpha = Complex::new(a, 0.0);
        let gen = ops.creation.entries().scale(alpha).sub(&ops.annihilation.entries().scale(alpha.conj()));
        let d = expm(&gen);
        for l in 0..=10 {
            for n in 0..=10 {
                let closed = displaced_fock_coeff(l, n, alpha) * coherent_norm(a);
                assert!((closed - d[(n, l)]).norm() < 1e-9, "l={l} n={n} α={a}");
            }
        }
    }
}

#[test]
fn coefficients_match_for_complex_amplitude() {
    let alpha = Complex::new(0.7, -1.1);
    let d = displacement_block(alpha, 12, 12);
    for l in 0..12 {
        for n in 0..12 {
            let closed = displaced_fock_coeff(l, n, alpha) * coherent_norm(alpha.norm());
            assert!((closed - d[(n, l)]).norm() < 1e-12);
        }
    }
}

#[test]
fn sign_relation_is_exact() {
    for &a in &ALPHAS {
        for l in 0..=10 {
            for n in 0..=10 {
                let plus = displaced_fock_coeff(l, n, Complex::new(a, 0.0));
                let minus = displaced_fock_coeff(l, n, Complex::new(-a, 0.0));
                let sign = if (n + l) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(minus, plus * sign, "l={l} n={n} α={a}");
            }
        }
    }
}

#[test]
fn displaced_number_states_are_orthonormal() {
    let alpha = Complex::new(1.0, 0.5);
    let states: Vec<FockVector<f64>> = (0..=6).map(|l| displaced_number_state(l, alpha, 60)).collect();
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((a.inner(b) - Complex::new(want, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn displacement_matrix_is_unitary_on_low_block() {
    let d = displacement_matrix(Complex::new(0.8, 0.2), 50).unwrap();
    let prod = d.entries().adjoint().matmul(d.entries());
    assert!(prod.max_abs_diff_block(&CMatrix::identity(51), 20) < 1e-10);
}

#[test]
fn displacement_matrix_refuses_small_cutoff() {
    assert!(matches!(
        displacement_matrix::<f64>(Complex::new(3.0, 0.0), 5),
        Err(Error::TruncationInadequate { .. })
    ));
}

#[test]
fn ladder_operators_satisfy_commutator_below_edge() {
    let ops = operator_matrices::<f64>(12).unwrap();
    let a = ops.annihilation.entries();
    let ad = ops.creation.entries();
    let comm = a.matmul(ad).sub(&ad.matmul(a));
    assert!(comm.max_abs_diff_block(&CMatrix::identity(13), 12) < 1e-12);
}

#[test]
fn parity_and_tail_helpers() {
    let v = FockVector::<f64>::from_real(&[0.6, 0.0, 0.8, 0.0]);
    assert_eq!(v.parity(1e-12), Some(Parity::Even));
    assert!(v.sector_mass(Parity::Odd).abs() < 1e-15);
    assert!(FockVector::<f64>::basis(5, 3).is_err());
    assert!(FockVector::<f64>::zeros(3).normalized().is_err());
}
