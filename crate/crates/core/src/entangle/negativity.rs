use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::optics::TwoModeVector;
use crate::scalar::{re, Real};
use num_complex::Complex;

fn check_qubit_factor<T: Real>(state: &TwoModeVector<T>) -> Result<()> {
    if state.cutoffs().1 != 1 {
        return Err(Error::InvalidParameter(
            "second factor must be a qubit (cutoff 1)".into(),
        ));
    }
    let n = state.norm_sqr();
    if (n - T::one()).abs() > T::tol(1e-9) {
        return Err(Error::NotNormalized { norm: n.to_f64_lossy().sqrt() });
    }
    Ok(())
}

fn column<T: Real>(state: &TwoModeVector<T>, j: usize) -> Vec<Complex<T>> {
    (0..=state.cutoffs().0).map(|i| state.amp(i, j)).collect()
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Schmidt coefficients `s₀ ≥ s₁` of a normalized state on Fock ⊗ qubit.
pub fn schmidt_coefficients<T: Real>(state: &TwoModeVector<T>) -> Result<(T, T)> {
    check_qubit_factor(state)?;
    let (u0, u1) = (column(state, 0), column(state, 1));
    let g00 = dot(&u0, &u0).re;
    let g11 = dot(&u1, &u1).re;
    let g01 = dot(&u0, &u1);
    let half = (g00 + g11) / T::lit(2.0);
    let det = (g00 * g11 - g01.norm_sqr()).max(T::zero());
    let disc = (half * half - det).max(T::zero()).sqrt();
    let big = half + disc;
    // small eigenvalue via det/big avoids cancellation
    let small = if big > T::zero() { det / big } else { T::zero() };
    Ok((big.sqrt(), small.sqrt()))
}

/// `2 s₀ s₁`.
pub fn negativity_from_schmidt<T: Real>(s0: T, s1: T) -> T {
    T::lit(2.0) * s0 * s1
}

/// `2|a₀||a₁||B| / (|a₀|² + |a₁|²|B|²)`.
pub fn negativity_from_b<T: Real>(a0: T, a1: T, b: T) -> T {
    let (a0, a1, b) = (a0.abs(), a1.abs(), b.abs());
    T::lit(2.0) * a0 * a1 * b / (a0 * a0 + a1 * a1 * b * b)
}

/// Trace norm of the partial transpose over the qubit, minus one.
///
/// The Fock factor is reduced to the span of the two qubit-conditioned
/// branches, leaving a 4×4 problem.
pub fn negativity_of<T: Real>(state: &TwoModeVector<T>) -> Result<T> {
    check_qubit_factor(state)?;
    let (u0, u1) = (column(state, 0), column(state, 1));
    let zero = Complex::new(T::zero(), T::zero());
    let thresh = T::tol(1e-14);
    // orthonormal basis of span{u0, u1}
    let (first, second) = if dot(&u0, &u0).re >= dot(&u1, &u1).re { (&u0, &u1) } else { (&u1, &u0) };
    let n0 = dot(first, first).re.sqrt();
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    if n0 > thresh {
        let e0: Vec<_> = first.iter().map(|x| x * re(T::one() / n0)).collect();
        let proj = dot(&e0, second);
        let rest: Vec<_> = second.iter().zip(&e0).map(|(x, e)| x - e * proj).collect();
        let n1 = dot(&rest, &rest).re.sqrt();
        basis.push(e0);
        if n1 > thresh {
            basis.push(rest.iter().map(|x| x * re(T::one() / n1)).collect());
        }
    }
    // coefficients c[i][j] of e_i ⊗ |j⟩
    let mut c = [[zero; 2]; 2];
    for (i, e) in basis.iter().enumerate() {
        c[i][0] = dot(e, &u0);
        c[i][1] = dot(e, &u1);
    }
    let pt = CMatrix::from_fn(4, 4, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        // ⟨i j|ρ^T_B|k l⟩ = ⟨i l|ρ|k j⟩
        c[i][l] * c[k][j].conj()
    });
    let ev = hermitian_eigenvalues(&pt);
    Ok(ev.iter().map(|x| x.abs()).sum::<T>() - T::one())
}

/// Partial transpose built on the full truncated space; slow reference.
pub fn negativity_full_partial_transpose<T: Real>(state: &TwoModeVector<T>) -> Result<T> {
    check_qubit_factor(state)?;
    let d = state.cutoffs().0 + 1;
    let pt = CMatrix::from_fn(2 * d, 2 * d, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        state.amp(i, l) * state.amp(k, j).conj()
    });
    let ev = hermitian_eigenvalues(&pt);
    Ok(ev.iter().map(|x| x.abs()).sum::<T>() - T::one())
}
