//! Truncated single-mode Fock space: state vectors, ladder operators,
//! displacement operators and displaced-number-state coefficients.
//!
//! Three independent routes to displacement matrix elements live here:
//! [`displacement_matrix`] (matrix exponential on the truncated space),
//! [`displaced_fock_coeff`] (associated-Laguerre closed form) and
//! [`displacement_block`] (exact column recurrence). Tests pit them against
//! each other.

use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix};
use crate::scalar::{re, Real};
use num_complex::Complex;
use serde::Serialize;

/// Parity of a photon-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn contains(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

/// How many photon numbers to retain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cutoff {
    #[default]
    Auto,
    Fixed(usize),
}

/// Cutoff keeping coherent-state tails negligible for a displacement of
/// modulus `beta_abs` applied to `|l⟩`.
pub fn auto_cutoff(beta_abs: f64, l: usize) -> usize {
    let want = (beta_abs + 3.0).powi(2) + l as f64 + 10.0;
    24.max(want.ceil() as usize)
}

/// Smallest cutoff [`displacement_matrix`] accepts for amplitude `alpha_abs`.
pub fn displacement_min_cutoff(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0).ceil() as usize
}

impl Cutoff {
    pub fn resolve(self, beta_abs: f64, l: usize) -> usize {
        match self {
            Cutoff::Auto => auto_cutoff(beta_abs, l),
            Cutoff::Fixed(c) => c,
        }
    }
}

/// Pure single-mode state over photon numbers `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    /// Panics on an empty amplitude list.
    pub fn new(amps: Vec<Complex<T>>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector holds at least |0⟩");
        Self { amps }
    }

    pub fn from_real(amps: &[T]) -> Self {
        Self::new(amps.iter().map(|&a| re(a)).collect())
    }

    pub fn zeros(cutoff: usize) -> Self {
        Self::new(vec![Complex::new(T::zero(), T::zero()); cutoff + 1])
    }

    /// Number state `|n⟩`.
    pub fn basis(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::OutOfRange {
                index: n,
                max: cutoff,
            });
        }
        let mut v = Self::zeros(cutoff);
        v.amps[n] = re(T::one());
        Ok(v)
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex<T>> {
        self.amps
    }

    /// Amplitude of `|n⟩`, zero beyond the cutoff.
    pub fn amp(&self, n: usize) -> Complex<T> {
        self.amps
            .get(n)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self::new(self.amps.iter().map(|a| a * s).collect())
    }

    /// Unit-norm copy; a vanishing vector is a [`Error::DegenerateState`].
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::DegenerateState(format!(
                "cannot normalize a vector of norm {}",
                n
            )));
        }
        Ok(self.scaled(re(T::one() / n)))
    }

    /// `⟨self|other⟩`, treating missing entries as zero.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
    }

    /// Elementwise sum, padding the shorter vector.
    pub fn add(&self, other: &Self) -> Self {
        let c = self.cutoff().max(other.cutoff());
        Self::new((0..=c).map(|n| self.amp(n) + other.amp(n)).collect())
    }

    /// Largest elementwise modulus of the difference, padding with zeros.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let c = self.cutoff().max(other.cutoff());
        (0..=c)
            .map(|n| (self.amp(n) - other.amp(n)).norm())
            .fold(T::zero(), T::max)
    }

    /// Population of the two highest retained photon numbers.
    pub fn tail_mass(&self) -> T {
        let c = self.cutoff();
        let top = self.amps[c].norm_sqr();
        if c == 0 {
            top
        } else {
            top + self.amps[c - 1].norm_sqr()
        }
    }

    /// Population of the given parity sector.
    pub fn sector_mass(&self, parity: Parity) -> T {
        self.amps
            .iter()
            .enumerate()
            .filter(|(n, _)| parity.contains(*n))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Parity of the support, if the opposite sector's population is below `tol`.
    pub fn parity(&self, tol: T) -> Option<Parity> {
        let even = self.sector_mass(Parity::Even);
        let odd = self.sector_mass(Parity::Odd);
        if odd <= tol && even > tol {
            Some(Parity::Even)
        } else if even <= tol && odd > tol {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    /// Copy with a different cutoff, zero-padding or dropping the top.
    pub fn resized(&self, cutoff: usize) -> Self {
        Self::new((0..=cutoff).map(|n| self.amp(n)).collect())
    }

    /// Multiplies by the global phase making the largest-modulus amplitude
    /// real and positive (first such index wins ties).
    pub fn with_phase_convention(&self) -> Self {
        let mut best = 0;
        for (n, a) in self.amps.iter().enumerate() {
            if a.norm() > self.amps[best].norm() * (T::one() + T::lit(1e-12)) {
                best = n;
            }
        }
        let a = self.amps[best];
        if a.norm() == T::zero() {
            return self.clone();
        }
        self.scaled(a.conj() / re(a.norm()))
    }
}

/// Square operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    entries: CMatrix<T>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn from_entries(entries: CMatrix<T>) -> Self {
        assert!(entries.is_square(), "operators are square");
        Self { entries }
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.entries.rows() - 1
    }

    pub fn apply(&self, v: &FockVector<T>) -> FockVector<T> {
        assert_eq!(v.cutoff(), self.cutoff(), "operator/state cutoff mismatch");
        FockVector::new(self.entries.matvec(v.amps()))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.entries.adjoint())
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self::from_entries(self.entries.matmul(&rhs.entries))
    }
}

/// The basic operators of a truncated mode.
#[derive(Debug, Clone)]
pub struct LadderOperators<T> {
    pub annihilation: OperatorMatrix<T>,
    pub creation: OperatorMatrix<T>,
    pub number: OperatorMatrix<T>,
    pub parity: OperatorMatrix<T>,
}

pub fn operator_matrices<T: Real>(cutoff: usize) -> Result<LadderOperators<T>> {
    if cutoff == 0 {
        return Err(Error::InvalidParameter(
            "operator matrices need cutoff >= 1".into(),
        ));
    }
    let dim = cutoff + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let annihilation = CMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            re(T::from_usize(j).sqrt())
        } else {
            zero
        }
    });
    let creation = annihilation.adjoint();
    let number = CMatrix::from_fn(dim, dim, |i, j| if i == j { re(T::from_usize(i)) } else { zero });
    let parity = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            re(T::sign_pow(i as i64))
        } else {
            zero
        }
    });
    Ok(LadderOperators {
        annihilation: OperatorMatrix::from_entries(annihilation),
        creation: OperatorMatrix::from_entries(creation),
        number: OperatorMatrix::from_entries(number),
        parity: OperatorMatrix::from_entries(parity),
    })
}

/// `D(α) = exp(α a† − α* a)` exponentiated on the truncated space.
///
/// Entries are accurate only well inside the cutoff; the inadequacy check
/// rejects cutoffs below `|α|² + 6|α| + 10`.
pub fn displacement_matrix<T: Real>(alpha: Complex<T>, cutoff: usize) -> Result<OperatorMatrix<T>> {
    let required = displacement_min_cutoff(alpha.norm().to_f64_lossy());
    if cutoff < required {
        return Err(Error::TruncationInadequate {
            cutoff,
            required,
            context: format!("displacement by |α| = {}", alpha.norm()),
        });
    }
    let ops = operator_matrices::<T>(cutoff)?;
    let generator = ops
        .creation
        .entries()
        .scale(alpha)
        .sub(&ops.annihilation.entries().scale(alpha.conj()));
    Ok(OperatorMatrix::from_entries(expm(&generator)))
}

/// Associated Laguerre polynomial `L_n^(k)(x)` by the three-term recurrence in degree.
pub fn laguerre<T: Real>(n: usize, k: usize, x: T) -> T {
    let a = T::from_usize(k);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() + a - x;
    for j in 1..n {
        let jf = T::from_usize(j);
        let next = ((T::lit(2.0) * jf + T::one() + a - x) * cur - (jf + a) * prev) / (jf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `c_n^(l)(α) = exp(|α|²/2) ⟨n|D(α)|l⟩`.
///
/// Closed form via associated Laguerre polynomials, so that
/// `D(α)|l⟩ = exp(−|α|²/2) Σ_n c_n^(l)(α) |n⟩`. Flipping the sign of `α`
/// multiplies the coefficient by `(−1)^(n−l)` exactly.
pub fn displaced_fock_coeff<T: Real>(l: usize, n: usize, alpha: Complex<T>) -> Complex<T> {
    let x = alpha.norm_sqr();
    if n >= l {
        let mut pref = re(T::one());
        for j in l + 1..=n {
            pref = pref * alpha / re(T::from_usize(j).sqrt());
        }
        pref * re(laguerre(l, n - l, x))
    } else {
        let step = -alpha.conj();
        let mut pref = re(T::one());
        for j in n + 1..=l {
            pref = pref * step / re(T::from_usize(j).sqrt());
        }
        pref * re(laguerre(n, l - n, x))
    }
}

/// `F(α) = exp(−|α|²/2)`, the coherent-state normalization.
pub fn coherent_norm<T: Real>(alpha_abs: T) -> T {
    (-(alpha_abs * alpha_abs) / T::lit(2.0)).exp()
}

/// Exact matrix elements `⟨m|D(α)|n⟩` for `m < rows`, `n < cols`.
///
/// Column 0 is the coherent state; later columns follow from
/// `D a† = (a† − α*) D`. No truncation error enters, unlike
/// [`displacement_matrix`].
pub fn displacement_block<T: Real>(alpha: Complex<T>, rows: usize, cols: usize) -> CMatrix<T> {
    let mut d = CMatrix::zeros(rows, cols);
    if rows == 0 || cols == 0 {
        return d;
    }
    let mut amp = re(coherent_norm(alpha.norm()));
    for m in 0..rows {
        if m > 0 {
            amp = amp * alpha / re(T::from_usize(m).sqrt());
        }
        d[(m, 0)] = amp;
    }
    let ac = alpha.conj();
    for n in 0..cols - 1 {
        let inv = re(T::one() / T::from_usize(n + 1).sqrt());
        for m in 0..rows {
            let up = if m > 0 {
                d[(m - 1, n)] * re(T::from_usize(m).sqrt())
            } else {
                Complex::new(T::zero(), T::zero())
            };
            d[(m, n + 1)] = (up - ac * d[(m, n)]) * inv;
        }
    }
    d
}

/// `D(α)|l⟩` truncated at `cutoff`, built from [`displaced_fock_coeff`].
pub fn displaced_number_state<T: Real>(l: usize, alpha: Complex<T>, cutoff: usize) -> FockVector<T> {
    let f = re(coherent_norm(alpha.norm()));
    FockVector::new(
        (0..=cutoff)
            .map(|n| f * displaced_fock_coeff(l, n, alpha))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn annihilation_lowers_one_photon() {
        let ops = operator_matrices::<f64>(5).unwrap();
        let one = FockVector::basis(1, 5).unwrap();
        let out = ops.annihilation.apply(&one);
        assert!(out.max_abs_diff(&FockVector::basis(0, 5).unwrap()) < 1e-15);
    }

    #[test]
    fn number_and_parity_diagonals() {
        let ops = operator_matrices::<f64>(6).unwrap();
        for n in 0..=6 {
            assert_eq!(ops.number.entries()[(n, n)], c(n as f64));
            assert_eq!(ops.parity.entries()[(n, n)], c(if n % 2 == 0 { 1.0 } else { -1.0 }));
        }
    }

    #[test]
    fn commutator_has_truncation_corner() {
        let cutoff = 7;
        let ops = operator_matrices::<f64>(cutoff).unwrap();
        let comm = ops
            .annihilation
            .compose(&ops.creation)
            .entries()
            .sub(ops.creation.compose(&ops.annihilation).entries());
        for i in 0..=cutoff {
            for j in 0..=cutoff {
                let want = match (i == j, i == cutoff) {
                    (true, true) => -(cutoff as f64),
                    (true, false) => 1.0,
                    _ => 0.0,
                };
                assert!((comm[(i, j)] - c(want)).norm() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn cutoff_zero_rejected() {
        assert!(operator_matrices::<f64>(0).is_err());
    }

    #[test]
    fn displacement_at_zero_is_identity() {
        let d = displacement_matrix(c(0.0), 12).unwrap();
        assert!(d.entries().max_abs_diff(&CMatrix::identity(13)) < 1e-15);
    }

    #[test]
    fn inadequate_cutoff_rejected() {
        let err = displacement_matrix(c(2.0), 20).unwrap_err();
        assert!(matches!(err, Error::TruncationInadequate { required: 26, .. }));
    }

    #[test]
    fn displacement_unitary_on_low_block() {
        let d = displacement_matrix(c(2.0), 60).unwrap();
        let dd = d.adjoint().compose(&d);
        assert!(dd.entries().max_abs_diff_block(&CMatrix::identity(61), 31) < 1e-10);
    }

    #[test]
    fn coefficient_examples() {
        assert!((displaced_fock_coeff(0, 2, c(1.0)) - c(0.5f64.sqrt())).norm() < 1e-15);
        assert_eq!(displaced_fock_coeff(2, 2, c(0.0)), c(1.0));
        assert_eq!(displaced_fock_coeff(2, 3, c(0.0)), c(0.0));
        let a = c(0.7);
        let flipped = displaced_fock_coeff(1, 3, -a);
        assert_eq!(flipped, displaced_fock_coeff(1, 3, a) * c(1.0));
    }

    #[test]
    fn laguerre_low_orders() {
        let x = 0.37;
        assert!((laguerre::<f64>(1, 2, x) - (3.0 - x)).abs() < 1e-15);
        assert!((laguerre::<f64>(2, 0, x) - (x * x - 4.0 * x + 2.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn phase_convention_makes_peak_positive() {
        let v = FockVector::new(vec![Complex64::new(0.0, 0.1), Complex64::new(0.0, -0.9)]);
        let w = v.with_phase_convention();
        assert!((w.amp(1) - c(0.9)).norm() < 1e-15);
        assert!((w.amp(0) - c(-0.1)).norm() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let v = displaced_fock_coeff::<f32>(1, 4, Complex::new(0.8, 0.0));
        let w = displaced_fock_coeff::<f64>(1, 4, c(0.8));
        assert!((v.re as f64 - w.re).abs() < 1e-5);
    }
}
