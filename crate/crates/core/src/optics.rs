//! Two-mode beam splitter, delocalized single photon, and photon-number
//! heralding on multi-mode Fock vectors.

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::linalg::CMatrix;
use crate::scalar::{binomial, factorial, re, Real};
use num_complex::Complex;
use serde::Serialize;

/// Lossless beam splitter with real transmission `t`; `r = √(1 − t²)` is
/// always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSplitterParams<T> {
    t: T,
}

impl<T: Real> BeamSplitterParams<T> {
    /// Any `t` strictly inside `(0, 1)`.
    pub fn new(t: T) -> Result<Self> {
        if !(t > T::zero() && t < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "transmission must lie in (0, 1), got {t}"
            )));
        }
        Ok(Self { t })
    }

    /// `t` restricted to `[1e-6, 1 − 1e-6]`, the domain used by experiments.
    pub fn validated(t: T) -> Result<Self> {
        let eps = T::lit(1e-6);
        if !(t >= eps && t <= T::one() - eps) {
            return Err(Error::InvalidParameter(format!(
                "transmission must lie in [1e-6, 1 - 1e-6], got {t}"
            )));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn r(&self) -> T {
        (T::one() - self.t * self.t).sqrt()
    }
}

/// `a0|01⟩₂₃ + a1|10⟩₂₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelocalizedPhoton<T> {
    pub a0: Complex<T>,
    pub a1: Complex<T>,
}

impl<T: Real> DelocalizedPhoton<T> {
    pub fn new(a0: Complex<T>, a1: Complex<T>) -> Result<Self> {
        let n = a0.norm_sqr() + a1.norm_sqr();
        if a0.norm() == T::zero() || a1.norm() == T::zero() {
            return Err(Error::InvalidParameter(
                "both delocalized-photon amplitudes must be nonzero".into(),
            ));
        }
        if (n - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::NotNormalized { norm: n.to_f64_lossy().sqrt() });
        }
        Ok(Self { a0, a1 })
    }

    /// Real amplitudes, renormalized.
    pub fn from_real(a0: T, a1: T) -> Result<Self> {
        let n = (a0 * a0 + a1 * a1).sqrt();
        if !(n > T::zero()) {
            return Err(Error::InvalidParameter("amplitudes vanish".into()));
        }
        Self::new(re(a0 / n), re(a1 / n))
    }

    pub fn balanced() -> Self {
        let h = re(T::FRAC_1_SQRT_2());
        Self { a0: h, a1: h }
    }
}

/// Probability of one detector outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldOutcome<T> {
    pub n: usize,
    pub probability: T,
}

/// Pure state of several truncated modes, row-major with the last mode
/// varying fastest. `dims[i]` is cutoff + 1 of mode `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeVector<T> {
    dims: Vec<usize>,
    amps: Vec<Complex<T>>,
}

impl<T: Real> MultiModeVector<T> {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex<T>>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || size != amps.len() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {} does not match mode dimensions {dims:?}",
                amps.len()
            )));
        }
        Ok(Self { dims, amps })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let size = dims.iter().product();
        Self {
            dims,
            amps: vec![Complex::new(T::zero(), T::zero()); size],
        }
    }

    /// Tensor product of single-mode vectors in the given order.
    pub fn product(modes: &[&FockVector<T>]) -> Self {
        let dims: Vec<usize> = modes.iter().map(|m| m.cutoff() + 1).collect();
        let mut amps = vec![re(T::one())];
        for m in modes {
            let mut next = Vec::with_capacity(amps.len() * m.amps().len());
            for a in &amps {
                for b in m.amps() {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn add_scaled(&mut self, other: &Self, s: Complex<T>) {
        assert_eq!(self.dims, other.dims, "mode dimensions differ");
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += b * s;
        }
    }

    fn strides(dims: &[usize]) -> Vec<usize> {
        let mut s = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    }

    pub fn get(&self, index: &[usize]) -> Complex<T> {
        let s = Self::strides(&self.dims);
        self.amps[index.iter().zip(&s).map(|(i, s)| i * s).sum::<usize>()]
    }

    /// Single-mode view when only one mode is left.
    pub fn into_fock(self) -> Result<FockVector<T>> {
        if self.dims.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "expected one mode, found {}",
                self.dims.len()
            )));
        }
        Ok(FockVector::new(self.amps))
    }
}

/// Two-mode pure state indexed `(n₁, n₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector<T> {
    amps: CMatrix<T>,
}

impl<T: Real> TwoModeVector<T> {
    pub fn from_matrix(amps: CMatrix<T>) -> Self {
        Self { amps }
    }

    pub fn zeros(cutoff1: usize, cutoff2: usize) -> Self {
        Self { amps: CMatrix::zeros(cutoff1 + 1, cutoff2 + 1) }
    }

    pub fn product(a: &FockVector<T>, b: &FockVector<T>) -> Self {
        Self {
            amps: CMatrix::from_fn(a.cutoff() + 1, b.cutoff() + 1, |i, j| a.amp(i) * b.amp(j)),
        }
    }

    pub fn basis(n1: usize, n2: usize, cutoff1: usize, cutoff2: usize) -> Result<Self> {
        if n1 > cutoff1 || n2 > cutoff2 {
            return Err(Error::OutOfRange { index: n1.max(n2), max: cutoff1.min(cutoff2) });
        }
        let mut v = Self::zeros(cutoff1, cutoff2);
        v.amps[(n1, n2)] = re(T::one());
        Ok(v)
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.amps.rows() - 1, self.amps.cols() - 1)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.amps
    }

    /// Amplitude of `|n₁, n₂⟩`; zero outside the stored box.
    pub fn amp(&self, n1: usize, n2: usize) -> Complex<T> {
        if n1 < self.amps.rows() && n2 < self.amps.cols() {
            self.amps[(n1, n2)]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }

    pub fn set(&mut self, n1: usize, n2: usize, value: Complex<T>) {
        self.amps[(n1, n2)] = value;
    }

    pub fn norm_sqr(&self) -> T {
        let (c1, c2) = self.cutoffs();
        let mut s = T::zero();
        for i in 0..=c1 {
            for j in 0..=c2 {
                s += self.amps[(i, j)].norm_sqr();
            }
        }
        s
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Largest elementwise difference, treating missing entries as zero.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let (a1, a2) = self.cutoffs();
        let (b1, b2) = other.cutoffs();
        let mut d = T::zero();
        for i in 0..=a1.max(b1) {
            for j in 0..=a2.max(b2) {
                d = d.max((self.amp(i, j) - other.amp(i, j)).norm());
            }
        }
        d
    }

    pub fn to_multimode(&self) -> MultiModeVector<T> {
        let (c1, c2) = self.cutoffs();
        let mut amps = Vec::with_capacity((c1 + 1) * (c2 + 1));
        for i in 0..=c1 {
            for j in 0..=c2 {
                amps.push(self.amps[(i, j)]);
            }
        }
        MultiModeVector { dims: vec![c1 + 1, c2 + 1], amps }
    }

    pub fn from_multimode(v: &MultiModeVector<T>) -> Result<Self> {
        if v.dims.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "expected two modes, found {}",
                v.dims.len()
            )));
        }
        let (d1, d2) = (v.dims[0], v.dims[1]);
        Ok(Self {
            amps: CMatrix::from_fn(d1, d2, |i, j| v.amps[i * d2 + j]),
        })
    }
}

/// Output columns `BS|k, j⟩` for `k ≤ max1`, `j ≤ max2`, each a real vector
/// over the mode-1 photon number `p` of the `N = k + j` block (mode 2 then
/// holds `N − p`). Built by the ladder recurrences
/// `BS|k, j⟩ = (t a₁† − r a₂†) BS|k−1, j⟩ / √k` and
/// `BS|0, j⟩ = (r a₁† + t a₂†) BS|0, j−1⟩ / √j`.
#[derive(Debug, Clone)]
pub struct BeamSplitterColumns<T> {
    t: T,
    columns: Vec<Vec<Vec<T>>>,
}

impl<T: Real> BeamSplitterColumns<T> {
    pub fn new(params: BeamSplitterParams<T>, max1: usize, max2: usize) -> Self {
        let t = params.t();
        let r = params.r();
        let sq = |x: usize| T::from_usize(x).sqrt();
        let mut columns: Vec<Vec<Vec<T>>> = Vec::with_capacity(max2 + 1);
        let mut base = vec![T::one()];
        for j in 0..=max2 {
            if j > 0 {
                let mut next = vec![T::zero(); j + 1];
                for (p, &v) in base.iter().enumerate() {
                    next[p + 1] += r * sq(p + 1) * v;
                    next[p] += t * sq(j - p) * v;
                }
                let inv = T::one() / sq(j);
                next.iter_mut().for_each(|x| *x *= inv);
                base = next;
            }
            let mut family = Vec::with_capacity(max1 + 1);
            family.push(base.clone());
            for k in 1..=max1 {
                let prev = &family[k - 1];
                let n = k + j;
                let mut next = vec![T::zero(); n + 1];
                for (p, &v) in prev.iter().enumerate() {
                    next[p + 1] += t * sq(p + 1) * v;
                    next[p] -= r * sq(n - p) * v;
                }
                let inv = T::one() / sq(k);
                next.iter_mut().for_each(|x| *x *= inv);
                family.push(next);
            }
            columns.push(family);
        }
        Self { t, columns }
    }

    pub fn t(&self) -> T {
        self.t
    }

    /// `⟨p, k + j − p| BS |k, j⟩` for `p = 0..=k+j`.
    pub fn column(&self, k: usize, j: usize) -> &[T] {
        &self.columns[j][k]
    }

    pub fn max_inputs(&self) -> (usize, usize) {
        (self.columns[0].len() - 1, self.columns.len() - 1)
    }
}

/// Applies the beam splitter to modes `i` and `j` of a multi-mode vector.
/// Both output modes get cutoff `cᵢ + cⱼ`, so no population is lost.
pub fn bs_apply_modes<T: Real>(
    state: &MultiModeVector<T>,
    i: usize,
    j: usize,
    columns: &BeamSplitterColumns<T>,
) -> Result<MultiModeVector<T>> {
    let m = state.dims.len();
    if i >= m || j >= m || i == j {
        return Err(Error::InvalidParameter(format!(
            "invalid mode pair ({i}, {j}) for {m} modes"
        )));
    }
    let (ci, cj) = (state.dims[i] - 1, state.dims[j] - 1);
    let (m1, m2) = columns.max_inputs();
    if ci > m1 || cj > m2 {
        return Err(Error::TruncationInadequate {
            cutoff: m1.min(m2),
            required: ci.max(cj),
            context: "beam-splitter column table too small".into(),
        });
    }
    let total = ci + cj;
    let mut out_dims = state.dims.clone();
    out_dims[i] = total + 1;
    out_dims[j] = total + 1;
    let in_strides = MultiModeVector::<T>::strides(&state.dims);
    let out_strides = MultiModeVector::<T>::strides(&out_dims);
    let mut out = MultiModeVector::zeros(out_dims);
    let mut idx = vec![0usize; m];
    for (flat, a) in state.amps.iter().enumerate() {
        if a.norm_sqr() == T::zero() {
            continue;
        }
        let mut rem = flat;
        for (d, s) in idx.iter_mut().zip(&in_strides) {
            *d = rem / s;
            rem %= s;
        }
        let (k, q) = (idx[i], idx[j]);
        let mut base = 0;
        for (d, (&v, s)) in idx.iter().zip(&out_strides).enumerate() {
            if d != i && d != j {
                base += v * s;
            }
        }
        let n = k + q;
        for (p, &c) in columns.column(k, q).iter().enumerate() {
            let o = base + p * out_strides[i] + (n - p) * out_strides[j];
            out.amps[o] += a * re(c);
        }
    }
    Ok(out)
}

/// Beam splitter on a two-mode state. The output box has both cutoffs
/// equal to `c₁ + c₂`, holding the full photon-number-conserving image.
pub fn bs_apply<T: Real>(state: &TwoModeVector<T>, params: BeamSplitterParams<T>) -> Result<TwoModeVector<T>> {
    let (c1, c2) = state.cutoffs();
    let cols = BeamSplitterColumns::new(params, c1, c2);
    TwoModeVector::from_multimode(&bs_apply_modes(&state.to_multimode(), 0, 1, &cols)?)
}

/// Beam splitter followed by truncation to the given output cutoffs;
/// fails when more than 1e-10 of the population would be discarded.
pub fn bs_apply_truncated<T: Real>(
    state: &TwoModeVector<T>,
    params: BeamSplitterParams<T>,
    cutoff1: usize,
    cutoff2: usize,
) -> Result<TwoModeVector<T>> {
    let full = bs_apply(state, params)?;
    let kept = TwoModeVector::from_matrix(CMatrix::from_fn(cutoff1 + 1, cutoff2 + 1, |a, b| full.amp(a, b)));
    let lost = full.norm_sqr() - kept.norm_sqr();
    if lost > T::tol(1e-10) {
        return Err(Error::TruncationOverflow { mass: lost.to_f64_lossy() });
    }
    Ok(kept)
}

/// State of the second beam-splitter input port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondMode {
    Vacuum,
    SinglePhoton,
}

/// `BS|l⟩|0⟩` or `BS|l⟩|1⟩` from the explicit binomial sums.
pub fn bs_fock_closed<T: Real>(l: usize, second: SecondMode, params: BeamSplitterParams<T>) -> TwoModeVector<T> {
    bs_fock_sum(l, second, params, true)
}

/// Same sums with the single-photon amplitudes missing the overall `√(l!)`,
/// as they circulate in print. Kept for the typo ledger.
pub fn bs_fock_printed<T: Real>(l: usize, second: SecondMode, params: BeamSplitterParams<T>) -> TwoModeVector<T> {
    bs_fock_sum(l, second, params, false)
}

fn bs_fock_sum<T: Real>(l: usize, second: SecondMode, params: BeamSplitterParams<T>, with_lfact: bool) -> TwoModeVector<T> {
    let (t, r) = (params.t(), params.r());
    let mut v = TwoModeVector::zeros(l + 1, l + 1);
    match second {
        SecondMode::Vacuum => {
            for k in 0..=l {
                let a = T::sign_pow(k as i64) * t.powi((l - k) as i32) * r.powi(k as i32) * binomial::<T>(l, k).sqrt();
                v.set(l - k, k, re(a));
            }
        }
        SecondMode::SinglePhoton => {
            v.set(l + 1, 0, re(T::from_usize(l + 1).sqrt() * t.powi(l as i32) * r));
            let lf = if with_lfact { factorial::<T>(l) } else { T::one() };
            for k in 0..=l {
                let lk = l - k;
                // t^(l-k-1)·(t² − (l−k)/(k+1)·r²), kept free of negative powers
                let bracket = t.powi(lk as i32 + 1)
                    - if lk > 0 {
                        T::from_usize(lk) / T::from_usize(k + 1) * r * r * t.powi(lk as i32 - 1)
                    } else {
                        T::zero()
                    };
                let a = T::sign_pow(k as i64) * r.powi(k as i32) / factorial::<T>(k)
                    * (lf * factorial::<T>(k + 1) / factorial::<T>(lk)).sqrt()
                    * bracket;
                v.set(lk, k + 1, re(a));
            }
        }
    }
    v
}

/// Unnormalized block of `state` with mode `mode` projected onto `|n⟩`.
pub fn project_mode<T: Real>(state: &MultiModeVector<T>, mode: usize, n: usize) -> Result<MultiModeVector<T>> {
    if mode >= state.dims.len() {
        return Err(Error::InvalidParameter(format!("no mode {mode}")));
    }
    if n >= state.dims[mode] {
        return Err(Error::OutOfRange { index: n, max: state.dims[mode] - 1 });
    }
    if state.dims.len() == 1 {
        return Ok(MultiModeVector { dims: vec![1], amps: vec![state.amps[n]] });
    }
    let strides = MultiModeVector::<T>::strides(&state.dims);
    let mut dims = state.dims.clone();
    dims.remove(mode);
    let outer: usize = state.dims[..mode].iter().product();
    let inner = strides[mode];
    let mut amps = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        let start = o * state.dims[mode] * inner + n * inner;
        amps.extend_from_slice(&state.amps[start..start + inner]);
    }
    Ok(MultiModeVector { dims, amps })
}

/// Projects mode `mode` onto `|n⟩`. Returns the renormalized remaining
/// state and the outcome probability (the block's squared norm, for a
/// normalized input).
pub fn herald<T: Real>(state: &MultiModeVector<T>, mode: usize, n: usize) -> Result<(MultiModeVector<T>, T)> {
    let mut block = project_mode(state, mode, n)?;
    let p = block.norm_sqr();
    if p < T::lit(1e-14) {
        return Err(Error::EmptyOutcome { n, probability: p.to_f64_lossy() });
    }
    let inv = re(T::one() / p.sqrt());
    block.amps.iter_mut().for_each(|a| *a = *a * inv);
    Ok((block, p))
}

/// Probability of each photon number in mode `mode`.
pub fn outcome_distribution<T: Real>(state: &MultiModeVector<T>, mode: usize) -> Result<Vec<HeraldOutcome<T>>> {
    if mode >= state.dims.len() {
        return Err(Error::InvalidParameter(format!("no mode {mode}")));
    }
    (0..state.dims[mode])
        .map(|n| {
            Ok(HeraldOutcome {
                n,
                probability: project_mode(state, mode, n)?.norm_sqr(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(t: f64) -> BeamSplitterParams<f64> {
        BeamSplitterParams::new(t).unwrap()
    }

    #[test]
    fn reflection_is_derived() {
        let p = bs(0.6);
        assert!((p.r() - 0.8).abs() < 1e-15);
        assert!(BeamSplitterParams::new(1.0).is_err());
        assert!(BeamSplitterParams::validated(1e-7).is_err());
    }

    #[test]
    fn single_photon_in_first_port() {
        let p = bs(0.3);
        let out = bs_apply(&TwoModeVector::basis(1, 0, 1, 0).unwrap(), p).unwrap();
        assert!((out.amp(1, 0).re - 0.3).abs() < 1e-15);
        assert!((out.amp(0, 1).re + p.r()).abs() < 1e-15);
    }

    #[test]
    fn single_photon_in_second_port() {
        let p = bs(0.3);
        let out = bs_apply(&TwoModeVector::basis(0, 1, 0, 1).unwrap(), p).unwrap();
        assert!((out.amp(1, 0).re - p.r()).abs() < 1e-15);
        assert!((out.amp(0, 1).re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn transparent_limit_is_identity() {
        let a = FockVector::from_real(&[0.6, 0.0, 0.8]);
        let b = FockVector::from_real(&[0.0, 1.0]);
        let v = TwoModeVector::product(&a, &b);
        // deviation is first order in r = sqrt(1 - t^2)
        let p = bs(1.0 - 1e-12);
        let out = bs_apply(&v, p).unwrap();
        assert!(out.max_abs_diff(&v) < 4.0 * p.r());
        let p = bs(1.0 - 1e-6);
        assert!(bs_apply(&v, p).unwrap().max_abs_diff(&v) < 4.0 * p.r());
    }

    #[test]
    fn closed_forms_small_cases() {
        let p = bs(0.4);
        let v = bs_fock_closed(2, SecondMode::Vacuum, p);
        assert!((v.amp(1, 1).re + 2f64.sqrt() * 0.4 * p.r()).abs() < 1e-15);
        let v = bs_fock_closed(0, SecondMode::Vacuum, p);
        assert_eq!(v.amp(0, 0).re, 1.0);
        let v = bs_fock_closed(1, SecondMode::SinglePhoton, p);
        assert!((v.amp(2, 0).re - 2f64.sqrt() * 0.4 * p.r()).abs() < 1e-15);
    }

    #[test]
    fn truncated_output_reports_overflow() {
        let v = TwoModeVector::basis(4, 0, 4, 0).unwrap();
        let err = bs_apply_truncated(&v, bs(0.5), 4, 1).unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow { .. }));
        assert!(bs_apply_truncated(&v, bs(0.5), 4, 4).is_ok());
    }

    #[test]
    fn herald_product_state() {
        let psi = FockVector::from_real(&[0.6, 0.8]);
        let two = FockVector::<f64>::basis(2, 3).unwrap();
        let v = MultiModeVector::product(&[&psi, &two]);
        let (red, p) = herald(&v, 1, 2).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!(red.into_fock().unwrap().max_abs_diff(&psi) < 1e-15);
    }

    #[test]
    fn herald_errors() {
        let v = bs_apply(&TwoModeVector::basis(2, 0, 2, 2).unwrap(), bs(0.5)).unwrap().to_multimode();
        assert!(matches!(herald(&v, 1, 3).unwrap_err(), Error::EmptyOutcome { n: 3, .. }));
        assert!(matches!(herald(&v, 1, 9).unwrap_err(), Error::OutOfRange { .. }));
    }

    #[test]
    fn delocalized_photon_validation() {
        assert!(DelocalizedPhoton::<f64>::from_real(1.0, 0.0).is_err());
        assert!(DelocalizedPhoton::new(Complex::new(0.6, 0.0), Complex::new(0.6, 0.0)).is_err());
        let d = DelocalizedPhoton::<f64>::balanced();
        assert!((d.a0.norm_sqr() + d.a1.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
