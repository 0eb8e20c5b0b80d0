//! Source-state family: superpositions of displaced number states with
//! opposite displacements, their finite superpositions and truncations,
//! squeezed vacuum, and photon-number statistics.

use crate::error::{Error, Result};
use crate::fock::{coherent_norm, displaced_fock_coeff, displaced_number_state, Cutoff, FockVector, Parity};
use crate::scalar::{re, Real};
use num_complex::Complex;
use serde::Serialize;

/// The `±` label of a source state: `Plus` states live on even photon
/// numbers, `Minus` states on odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParitySign {
    Plus,
    Minus,
}

impl ParitySign {
    pub fn parity(self) -> Parity {
        match self {
            ParitySign::Plus => Parity::Even,
            ParitySign::Minus => Parity::Odd,
        }
    }

    pub fn from_parity(p: Parity) -> Self {
        match p {
            Parity::Even => ParitySign::Plus,
            Parity::Odd => ParitySign::Minus,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            ParitySign::Plus => ParitySign::Minus,
            ParitySign::Minus => ParitySign::Plus,
        }
    }

    pub fn value<T: Real>(self) -> T {
        match self {
            ParitySign::Plus => T::one(),
            ParitySign::Minus => -T::one(),
        }
    }

    /// Sign label reached after heralding `n` photons out of a source with this label.
    pub fn after_outcome(self, n: usize) -> Self {
        if n % 2 == 0 {
            self
        } else {
            self.flip()
        }
    }
}

/// `|Ω±^(l)(β)⟩ = N (D(−β)|l⟩ ± (−1)^l D(β)|l⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdlpsSpec<T> {
    pub l: usize,
    pub sign: ParitySign,
    pub beta: T,
}

impl<T: Real> SdlpsSpec<T> {
    /// Accepts `β ≥ 0`; the builder reports cancellation at `β = 0` as a
    /// degenerate state.
    pub fn new(l: usize, sign: ParitySign, beta: T) -> Result<Self> {
        if !beta.is_finite() || beta < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "displacement amplitude must be finite and non-negative, got {beta}"
            )));
        }
        Ok(Self { l, sign, beta })
    }

    /// True when the two branches cancel as `β → 0`.
    pub fn cancels_at_origin(&self) -> bool {
        let branch_sign = self.sign.value::<T>() * T::sign_pow(self.l as i64);
        branch_sign < T::zero()
    }
}

/// Finite superposition `Σ_k b^(k) |Ω±^(k)⟩`, renormalized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperpositionSpec<T> {
    pub sign: ParitySign,
    pub beta: T,
    pub b: Vec<T>,
}

impl<T: Real> SuperpositionSpec<T> {
    pub fn new(sign: ParitySign, beta: T, b: Vec<T>) -> Result<Self> {
        if !beta.is_finite() || beta < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "displacement amplitude must be finite and non-negative, got {beta}"
            )));
        }
        if b.iter().all(|x| *x == T::zero()) {
            return Err(Error::InvalidParameter(
                "superposition needs at least one nonzero coefficient".into(),
            ));
        }
        Ok(Self { sign, beta, b })
    }

    pub fn max_l(&self) -> usize {
        self.b.len() - 1
    }
}

/// Single-mode squeezed vacuum with squeezing parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmsvSpec<T> {
    pub squeeze: T,
}

impl<T: Real> SmsvSpec<T> {
    pub fn new(squeeze: T) -> Result<Self> {
        if !(squeeze >= T::zero() && squeeze < T::lit(2.0)) {
            return Err(Error::InvalidParameter(format!(
                "squeezing parameter must lie in [0, 2), got {squeeze}"
            )));
        }
        Ok(Self { squeeze })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonStats<T> {
    pub mean: T,
    pub variance: T,
    pub fano: T,
}

/// Normalization factor `N±^(l)(β) = (2(1 ± (−1)^l F(2β) c_l^(l)(2β)))^(−1/2)`.
pub fn normalization_factor<T: Real>(l: usize, sign: ParitySign, beta: T) -> Result<T> {
    let two_beta = T::lit(2.0) * beta;
    let overlap = coherent_norm(two_beta) * displaced_fock_coeff(l, l, re(two_beta)).re;
    let bracket = T::lit(2.0) * (T::one() + sign.value::<T>() * T::sign_pow(l as i64) * overlap);
    if !(bracket > T::lit(1e-300).max(T::min_positive_value())) {
        return Err(Error::DegenerateState(format!(
            "|Ω^({l})⟩ with sign {sign:?} vanishes at β = {beta}"
        )));
    }
    Ok(T::one() / bracket.sqrt())
}

/// `D(−β)|l⟩ ± (−1)^l D(β)|l⟩` before normalization.
fn sdlps_unnormalized<T: Real>(spec: &SdlpsSpec<T>, cutoff: usize) -> FockVector<T> {
    let beta = re(spec.beta);
    let left = displaced_number_state(spec.l, -beta, cutoff);
    let right = displaced_number_state(spec.l, beta, cutoff);
    let s = spec.sign.value::<T>() * T::sign_pow(spec.l as i64);
    let amps = left
        .amps()
        .iter()
        .zip(right.amps())
        .enumerate()
        .map(|(n, (a, b))| {
            // the two branches cancel exactly on the wrong-parity sector
            if spec.sign.parity().contains(n) {
                a + b * re(s)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect();
    FockVector::new(amps)
}

/// The state exactly as defined, without the phase convention: the
/// normalized two-branch sum with `N > 0`.
pub fn sdlps_paper_phase<T: Real>(spec: &SdlpsSpec<T>, cutoff: Cutoff) -> Result<FockVector<T>> {
    let c = cutoff.resolve(spec.beta.to_f64_lossy(), spec.l);
    let raw = sdlps_unnormalized(spec, c);
    let norm = raw.norm();
    if norm < T::lit(1e-8) || (spec.beta < T::lit(1e-6) && spec.cancels_at_origin()) {
        return Err(Error::DegenerateState(format!(
            "branches of |Ω^({})⟩ ({:?}) cancel at β = {}",
            spec.l, spec.sign, spec.beta
        )));
    }
    Ok(raw.scaled(re(T::one() / norm)))
}

/// Normalized `|Ω±^(l)(β)⟩` with the largest amplitude real and positive.
pub fn build_sdlps<T: Real>(spec: &SdlpsSpec<T>, cutoff: Cutoff) -> Result<FockVector<T>> {
    Ok(sdlps_paper_phase(spec, cutoff)?.with_phase_convention())
}

/// Norm of `D(−β)|l⟩ ± (−1)^l D(β)|l⟩` computed numerically.
pub fn sdlps_branch_norm<T: Real>(spec: &SdlpsSpec<T>, cutoff: Cutoff) -> T {
    let c = cutoff.resolve(spec.beta.to_f64_lossy(), spec.l);
    sdlps_unnormalized(spec, c).norm()
}

/// Truncated version keeping the `l + 1` lowest photon numbers of the
/// state's parity, renormalized, with the paper-phase sign of the full state.
pub fn truncated_sdlps_paper_phase<T: Real>(spec: &SdlpsSpec<T>, cutoff: Cutoff) -> Result<FockVector<T>> {
    let full = sdlps_paper_phase(spec, cutoff)?;
    let top = 2 * spec.l + usize::from(spec.sign == ParitySign::Minus);
    let kept = FockVector::new(
        full.amps()
            .iter()
            .enumerate()
            .map(|(n, a)| if n <= top { *a } else { Complex::new(T::zero(), T::zero()) })
            .collect(),
    );
    kept.normalized()
}

/// `⟨Ω±^(k)|Ω±^(m)⟩ = 2 N^(k) N^(m) (δ_km ± (−1)^m F(2β) c_k^(m)(2β))`.
pub fn analytic_overlap<T: Real>(k: usize, m: usize, sign: ParitySign, beta: T) -> Result<T> {
    let nk = normalization_factor(k, sign, beta)?;
    let nm = normalization_factor(m, sign, beta)?;
    let two_beta = T::lit(2.0) * beta;
    let delta = if k == m { T::one() } else { T::zero() };
    let cross = coherent_norm(two_beta) * displaced_fock_coeff(m, k, re(two_beta)).re;
    Ok(T::lit(2.0) * nk * nm * (delta + sign.value::<T>() * T::sign_pow(m as i64) * cross))
}

/// Overlap between states of possibly different sign labels; opposite
/// labels have disjoint Fock support and are orthogonal.
pub fn analytic_overlap_mixed<T: Real>(
    k: usize,
    sign_k: ParitySign,
    m: usize,
    sign_m: ParitySign,
    beta: T,
) -> Result<T> {
    if sign_k != sign_m {
        return Ok(T::zero());
    }
    analytic_overlap(k, m, sign_k, beta)
}

/// Gram matrix `⟨Ω^(p)|Ω^(q)⟩` over `p, q < size`.
pub fn gram_matrix<T: Real>(size: usize, sign: ParitySign, beta: T) -> Result<Vec<Vec<T>>> {
    let mut g = vec![vec![T::zero(); size]; size];
    for p in 0..size {
        for q in 0..size {
            g[p][q] = analytic_overlap(p, q, sign, beta)?;
        }
    }
    Ok(g)
}

/// `(cᵀ G c)^(−1/2)` for real coefficients over the `|Ω^(p)⟩` set.
pub fn gram_normalization<T: Real>(coeffs: &[T], sign: ParitySign, beta: T) -> Result<T> {
    let g = gram_matrix(coeffs.len(), sign, beta)?;
    let mut q = T::zero();
    for (p, row) in g.iter().enumerate() {
        for (r, gpr) in row.iter().enumerate() {
            q += coeffs[p] * *gpr * coeffs[r];
        }
    }
    if !(q > T::zero()) {
        return Err(Error::DegenerateState("superposition has zero norm".into()));
    }
    Ok(T::one() / q.sqrt())
}

/// A built superposition, plus the fidelity to the untruncated state when
/// the truncated variant was requested.
#[derive(Debug, Clone)]
pub struct SuperpositionState<T> {
    pub state: FockVector<T>,
    pub truncation_fidelity: Option<T>,
}

fn superposition_paper_phase<T: Real>(
    spec: &SuperpositionSpec<T>,
    cutoff: usize,
    truncated: bool,
) -> Result<FockVector<T>> {
    let mut acc = FockVector::zeros(cutoff);
    for (k, &bk) in spec.b.iter().enumerate() {
        if bk == T::zero() {
            continue;
        }
        let term_spec = SdlpsSpec::new(k, spec.sign, spec.beta)?;
        let term = if truncated {
            truncated_sdlps_paper_phase(&term_spec, Cutoff::Fixed(cutoff))?
        } else {
            sdlps_paper_phase(&term_spec, Cutoff::Fixed(cutoff))?
        };
        acc = acc.add(&term.scaled(re(bk)));
    }
    if acc.norm() < T::lit(1e-8) {
        return Err(Error::DegenerateState(
            "superposition terms cancel to a zero vector".into(),
        ));
    }
    acc.normalized()
}

/// Normalized `Σ_k b^(k)|Ω±^(k)⟩`, normalization taken from the numeric
/// vector. With `truncated`, each term is replaced by its truncated version.
pub fn build_superposition<T: Real>(
    spec: &SuperpositionSpec<T>,
    cutoff: Cutoff,
    truncated: bool,
) -> Result<SuperpositionState<T>> {
    let c = cutoff.resolve(spec.beta.to_f64_lossy(), spec.max_l());
    let full = superposition_paper_phase(spec, c, false)?;
    if !truncated {
        return Ok(SuperpositionState {
            state: full.with_phase_convention(),
            truncation_fidelity: None,
        });
    }
    let trunc = superposition_paper_phase(spec, c, true)?;
    let fidelity = full.inner(&trunc).norm_sqr();
    Ok(SuperpositionState {
        state: trunc.with_phase_convention(),
        truncation_fidelity: Some(fidelity),
    })
}

/// Paper-phase superposition (no phase convention), used where relative
/// phases to other built states matter.
pub fn superposition_state_paper_phase<T: Real>(spec: &SuperpositionSpec<T>, cutoff: Cutoff) -> Result<FockVector<T>> {
    let c = cutoff.resolve(spec.beta.to_f64_lossy(), spec.max_l());
    superposition_paper_phase(spec, c, false)
}

/// Exact moments of the number operator.
pub fn photon_statistics<T: Real>(state: &FockVector<T>) -> Result<PhotonStats<T>> {
    let total = state.norm_sqr();
    if !(total > T::zero()) {
        return Err(Error::DegenerateState("zero vector has no statistics".into()));
    }
    let (mut m1, mut m2) = (T::zero(), T::zero());
    for (n, a) in state.amps().iter().enumerate() {
        let p = a.norm_sqr() / total;
        let nf = T::from_usize(n);
        m1 += nf * p;
        m2 += nf * nf * p;
    }
    if m1 <= T::epsilon() {
        return Err(Error::FanoUndefined);
    }
    let variance = (m2 - m1 * m1).max(T::zero());
    Ok(PhotonStats {
        mean: m1,
        variance,
        fano: variance / m1,
    })
}

/// Squeezed-vacuum amplitude `s_2l = tanh^l(r) √((2l)!) / (√cosh r · 2^l l!)`.
pub fn smsv_amplitude<T: Real>(squeeze: T, l: usize) -> T {
    let th = squeeze.tanh();
    let mut s = T::one() / squeeze.cosh().sqrt();
    for j in 1..=l {
        let two_j = T::from_usize(2 * j);
        s = s * th * (two_j * (two_j - T::one())).sqrt() / two_j;
    }
    s
}

/// Even cutoff beyond which squeezed-vacuum populations fall under 1e-18.
pub fn smsv_auto_cutoff<T: Real>(squeeze: T) -> usize {
    let mut l = 0;
    while l < 2000 {
        if smsv_amplitude(squeeze, l).powi(2) < T::lit(1e-18) && 2 * l >= 24 {
            break;
        }
        l += 1;
    }
    2 * l + 1
}

/// Squeezed vacuum on even photon numbers, renormalized after truncation.
pub fn build_smsv<T: Real>(spec: &SmsvSpec<T>, cutoff: Cutoff) -> Result<FockVector<T>> {
    let c = match cutoff {
        Cutoff::Auto => smsv_auto_cutoff(spec.squeeze),
        Cutoff::Fixed(c) => c,
    };
    let amps = (0..=c)
        .map(|n| {
            if n % 2 == 0 {
                re(smsv_amplitude(spec.squeeze, n / 2))
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect();
    FockVector::new(amps).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: usize, sign: ParitySign, beta: f64) -> SdlpsSpec<f64> {
        SdlpsSpec::new(l, sign, beta).unwrap()
    }

    #[test]
    fn even_cat_has_only_even_support() {
        let v = build_sdlps(&spec(0, ParitySign::Plus, 0.5), Cutoff::Auto).unwrap();
        for n in (1..=v.cutoff()).step_by(2) {
            assert_eq!(v.amp(n).norm(), 0.0);
        }
        assert!(v.is_normalized(1e-12));
    }

    #[test]
    fn tiny_beta_odd_single_photon_limit() {
        let v = build_sdlps(&spec(1, ParitySign::Minus, 1e-8), Cutoff::Auto).unwrap();
        assert!((v.amp(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_cat_at_origin_is_degenerate() {
        let err = build_sdlps(&spec(0, ParitySign::Minus, 0.0), Cutoff::Auto).unwrap_err();
        assert!(matches!(err, Error::DegenerateState(_)));
        let err = build_sdlps(&spec(1, ParitySign::Plus, 1e-7), Cutoff::Auto).unwrap_err();
        assert!(matches!(err, Error::DegenerateState(_)));
    }

    #[test]
    fn negative_beta_rejected() {
        assert!(SdlpsSpec::new(0, ParitySign::Plus, -0.1).is_err());
    }

    #[test]
    fn auto_cutoff_keeps_tail_negligible() {
        for &beta in &[0.5, 1.0, 2.1, 3.0] {
            for l in 0..4 {
                let v = build_sdlps(&spec(l, ParitySign::Plus, beta), Cutoff::Auto).unwrap();
                assert!(v.tail_mass() < 1e-10, "β={beta} l={l}");
            }
        }
    }

    #[test]
    fn cross_parity_overlap_zero() {
        assert_eq!(analytic_overlap_mixed(0, ParitySign::Plus, 1, ParitySign::Minus, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn self_overlap_is_one() {
        for &beta in &[0.3f64, 1.0, 2.5] {
            let o = analytic_overlap(1, 1, ParitySign::Plus, beta).unwrap();
            assert!((o - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_term_superposition_matches_sdlps() {
        let s = SuperpositionSpec::new(ParitySign::Plus, 0.8, vec![1.0]).unwrap();
        let a = build_superposition(&s, Cutoff::Auto, false).unwrap().state;
        let b = build_sdlps(&spec(0, ParitySign::Plus, 0.8), Cutoff::Auto).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn all_zero_coefficients_rejected() {
        assert!(SuperpositionSpec::new(ParitySign::Plus, 1.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn truncation_reports_fidelity() {
        let s = SuperpositionSpec::new(ParitySign::Plus, 0.4, vec![1.0, 1.0]).unwrap();
        let out = build_superposition(&s, Cutoff::Auto, true).unwrap();
        let f = out.truncation_fidelity.unwrap();
        assert!(f > 0.9 && f <= 1.0 + 1e-12);
        assert!(out.state.is_normalized(1e-12));
        assert!(out.state.amps()[3..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn fock_state_has_zero_fano() {
        let v = FockVector::<f64>::basis(3, 10).unwrap();
        let st = photon_statistics(&v).unwrap();
        assert_eq!(st.fano, 0.0);
        assert_eq!(st.mean, 3.0);
    }

    #[test]
    fn vacuum_fano_undefined() {
        let v = FockVector::<f64>::basis(0, 10).unwrap();
        assert_eq!(photon_statistics(&v).unwrap_err(), Error::FanoUndefined);
    }

    #[test]
    fn smsv_basics() {
        let vac = build_smsv(&SmsvSpec::<f64>::new(0.0).unwrap(), Cutoff::Auto).unwrap();
        assert!((vac.amp(0).re - 1.0).abs() < 1e-15);
        let s = build_smsv(&SmsvSpec::<f64>::new(0.5).unwrap(), Cutoff::Auto).unwrap();
        for n in (1..=s.cutoff()).step_by(2) {
            assert_eq!(s.amp(n).norm(), 0.0);
        }
        let ratio = s.amp(2).re / s.amp(0).re;
        assert!((ratio - 0.5f64.tanh() * 2f64.sqrt() / 2.0).abs() < 1e-14);
        assert!(SmsvSpec::new(2.0).is_err());
    }
}
