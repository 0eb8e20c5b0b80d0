//! Even/odd states from squeezed vacuum: heralding behind a beam splitter,
//! then fitting the result with a finite superposition of source states.

use crate::error::{Error, Result};
use crate::fock::{Cutoff, FockVector, Parity};
use crate::linalg::Svd;
use crate::optics::{bs_apply, herald, BeamSplitterParams, TwoModeVector};
use crate::scalar::{ln_factorial, re, Real};
use crate::states::{build_smsv, sdlps_paper_phase, smsv_auto_cutoff, ParitySign, SdlpsSpec, SmsvSpec};
use serde::Serialize;

/// Conditional state left in mode 1 after detecting `outcome_n` photons.
#[derive(Debug, Clone)]
pub struct ConditionedCat<T> {
    pub outcome_n: usize,
    pub state: FockVector<T>,
    pub probability: T,
    pub parity: Parity,
}

fn resolve<T: Real>(spec: &SmsvSpec<T>, cutoff: Cutoff) -> usize {
    match cutoff {
        Cutoff::Auto => smsv_auto_cutoff(spec.squeeze),
        Cutoff::Fixed(c) => c,
    }
}

/// Direct sum: input photon number `N = q + n` leaves `q` photons in mode 1
/// with amplitude `s_N (−1)^n t^q r^n √(N!/(q! n!))`.
pub fn condition_smsv<T: Real>(spec: &SmsvSpec<T>, bs: BeamSplitterParams<T>, n: usize, cutoff: Cutoff) -> Result<ConditionedCat<T>> {
    let c = resolve(spec, cutoff);
    let input = build_smsv(spec, Cutoff::Fixed(c))?;
    let (t, r) = (bs.t(), bs.r());
    let mut amps = vec![T::zero(); c + 1];
    for q in 0..=c {
        let total = q + n;
        if total > c || total % 2 == 1 {
            continue;
        }
        let s = input.amp(total).re;
        if s == T::zero() {
            continue;
        }
        let ln_bin: T = (ln_factorial::<T>(total) - ln_factorial::<T>(q) - ln_factorial::<T>(n)) / T::lit(2.0);
        amps[q] = s * T::sign_pow(n as i64) * t.powi(q as i32) * r.powi(n as i32) * ln_bin.exp();
    }
    finish(FockVector::from_real(&amps), n)
}

fn finish<T: Real>(raw: FockVector<T>, n: usize) -> Result<ConditionedCat<T>> {
    let probability = raw.norm_sqr();
    if probability < T::lit(1e-14) {
        return Err(Error::EmptyOutcome { n, probability: probability.to_f64_lossy() });
    }
    Ok(ConditionedCat {
        outcome_n: n,
        state: raw.normalized()?,
        probability,
        parity: Parity::of(n),
    })
}

/// Same conditioning through the generic beam splitter and herald.
pub fn condition_smsv_numeric<T: Real>(
    spec: &SmsvSpec<T>,
    bs: BeamSplitterParams<T>,
    n: usize,
    cutoff: Cutoff,
) -> Result<ConditionedCat<T>> {
    let c = resolve(spec, cutoff);
    let input = build_smsv(spec, Cutoff::Fixed(c))?;
    let vac = FockVector::basis(0, 0)?;
    let out = bs_apply(&TwoModeVector::product(&input, &vac), bs)?;
    let (reduced, p) = herald(&out.to_multimode(), 1, n)?;
    let state = reduced.into_fock()?.resized(c);
    Ok(ConditionedCat { outcome_n: n, state, probability: p, parity: Parity::of(n) })
}

/// Fit of a target by `Σ_k b_k |Ω±^(k)(β)⟩`, `k ≤ l`.
#[derive(Debug, Clone, Serialize)]
pub struct SdlpsDecomposition<T> {
    pub b: Vec<T>,
    pub beta_used: T,
    pub fidelity: T,
    pub condition_number: T,
    /// Largest mismatch on the matched Fock amplitudes.
    pub matched_residual: T,
}

/// Matches the `l + 1` lowest Fock amplitudes of the target's parity and
/// solves for `b`.
pub fn decompose_into_sdlps<T: Real>(target: &FockVector<T>, l: usize, sign: ParitySign, beta: T) -> Result<SdlpsDecomposition<T>> {
    if !(beta > T::zero()) {
        return Err(Error::InvalidParameter(format!("β must be positive, got {beta}")));
    }
    let want = sign.parity();
    if target.parity(T::tol(1e-12)) != Some(want) {
        return Err(Error::ParityMismatch(format!(
            "target is not supported on the {want:?} sector alone"
        )));
    }
    let offset = usize::from(want == Parity::Odd);
    let rows: Vec<usize> = (0..=l).map(|k| 2 * k + offset).collect();
    let cutoff = target.cutoff();
    if rows[l] > cutoff {
        return Err(Error::TruncationInadequate { cutoff, required: rows[l], context: "decomposition rows".into() });
    }
    let basis: Vec<FockVector<T>> = (0..=l)
        .map(|k| sdlps_paper_phase(&SdlpsSpec::new(k, sign, beta)?, Cutoff::Fixed(cutoff)))
        .collect::<Result<_>>()?;
    let phased = target.with_phase_convention();
    let a: Vec<Vec<T>> = rows.iter().map(|&n| basis.iter().map(|v| v.amp(n).re).collect()).collect();
    let f: Vec<T> = rows.iter().map(|&n| phased.amp(n).re).collect();
    let svd = Svd::new(&a);
    let condition_number = svd.condition_number();
    if !(condition_number <= T::lit(1e12)) {
        return Err(Error::IllConditioned { condition_number: condition_number.to_f64_lossy() });
    }
    let b = svd.solve(&f, T::zero());
    let mut fit = FockVector::zeros(cutoff);
    for (k, v) in basis.iter().enumerate() {
        fit = fit.add(&v.scaled(re(b[k])));
    }
    let matched_residual = rows
        .iter()
        .zip(&f)
        .map(|(&n, &fv)| (fit.amp(n).re - fv).abs())
        .fold(T::zero(), T::max);
    let norm = fit.norm_sqr();
    let fidelity = if norm > T::zero() { phased.inner(&fit).norm_sqr() / (norm * phased.norm_sqr()) } else { T::zero() };
    Ok(SdlpsDecomposition { b, beta_used: beta, fidelity, condition_number, matched_residual })
}

/// Coarse scan of β followed by golden-section refinement of the fidelity.
pub fn scan_beta<T: Real>(
    target: &FockVector<T>,
    l: usize,
    sign: ParitySign,
    range: (T, T),
    coarse_steps: usize,
) -> Result<SdlpsDecomposition<T>> {
    if coarse_steps < 2 || !(range.0 > T::zero() && range.1 > range.0) {
        return Err(Error::InvalidParameter(format!("bad β scan {range:?} with {coarse_steps} steps")));
    }
    let h = (range.1 - range.0) / T::from_usize(coarse_steps - 1);
    let fid = |beta: T| decompose_into_sdlps(target, l, sign, beta).map(|d| d.fidelity).unwrap_or(-T::one());
    let mut best_i = 0;
    let mut best_f = -T::one();
    for i in 0..coarse_steps {
        let f = fid(range.0 + h * T::from_usize(i));
        if f > best_f {
            best_f = f;
            best_i = i;
        }
    }
    if best_f < T::zero() {
        // every point failed; surface the error of the midpoint
        return decompose_into_sdlps(target, l, sign, (range.0 + range.1) / T::lit(2.0));
    }
    let mut lo = range.0 + h * T::from_usize(best_i.saturating_sub(1));
    let mut hi = range.0 + h * T::from_usize((best_i + 1).min(coarse_steps - 1));
    let g = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (fid(x1), fid(x2));
    for _ in 0..60 {
        if hi - lo < T::lit(1e-7) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = fid(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = fid(x1);
        }
    }
    let grid_best = range.0 + h * T::from_usize(best_i);
    let candidate = if f1.max(f2) >= best_f { if f1 >= f2 { x1 } else { x2 } } else { grid_best };
    decompose_into_sdlps(target, l, sign, candidate)
}
