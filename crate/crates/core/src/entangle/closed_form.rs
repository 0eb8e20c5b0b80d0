use crate::error::{Error, Result};
use crate::fock::{coherent_norm, displaced_fock_coeff, Cutoff, FockVector};
use crate::linalg::Svd;
use crate::optics::DelocalizedPhoton;
use crate::scalar::{binomial, factorial, re, Real};
use crate::states::{gram_matrix, gram_normalization, normalization_factor, sdlps_paper_phase, ParitySign, SdlpsSpec};
use serde::Serialize;

/// Which flavour of the analytic expressions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormVariant {
    /// Re-derived expressions; expected to match the numeric engine.
    Derived,
    /// Expressions exactly as printed, including their slips.
    Printed,
}

/// Expansion coefficients of the heralded branches over `|Ω^(p)(βt)⟩`,
/// together with the entangling amplitude `|B|` and success probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCoeffs<T> {
    /// Ψ coefficients, `x[0] = 1`.
    pub x: Vec<T>,
    /// Φ coefficients of the leading sum.
    pub y: Vec<T>,
    /// Φ coefficients of the shifted sum (superposition sources only).
    pub z: Vec<T>,
    /// Full Φ expansion over `p = 0..=l+1`, normalized to a leading 1.
    pub phi_expansion: Vec<T>,
    pub b_param: T,
    pub probability: T,
    pub l_norm: T,
    pub k_norm: T,
    pub psi_sign: ParitySign,
    pub phi_sign: ParitySign,
}

fn c<T: Real>(n: usize, j: usize, x: T) -> T {
    displaced_fock_coeff(j, n, re(x)).re
}

/// `(vᵀ G v)^(−1/2)`, NaN instead of an error for non-finite input.
fn lenient_norm<T: Real>(v: &[T], sign: ParitySign, beta_t: T) -> Result<T> {
    if v.iter().any(|x| !x.is_finite()) {
        return Ok(T::nan());
    }
    let g = gram_matrix(v.len(), sign, beta_t)?;
    let mut q = T::zero();
    for (p, row) in g.iter().enumerate() {
        for (s, gps) in row.iter().enumerate() {
            q += v[p] * *gps * v[s];
        }
    }
    Ok(if q > T::zero() { T::one() / q.sqrt() } else { T::nan() })
}

fn check_params<T: Real>(beta: T, t: T) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::InvalidParameter(format!("β must be positive, got {beta}")));
    }
    if !(t > T::zero() && t < T::one()) {
        return Err(Error::InvalidParameter(format!("t must lie in (0, 1), got {t}")));
    }
    Ok((T::one() - t * t).sqrt())
}

fn rfrak<T: Real>(photon: &DelocalizedPhoton<T>, b: T) -> T {
    let (a0, a1) = (photon.a0.norm(), photon.a1.norm());
    T::one() / (a0 * a0 + a1 * a1 * b * b).sqrt()
}

/// Cat-state source (`l = 0`).
pub fn closed_form_l0<T: Real>(
    sign: ParitySign,
    n: usize,
    beta: T,
    t: T,
    photon: &DelocalizedPhoton<T>,
    variant: FormVariant,
) -> Result<ClosedFormCoeffs<T>> {
    let r = check_params(beta, t)?;
    let (br, bt) = (beta * r, beta * t);
    let psi_sign = sign.after_outcome(n);
    let phi_sign = psi_sign.flip();
    let (c0, c1) = (c(n, 0, br), c(n, 1, br));
    let nn = |p: usize, s: ParitySign, x: T| normalization_factor(p, s, x);
    let plus = ParitySign::Plus;
    let (y_num, y_den) = match variant {
        FormVariant::Derived => (nn(0, phi_sign, bt)?, nn(1, phi_sign, bt)?),
        FormVariant::Printed => match (sign, n % 2) {
            (ParitySign::Minus, 0) => (nn(0, plus, bt)?, nn(1, ParitySign::Minus, bt)?),
            _ => (nn(0, plus, bt)?, nn(1, plus, bt)?),
        },
    };
    let y = vec![T::one(), r * c0 * y_num / (t * c1 * y_den)];
    let k_norm = lenient_norm(&y, phi_sign, bt)?;
    let (b_ratio, src_norm, psi_norm0) = match variant {
        FormVariant::Derived => (
            nn(0, psi_sign, bt)? / nn(0, phi_sign, bt)?,
            nn(0, sign, beta)?,
            nn(0, psi_sign, bt)?,
        ),
        FormVariant::Printed => (nn(0, plus, bt)? / nn(0, plus, bt)?, nn(0, plus, beta)?, nn(0, plus, bt)?),
    };
    let b_param = (t * c1 * b_ratio / (c0 * k_norm)).abs();
    let rf = rfrak(photon, b_param);
    let f = coherent_norm(br);
    let probability = f * f * c0 * c0 * src_norm * src_norm / (psi_norm0 * psi_norm0 * rf * rf);
    Ok(ClosedFormCoeffs {
        x: vec![T::one()],
        phi_expansion: y.clone(),
        y,
        z: Vec::new(),
        b_param,
        probability,
        l_norm: T::one(),
        k_norm,
        psi_sign,
        phi_sign,
    })
}

/// Single source term `|Ω±^(l)(β)⟩`, any `l`.
pub fn closed_form_general<T: Real>(
    l: usize,
    sign: ParitySign,
    n: usize,
    beta: T,
    t: T,
    photon: &DelocalizedPhoton<T>,
    variant: FormVariant,
) -> Result<ClosedFormCoeffs<T>> {
    let r = check_params(beta, t)?;
    let (br, bt) = (beta * r, beta * t);
    let psi_sign = sign.after_outcome(n);
    let phi_sign = psi_sign.flip();
    let cl = c(n, l, br);
    let cl1 = c(n, l + 1, br);
    let np0 = normalization_factor(0, psi_sign, bt)?;
    let nf0 = normalization_factor(0, phi_sign, bt)?;

    let mut x = Vec::with_capacity(l + 1);
    for p in 0..=l {
        let sgn = T::sign_pow(p as i64) * (t / r).powi(p as i32);
        let ratio = c(n, l - p, br) * np0 / (cl * normalization_factor(p, psi_sign, bt)?);
        let bin = binomial::<T>(l, p);
        x.push(match variant {
            FormVariant::Derived => sgn * bin.sqrt() * ratio,
            FormVariant::Printed => sgn * (bin * ratio).sqrt(),
        });
    }

    let mut y = Vec::with_capacity(l + 2);
    for p in 0..=l {
        let num = t.powi(p as i32 - 2) * (factorial::<T>(l) * factorial::<T>(l - p + 1)).sqrt() * c(n, l + 1 - p, br) * nf0;
        let den = r.powi(p as i32)
            * factorial::<T>(l - p)
            * (T::from_usize(l + 1) * factorial::<T>(p)).sqrt()
            * cl1
            * normalization_factor(p, phi_sign, bt)?;
        let bracket = t * t - T::from_usize(p) / T::from_usize(l - p + 1) * r * r;
        y.push(T::sign_pow(p as i64) * num / den * bracket);
    }
    y.push(
        T::sign_pow(l as i64) * t.powi(l as i32 - 1) * c(n, 0, br) * nf0
            / (r.powi(l as i32 - 1) * cl1 * normalization_factor(l + 1, phi_sign, bt)?),
    );

    let l_norm = lenient_norm(&x, psi_sign, bt)?;
    let k_norm = lenient_norm(&y, phi_sign, bt)?;
    let b_param = (t * T::from_usize(l + 1).sqrt() * cl1 * np0 * l_norm / (cl * nf0 * k_norm)).abs();
    let src_sign = match variant {
        FormVariant::Derived => sign,
        FormVariant::Printed => ParitySign::Plus,
    };
    let src_norm = normalization_factor(l, src_sign, beta)?;
    let f = coherent_norm(br);
    let rf = rfrak(photon, b_param);
    let probability = f * f * r.powi(2 * l as i32) * cl * cl * src_norm * src_norm
        / (np0 * np0 * l_norm * l_norm * rf * rf);
    Ok(ClosedFormCoeffs {
        x,
        phi_expansion: y.clone(),
        y,
        z: Vec::new(),
        b_param,
        probability,
        l_norm,
        k_norm,
        psi_sign,
        phi_sign,
    })
}

/// Superposition source `N Σ_j b_j |Ω±^(j)(β)⟩`.
///
/// The printed variant exists only for even sources and even outcomes.
pub fn closed_form_superposition<T: Real>(
    b: &[T],
    sign: ParitySign,
    n: usize,
    beta: T,
    t: T,
    photon: &DelocalizedPhoton<T>,
    variant: FormVariant,
) -> Result<ClosedFormCoeffs<T>> {
    if b.is_empty() || b.iter().all(|x| *x == T::zero()) {
        return Err(Error::InvalidParameter("superposition needs a nonzero coefficient".into()));
    }
    if variant == FormVariant::Printed && (sign != ParitySign::Plus || n % 2 != 0) {
        return Err(Error::InvalidParameter(
            "printed superposition forms cover even sources with even outcomes only".into(),
        ));
    }
    let r = check_params(beta, t)?;
    let (br, bt) = (beta * r, beta * t);
    let l = b.len() - 1;
    let psi_sign = sign.after_outcome(n);
    let phi_sign = psi_sign.flip();
    let ns: Vec<T> = (0..=l).map(|j| normalization_factor(j, sign, beta)).collect::<Result<_>>()?;

    let f: Vec<T> = (0..=l)
        .map(|p| {
            (p..=l)
                .map(|j| {
                    T::sign_pow(j as i64) * b[j] * ns[j] * r.powi((j - p) as i32) * c(n, j - p, br)
                        * (factorial::<T>(j) / factorial::<T>(j - p)).sqrt()
                })
                .sum()
        })
        .collect();
    let g: Vec<T> = (0..=l)
        .map(|p| {
            (p..=l)
                .map(|j| {
                    let bracket = t * t - T::from_usize(p) / T::from_usize(j - p + 1) * r * r;
                    T::sign_pow(j as i64) * b[j] * ns[j] * r.powi((j - p) as i32) * c(n, j - p + 1, br)
                        * (factorial::<T>(j) * factorial::<T>(j - p + 1)).sqrt()
                        / factorial::<T>(j - p)
                        * bracket
                })
                .sum()
        })
        .collect();

    let np0 = normalization_factor(0, psi_sign, bt)?;
    let nf0 = normalization_factor(0, phi_sign, bt)?;
    let mut x = Vec::with_capacity(l + 1);
    let mut y = Vec::with_capacity(l + 1);
    let mut z = Vec::with_capacity(l + 1);
    for p in 0..=l {
        let tp = T::sign_pow(p as i64) * t.powi(p as i32) / factorial::<T>(p).sqrt();
        x.push(tp * f[p] * np0 / (f[0] * normalization_factor(p, psi_sign, bt)?));
        y.push(tp * g[p] * nf0 / (g[0] * normalization_factor(p, phi_sign, bt)?));
        z.push(
            b[p] * ns[p] * t.powi(p as i32) * T::from_usize(p + 1).sqrt()
                / normalization_factor(p + 1, phi_sign, bt)?,
        );
    }
    let kappa = r * t * c(n, 0, br) * nf0 / g[0];
    let mut phi = vec![T::zero(); l + 2];
    for p in 0..=l {
        phi[p] += y[p];
        phi[p + 1] += kappa * z[p];
    }

    let l_norm = lenient_norm(&x, psi_sign, bt)?;
    let k_norm = lenient_norm(&phi, phi_sign, bt)?;
    let b_param = (g[0] * np0 * l_norm / (t * f[0] * nf0 * k_norm)).abs();
    let n_tot = gram_normalization(b, sign, beta)?;
    let fr = coherent_norm(br);
    let rf = rfrak(photon, b_param);
    let mut probability = fr * fr * f[0] * f[0] * n_tot * n_tot / (np0 * np0 * l_norm * l_norm * rf * rf);
    if variant == FormVariant::Printed {
        probability *= r.powi(2 * l as i32);
    }
    Ok(ClosedFormCoeffs {
        x,
        y,
        z,
        phi_expansion: phi,
        b_param,
        probability,
        l_norm,
        k_norm,
        psi_sign,
        phi_sign,
    })
}

/// Least-squares coefficients of `state` over `|Ω^(p)(β)⟩`, `p < terms`,
/// unscaled, plus the residual norm of the fit.
pub fn fit_sdlps_basis<T: Real>(
    state: &FockVector<T>,
    sign: ParitySign,
    beta: T,
    terms: usize,
) -> Result<(Vec<T>, T)> {
    let cutoff = state.cutoff();
    let rows: Vec<usize> = (0..=cutoff).filter(|n| sign.parity().contains(*n)).collect();
    if rows.len() < terms {
        return Err(Error::TruncationInadequate {
            cutoff,
            required: 2 * terms,
            context: "basis projection".into(),
        });
    }
    let basis: Vec<FockVector<T>> = (0..terms)
        .map(|p| sdlps_paper_phase(&SdlpsSpec::new(p, sign, beta)?, Cutoff::Fixed(cutoff)))
        .collect::<Result<_>>()?;
    let phased = state.with_phase_convention();
    let a: Vec<Vec<T>> = rows.iter().map(|&n| basis.iter().map(|v| v.amp(n).re).collect()).collect();
    let rhs: Vec<T> = rows.iter().map(|&n| phased.amp(n).re).collect();
    let coeffs = Svd::new(&a).solve(&rhs, T::lit(1e-14));
    let residual = a
        .iter()
        .zip(&rhs)
        .map(|(row, b)| {
            let fit: T = row.iter().zip(&coeffs).map(|(x, y)| *x * *y).sum();
            (fit - *b) * (fit - *b)
        })
        .sum::<T>()
        .sqrt();
    Ok((coeffs, residual))
}

/// [`fit_sdlps_basis`] scaled so the first coefficient is 1.
pub fn project_onto_sdlps_basis<T: Real>(
    state: &FockVector<T>,
    sign: ParitySign,
    beta: T,
    terms: usize,
) -> Result<(Vec<T>, T)> {
    let (coeffs, residual) = fit_sdlps_basis(state, sign, beta, terms)?;
    if coeffs[0] == T::zero() {
        return Err(Error::DegenerateState("leading basis coefficient vanishes".into()));
    }
    let lead = coeffs[0];
    Ok((coeffs.iter().map(|x| *x / lead).collect(), residual))
}
