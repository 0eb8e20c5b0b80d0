use super::negativity::negativity_of;
use crate::error::{Error, Result};
use crate::fock::{Cutoff, FockVector, Parity};
use crate::optics::{bs_apply_modes, project_mode, BeamSplitterColumns, BeamSplitterParams, DelocalizedPhoton, MultiModeVector, TwoModeVector};
use crate::scalar::{re, Real};
use crate::states::{
    sdlps_paper_phase, superposition_state_paper_phase, truncated_sdlps_paper_phase, ParitySign, SdlpsSpec,
    SuperpositionSpec,
};
use crate::linalg::CMatrix;
use num_complex::Complex;
use serde::Serialize;

/// Input to mode 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Source<T> {
    Sdlps(SdlpsSpec<T>),
    Superposition(SuperpositionSpec<T>),
    /// Each term replaced by its few-photon truncation.
    Truncated(SuperpositionSpec<T>),
}

impl<T: Real> Source<T> {
    pub fn sign(&self) -> ParitySign {
        match self {
            Source::Sdlps(s) => s.sign,
            Source::Superposition(s) | Source::Truncated(s) => s.sign,
        }
    }

    pub fn beta(&self) -> T {
        match self {
            Source::Sdlps(s) => s.beta,
            Source::Superposition(s) | Source::Truncated(s) => s.beta,
        }
    }

    pub fn max_l(&self) -> usize {
        match self {
            Source::Sdlps(s) => s.l,
            Source::Superposition(s) | Source::Truncated(s) => s.max_l(),
        }
    }

    pub fn with_beta(&self, beta: T) -> Self {
        let mut s = self.clone();
        match &mut s {
            Source::Sdlps(x) => x.beta = beta,
            Source::Superposition(x) | Source::Truncated(x) => x.beta = beta,
        }
        s
    }

    /// Normalized source vector without the global phase convention.
    pub fn build(&self, cutoff: Cutoff) -> Result<FockVector<T>> {
        match self {
            Source::Sdlps(s) => sdlps_paper_phase(s, cutoff),
            Source::Superposition(s) => superposition_state_paper_phase(s, cutoff),
            Source::Truncated(s) => {
                let c = cutoff.resolve(s.beta.to_f64_lossy(), s.max_l());
                let mut acc = FockVector::zeros(c);
                for (k, &bk) in s.b.iter().enumerate() {
                    if bk != T::zero() {
                        let term = truncated_sdlps_paper_phase(&SdlpsSpec::new(k, s.sign, s.beta)?, Cutoff::Fixed(c))?;
                        acc = acc.add(&term.scaled(re(bk)));
                    }
                }
                acc.normalized()
            }
        }
    }

    /// Short human-readable label, e.g. `Omega+^(01)`.
    pub fn label(&self) -> String {
        let sign = match self.sign() {
            ParitySign::Plus => '+',
            ParitySign::Minus => '-',
        };
        match self {
            Source::Sdlps(s) => format!("Omega{sign}^({})", s.l),
            Source::Superposition(s) => format!("Omega{sign}^({})", superposition_tag(&s.b)),
            Source::Truncated(s) => format!("trunc Omega{sign}^({})", superposition_tag(&s.b)),
        }
    }
}

fn superposition_tag<T: Real>(b: &[T]) -> String {
    let nz: Vec<String> = b
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != T::zero())
        .map(|(k, _)| k.to_string())
        .collect();
    nz.concat()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub source: Source<T>,
    pub photon: DelocalizedPhoton<T>,
    pub bs: BeamSplitterParams<T>,
    pub heralded_n: usize,
}

impl<T: Real> ExperimentConfig<T> {
    /// Checks the transmission lies in the experiment domain.
    pub fn new(source: Source<T>, photon: DelocalizedPhoton<T>, t: T, heralded_n: usize) -> Result<Self> {
        Ok(Self {
            source,
            photon,
            bs: BeamSplitterParams::validated(t)?,
            heralded_n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchParities {
    pub psi: Parity,
    pub phi: Parity,
}

/// Heralded state of mode 1 and the qubit mode 3.
#[derive(Debug, Clone)]
pub struct HeraldedResult<T> {
    /// Columns: qubit `|0⟩` (pairs with Φ) and `|1⟩` (pairs with Ψ).
    pub hybrid: TwoModeVector<T>,
    pub probability: T,
    pub psi_branch: FockVector<T>,
    pub phi_branch: FockVector<T>,
    pub b_param: T,
    pub negativity: T,
    pub parities: BranchParities,
}

fn dominant_parity<T: Real>(v: &FockVector<T>) -> Parity {
    if v.sector_mass(Parity::Even) >= v.sector_mass(Parity::Odd) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Runs source ⊗ delocalized photon through the beam splitter on modes 1–2
/// and projects mode 2 onto `n` photons.
pub fn generate_hybrid<T: Real>(config: &ExperimentConfig<T>, cutoff: Cutoff) -> Result<HeraldedResult<T>> {
    let src = config.source.build(cutoff)?;
    let c = src.cutoff();
    let cols = BeamSplitterColumns::new(config.bs, c, 1);
    let DelocalizedPhoton { a0, a1 } = config.photon;
    let zero = Complex::new(T::zero(), T::zero());
    // modes (1, 2, 3); mode 2 and 3 hold at most one photon
    let mut amps = vec![zero; (c + 1) * 4];
    for (k, s) in src.amps().iter().enumerate() {
        amps[k * 4 + 1] = s * a0;
        amps[k * 4 + 2] = s * a1;
    }
    let input = MultiModeVector::new(vec![c + 1, 2, 2], amps)?;
    let out = bs_apply_modes(&input, 0, 1, &cols)?;
    let n = config.heralded_n;
    let block = project_mode(&out, 1, n)?;
    let p = block.norm_sqr();
    if p < T::lit(1e-14) {
        return Err(Error::EmptyOutcome { n, probability: p.to_f64_lossy() });
    }
    let rows = block.dims()[0];
    let phi_raw = FockVector::new((0..rows).map(|i| block.amps()[2 * i]).collect());
    let psi_raw = FockVector::new((0..rows).map(|i| block.amps()[2 * i + 1]).collect());
    let (np, nf) = (psi_raw.norm(), phi_raw.norm());
    let floor = T::lit(1e-12) * p.sqrt();
    if np < floor || nf < floor {
        return Err(Error::SeparableOutcome { n, probability: p.to_f64_lossy() });
    }
    let b_param = (a0.norm() / a1.norm()) * (nf / np);
    let inv = re(T::one() / p.sqrt());
    let hybrid = TwoModeVector::from_matrix(CMatrix::from_fn(rows, 2, |i, j| block.amps()[2 * i + j] * inv));
    let negativity = negativity_of(&hybrid)?;
    let psi_branch = psi_raw.scaled(re(T::one() / np));
    let phi_branch = phi_raw.scaled(re(T::one() / nf));
    let parities = BranchParities {
        psi: dominant_parity(&psi_branch),
        phi: dominant_parity(&phi_branch),
    };
    Ok(HeraldedResult {
        hybrid,
        probability: p,
        psi_branch,
        phi_branch,
        b_param,
        negativity,
        parities,
    })
}
