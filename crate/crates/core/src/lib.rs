//! Truncated-Fock-space simulator for heralded hybrid entanglement between
//! superpositions of displaced number states and a delocalized photon.
//!
//! Everything is generic over the scalar type; `f64` aliases are provided
//! for the common case.

pub mod catgen;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod optics;
pub mod scalar;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{Cutoff, FockVector, OperatorMatrix, Parity};
pub use optics::{BeamSplitterParams, DelocalizedPhoton, MultiModeVector, TwoModeVector};
pub use scalar::{Amp, Real};
pub use states::{ParitySign, PhotonStats, SdlpsSpec, SmsvSpec, SuperpositionSpec};

pub type FockVectorF64 = FockVector<f64>;
pub type FockVectorF32 = FockVector<f32>;
pub type TwoModeVectorF64 = TwoModeVector<f64>;
pub type SdlpsSpecF64 = SdlpsSpec<f64>;
pub type SuperpositionSpecF64 = SuperpositionSpec<f64>;
pub type BeamSplitterF64 = BeamSplitterParams<f64>;
pub type DelocalizedPhotonF64 = DelocalizedPhoton<f64>;
pub type HeraldedResultF64 = entangle::HeraldedResult<f64>;
pub type SweepRecordF64 = entangle::SweepRecord<f64>;
