//! Heralded hybrid entanglement between a source state and a delocalized
//! photon: numeric pipeline, negativity, closed-form coefficients, parameter
//! sweeps and the printed-formula ledger.

mod closed_form;
mod experiment;
mod ledger;
mod negativity;
mod sweep;

pub use closed_form::{
    closed_form_general, closed_form_l0, closed_form_superposition, fit_sdlps_basis, project_onto_sdlps_basis, ClosedFormCoeffs,
    FormVariant,
};
pub use experiment::{generate_hybrid, BranchParities, ExperimentConfig, HeraldedResult, Source};
pub use ledger::{
    build_typo_ledger, compare_closed_forms, ComparisonReport, LedgerDepth, TypoEntry, TypoLedger, MATCH_TOLERANCE,
    REQUIRED_CLEAN,
};
pub use negativity::{
    negativity_from_b, negativity_from_schmidt, negativity_full_partial_transpose, negativity_of, schmidt_coefficients,
};
pub use sweep::{
    evaluate_point, refine, sweep_and_refine, sweep_grid, Bounds, RefinedPoint, SweepOutcome, SweepPlan, SweepRecord,
};
