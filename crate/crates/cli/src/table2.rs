//! The twelve tabulated maximum-negativity points.

use crate::report::{Check, RunReport};
use hybridlight::entangle::{evaluate_point, refine, Bounds, RefinedPoint, Source};
use hybridlight::{Cutoff, DelocalizedPhoton, ParitySign, Result, SdlpsSpec, SuperpositionSpec};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub const NEGATIVITY_AT_TABULATED: f64 = 0.98;
pub const NEGATIVITY_REFINED: f64 = 0.9995;
pub const REFINE_HALF_WIDTH: f64 = 0.02;
pub const PROBABILITY_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RowSource {
    /// `|Ω^(l)⟩`.
    Single(usize),
    /// `|Ω^(0)⟩ + |Ω^(1)⟩`.
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Row {
    pub sign: ParitySign,
    pub source: RowSource,
    pub beta: f64,
    pub t: f64,
    pub n: usize,
    pub probability: f64,
}

const fn row(sign: ParitySign, source: RowSource, beta: f64, t: f64, n: usize, probability: f64) -> Table2Row {
    Table2Row { sign, source, beta, t, n, probability }
}

use ParitySign::{Minus, Plus};
use RowSource::{Pair, Single};

pub const TABLE2: [Table2Row; 12] = [
    row(Plus, Single(0), 0.5, 0.25, 0, 0.939),
    row(Plus, Single(0), 1.4, 0.65, 1, 0.288),
    row(Plus, Single(1), 0.5, 0.73, 0, 0.491),
    row(Plus, Single(1), 0.5, 0.61, 1, 0.301),
    row(Minus, Single(0), 0.5, 0.79, 0, 0.544),
    row(Minus, Single(0), 0.5, 0.25, 1, 0.843),
    row(Minus, Single(1), 0.5, 0.8, 0, 0.523),
    row(Minus, Single(1), 2.1, 0.96, 1, 0.278),
    row(Plus, Pair, 0.92, 0.25, 0, 0.938),
    row(Plus, Pair, 1.9, 0.62, 1, 0.291),
    row(Minus, Pair, 1.34, 0.8, 0, 0.509),
    row(Minus, Pair, 0.5, 0.68, 1, 0.31),
];

impl Table2Row {
    pub fn source(&self) -> Result<Source<f64>> {
        Ok(match self.source {
            Single(l) => Source::Sdlps(SdlpsSpec::new(l, self.sign, self.beta)?),
            Pair => Source::Superposition(SuperpositionSpec::new(self.sign, self.beta, vec![1.0, 1.0])?),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RowOutcome {
    pub row: usize,
    pub label: String,
    pub input: Table2Row,
    pub negativity: f64,
    pub probability: f64,
    pub refined: RefinedPoint<f64>,
}

/// Evaluates one row at its tabulated point and refines inside the box.
pub fn evaluate_row(index: usize, cutoff: Cutoff) -> Result<RowOutcome> {
    let input = TABLE2[index];
    let source = input.source()?;
    let photon = DelocalizedPhoton::balanced();
    let at = evaluate_point(&source, &photon, input.beta, input.t, input.n, cutoff)?;
    let bounds = Bounds::around(input.beta, input.t, REFINE_HALF_WIDTH);
    let refined = refine(&source, &photon, input.n, (input.beta, input.t), bounds, cutoff)?;
    Ok(RowOutcome {
        row: index + 1,
        label: source.label(),
        input,
        negativity: at.negativity,
        probability: at.probability,
        refined,
    })
}

pub fn row_checks(o: &RowOutcome) -> Vec<Check> {
    let tag = format!("row {} {} n={}", o.row, o.label, o.input.n);
    vec![
        Check::at_least(format!("{tag} negativity at tabulated point"), o.negativity, NEGATIVITY_AT_TABULATED),
        Check::at_least(format!("{tag} refined negativity"), o.refined.negativity, NEGATIVITY_REFINED),
        Check::close(format!("{tag} probability"), o.probability, o.input.probability, PROBABILITY_TOLERANCE),
    ]
}

/// All rows with balanced `a0 = a1 = 1/√2`; rows run in parallel and are
/// reported in table order.
pub fn table2_report(cutoff: Cutoff) -> Result<RunReport> {
    let outcomes: Vec<RowOutcome> = (0..TABLE2.len())
        .into_par_iter()
        .map(|i| evaluate_row(i, cutoff))
        .collect::<Result<_>>()?;
    let mut report = RunReport::new(
        "table2",
        json!({
            "a0": std::f64::consts::FRAC_1_SQRT_2,
            "a1": std::f64::consts::FRAC_1_SQRT_2,
            "cutoff": cutoff_label(cutoff),
            "refine_half_width": REFINE_HALF_WIDTH,
        }),
    );
    for o in &outcomes {
        report.extend(row_checks(o));
    }
    report.results = serde_json::to_value(&outcomes).unwrap_or_default();
    Ok(report)
}

pub fn cutoff_label(c: Cutoff) -> String {
    match c {
        Cutoff::Auto => "auto".into(),
        Cutoff::Fixed(n) => n.to_string(),
    }
}
