use super::closed_form::{
    closed_form_general, closed_form_l0, closed_form_superposition, fit_sdlps_basis, ClosedFormCoeffs,
    FormVariant,
};
use super::experiment::{generate_hybrid, ExperimentConfig, HeraldedResult, Source};
use crate::error::Result;
use crate::fock::Cutoff;
use crate::optics::{bs_apply, bs_fock_closed, bs_fock_printed, BeamSplitterParams, DelocalizedPhoton, SecondMode, TwoModeVector};
use crate::states::{ParitySign, SdlpsSpec, SuperpositionSpec};
use serde::Serialize;

/// Agreement threshold, relative for magnitudes above one.
pub const MATCH_TOLERANCE: f64 = 1e-8;

/// Printed formulas that are expected to reproduce the numerics exactly.
pub const REQUIRED_CLEAN: &[&str] = &[
    "beam-splitter/vacuum-input",
    "beam-splitter/single-photon-input",
    "cat/even-source/psi-leading",
    "cat/odd-source/psi-leading",
    "cat/odd-source/phi-leading",
];

/// One printed formula that disagrees with the numeric engine.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypoEntry {
    pub formula: String,
    pub quantity: String,
    /// Largest deviation over finite comparisons.
    pub max_abs_deviation: f64,
    pub worst_config: String,
    pub occurrences: usize,
    /// Comparisons where the printed expression is undefined (NaN).
    pub undefined: usize,
}

/// Machine-readable record of printed-vs-numeric mismatches; the numeric
/// engine is treated as ground truth.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TypoLedger {
    pub entries: Vec<TypoEntry>,
}

impl TypoLedger {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, formula: &str) -> bool {
        self.entries.iter().any(|e| e.formula == formula)
    }

    /// Logs a comparison if it exceeds [`MATCH_TOLERANCE`].
    pub fn record(&mut self, formula: &str, quantity: &str, printed: f64, numeric: f64, config: &str) {
        let dev = deviation(printed, numeric);
        if dev <= MATCH_TOLERANCE {
            return;
        }
        let idx = match self.entries.iter().position(|e| e.formula == formula && e.quantity == quantity) {
            Some(i) => i,
            None => {
                self.entries.push(TypoEntry {
                    formula: formula.to_string(),
                    quantity: quantity.to_string(),
                    max_abs_deviation: 0.0,
                    worst_config: String::new(),
                    occurrences: 0,
                    undefined: 0,
                });
                self.entries.len() - 1
            }
        };
        let e = &mut self.entries[idx];
        e.occurrences += 1;
        if dev.is_nan() {
            e.undefined += 1;
            if e.worst_config.is_empty() {
                e.worst_config = config.to_string();
            }
        } else if dev > e.max_abs_deviation {
            e.max_abs_deviation = (printed - numeric).abs();
            e.worst_config = config.to_string();
        }
    }
}

/// `|a − b| / max(1, |b|)`; NaN when either side is not finite.
fn deviation(a: f64, b: f64) -> f64 {
    if !a.is_finite() || !b.is_finite() {
        return f64::NAN;
    }
    (a - b).abs() / b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerDepth {
    Quick,
    Full,
}

/// Outcome of checking every analytic form against the numeric engine.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ComparisonReport {
    pub ledger: TypoLedger,
    /// Largest deviation of the re-derived forms.
    pub derived_max_deviation: f64,
    pub derived_failures: Vec<String>,
    pub comparisons: usize,
}

impl ComparisonReport {
    fn derived(&mut self, what: &str, value: f64, numeric: f64, config: &str) {
        self.comparisons += 1;
        let d = deviation(value, numeric);
        if d.is_nan() || d > MATCH_TOLERANCE {
            self.derived_failures.push(format!("{what} at {config}: {value} vs {numeric}"));
        }
        if d.is_finite() {
            self.derived_max_deviation = self.derived_max_deviation.max(d);
        }
    }

    fn printed(&mut self, formula: &str, quantity: &str, value: f64, numeric: f64, config: &str) {
        self.comparisons += 1;
        self.ledger.record(formula, quantity, value, numeric, config);
    }
}

struct Numeric {
    x: Vec<f64>,
    phi: Vec<f64>,
    b: f64,
    p: f64,
}

fn numeric_reference(result: &HeraldedResult<f64>, cf: &ClosedFormCoeffs<f64>, beta_t: f64, report: &mut ComparisonReport, config: &str) -> Result<Numeric> {
    let (x, rx) = fit_sdlps_basis(&result.psi_branch, cf.psi_sign, beta_t, cf.x.len())?;
    let (phi, rp) = fit_sdlps_basis(&result.phi_branch, cf.phi_sign, beta_t, cf.phi_expansion.len())?;
    if rx > 1e-9 || rp > 1e-9 {
        report
            .derived_failures
            .push(format!("branch outside the expected span at {config}: residuals {rx:e}, {rp:e}"));
    }
    Ok(Numeric { x, phi, b: result.b_param, p: result.probability })
}

fn sign_tag(s: ParitySign) -> &'static str {
    match s {
        ParitySign::Plus => "even-source",
        ParitySign::Minus => "odd-source",
    }
}

fn outcome_tag(n: usize) -> &'static str {
    if n % 2 == 0 {
        "even-outcome"
    } else {
        "odd-outcome"
    }
}

/// Both sets scaled to unit length, signed so the numerically largest entry
/// is positive. Agrees with the leading-coefficient-one convention wherever
/// that is defined, and stays finite where the leading term vanishes.
fn directions(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let k = (0..b.len()).max_by(|&i, &j| b[i].abs().total_cmp(&b[j].abs())).unwrap_or(0);
    let scale = |v: &[f64]| {
        let s = norm(v) * if v.get(k).copied().unwrap_or(0.0) < 0.0 { -1.0 } else { 1.0 };
        v.iter().map(|x| x / s).collect::<Vec<_>>()
    };
    (scale(a), scale(b))
}

fn compare_sets(report: &mut ComparisonReport, family: &str, cf: &ClosedFormCoeffs<f64>, num: &Numeric, config: &str, printed: bool) {
    let quantities: [(&str, &[f64], &[f64]); 2] = [("psi-expansion", &cf.x, &num.x), ("phi-expansion", &cf.phi_expansion, &num.phi)];
    for (name, a, b) in quantities {
        let (a, b) = directions(a, b);
        for (p, (u, v)) in a.iter().zip(b.iter()).enumerate() {
            let q = format!("{name}[{p}]");
            if printed {
                report.printed(&format!("{family}/{name}"), &q, *u, *v, config);
            } else {
                report.derived(&format!("{family} {q}"), *u, *v, config);
            }
        }
    }
    for (name, u, v) in [("entangling-amplitude", cf.b_param, num.b), ("probability", cf.probability, num.p)] {
        if printed {
            report.printed(&format!("{family}/{name}"), name, u, v, config);
        } else {
            report.derived(&format!("{family} {name}"), u, v, config);
        }
    }
}

/// Cat-source printed forms are split finer, matching how they are printed.
fn compare_cat_printed(report: &mut ComparisonReport, sign: ParitySign, n: usize, cf: &ClosedFormCoeffs<f64>, num: &Numeric, config: &str) {
    let src = sign_tag(sign);
    let out = outcome_tag(n);
    // leading coefficients are compared as printed, before any rescaling
    report.printed(&format!("cat/{src}/psi-leading"), "psi-expansion[0]", cf.x[0], 1.0, config);
    report.printed(&format!("cat/{src}/phi-leading"), "phi-expansion[0]", cf.y[0], 1.0, config);
    let (a, b) = directions(&cf.phi_expansion, &num.phi);
    report.printed(&format!("cat/{src}/{out}/phi-tail"), "phi-expansion[1]", a[1], b[1], config);
    report.printed(&format!("cat/{src}/{out}/entangling-amplitude"), "entangling-amplitude", cf.b_param, num.b, config);
    report.printed(&format!("cat/{src}/{out}/probability"), "probability", cf.probability, num.p, config);
}

fn grids(depth: LedgerDepth) -> (Vec<f64>, Vec<f64>) {
    match depth {
        LedgerDepth::Full => (vec![0.5, 1.0, 2.0], vec![0.25, 0.5, 0.8]),
        LedgerDepth::Quick => (vec![0.5, 2.0], vec![0.25, 0.8]),
    }
}

fn compare_beam_splitter(report: &mut ComparisonReport, ts: &[f64]) -> Result<()> {
    for &t in ts {
        let params = BeamSplitterParams::new(t)?;
        for l in 0..=6 {
            for (second, key, j) in [
                (SecondMode::Vacuum, "beam-splitter/vacuum-input", 0),
                (SecondMode::SinglePhoton, "beam-splitter/single-photon-input", 1),
            ] {
                let numeric = bs_apply(&TwoModeVector::basis(l, j, l, j)?, params)?;
                let derived = bs_fock_closed(l, second, params);
                let printed = bs_fock_printed(l, second, params);
                let config = format!("l={l} t={t}");
                for a in 0..=l + 1 {
                    for b in 0..=l + 1 {
                        let v = numeric.amp(a, b).re;
                        let q = format!("amp[{a},{b}]");
                        report.derived(&format!("{key} {q}"), derived.amp(a, b).re, v, &config);
                        report.printed(key, &q, printed.amp(a, b).re, v, &config);
                    }
                }
            }
        }
    }
    Ok(())
}

fn compare_sdlps_point(report: &mut ComparisonReport, sign: ParitySign, l: usize, beta: f64, t: f64, n: usize, config: &str) -> Result<()> {
    let photon = DelocalizedPhoton::<f64>::balanced();
    let exp = ExperimentConfig::new(Source::Sdlps(SdlpsSpec::new(l, sign, beta)?), photon, t, n)?;
    let result = generate_hybrid(&exp, Cutoff::Auto)?;
    let derived = closed_form_general(l, sign, n, beta, t, &photon, FormVariant::Derived)?;
    let num = numeric_reference(&result, &derived, beta * t, report, config)?;
    compare_sets(report, "dlps", &derived, &num, config, false);
    if l == 0 {
        let d0 = closed_form_l0(sign, n, beta, t, &photon, FormVariant::Derived)?;
        compare_sets(report, "cat", &d0, &num, config, false);
        let p0 = closed_form_l0(sign, n, beta, t, &photon, FormVariant::Printed)?;
        compare_cat_printed(report, sign, n, &p0, &num, config);
    } else {
        let pr = closed_form_general(l, sign, n, beta, t, &photon, FormVariant::Printed)?;
        let family = format!("dlps/{}/{}", sign_tag(sign), outcome_tag(n));
        compare_sets(report, &family, &pr, &num, config, true);
    }
    Ok(())
}

fn compare_superposition_point(report: &mut ComparisonReport, sign: ParitySign, b: &[f64], beta: f64, t: f64, n: usize, config: &str) -> Result<()> {
    let photon = DelocalizedPhoton::<f64>::balanced();
    let spec = SuperpositionSpec::new(sign, beta, b.to_vec())?;
    let exp = ExperimentConfig::new(Source::Superposition(spec), photon, t, n)?;
    let result = generate_hybrid(&exp, Cutoff::Auto)?;
    let derived = closed_form_superposition(b, sign, n, beta, t, &photon, FormVariant::Derived)?;
    let num = numeric_reference(&result, &derived, beta * t, report, config)?;
    compare_sets(report, "superposition", &derived, &num, config, false);
    if sign == ParitySign::Plus && n % 2 == 0 {
        let pr = closed_form_superposition(b, sign, n, beta, t, &photon, FormVariant::Printed)?;
        compare_sets(report, "superposition/even-source/even-outcome", &pr, &num, config, true);
    }
    Ok(())
}

/// Compares every analytic coefficient set with the numeric engine over
/// `β ∈ {0.5, 1, 2}`, `t ∈ {0.25, 0.5, 0.8}`, `n ≤ 3` (a subset for `Quick`).
/// A point where either side cannot be evaluated is reported as a failure.
pub fn compare_closed_forms(depth: LedgerDepth) -> Result<ComparisonReport> {
    let (betas, ts) = grids(depth);
    let mut report = ComparisonReport::default();
    compare_beam_splitter(&mut report, &ts)?;
    for &sign in &[ParitySign::Plus, ParitySign::Minus] {
        for &beta in &betas {
            for &t in &ts {
                for n in 0..=3 {
                    for l in 0..=2 {
                        let config = format!("{} l={l} beta={beta} t={t} n={n}", sign_tag(sign));
                        if let Err(e) = compare_sdlps_point(&mut report, sign, l, beta, t, n, &config) {
                            report.derived_failures.push(format!("{config}: {e}"));
                        }
                    }
                    let config = format!("{} b=(1,1) beta={beta} t={t} n={n}", sign_tag(sign));
                    if let Err(e) = compare_superposition_point(&mut report, sign, &[1.0, 1.0], beta, t, n, &config) {
                        report.derived_failures.push(format!("{config}: {e}"));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The printed-formula ledger alone.
pub fn build_typo_ledger(depth: LedgerDepth) -> Result<TypoLedger> {
    Ok(compare_closed_forms(depth)?.ledger)
}
