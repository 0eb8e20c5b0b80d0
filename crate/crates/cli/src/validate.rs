//! Invariant suites behind `validate`; each returns its checks.

use crate::format::sweep_csv;
use crate::parallel::parallel_sweep;
use crate::report::{Check, RunReport};
use hybridlight::catgen::{condition_smsv, condition_smsv_numeric, decompose_into_sdlps, scan_beta};
use hybridlight::entangle::{
    compare_closed_forms, generate_hybrid, negativity_from_b, negativity_from_schmidt,
    negativity_full_partial_transpose, ExperimentConfig, LedgerDepth, Source, SweepPlan,
};
use hybridlight::fock::{coherent_norm, displaced_fock_coeff, displaced_number_state, operator_matrices};
use hybridlight::linalg::expm;
use hybridlight::optics::{bs_apply, bs_fock_closed, SecondMode};
use hybridlight::states::{analytic_overlap, build_sdlps, normalization_factor, photon_statistics, sdlps_branch_norm, sdlps_paper_phase};
use hybridlight::wigner::{wigner_grid, wigner_point};
use hybridlight::{
    BeamSplitterParams, Cutoff, DelocalizedPhoton, Error, FockVector, Parity, ParitySign, Result, SdlpsSpec, SmsvSpec,
    SuperpositionSpec, TwoModeVector,
};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use serde_json::json;
use std::f64::consts::PI;

const SIGNS: [ParitySign; 2] = [ParitySign::Plus, ParitySign::Minus];

fn quick(depth: LedgerDepth) -> bool {
    depth == LedgerDepth::Quick
}

pub fn fock_checks(depth: LedgerDepth) -> Result<Vec<Check>> {
    let top = if quick(depth) { 6 } else { 10 };
    let ops = operator_matrices::<f64>(80)?;
    let (mut worst, mut sign_worst) = (0.0f64, 0.0f64);
    for a in [0.3, 1.0, 2.5] {
        let alpha = Complex::new(a, 0.0);
        let gen = ops.creation.entries().scale(alpha).sub(&ops.annihilation.entries().scale(alpha.conj()));
        let d = expm(&gen);
        for l in 0..=top {
            for n in 0..=top {
                let c = displaced_fock_coeff(l, n, alpha);
                worst = worst.max((c * coherent_norm(a) - d[(n, l)]).norm());
                let s = if (n + l) % 2 == 0 { 1.0 } else { -1.0 };
                sign_worst = sign_worst.max((displaced_fock_coeff(l, n, -alpha) - c * s).norm());
            }
        }
    }
    Ok(vec![
        Check::at_most("displaced-Fock coefficients vs matrix exponential", worst, 1e-9),
        Check::at_most("displaced-Fock sign relation", sign_worst, 0.0),
    ])
}

pub fn state_checks() -> Result<Vec<Check>> {
    let (mut norm_worst, mut overlap_worst) = (0.0f64, 0.0f64);
    for sign in SIGNS {
        for beta in [0.5f64, 1.0, 2.0] {
            for l in 0..=4 {
                let spec = SdlpsSpec::new(l, sign, beta)?;
                let numeric = sdlps_branch_norm(&spec, Cutoff::Auto);
                norm_worst = norm_worst.max((numeric - 1.0 / normalization_factor(l, sign, beta)?).abs());
            }
            let states: Vec<FockVector<f64>> = (0..=3)
                .map(|l| sdlps_paper_phase(&SdlpsSpec::new(l, sign, beta)?, Cutoff::Fixed(60)))
                .collect::<Result<_>>()?;
            for k in 0..=3 {
                for m in 0..=3 {
                    let d = states[k].inner(&states[m]).re - analytic_overlap(k, m, sign, beta)?;
                    overlap_worst = overlap_worst.max(d.abs());
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("normalization factor vs two-branch norm", norm_worst, 1e-9),
        Check::at_most("analytic overlaps vs numeric", overlap_worst, 1e-9),
    ])
}

pub fn optics_checks() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 0.8] {
        let p = BeamSplitterParams::new(t)?;
        for l in 0..=6 {
            for (second, j) in [(SecondMode::Vacuum, 0), (SecondMode::SinglePhoton, 1)] {
                let numeric = bs_apply(&TwoModeVector::basis(l, j, l, j)?, p)?;
                worst = worst.max(numeric.max_abs_diff(&bs_fock_closed(l, second, p)));
            }
        }
    }
    let (beta, t) = (1.2, 0.6);
    let p = BeamSplitterParams::new(t)?;
    let coh = |a: f64| displaced_number_state(0, Complex::new(a, 0.0), 30);
    let out = bs_apply(&TwoModeVector::product(&coh(-beta), &FockVector::basis(0, 0)?), p)?;
    let split = out.max_abs_diff(&TwoModeVector::product(&coh(-beta * t), &coh(beta * p.r())));
    Ok(vec![
        Check::at_most("beam splitter vs Fock closed forms", worst, 1e-10),
        Check::at_most("coherent input splits into coherent outputs", split, 1e-10),
    ])
}

/// Derived-form agreement plus the printed-formula ledger in `results`.
pub fn closed_form_checks(depth: LedgerDepth) -> Result<(Vec<Check>, serde_json::Value)> {
    let report = compare_closed_forms(depth)?;
    let checks = vec![
        Check::at_most("derived closed forms vs engine", report.derived_max_deviation, 1e-8),
        Check::at_most("derived closed-form failures", report.derived_failures.len() as f64, 0.0),
        Check::flag(
            "typo ledger entries carry a deviation",
            report.ledger.entries.iter().all(|e| e.occurrences > 0 && !e.worst_config.is_empty()),
            "every entry populated",
        ),
    ];
    Ok((checks, serde_json::to_value(&report.ledger).unwrap_or_default()))
}

/// Sum over every outcome, including those below the herald threshold.
pub fn outcome_total(source: &Source<f64>, photon: DelocalizedPhoton<f64>, t: f64) -> Result<f64> {
    let top = source.build(Cutoff::Auto)?.cutoff() + 1;
    let mut total = 0.0;
    for n in 0..=top {
        match generate_hybrid(&ExperimentConfig::new(source.clone(), photon, t, n)?, Cutoff::Auto) {
            Ok(r) => total += r.probability,
            Err(Error::EmptyOutcome { probability, .. } | Error::SeparableOutcome { probability, .. }) => total += probability,
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

pub fn completeness_checks() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let photon = DelocalizedPhoton::from_real(0.6, 0.8)?;
    for sign in SIGNS {
        for l in 0..=2 {
            for beta in [0.5, 2.0] {
                for t in [0.25, 0.8] {
                    let src = Source::Sdlps(SdlpsSpec::new(l, sign, beta)?);
                    worst = worst.max((outcome_total(&src, photon, t)? - 1.0).abs());
                }
            }
        }
        let src = Source::Superposition(SuperpositionSpec::new(sign, 1.0, vec![1.0, 1.0])?);
        worst = worst.max((outcome_total(&src, DelocalizedPhoton::balanced(), 0.5)? - 1.0).abs());
    }
    Ok(vec![Check::at_most("probability completeness", worst, 1e-8)])
}

/// Largest forbidden-sector mass over both branches.
pub fn parity_law_mass() -> Result<f64> {
    let mut worst = 0.0f64;
    for sign in SIGNS {
        for l in 0..=2 {
            for n in 0..=3 {
                let src = Source::Sdlps(SdlpsSpec::new(l, sign, 1.1)?);
                let r = generate_hybrid(&ExperimentConfig::new(src, DelocalizedPhoton::balanced(), 0.6, n)?, Cutoff::Auto)?;
                let psi = sign.after_outcome(n).parity();
                if r.parities.psi != psi || r.parities.phi != psi.flip() {
                    return Ok(f64::INFINITY);
                }
                worst = worst.max(r.psi_branch.sector_mass(psi.flip())).max(r.phi_branch.sector_mass(psi));
            }
        }
    }
    Ok(worst)
}

pub fn parity_checks() -> Result<Vec<Check>> {
    Ok(vec![Check::at_most("parity law forbidden-sector mass", parity_law_mass()?, 1e-12)])
}

/// Largest gap between the `|B|` formula and the partial-transpose value
/// over `count` seeded random configurations.
pub fn negativity_identity_gap(count: usize, seed: u64) -> Result<f64> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let (mut done, mut worst) = (0, 0.0f64);
    while done < count {
        let l = rng.gen_range(0..=2);
        let sign = if rng.gen_bool(0.5) { ParitySign::Plus } else { ParitySign::Minus };
        let beta = rng.gen_range(0.2..2.5);
        let t = rng.gen_range(0.1..0.9);
        let n = rng.gen_range(0..=3);
        let a0: f64 = rng.gen_range(0.2..0.98);
        let photon = DelocalizedPhoton::from_real(a0, (1.0 - a0 * a0).sqrt())?;
        let src = Source::Sdlps(SdlpsSpec::new(l, sign, beta)?);
        match generate_hybrid(&ExperimentConfig::new(src, photon, t, n)?, Cutoff::Auto) {
            Ok(r) => {
                let from_b = negativity_from_b(photon.a0.norm(), photon.a1.norm(), r.b_param);
                worst = worst.max((from_b - negativity_full_partial_transpose(&r.hybrid)?).abs());
                done += 1;
            }
            Err(Error::EmptyOutcome { .. } | Error::SeparableOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}

pub fn negativity_checks(depth: LedgerDepth) -> Result<Vec<Check>> {
    let count = if quick(depth) { 20 } else { 100 };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(vec![
        Check::at_most("negativity identity on random configurations", negativity_identity_gap(count, 7)?, 1e-9),
        Check::close("negativity with one Schmidt coefficient", negativity_from_schmidt(1.0, 0.0), 0.0, 1e-12),
        Check::close("negativity with equal Schmidt coefficients", negativity_from_schmidt(h, h), 1.0, 1e-12),
    ])
}

pub fn wigner_checks(depth: LedgerDepth) -> Result<Vec<Check>> {
    let vac = FockVector::<f64>::basis(0, 3)?;
    let one = FockVector::<f64>::basis(1, 3)?;
    let cat = build_sdlps(&SdlpsSpec::new(0, ParitySign::Plus, 2.0)?, Cutoff::Auto)?;
    let grid = wigner_grid(&cat, (-7.0, 7.0), (-5.0, 5.0), 0.05)?;
    let mut sym = 0.0f64;
    for &(a, b) in &[(0.3f64, 0.9f64), (-1.7, 0.2), (2.1, -1.3)] {
        sym = sym.max((wigner_point(&cat, a, b) - wigner_point(&cat, -a, -b)).abs());
    }
    let mut checks = vec![
        Check::close("vacuum W(0,0)", wigner_point(&vac, 0.0, 0.0), 1.0 / PI, 1e-9),
        Check::close("single photon W(0,0)", wigner_point(&one, 0.0, 0.0), -1.0 / PI, 1e-9),
        Check::close("Wigner grid integral", grid.integral(), 1.0, 1e-3),
        Check::at_most("even cat minimum", grid.min_value, -1e-6),
        Check::at_most("point symmetry of a parity state", sym, 1e-10),
    ];
    if !quick(depth) {
        let regions = |l: usize| -> Result<usize> {
            let v = build_sdlps(&SdlpsSpec::new(l, ParitySign::Plus, 2.0)?, Cutoff::Auto)?;
            Ok(wigner_grid(&v, (-6.0, 6.0), (-6.0, 6.0), 0.05)?.negative_regions(0.0))
        };
        let (r0, r1) = (regions(0)?, regions(1)?);
        checks.push(Check {
            name: "negative regions grow with l".into(),
            expected: format!("> {r0}"),
            actual: r1 as f64,
            tolerance: 0.0,
            pass: r1 > r0,
        });
    }
    Ok(checks)
}

pub fn fano_of(v: &FockVector<f64>) -> Result<f64> {
    Ok(photon_statistics(v)?.fano)
}

pub fn fano_checks() -> Result<Vec<Check>> {
    let coherent = displaced_number_state(0, Complex::new(1.7, 0.4), 80);
    let sd = |l, s| build_sdlps(&SdlpsSpec::new(l, s, 0.3).unwrap(), Cutoff::Auto);
    Ok(vec![
        Check::close("coherent state Fano factor", fano_of(&coherent)?, 1.0, 1e-9),
        Check::close("Fock state Fano factor", fano_of(&FockVector::basis(3, 6)?)?, 0.0, 0.0),
        Check::at_most("odd cat Fano factor at beta 0.3", fano_of(&sd(0, ParitySign::Minus)?)?, 1.0 - 1e-12),
        Check::at_most("even l=1 Fano factor at beta 0.3", fano_of(&sd(1, ParitySign::Plus)?)?, 1.0 - 1e-12),
    ])
}

pub fn catgen_checks(depth: LedgerDepth) -> Result<Vec<Check>> {
    let (rs, ts): (&[f64], &[f64]) = if quick(depth) { (&[0.3, 0.8], &[0.5, 0.9]) } else { (&[0.2, 0.5, 0.8], &[0.5, 0.7, 0.9]) };
    let mut worst = 0.0f64;
    for &r in rs {
        let spec = SmsvSpec::new(r)?;
        for &t in ts {
            let bs = BeamSplitterParams::new(t)?;
            for n in 0..=4 {
                let a = condition_smsv(&spec, bs, n, Cutoff::Auto)?;
                let b = condition_smsv_numeric(&spec, bs, n, Cutoff::Auto)?;
                worst = worst.max(a.state.max_abs_diff(&b.state)).max((a.probability - b.probability).abs());
            }
        }
    }
    let bs = BeamSplitterParams::new(0.7)?;
    let spec = SmsvSpec::new(0.3)?;
    let mut matched = 0.0f64;
    for n in [0, 1] {
        let y = condition_smsv(&spec, bs, n, Cutoff::Auto)?;
        let d = decompose_into_sdlps(&y.state, 2, ParitySign::from_parity(Parity::of(n)), 0.6)?;
        matched = matched.max(d.matched_residual);
    }
    let mut checks = vec![
        Check::at_most("conditioned cat closed forms vs pipeline", worst, 1e-10),
        Check::at_most("decomposition matched amplitudes", matched, 1e-10),
    ];
    if !quick(depth) {
        let y0 = condition_smsv(&spec, bs, 0, Cutoff::Auto)?;
        let d = scan_beta(&y0.state, 2, ParitySign::Plus, (0.2, 1.5), 27)?;
        checks.push(Check::at_least("beta-scanned l=2 decomposition fidelity", d.fidelity, 0.99));
    }
    Ok(checks)
}

/// Small sweep run on one worker and on four; CSV bytes must agree.
pub fn sweep_determinism() -> Result<bool> {
    let src = Source::Sdlps(SdlpsSpec::new(1, ParitySign::Minus, 1.0)?);
    let photon = DelocalizedPhoton::balanced();
    let plan = SweepPlan::new(vec![0, 1], (0.3, 2.0), (0.1, 0.9), 7)?;
    let a = sweep_csv(&parallel_sweep(&src, &photon, &plan, Cutoff::Auto, Some(1))?);
    let b = sweep_csv(&parallel_sweep(&src, &photon, &plan, Cutoff::Auto, Some(4))?);
    Ok(a == b)
}

pub fn validate_report(depth: LedgerDepth) -> Result<RunReport> {
    let mut report = RunReport::new("validate", json!({ "depth": depth }));
    report.extend(fock_checks(depth)?);
    report.extend(state_checks()?);
    report.extend(optics_checks()?);
    let (checks, ledger) = closed_form_checks(depth)?;
    report.extend(checks);
    report.extend(completeness_checks()?);
    report.extend(parity_checks()?);
    report.extend(negativity_checks(depth)?);
    report.extend(wigner_checks(depth)?);
    report.extend(fano_checks()?);
    report.extend(catgen_checks(depth)?);
    if !quick(depth) {
        report.push(Check::flag("sweep output independent of thread count", sweep_determinism()?, "identical CSV"));
    }
    report.results = json!({ "typo_ledger": ledger });
    Ok(report)
}
