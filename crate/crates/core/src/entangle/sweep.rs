use super::experiment::{generate_hybrid, ExperimentConfig, Source};
use crate::error::{Error, Result};
use crate::fock::Cutoff;
use crate::optics::DelocalizedPhoton;
use crate::scalar::Real;
use serde::Serialize;

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord<T> {
    pub beta: T,
    pub t: T,
    pub n: usize,
    pub negativity: T,
    pub probability: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan<T> {
    pub n_list: Vec<usize>,
    pub beta_range: (T, T),
    pub t_range: (T, T),
    /// Points per axis, endpoints included.
    pub grid_steps: usize,
}

impl<T: Real> SweepPlan<T> {
    pub fn new(n_list: Vec<usize>, beta_range: (T, T), t_range: (T, T), grid_steps: usize) -> Result<Self> {
        let ok_beta = beta_range.0 > T::zero() && beta_range.0 <= beta_range.1;
        let ok_t = t_range.0 >= T::lit(1e-6) && t_range.1 <= T::one() - T::lit(1e-6) && t_range.0 <= t_range.1;
        if !ok_beta || !ok_t || grid_steps == 0 {
            return Err(Error::InvalidParameter(format!(
                "bad sweep ranges β {beta_range:?}, t {t_range:?}, steps {grid_steps}"
            )));
        }
        Ok(Self { n_list, beta_range, t_range, grid_steps })
    }

    /// Default domain `β ∈ [0.1, 3]`, `t ∈ [0.05, 0.95]`.
    pub fn default_domain(n_list: Vec<usize>, grid_steps: usize) -> Result<Self> {
        Self::new(n_list, (T::lit(0.1), T::lit(3.0)), (T::lit(0.05), T::lit(0.95)), grid_steps)
    }

    fn axis(range: (T, T), steps: usize) -> Vec<T> {
        if steps == 1 {
            return vec![range.0];
        }
        let h = (range.1 - range.0) / T::from_usize(steps - 1);
        (0..steps).map(|i| range.0 + h * T::from_usize(i)).collect()
    }

    /// All `(β, t, n)` points, ordered by `n`, then `β`, then `t`.
    pub fn points(&self) -> Vec<(T, T, usize)> {
        let betas = Self::axis(self.beta_range, self.grid_steps);
        let ts = Self::axis(self.t_range, self.grid_steps);
        let mut out = Vec::with_capacity(self.n_list.len() * betas.len() * ts.len());
        for &n in &self.n_list {
            for &b in &betas {
                for &t in &ts {
                    out.push((b, t, n));
                }
            }
        }
        out
    }
}

/// Negativity and probability at one point. Outcomes that cannot occur, or
/// that leave a product state, score zero negativity.
pub fn evaluate_point<T: Real>(
    source: &Source<T>,
    photon: &DelocalizedPhoton<T>,
    beta: T,
    t: T,
    n: usize,
    cutoff: Cutoff,
) -> Result<SweepRecord<T>> {
    let config = ExperimentConfig::new(source.with_beta(beta), *photon, t, n)?;
    match generate_hybrid(&config, cutoff) {
        Ok(r) => Ok(SweepRecord { beta, t, n, negativity: r.negativity, probability: r.probability }),
        Err(Error::EmptyOutcome { probability, .. } | Error::SeparableOutcome { probability, .. }) => Ok(SweepRecord {
            beta,
            t,
            n,
            negativity: T::zero(),
            probability: T::lit(probability),
        }),
        Err(e) => Err(e),
    }
}

/// Serial evaluation of the whole grid.
pub fn sweep_grid<T: Real>(
    source: &Source<T>,
    photon: &DelocalizedPhoton<T>,
    plan: &SweepPlan<T>,
    cutoff: Cutoff,
) -> Result<Vec<SweepRecord<T>>> {
    plan.points()
        .into_iter()
        .map(|(b, t, n)| evaluate_point(source, photon, b, t, n, cutoff))
        .collect()
}

/// Box for local refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds<T> {
    pub beta: (T, T),
    pub t: (T, T),
}

impl<T: Real> Bounds<T> {
    /// `±half` around a point, clipped to `β > 0` and the transmission domain.
    pub fn around(beta: T, t: T, half: T) -> Self {
        let eps = T::lit(1e-6);
        Self {
            beta: ((beta - half).max(eps), beta + half),
            t: ((t - half).max(eps), (t + half).min(T::one() - eps)),
        }
    }

    fn clamp(&self, beta: T, t: T) -> (T, T) {
        (beta.max(self.beta.0).min(self.beta.1), t.max(self.t.0).min(self.t.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinedPoint<T> {
    pub n: usize,
    pub beta: T,
    pub t: T,
    pub negativity: T,
    pub probability: T,
    pub evaluations: usize,
}

/// Coordinate ascent on negativity: steps of 0.01 along β then t, halving
/// the step whenever no move improves, down to 1e-5. Only improvements are
/// accepted, so the result never falls below the starting value.
pub fn refine<T: Real>(
    source: &Source<T>,
    photon: &DelocalizedPhoton<T>,
    n: usize,
    start: (T, T),
    bounds: Bounds<T>,
    cutoff: Cutoff,
) -> Result<RefinedPoint<T>> {
    let (mut beta, mut t) = bounds.clamp(start.0, start.1);
    let mut best = evaluate_point(source, photon, beta, t, n, cutoff)?;
    let mut evaluations = 1;
    let mut step = T::lit(0.01);
    let floor = T::lit(1e-5);
    let max_evals = 4000;
    while step >= floor && evaluations < max_evals {
        let mut moved = false;
        for axis in 0..2 {
            for dir in [T::one(), -T::one()] {
                let (nb, nt) = if axis == 0 {
                    bounds.clamp(beta + dir * step, t)
                } else {
                    bounds.clamp(beta, t + dir * step)
                };
                if nb == beta && nt == t {
                    continue;
                }
                let rec = evaluate_point(source, photon, nb, nt, n, cutoff)?;
                evaluations += 1;
                if rec.negativity > best.negativity {
                    best = rec;
                    beta = nb;
                    t = nt;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step = step / T::lit(2.0);
        }
    }
    Ok(RefinedPoint {
        n,
        beta,
        t,
        negativity: best.negativity,
        probability: best.probability,
        evaluations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome<T> {
    pub records: Vec<SweepRecord<T>>,
    pub maxima: Vec<RefinedPoint<T>>,
}

/// Grid sweep followed by refinement of the best grid point for each `n`,
/// confined to the plan's ranges.
pub fn sweep_and_refine<T: Real>(
    source: &Source<T>,
    photon: &DelocalizedPhoton<T>,
    plan: &SweepPlan<T>,
    cutoff: Cutoff,
) -> Result<SweepOutcome<T>> {
    let records = sweep_grid(source, photon, plan, cutoff)?;
    let maxima = refine_best(source, photon, plan, &records, cutoff)?;
    Ok(SweepOutcome { records, maxima })
}

/// Refines the best record of each `n` in `records`.
pub(crate) fn refine_best<T: Real>(
    source: &Source<T>,
    photon: &DelocalizedPhoton<T>,
    plan: &SweepPlan<T>,
    records: &[SweepRecord<T>],
    cutoff: Cutoff,
) -> Result<Vec<RefinedPoint<T>>> {
    let bounds = Bounds { beta: plan.beta_range, t: plan.t_range };
    plan.n_list
        .iter()
        .map(|&n| {
            let best = records
                .iter()
                .filter(|r| r.n == n)
                .fold(None::<&SweepRecord<T>>, |acc, r| match acc {
                    Some(a) if a.negativity >= r.negativity => Some(a),
                    _ => Some(r),
                })
                .ok_or_else(|| Error::InvalidParameter(format!("no records for n = {n}")))?;
            refine(source, photon, n, (best.beta, best.t), bounds, cutoff)
        })
        .collect()
}
