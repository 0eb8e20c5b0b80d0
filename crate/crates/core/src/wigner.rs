//! Wigner function on a quadrature grid.
//!
//! Convention: `α = (x₁ + i x₂)/√2` and `W(x₁, x₂) = (1/π)⟨D(α) Π D(α)†⟩`,
//! so the vacuum peaks at `1/π` and `∫W dx₁dx₂ = 1`.

use crate::error::{Error, Result};
use crate::fock::{coherent_norm, displaced_fock_coeff, displacement_block, FockVector};
use crate::scalar::Real;
use num_complex::Complex;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid<T> {
    pub x1_axis: Vec<T>,
    pub x2_axis: Vec<T>,
    /// `values[i][j]` is `W(x1_axis[i], x2_axis[j])`.
    pub values: Vec<Vec<T>>,
    pub min_value: T,
    pub min_location: (T, T),
    /// Set when the grid is too coarse or too small for the normalization check.
    pub coarse_warning: bool,
}

fn alpha<T: Real>(x1: T, x2: T) -> Complex<T> {
    Complex::new(x1, x2) * T::FRAC_1_SQRT_2()
}

/// Displaced-parity evaluation at one phase-space point.
pub fn wigner_point<T: Real>(state: &FockVector<T>, x1: T, x2: T) -> T {
    let a = alpha(x1, x2);
    let cols = state.cutoff() + 1;
    // Poisson tail of the displaced state is below 1e-16 well inside this
    let reach = a.norm().to_f64_lossy() + (cols as f64).sqrt() + 7.0;
    let rows = cols + (reach * reach).ceil() as usize;
    let d = displacement_block(-a, rows, cols);
    let mut w = T::zero();
    for m in 0..rows {
        let mut phi = Complex::new(T::zero(), T::zero());
        for (n, psi) in state.amps().iter().enumerate() {
            phi += d[(m, n)] * psi;
        }
        w += T::sign_pow(m as i64) * phi.norm_sqr();
    }
    w / T::PI()
}

/// Double sum `Σ ψ_m* ψ_n (−1)^n ⟨m|D(2α)|n⟩ / π` using the Laguerre
/// coefficients; a slower independent evaluation.
pub fn wigner_series<T: Real>(state: &FockVector<T>, x1: T, x2: T) -> T {
    let two_a = alpha(x1, x2) * T::lit(2.0);
    let f = coherent_norm(two_a.norm());
    let mut w = Complex::new(T::zero(), T::zero());
    for (m, pm) in state.amps().iter().enumerate() {
        for (n, pn) in state.amps().iter().enumerate() {
            let elem = displaced_fock_coeff(n, m, two_a) * f;
            w += pm.conj() * elem * pn * T::sign_pow(n as i64);
        }
    }
    w.re / T::PI()
}

fn axis<T: Real>(range: (T, T), step: T) -> Vec<T> {
    let count = ((range.1 - range.0) / step + T::lit(1e-9)).floor().to_f64_lossy() as usize;
    (0..=count).map(|i| range.0 + step * T::from_usize(i)).collect()
}

pub fn wigner_grid<T: Real>(state: &FockVector<T>, x1_range: (T, T), x2_range: (T, T), step: T) -> Result<WignerGrid<T>> {
    if !(step > T::zero()) || x1_range.1 < x1_range.0 || x2_range.1 < x2_range.0 {
        return Err(Error::InvalidParameter(format!(
            "invalid grid: step {step}, ranges {x1_range:?} {x2_range:?}"
        )));
    }
    let x1_axis = axis(x1_range, step);
    let x2_axis = axis(x2_range, step);
    let values: Vec<Vec<T>> = x1_axis
        .iter()
        .map(|&a| x2_axis.iter().map(|&b| wigner_point(state, a, b)).collect())
        .collect();
    let mut min_value = T::infinity();
    let mut min_location = (T::zero(), T::zero());
    for (i, row) in values.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            if w < min_value {
                min_value = w;
                min_location = (x1_axis[i], x2_axis[j]);
            }
        }
    }
    let mut grid = WignerGrid { x1_axis, x2_axis, values, min_value, min_location, coarse_warning: false };
    grid.coarse_warning = step > T::lit(0.1) || (grid.integral() - T::one()).abs() > T::lit(1e-3);
    Ok(grid)
}

impl<T: Real> WignerGrid<T> {
    /// Riemann sum over the grid cells.
    pub fn integral(&self) -> T {
        let d1 = if self.x1_axis.len() > 1 { self.x1_axis[1] - self.x1_axis[0] } else { T::zero() };
        let d2 = if self.x2_axis.len() > 1 { self.x2_axis[1] - self.x2_axis[0] } else { T::zero() };
        self.values.iter().flatten().copied().sum::<T>() * d1 * d2
    }

    /// Number of 4-connected regions where `W < −threshold`.
    pub fn negative_regions(&self, threshold: T) -> usize {
        let (n1, n2) = (self.x1_axis.len(), self.x2_axis.len());
        let mut seen = vec![vec![false; n2]; n1];
        let neg = |i: usize, j: usize| self.values[i][j] < -threshold;
        let mut regions = 0;
        for i in 0..n1 {
            for j in 0..n2 {
                if seen[i][j] || !neg(i, j) {
                    continue;
                }
                regions += 1;
                let mut stack = vec![(i, j)];
                seen[i][j] = true;
                while let Some((a, b)) = stack.pop() {
                    let mut push = |x: usize, y: usize| {
                        if !seen[x][y] && neg(x, y) {
                            seen[x][y] = true;
                            stack.push((x, y));
                        }
                    };
                    if a > 0 {
                        push(a - 1, b);
                    }
                    if a + 1 < n1 {
                        push(a + 1, b);
                    }
                    if b > 0 {
                        push(a, b - 1);
                    }
                    if b + 1 < n2 {
                        push(a, b + 1);
                    }
                }
            }
        }
        regions
    }
}
