//! Text output shared by the commands.

use hybridlight::entangle::SweepRecord;
use hybridlight::wigner::WignerGrid;
use hybridlight::FockVector;
use std::fmt::Write as _;

/// Rounds to six significant digits and prints the shortest form that
/// reads back to the rounded value.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn sweep_csv(records: &[SweepRecord<f64>]) -> String {
    let mut out = String::from("beta,t,n,negativity,probability\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{},{}", sig6(r.beta), sig6(r.t), r.n, sig6(r.negativity), sig6(r.probability));
    }
    out
}

pub fn wigner_csv(grid: &WignerGrid<f64>) -> String {
    let mut out = String::from("x1,x2,w\n");
    for (i, x1) in grid.x1_axis.iter().enumerate() {
        for (j, x2) in grid.x2_axis.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", sig6(*x1), sig6(*x2), sig6(grid.values[i][j]));
        }
    }
    out
}

pub fn amplitudes_csv(v: &FockVector<f64>) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, a) in v.amps().iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", sig6(a.re), sig6(a.im));
    }
    out
}

/// `[re, im]` pairs for JSON output.
pub fn amplitude_pairs(v: &FockVector<f64>) -> Vec<[f64; 2]> {
    v.amps().iter().map(|a| [a.re, a.im]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.123456789), "0.123457");
        assert_eq!(sig6(1234567.0), "1234570");
        assert_eq!(sig6(-2.5e-9), "-0.0000000025");
        assert_eq!(sig6(f64::NAN), "NaN");
        assert_eq!(sig6(0.0), "0");
    }
}
