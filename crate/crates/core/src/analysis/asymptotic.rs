//! High-SNR behaviour of the adaptive-weight combiner.

use crate::error::{param, Error, Result};

/// Coefficients of the high-SNR WSC2 approximation for the symmetric
/// unit-variance channel, as `(constant, ln P0)` pairs for `P0^0 ..= P0^6`.
/// The `P0^0` and `P0^1` terms carry no logarithm; `P0^2` has coefficient
/// `-0.16 - 0.03 ln P0`.
pub const ASYMPTOTIC_COEFFICIENTS: [(f64, f64); 7] = [
    (0.03, 0.0),
    (-0.09, 0.0),
    (-0.16, -0.03),
    (1.75, 0.06),
    (4.53, 0.47),
    (3.84, 0.63),
    (1.11, 0.25),
];

/// Asymptotic ABER of WSC2 in the symmetric channel `sigma_i^2 = 1`, as a
/// function of the linear transmit SNR `p0`.
pub fn aber_asymptotic_wsc2(p0: f64) -> Result<f64> {
    if !(p0 > 0.0) || !p0.is_finite() {
        return Err(Error::Domain(format!(
            "asymptotic ABER needs finite P0 > 0, got {p0}"
        )));
    }
    let ln = p0.ln();
    // Divide through by P0^8 so large P0 does not overflow.
    let inv = 1.0 / p0;
    let num: f64 = ASYMPTOTIC_COEFFICIENTS
        .iter()
        .enumerate()
        .map(|(k, &(c, l))| (c + l * ln) * inv.powi(8 - k as i32))
        .sum();
    let den: f64 = (4..=8).map(|k| inv.powi(8 - k)).sum();
    Ok(num / den)
}

/// Least-squares slope of `-log10(aber)` against `p0_db / 10`.
pub fn diversity_order_estimate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return param("diversity order needs at least two points");
    }
    if points.iter().any(|&(_, p)| !(p > 0.0) || !p.is_finite()) {
        return param("diversity order needs strictly positive, finite error rates");
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return param("SNR points must be strictly increasing");
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 / 10.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.1.log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
