//! Weight-factor optimisation for the fixed-weight combiner.

use super::{aber_wsc1, ClosedFormContext};
use crate::error::Result;

pub const BETA_SEARCH_MIN: f64 = 1e-4;
pub const BETA_SEARCH_MAX: f64 = 4.0;
const GRID_POINTS: usize = 200;
const BETA_TOL: f64 = 1e-6;

/// ABER-minimising weight and the minimum it attains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaOptimum {
    pub beta: f64,
    pub aber: f64,
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `tol`.
pub fn golden_section_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok(if fc < fx && fc <= fd {
        (c, fc)
    } else if fd < fx {
        (d, fd)
    } else {
        (x, fx)
    })
}

/// Minimises the WSC1 ABER over `beta in [1e-4, 4]`.
///
/// A 200-point logarithmic grid locates the basin, golden-section search
/// refines it to `|d beta| < 1e-6`.
pub fn optimize_beta(ctx: &ClosedFormContext) -> Result<BetaOptimum> {
    let lo = BETA_SEARCH_MIN.ln();
    let hi = BETA_SEARCH_MAX.ln();
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|k| (lo + (hi - lo) * k as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let mut best = (0usize, f64::INFINITY);
    for (k, &b) in grid.iter().enumerate() {
        let p = aber_wsc1(b, ctx)?;
        if p < best.1 {
            best = (k, p);
        }
    }
    let a = grid[best.0.saturating_sub(1)];
    let b = grid[(best.0 + 1).min(GRID_POINTS - 1)];
    let (beta, aber) = golden_section_min(|x| aber_wsc1(x, ctx), a, b, BETA_TOL)?;
    Ok(if aber <= best.1 {
        BetaOptimum { beta, aber }
    } else {
        BetaOptimum {
            beta: grid[best.0],
            aber: best.1,
        }
    })
}
