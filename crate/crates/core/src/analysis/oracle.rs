//! Numerical-integration oracles for the ABER closed forms.
//!
//! Nothing here uses the closed forms: the error events are integrated
//! directly from the decision-variable densities and CDFs,
//!
//! ```text
//! Pe1 = \int_{-inf}^0 f_xi0(x) [F_|xiw|(-x) - F_|xiw|(0)] dx
//! Pe2 = \int_{-inf}^0 f_xiw(x) [F_|xi0|(-x) - F_|xi0|(0)] dx
//! ```
//!
//! and the dependence on the instantaneous source-relay SNR is averaged out
//! by a second quadrature over `gamma1 ~ Exp(gamma_bar1)`.

use super::quad::{integrate_to_inf_with_breaks, integrate_with_breaks};
use super::{cdf_abs_xi0, cdf_abs_xiw, pdf_xi0, pdf_xiw, ClosedFormContext};
use crate::combiner::beta_wsc2;
use crate::error::Result;

const INNER_REL_TOL: f64 = 1e-11;
const OUTER_REL_TOL: f64 = 1e-9;

fn inner<F: Fn(f64) -> f64>(f: F, scale: f64, breaks: &[f64]) -> Result<f64> {
    integrate_to_inf_with_breaks(f, 0.0, scale, breaks, 1e-300, INNER_REL_TOL)
}

fn scales(beta: f64, ctx: &ClosedFormContext) -> Vec<f64> {
    let base = [0.5, 0.5 * ctx.v0, 0.5 * beta, 0.5 * ctx.v2 * beta];
    base.iter().flat_map(|&s| [s, 8.0 * s]).collect()
}

/// Probability that the direct link is selected and wrong, for a fixed weight.
pub fn pe1_numeric(beta: f64, ctx: &ClosedFormContext) -> Result<f64> {
    if beta == 0.0 {
        return direct_only_numeric(ctx);
    }
    let f0 = cdf_abs_xiw(0.0, beta, ctx)?;
    let breaks = scales(beta, ctx);
    inner(
        |t| pdf_xi0(-t, ctx) * (cdf_abs_xiw(t, beta, ctx).unwrap_or(f64::NAN) - f0),
        0.5,
        &breaks,
    )
}

/// Probability that the relay link is selected and wrong, for a fixed weight
/// and a given instantaneous source-relay SNR.
pub fn pe2_numeric(beta: f64, gamma1: f64, ctx: &ClosedFormContext) -> Result<f64> {
    if beta == 0.0 {
        return Ok(0.0);
    }
    let f0 = cdf_abs_xi0(0.0, ctx)?;
    let breaks = scales(beta, ctx);
    let scale = 0.5 * ctx.v2 * beta;
    pdf_xiw(0.0, beta, gamma1, ctx)?;
    inner(
        |t| {
            pdf_xiw(-t, beta, gamma1, ctx).unwrap_or(f64::NAN)
                * (cdf_abs_xi0(t, ctx).unwrap_or(f64::NAN) - f0)
        },
        scale,
        &breaks,
    )
}

/// Error probability of the direct link alone, `P(xi0 < 0)`.
pub fn direct_only_numeric(ctx: &ClosedFormContext) -> Result<f64> {
    inner(|t| pdf_xi0(-t, ctx), 0.5, &[0.5, 4.0])
}

/// `E[g(gamma1)]` for `gamma1 ~ Exp(mean gamma_bar1)`, with optional extra
/// breakpoints in the `gamma1` domain.
fn expect_over_gamma1<G>(g: G, ctx: &ClosedFormContext, breaks: &[f64]) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    if ctx.gbar1 == 0.0 {
        return g(0.0);
    }
    let gb = ctx.gbar1;
    // s = gamma1 / gamma_bar1
    let mut s_breaks: Vec<f64> = breaks.iter().map(|b| b / gb).collect();
    for k in [1.0, 4.0, 16.0] {
        s_breaks.push(k / gb);
    }
    let err = std::cell::Cell::new(None);
    let h = |s: f64| match g(gb * s) {
        Ok(v) => v * (-s).exp(),
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let body = integrate_with_breaks(h, 0.0, 40.0, &s_breaks, 1e-300, OUTER_REL_TOL);
    if let Some(e) = err.take() {
        return Err(e);
    }
    let tail = integrate_to_inf_with_breaks(h, 40.0, 1.0, &[], 1e-300, OUTER_REL_TOL)?;
    Ok(body? + tail)
}

/// ABER of the fixed-weight combiner by nested quadrature.
pub fn aber_wsc1_numeric(beta: f64, ctx: &ClosedFormContext) -> Result<f64> {
    let pe1 = pe1_numeric(beta, ctx)?;
    let pe2 = expect_over_gamma1(|g1| pe2_numeric(beta, g1, ctx), ctx, &[])?;
    Ok(pe1 + pe2)
}

/// ABER of the adaptive-weight combiner by nested quadrature, with the weight
/// taken from the selection rule itself.
pub fn aber_wsc2_numeric(ctx: &ClosedFormContext) -> Result<f64> {
    expect_over_gamma1(
        |g1| {
            let beta = beta_wsc2(g1, ctx.gbar2);
            Ok(pe1_numeric(beta, ctx)? + pe2_numeric(beta, g1, ctx)?)
        },
        ctx,
        &[ctx.gbar2],
    )
}
