//! Closed-form statistics of the destination decision variables and the
//! average bit-error rate (ABER) of the weighted selection combiners.
//!
//! All expressions are in noise-normalised units (`N0 = 1`). With
//! `u_i = 1 + gamma_bar_i` and `v_i = 1 + 2 gamma_bar_i`:
//!
//! * `xi0`, the direct-link decision variable, has a two-sided exponential
//!   density with left rate 2 and right rate `2 / v0`;
//! * `xi_w = beta * xi2`, the weighted relay-link decision variable, is a
//!   two-component mixture of the same shape, mirrored with probability
//!   `P1 = exp(-gamma1) / 2` (relay decoding error).
//!
//! [`aber_wsc1`] and [`aber_wsc2`] evaluate the exact ABER expressions;
//! [`oracle`] integrates the same error probabilities numerically from the
//! densities alone and is the cross-check for every closed form.

mod aber;
mod asymptotic;
mod expint;
mod optimize;
pub mod oracle;
pub mod quad;

pub use aber::{aber_wsc1, aber_wsc2, wsc1_terms, wsc2_terms, Wsc1Terms, Wsc2Terms};
pub use asymptotic::{aber_asymptotic_wsc2, diversity_order_estimate, ASYMPTOTIC_COEFFICIENTS};
pub use expint::{exp_integral_e1, scaled_exp_integral_e1};
pub use optimize::{
    golden_section_min, optimize_beta, BetaOptimum, BETA_SEARCH_MAX, BETA_SEARCH_MIN,
};

use crate::error::{param, Error, Result};
use crate::link::SystemParams;

/// Derived constants shared by every closed-form evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormContext {
    pub gbar0: f64,
    pub gbar1: f64,
    pub gbar2: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    /// `gamma_bar2 / gamma_bar1`; infinite or NaN when `gamma_bar1 == 0`.
    pub phi: f64,
}

impl ClosedFormContext {
    pub fn new(gbar0: f64, gbar1: f64, gbar2: f64) -> Result<Self> {
        for (i, g) in [gbar0, gbar1, gbar2].into_iter().enumerate() {
            if !(g >= 0.0) || !g.is_finite() {
                return param(format!("gamma_bar_{i} must be finite and >= 0, got {g}"));
            }
        }
        Ok(Self {
            gbar0,
            gbar1,
            gbar2,
            u0: 1.0 + gbar0,
            u1: 1.0 + gbar1,
            u2: 1.0 + gbar2,
            v0: 1.0 + 2.0 * gbar0,
            v1: 1.0 + 2.0 * gbar1,
            v2: 1.0 + 2.0 * gbar2,
            phi: gbar2 / gbar1,
        })
    }

    pub fn from_params(params: &SystemParams) -> Result<Self> {
        let [g0, g1, g2] = params.gamma_bar();
        Self::new(g0, g1, g2)
    }

    /// Symmetric channel, all average SNRs equal.
    pub fn symmetric(gbar: f64) -> Result<Self> {
        Self::new(gbar, gbar, gbar)
    }
}

/// Conditional mean and variance of a decision variable given the previous
/// received sample, `xi | y(k-1) ~ N(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalGaussianParams {
    pub mean: f64,
    pub variance: f64,
}

impl ConditionalGaussianParams {
    /// `A = gbar/(gbar+1) |y|^2`, `B = (N0/2) (2 gbar + 1)/(gbar + 1) |y|^2` with `N0 = 1`.
    pub fn given_previous(gbar: f64, prev_power: f64) -> Self {
        Self {
            mean: gbar / (gbar + 1.0) * prev_power,
            variance: 0.5 * (2.0 * gbar + 1.0) / (gbar + 1.0) * prev_power,
        }
    }
}

/// Relay decoding-error mixture weights for a given `gamma1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureWeights {
    /// Instantaneous relay bit-error probability `exp(-gamma1) / 2`.
    pub p1: f64,
    /// `2 - exp(-gamma1)`, i.e. `2 (1 - p1)`.
    pub psi: f64,
}

impl MixtureWeights {
    pub fn new(gamma1: f64) -> Self {
        let e = (-gamma1).exp();
        Self {
            p1: 0.5 * e,
            psi: 2.0 - e,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        param(format!("beta must be finite and > 0, got {beta}"))
    }
}

fn check_nonneg(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("|xi| CDF needs x >= 0, got {x}")))
    }
}

/// Density of the direct-link decision variable.
pub fn pdf_xi0(x: f64, ctx: &ClosedFormContext) -> f64 {
    if x <= 0.0 {
        (2.0 * x).exp() / ctx.u0
    } else {
        (-2.0 * x / ctx.v0).exp() / ctx.u0
    }
}

pub fn cdf_xi0(x: f64, ctx: &ClosedFormContext) -> f64 {
    if x <= 0.0 {
        (2.0 * x).exp() / (2.0 * ctx.u0)
    } else {
        1.0 - ctx.v0 / (2.0 * ctx.u0) * (-2.0 * x / ctx.v0).exp()
    }
}

/// CDF of `|xi0|`.
pub fn cdf_abs_xi0(x: f64, ctx: &ClosedFormContext) -> Result<f64> {
    check_nonneg(x)?;
    Ok(1.0
        - (-2.0 * x).exp() / (2.0 * ctx.u0)
        - ctx.v0 / (2.0 * ctx.u0) * (-2.0 * x / ctx.v0).exp())
}

/// Density of `xi_w = beta * xi2` given the instantaneous source-relay SNR.
pub fn pdf_xiw(x: f64, beta: f64, gamma1: f64, ctx: &ClosedFormContext) -> Result<f64> {
    check_beta(beta)?;
    let MixtureWeights { psi, .. } = MixtureWeights::new(gamma1);
    let (u2, v2) = (ctx.u2, ctx.v2);
    let num = if x <= 0.0 {
        (2.0 * x / (v2 * beta) - gamma1).exp() + psi * (2.0 * x / beta).exp()
    } else {
        (-2.0 * x / beta - gamma1).exp() + psi * (-2.0 * x / (v2 * beta)).exp()
    };
    Ok(num / (2.0 * u2 * beta))
}

pub fn cdf_xiw(x: f64, beta: f64, gamma1: f64, ctx: &ClosedFormContext) -> Result<f64> {
    check_beta(beta)?;
    let MixtureWeights { psi, .. } = MixtureWeights::new(gamma1);
    let (u2, v2) = (ctx.u2, ctx.v2);
    Ok(if x <= 0.0 {
        (psi * (2.0 * x / beta).exp() + v2 * (2.0 * x / (v2 * beta) - gamma1).exp()) / (4.0 * u2)
    } else {
        1.0 - ((-2.0 * x / beta - gamma1).exp() + v2 * psi * (-2.0 * x / (v2 * beta)).exp())
            / (4.0 * u2)
    })
}

/// CDF of `|xi_w|`; does not depend on `gamma1`.
pub fn cdf_abs_xiw(x: f64, beta: f64, ctx: &ClosedFormContext) -> Result<f64> {
    check_beta(beta)?;
    check_nonneg(x)?;
    let (u2, v2) = (ctx.u2, ctx.v2);
    Ok(1.0 - ((-2.0 * x / beta).exp() + v2 * (-2.0 * x / (v2 * beta)).exp()) / (2.0 * u2))
}
