//! Closed-form ABER of the two weighted selection combiners.
//!
//! The expressions are evaluated as printed, with two numerical rewrites
//! that leave the algebra untouched:
//!
//! * every `exp(a) * E1(z)` product is computed as `exp(a - z) * [e^z E1(z)]`
//!   so that neither factor overflows at high SNR;
//! * `u_i - 1` is taken as `gamma_bar_i` exactly.

use super::expint::scaled_exp_integral_e1;
use super::{check_beta, ClosedFormContext};
use crate::error::{param, Result};

/// Pieces of the WSC1 (fixed weight) closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wsc1Terms {
    /// Error probability when the direct link is selected.
    pub pe1: f64,
    /// Error probability when the relay link is selected.
    pub pe2: f64,
    pub i1: f64,
    pub i2: f64,
    /// Denominator of `pe2 = beta (I1 + I2) / denominator`.
    pub pe2_denominator: f64,
}

impl Wsc1Terms {
    pub fn total(&self) -> f64 {
        self.pe1 + self.pe2
    }
}

fn check_ctx(ctx: &ClosedFormContext) -> Result<()> {
    let vals = [ctx.gbar0, ctx.gbar1, ctx.gbar2];
    if vals.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return param(format!(
            "average SNRs must be finite and >= 0, got {vals:?}"
        ));
    }
    Ok(())
}

pub fn wsc1_terms(beta: f64, ctx: &ClosedFormContext) -> Result<Wsc1Terms> {
    check_beta(beta)?;
    check_ctx(ctx)?;
    let ClosedFormContext {
        u0, u1, u2, v0, v2, ..
    } = *ctx;
    let one_minus_u2 = -ctx.gbar2;
    let b = beta;

    let pe1 = (u2 + v2 * b) / (2.0 * u0 * u2 * (1.0 + b) * (1.0 + v2 * b));

    let i1 = -one_minus_u2
        * (2.0 * u2 * v0 * v0 - u0 * (1.0 - 2.0 * u2 - 4.0 * u2 * u2) * v0 * b
            + 4.0 * u0 * u0 * u2 * v2 * b * b
            + u0 * v2 * v2 * b * b * b);
    let i2 = u1
        * (v2 * b * b * (1.0 - 2.0 * u2 - u0 * (2.0 - 2.0 * u0 - 4.0 * u2 - v2 * b)) + v0 * v0
            - u0 * (1.0 - 4.0 * u2) * v0 * b);
    let pe2_denominator =
        2.0 * u0 * u1 * u2 * (1.0 + b) * (v0 + b) * (1.0 + v2 * b) * (v0 + v2 * b);
    let pe2 = b * (i1 + i2) / pe2_denominator;

    Ok(Wsc1Terms {
        pe1,
        pe2,
        i1,
        i2,
        pe2_denominator,
    })
}

/// ABER of weighted selection combining with fixed weight `beta`.
///
/// `beta = 1` gives conventional selection combining.
pub fn aber_wsc1(beta: f64, ctx: &ClosedFormContext) -> Result<f64> {
    Ok(wsc1_terms(beta, ctx)?.total())
}

/// Pieces of the WSC2 (adaptive weight) closed form: the direct-link error
/// split at `gamma1 = gamma_bar2` into `l1 + l2`, the relay-link error into
/// `k1 + k2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wsc2Terms {
    pub l1: f64,
    pub l2: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Wsc2Terms {
    pub fn total(&self) -> f64 {
        self.l1 + self.l2 + self.k1 + self.k2
    }
}

// exp(a) * E1(z)
fn exp_e1(a: f64, z: f64) -> f64 {
    // z > 0 is guaranteed by the callers (phi > 0, all multipliers positive).
    (a - z).exp() * scaled_exp_integral_e1(z).unwrap_or(f64::NAN)
}

pub fn wsc2_terms(ctx: &ClosedFormContext) -> Result<Wsc2Terms> {
    check_ctx(ctx)?;
    if !(ctx.gbar1 > 0.0) {
        return param("gamma_bar_1 must be positive");
    }
    if !(ctx.gbar2 > 0.0) {
        return param("gamma_bar_2 must be positive");
    }
    let ClosedFormContext {
        u0,
        u1,
        u2,
        v0,
        v2,
        phi,
        ..
    } = *ctx;
    let one_minus_u1 = -ctx.gbar1;
    let u2_minus_1 = ctx.gbar2;
    let u0_minus_1 = ctx.gbar0;

    let l1 = phi / (4.0 * u0 * u2) * {
        let a = phi / v2 - 2.0 * (-u2_minus_1) * phi / v2;
        exp_e1(a, phi) - exp_e1(a, 2.0 * phi) + exp_e1(phi / v2, phi / v2)
            - exp_e1(phi / v2, 2.0 * u2 * phi / v2)
    };

    let l2 = (3.0 * u2 - 1.0) / (8.0 * u0 * u2 * u2) * (-phi).exp();

    // exp(-(1 + u1) phi) is distributed into every term of K1.
    let base = -(1.0 + u1) * phi;
    let head = -4.0
        * u0
        * one_minus_u1
        * ((base + phi).exp()
            - u1 * (base + phi + u2_minus_1).exp()
            - (base + phi + u1 * phi).exp() * (1.0 - u1 - u2)
            - (base + phi).exp() * u2);
    let xi = |x1: f64, x2: f64, x3: f64, x4: f64, x5: f64| -> f64 {
        let a = base + x2 * phi;
        let shifted = a + 2.0 * u0_minus_1 * phi * x4;
        x1 * u1
            * u2_minus_1
            * (exp_e1(a, 2.0 * phi * x3)
                - exp_e1(a, phi * x4)
                - v0 * v0 * (exp_e1(shifted, v0 * phi * x4) - exp_e1(shifted, 2.0 * u0 * phi * x5)))
    };
    let k1 = -1.0 / (8.0 * u0 * one_minus_u1 * u1 * u2)
        * (head
            + xi(
                1.0,
                (2.0 * (1.0 + u1) * u2 - 1.0) / v2,
                u1 * u2 / v2,
                u1 / v2,
                u1 * (u0 + u2 - 1.0) / (u0 * v2),
            )
            + xi(2.0, 2.0 + u1, 1.0, 1.0, 1.0)
            + xi(-1.0, 1.0 + 2.0 * u1, u1, u1, u1));

    // e and e^{u2} in J1, J2 are folded into the trailing exp(-1 - u1 phi).
    let tail = -1.0 - u1 * phi;
    let j1 = (1.0 - u2)
        * (u2 + u0 * (1.0 - 7.0 * u2 - u0 * (1.0 - 4.0 * u2 - 8.0 * u2 * u2)))
        * (1.0 + tail).exp();
    let j2 = 2.0 * (3.0 * u0 - 1.0) * u1 * (1.0 - u0 - u2) * u2 * (u2 + tail).exp();
    let k2 = (j1 + j2) / (16.0 * u0 * u0 * u1 * (1.0 - u0 - u2) * u2 * u2);

    let terms = Wsc2Terms { l1, l2, k1, k2 };
    if !terms.total().is_finite() {
        return param(format!("WSC2 closed form is not finite for {ctx:?}"));
    }
    Ok(terms)
}

/// ABER of weighted selection combining with the adaptive weight
/// `min(1, gamma1 / gamma_bar2)`. Requires `gamma_bar1 > 0` and `gamma_bar2 > 0`.
pub fn aber_wsc2(ctx: &ClosedFormContext) -> Result<f64> {
    Ok(wsc2_terms(ctx)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zero_snr_is_one_half() {
        let ctx = ClosedFormContext::symmetric(0.0).unwrap();
        let t = wsc1_terms(1.0, &ctx).unwrap();
        assert!((t.pe1 - 0.25).abs() < 1e-15);
        assert!((t.pe2 - 0.25).abs() < 1e-15);
        assert_eq!((t.i1, t.i2, t.pe2_denominator), (0.0, 8.0, 32.0));
        assert!((t.total() - 0.5).abs() < 1e-12);
    }

    // Reference values computed with 30-digit arithmetic from an independent
    // derivation (direct integration of the error events).
    #[test]
    fn wsc1_reference_values() {
        let cases = [
            ((1.0, 10.0, 10.0, 10.0), 0.028_464_585_752_339_32),
            ((0.3, 5.0, 100.0, 2.0), 0.046_346_833_458_022_45),
            ((2.0, 1000.0, 3.0, 40.0), 0.009_323_765_305_658_37),
            ((0.05, 0.1, 1e4, 7.0), 0.273_298_048_483_529_9),
        ];
        for ((b, g0, g1, g2), want) in cases {
            let ctx = ClosedFormContext::new(g0, g1, g2).unwrap();
            let got = aber_wsc1(b, &ctx).unwrap();
            assert!(rel(got, want) < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn wsc2_reference_values() {
        let cases = [
            ((10.0, 10.0, 10.0), 0.013_305_404_485_428_996),
            ((1.0, 1.0, 1.0), 0.221_781_250_950_353_75),
            ((100.0, 100.0, 100.0), 2.207_762_781_769_846_6e-4),
            ((5.0, 30.0, 2.0), 0.040_985_414_343_619_54),
            ((0.3, 2.0, 50.0), 0.197_876_886_192_859_94),
            ((1e4, 1e4, 1e4), 3.410_649_1e-8),
        ];
        for ((g0, g1, g2), want) in cases {
            let ctx = ClosedFormContext::new(g0, g1, g2).unwrap();
            let got = aber_wsc2(&ctx).unwrap();
            assert!(rel(got, want) < 1e-7, "{g0},{g1},{g2}: {got} vs {want}");
        }
    }

    #[test]
    fn wsc2_needs_positive_relay_snrs() {
        let ctx = ClosedFormContext::new(1.0, 0.0, 1.0).unwrap();
        let err = aber_wsc2(&ctx).unwrap_err();
        assert!(err.to_string().contains("gamma_bar_1 must be positive"));
        assert!(aber_wsc2(&ClosedFormContext::new(1.0, 1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn wsc1_rejects_bad_beta() {
        let ctx = ClosedFormContext::symmetric(1.0).unwrap();
        assert!(aber_wsc1(0.0, &ctx).is_err());
        assert!(aber_wsc1(f64::NAN, &ctx).is_err());
    }

    #[test]
    fn tiny_weight_reduces_to_direct_link() {
        for g in [0.5, 10.0, 1e3] {
            let ctx = ClosedFormContext::new(g, 2.0 * g, 0.5 * g).unwrap();
            let got = aber_wsc1(1e-9, &ctx).unwrap();
            assert!(rel(got, 1.0 / (2.0 * ctx.u0)) < 1e-6);
        }
    }

    #[test]
    fn decreasing_in_each_average_snr() {
        use crate::analysis::optimize_beta;
        let grid: Vec<f64> = (0..13).map(|k| 10f64.powf(-1.0 + 0.4 * k as f64)).collect();
        for link in 0..3 {
            let at = |g: f64| {
                let mut v = [3.0, 3.0, 3.0];
                v[link] = g;
                ClosedFormContext::new(v[0], v[1], v[2]).unwrap()
            };
            for w in grid.windows(2) {
                let (a, b) = (at(w[0]), at(w[1]));
                assert!(
                    aber_wsc2(&b).unwrap() < aber_wsc2(&a).unwrap(),
                    "wsc2 link {link} at {w:?}"
                );
                // With a fixed weight a stronger relay-destination link makes the
                // relay branch win more often, so only the optimised weight is
                // monotone in gamma_bar2.
                if link < 2 {
                    assert!(
                        aber_wsc1(0.6, &b).unwrap() < aber_wsc1(0.6, &a).unwrap(),
                        "wsc1 link {link}"
                    );
                } else {
                    assert!(optimize_beta(&b).unwrap().aber < optimize_beta(&a).unwrap().aber);
                }
            }
        }
    }

    #[test]
    fn fixed_weight_not_monotone_in_relay_destination_snr() {
        let a = aber_wsc1(0.6, &ClosedFormContext::new(3.0, 3.0, 1.0).unwrap()).unwrap();
        let b = aber_wsc1(0.6, &ClosedFormContext::new(3.0, 3.0, 100.0).unwrap()).unwrap();
        assert!(b > a);
    }

    #[test]
    fn results_are_probabilities() {
        for g in [0.1, 1.0, 30.0, 1e4] {
            let ctx = ClosedFormContext::new(g, 0.3 * g + 0.1, 2.0 * g).unwrap();
            for b in [0.01, 0.5, 1.0, 3.0] {
                let p = aber_wsc1(b, &ctx).unwrap();
                assert!(p > 0.0 && p <= 0.5);
            }
            let p = aber_wsc2(&ctx).unwrap();
            assert!(p > 0.0 && p <= 0.5);
        }
    }
}
