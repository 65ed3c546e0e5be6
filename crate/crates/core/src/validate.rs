//! Self-check suite behind the `validate` CLI command.
//!
//! Each check is independent of the code path it verifies: densities are
//! integrated numerically, closed forms are compared with the nested
//! quadrature oracles, and simulated BERs with the closed forms.

use std::time::Instant;

use rand::Rng;

use crate::analysis::oracle::{aber_wsc1_numeric, aber_wsc2_numeric};
use crate::analysis::quad::integrate_to_inf_with_breaks;
use crate::analysis::{
    aber_wsc1, aber_wsc2, cdf_abs_xi0, cdf_abs_xiw, cdf_xi0, cdf_xiw, pdf_xi0, pdf_xiw,
    ClosedFormContext,
};
use crate::channel::derive_stream;
use crate::combiner::{SchemeId, WeightFactor};
use crate::error::Result;
use crate::link::SystemParams;
use crate::sim::{run_simulation, SimConfig, Wsc1Beta};

pub type Wsc1Formula = dyn Fn(f64, &ClosedFormContext) -> Result<f64> + Sync;
pub type Wsc2Formula = dyn Fn(&ClosedFormContext) -> Result<f64> + Sync;

/// Closed forms under test. The defaults are the crate's own; tests swap in
/// perturbed versions to confirm the oracles notice.
pub struct Formulas {
    pub wsc1: Box<Wsc1Formula>,
    pub wsc2: Box<Wsc2Formula>,
}

impl Default for Formulas {
    fn default() -> Self {
        Self {
            wsc1: Box::new(aber_wsc1),
            wsc2: Box::new(aber_wsc2),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub quick: bool,
    pub seed: u64,
    pub workers: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 1,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// A random `(beta, gamma_bar0, gamma_bar1, gamma_bar2)` tuple with log-uniform
/// SNRs in `[0.1, 1e4]` and weight in `[0.05, 2]`.
pub fn random_tuples(seed: u64, n: usize) -> Vec<(f64, [f64; 3])> {
    let mut rng = derive_stream(seed, 0xA11CE);
    let mut log_uniform = |lo: f64, hi: f64| (rng.random_range(lo.ln()..hi.ln())).exp();
    (0..n)
        .map(|_| {
            let beta = log_uniform(0.05, 2.0);
            let g = [
                log_uniform(0.1, 1e4),
                log_uniform(0.1, 1e4),
                log_uniform(0.1, 1e4),
            ];
            (beta, g)
        })
        .collect()
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Worst relative gap between the WSC1 formula and the quadrature oracle.
pub fn wsc1_vs_integration(formula: &Wsc1Formula, tuples: &[(f64, [f64; 3])]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(beta, [g0, g1, g2]) in tuples {
        let ctx = ClosedFormContext::new(g0, g1, g2)?;
        worst = worst.max(rel_err(
            formula(beta, &ctx)?,
            aber_wsc1_numeric(beta, &ctx)?,
        ));
    }
    Ok(worst)
}

/// Worst relative gap between the WSC2 formula and the quadrature oracle.
pub fn wsc2_vs_integration(formula: &Wsc2Formula, tuples: &[(f64, [f64; 3])]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(_, [g0, g1, g2]) in tuples {
        let ctx = ClosedFormContext::new(g0, g1, g2)?;
        worst = worst.max(rel_err(formula(&ctx)?, aber_wsc2_numeric(&ctx)?));
    }
    Ok(worst)
}

pub fn run_validation(opts: &ValidationOptions, formulas: &Formulas) -> Vec<CheckResult> {
    let n_tuples = if opts.quick { 6 } else { 30 };
    let tuples = random_tuples(opts.seed, n_tuples);
    let mut out = Vec::new();

    out.push(check("pdf normalisation", || {
        let mut worst: f64 = 0.0;
        for g in [0.0, 1.0, 10.0, 100.0] {
            let ctx = ClosedFormContext::symmetric(g)?;
            let total = two_sided(|x| pdf_xi0(x, &ctx), &[0.5, ctx.v0 / 2.0])?;
            worst = worst.max((total - 1.0).abs());
            for beta in [0.3, 1.0, 2.0] {
                for g1 in [0.0, 1.0, 5.0] {
                    let f = |x| pdf_xiw(x, beta, g1, &ctx).unwrap_or(f64::NAN);
                    let total = two_sided(f, &[beta / 2.0, ctx.v2 * beta / 2.0])?;
                    worst = worst.max((total - 1.0).abs());
                }
            }
        }
        Ok((worst < 1e-9, format!("max |integral - 1| = {worst:.2e}")))
    }));

    out.push(check("|xi| CDF identities", || {
        let mut worst: f64 = 0.0;
        for g in [0.0, 0.7, 30.0] {
            let ctx = ClosedFormContext::new(g, 2.0, 3.0 * g)?;
            for k in 0..10 {
                let x = 0.05 * 1.8f64.powi(k);
                let d0 = cdf_xi0(x, &ctx) - cdf_xi0(-x, &ctx) - cdf_abs_xi0(x, &ctx)?;
                worst = worst.max(d0.abs());
                for beta in [0.1, 1.0, 2.5] {
                    for g1 in [0.0, 0.5, 3.0, 20.0] {
                        let dw = cdf_xiw(x, beta, g1, &ctx)?
                            - cdf_xiw(-x, beta, g1, &ctx)?
                            - cdf_abs_xiw(x, beta, &ctx)?;
                        worst = worst.max(dw.abs());
                    }
                }
            }
        }
        Ok((worst < 1e-12, format!("max deviation = {worst:.2e}")))
    }));

    out.push(check("pdf = dCDF/dx", || {
        let mut rng = derive_stream(opts.seed, 0xD1FF);
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x: f64 = rng.random_range(-10.0..10.0);
            if x.abs() < 1e-3 {
                continue;
            }
            let ctx = ClosedFormContext::new(
                rng.random_range(0.0..50.0),
                1.0,
                rng.random_range(0.0..50.0),
            )?;
            let beta = rng.random_range(0.1..2.0);
            let g1 = rng.random_range(0.0..10.0);
            let d0 = (cdf_xi0(x + h, &ctx) - cdf_xi0(x - h, &ctx)) / (2.0 * h) - pdf_xi0(x, &ctx);
            let dw = (cdf_xiw(x + h, beta, g1, &ctx)? - cdf_xiw(x - h, beta, g1, &ctx)?)
                / (2.0 * h)
                - pdf_xiw(x, beta, g1, &ctx)?;
            worst = worst.max(d0.abs()).max(dw.abs());
        }
        Ok((worst < 1e-6, format!("max deviation = {worst:.2e}")))
    }));

    out.push(check("zero-SNR anchor", || {
        let p = (formulas.wsc1)(1.0, &ClosedFormContext::symmetric(0.0)?)?;
        Ok(((p - 0.5).abs() < 1e-12, format!("ABER = {p}")))
    }));

    out.push(check("WSC1 formula vs integration", || {
        let worst = wsc1_vs_integration(formulas.wsc1.as_ref(), &tuples)?;
        Ok((
            worst < 1e-4,
            format!("{n_tuples} tuples, max rel err = {worst:.2e}"),
        ))
    }));

    out.push(check("WSC2 formula vs integration", || {
        let worst = wsc2_vs_integration(formulas.wsc2.as_ref(), &tuples)?;
        Ok((
            worst < 1e-4,
            format!("{n_tuples} tuples, max rel err = {worst:.2e}"),
        ))
    }));

    out.push(check("pure noise BER = 0.5", || {
        let mut cfg = SimConfig::new(SystemParams::new(0.0, [0.0; 3]).with_block_len(256));
        cfg.max_blocks = 400;
        cfg.min_errors = 0;
        cfg.seed = opts.seed;
        cfg.workers = opts.workers;
        cfg.beta_wsc1 = Wsc1Beta::Fixed(WeightFactor::UNIT);
        let est = run_simulation(&cfg)?;
        let worst = est.iter().map(|e| (e.ber - 0.5).abs()).fold(0.0, f64::max);
        Ok((
            worst < 0.01,
            format!("{} bits, max |BER - 0.5| = {worst:.4}", est[0].bits),
        ))
    }));

    out.push(check("simulation vs formula (10 dB)", || {
        // One data bit per block keeps bit errors independent, which the
        // per-bit Wilson interval assumes.
        let mut cfg = SimConfig::new(SystemParams::new(10.0, [1.0; 3]).with_block_len(1));
        cfg.schemes = vec![SchemeId::Sc, SchemeId::Wsc2];
        cfg.min_errors = if opts.quick { 300 } else { 1000 };
        cfg.max_blocks = 50_000_000;
        cfg.seed = opts.seed;
        cfg.workers = opts.workers;
        let ctx = ClosedFormContext::from_params(&cfg.params)?;
        let est = run_simulation(&cfg)?;
        let sc = (formulas.wsc1)(1.0, &ctx)?;
        let wsc2 = (formulas.wsc2)(&ctx)?;
        let ok = est[0].contains(sc) && est[1].contains(wsc2);
        Ok((
            ok,
            format!(
                "SC {:.4e} [{:.4e}, {:.4e}] vs {sc:.4e}; WSC2 {:.4e} [{:.4e}, {:.4e}] vs {wsc2:.4e}",
                est[0].ber, est[0].ci95_low, est[0].ci95_high, est[1].ber, est[1].ci95_low, est[1].ci95_high
            ),
        ))
    }));

    out
}

fn two_sided(f: impl Fn(f64) -> f64, scales: &[f64]) -> Result<f64> {
    let s = scales.iter().copied().fold(0.0, f64::max).max(1e-3);
    let right = integrate_to_inf_with_breaks(&f, 0.0, s, scales, 0.0, 1e-12)?;
    let left = integrate_to_inf_with_breaks(|t| f(-t), 0.0, s, scales, 0.0, 1e-12)?;
    Ok(left + right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::wsc1_terms;

    #[test]
    fn quick_suite_passes() {
        let results = run_validation(
            &ValidationOptions {
                quick: true,
                ..Default::default()
            },
            &Formulas::default(),
        );
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 8);
    }

    #[test]
    fn perturbed_i1_is_caught() {
        let formulas = Formulas {
            wsc1: Box::new(|beta, ctx| {
                let t = wsc1_terms(beta, ctx)?;
                Ok(t.pe1 + beta * (1.01 * t.i1 + t.i2) / t.pe2_denominator)
            }),
            ..Formulas::default()
        };
        let tuples = random_tuples(1, 6);
        let worst = wsc1_vs_integration(formulas.wsc1.as_ref(), &tuples).unwrap();
        assert!(worst > 1e-4, "perturbation went unnoticed: {worst:.2e}");
        let results = run_validation(
            &ValidationOptions {
                quick: true,
                ..Default::default()
            },
            &formulas,
        );
        let c = results
            .iter()
            .find(|r| r.name == "WSC1 formula vs integration")
            .unwrap();
        assert!(!c.passed);
    }

    #[test]
    fn tuples_in_range() {
        for (b, g) in random_tuples(9, 50) {
            assert!((0.05..=2.0).contains(&b));
            assert!(g.iter().all(|x| (0.1..=1e4).contains(x)));
        }
    }
}
