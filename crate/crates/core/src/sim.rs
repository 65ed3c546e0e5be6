//! Monte Carlo bit-error-rate harness.
//!
//! Block `b` of a run always uses stream `b` of the run seed, every scheme
//! is scored on the same block realisations, and per-block error counts are
//! reduced in block order. The result of a run therefore depends only on
//! the configuration, never on the worker count.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    aber_asymptotic_wsc2, aber_wsc1, aber_wsc2, optimize_beta, ClosedFormContext,
};
use crate::channel::derive_stream;
use crate::combiner::{
    beta_wsc2, combine_lar, combine_sc, select_weighted, SchemeId, WeightFactor,
};
use crate::error::{param, Result};
use crate::link::{simulate_block, BlockObservables, SystemParams};

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
/// Blocks simulated between two early-stopping checks.
const CHUNK_BLOCKS: u64 = 512;
/// Seed offset between successive points of an SNR sweep.
pub const SWEEP_SEED_STRIDE: u64 = 1_000_000_000;

/// Weight used for the fixed-weight combiner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Wsc1Beta {
    Fixed(WeightFactor),
    /// ABER-optimal weight for the configured average SNRs.
    Optimal,
}

impl Wsc1Beta {
    pub fn resolve(self, params: &SystemParams) -> Result<f64> {
        match self {
            Wsc1Beta::Fixed(w) => Ok(w.get()),
            Wsc1Beta::Optimal => Ok(optimize_beta(&ClosedFormContext::from_params(params)?)?.beta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: SystemParams,
    pub schemes: Vec<SchemeId>,
    pub beta_wsc1: Wsc1Beta,
    pub max_blocks: u64,
    /// Stop once every scheme has at least this many bit errors; 0 disables
    /// early stopping.
    pub min_errors: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            schemes: SchemeId::ALL.to_vec(),
            beta_wsc1: Wsc1Beta::Optimal,
            max_blocks: 100_000,
            min_errors: 200,
            seed: 1,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn with_schemes(mut self, schemes: &[SchemeId]) -> Self {
        self.schemes = schemes.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.schemes.is_empty() {
            return param("at least one scheme is required");
        }
        if self.max_blocks == 0 {
            return param("max_blocks must be >= 1");
        }
        if self.workers == 0 {
            return param("workers must be >= 1");
        }
        Ok(())
    }

    fn schemes_dedup(&self) -> Vec<SchemeId> {
        let mut s = self.schemes.clone();
        s.sort();
        s.dedup();
        s
    }
}

/// Simulated bit-error rate with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerEstimate {
    pub scheme: SchemeId,
    pub bit_errors: u64,
    pub bits: u64,
    pub ber: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl BerEstimate {
    pub fn from_counts(scheme: SchemeId, bit_errors: u64, bits: u64) -> Self {
        let (ci95_low, ci95_high) = wilson_interval(bit_errors, bits, Z95);
        Self {
            scheme,
            bit_errors,
            bits,
            ber: if bits == 0 {
                0.0
            } else {
                bit_errors as f64 / bits as f64
            },
            ci95_low,
            ci95_high,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci95_low <= p && p <= self.ci95_high
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Per-block scorer for a fixed scheme list.
struct Scorer {
    schemes: Vec<SchemeId>,
    beta_wsc1: f64,
    gamma_bar2: f64,
    params: SystemParams,
}

impl Scorer {
    fn errors(&self, obs: &BlockObservables) -> Vec<u64> {
        let beta2 = beta_wsc2(obs.gamma1(self.params.snr_mode), self.gamma_bar2);
        self.schemes
            .iter()
            .map(|scheme| {
                let decide = |k: usize| -> i8 {
                    let (x0, x2) = (obs.xi0[k], obs.xi2[k]);
                    match scheme {
                        SchemeId::Sc => combine_sc(x0, x2).bit,
                        SchemeId::Wsc1 => select_weighted(x0, x2, self.beta_wsc1).bit,
                        SchemeId::Wsc2 => select_weighted(x0, x2, beta2).bit,
                        SchemeId::Lar => combine_lar(x0, obs.xi_lar[k]),
                    }
                };
                (0..obs.len())
                    .filter(|&k| decide(k) != obs.tx_bits[k])
                    .count() as u64
            })
            .collect()
    }
}

/// Runs the Monte Carlo for every requested scheme on shared realisations.
///
/// Results come back in `SchemeId` order, one per distinct scheme.
pub fn run_simulation(cfg: &SimConfig) -> Result<Vec<BerEstimate>> {
    cfg.validate()?;
    let schemes = cfg.schemes_dedup();
    let beta_wsc1 = if schemes.contains(&SchemeId::Wsc1) {
        cfg.beta_wsc1.resolve(&cfg.params)?
    } else {
        1.0
    };
    let scorer = Scorer {
        schemes: schemes.clone(),
        beta_wsc1,
        gamma_bar2: cfg.params.gamma_bar()[2],
        params: cfg.params,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| crate::Error::Parameter(format!("cannot start worker pool: {e}")))?;

    let bits_per_block = cfg.params.block_len as u64;
    let mut errors = vec![0u64; schemes.len()];
    let mut blocks = 0u64;
    let mut start = 0u64;
    'outer: while start < cfg.max_blocks {
        let end = (start + CHUNK_BLOCKS).min(cfg.max_blocks);
        let chunk: Vec<Vec<u64>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|b| {
                    let mut rng = derive_stream(cfg.seed, b);
                    simulate_block(&cfg.params, &mut rng).map(|obs| scorer.errors(&obs))
                })
                .collect::<Result<_>>()
        })?;
        for block_errors in chunk {
            for (acc, e) in errors.iter_mut().zip(block_errors) {
                *acc += e;
            }
            blocks += 1;
            if cfg.min_errors > 0 && errors.iter().all(|&e| e >= cfg.min_errors) {
                break 'outer;
            }
        }
        start = end;
    }

    let bits = blocks * bits_per_block;
    Ok(schemes
        .iter()
        .zip(errors)
        .map(|(&s, e)| BerEstimate::from_counts(s, e, bits))
        .collect())
}

/// Closed-form ABER of a scheme where one exists: SC (unit weight), WSC1 at
/// `beta`, WSC2. LAR has none.
pub fn analytic_aber(scheme: SchemeId, beta: f64, ctx: &ClosedFormContext) -> Option<f64> {
    match scheme {
        SchemeId::Sc => aber_wsc1(1.0, ctx).ok(),
        SchemeId::Wsc1 => aber_wsc1(beta, ctx).ok(),
        SchemeId::Wsc2 => aber_wsc2(ctx).ok(),
        SchemeId::Lar => None,
    }
}

/// High-SNR WSC2 approximation, defined for equal positive channel variances.
pub fn asymptotic_aber(scheme: SchemeId, params: &SystemParams) -> Option<f64> {
    if scheme != SchemeId::Wsc2 || !params.is_symmetric() || !(params.sigma_sq[0] > 0.0) {
        return None;
    }
    aber_asymptotic_wsc2(params.gamma_bar()[0]).ok()
}

/// Simulated and analytic results of one scheme at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeResult {
    pub estimate: BerEstimate,
    /// Weight used by WSC1; `None` for the other schemes.
    pub beta: Option<f64>,
    pub analytic: Option<f64>,
    pub asymptotic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub snr_db: f64,
    pub seed: u64,
    pub results: Vec<SchemeResult>,
}

impl SweepPoint {
    pub fn get(&self, scheme: SchemeId) -> Option<&SchemeResult> {
        self.results.iter().find(|r| r.estimate.scheme == scheme)
    }
}

/// Simulates one operating point and attaches the closed-form values.
pub fn evaluate_point(cfg: &SimConfig) -> Result<SweepPoint> {
    cfg.validate()?;
    let needs_beta = cfg.schemes.contains(&SchemeId::Wsc1);
    let beta = if needs_beta {
        cfg.beta_wsc1.resolve(&cfg.params)?
    } else {
        1.0
    };
    let resolved = SimConfig {
        beta_wsc1: Wsc1Beta::Fixed(WeightFactor::new(beta)?),
        ..cfg.clone()
    };
    let estimates = run_simulation(&resolved)?;
    let ctx = ClosedFormContext::from_params(&cfg.params)?;
    let results = estimates
        .into_iter()
        .map(|estimate| SchemeResult {
            beta: (estimate.scheme == SchemeId::Wsc1).then_some(beta),
            analytic: analytic_aber(estimate.scheme, beta, &ctx),
            asymptotic: asymptotic_aber(estimate.scheme, &cfg.params),
            estimate,
        })
        .collect();
    Ok(SweepPoint {
        axis_value: cfg.params.p0_over_n0_db,
        snr_db: cfg.params.p0_over_n0_db,
        seed: cfg.seed,
        results,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `P0/N0` in dB; points use seeds `seed + 1e9 * index`.
    SnrDb,
    /// WSC1 weight; every point reuses the same seed so the curve is
    /// evaluated on common realisations.
    Beta,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::Beta => "beta",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

/// Runs one simulation per axis value.
pub fn sweep(cfg: &SimConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepResult> {
    if values.is_empty() {
        return param("sweep needs at least one axis value");
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return param("sweep values must be strictly increasing");
    }
    let points = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut point_cfg = cfg.clone();
            match axis {
                SweepAxis::SnrDb => {
                    point_cfg.params.p0_over_n0_db = v;
                    point_cfg.seed = cfg
                        .seed
                        .wrapping_add(SWEEP_SEED_STRIDE.wrapping_mul(i as u64));
                }
                SweepAxis::Beta => {
                    point_cfg.beta_wsc1 = Wsc1Beta::Fixed(WeightFactor::new(v)?);
                    if !point_cfg.schemes.contains(&SchemeId::Wsc1) {
                        point_cfg.schemes.push(SchemeId::Wsc1);
                    }
                }
            }
            let mut point = evaluate_point(&point_cfg)?;
            point.axis_value = v;
            Ok(point)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { axis, points })
}
