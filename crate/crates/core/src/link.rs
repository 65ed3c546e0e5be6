//! Source -> relay -> destination signal chain for one fading block.
//!
//! Noise power is normalised to `N0 = 1`, so `P0 = 10^(dB/10)` and the
//! average link SNRs are `gamma_bar_i = P0 * sigma_i^2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{sample_fading_block, unit_complex_gaussian, ComplexSample, RngStream};
use crate::combiner::{lar_power_factor, sign_bit};
use crate::error::{param, Error, Result};

/// How the destination learns the instantaneous source-relay SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrMode {
    /// True `P0 |h1|^2 / N0`.
    #[default]
    Exact,
    /// Energy-based estimate computed at the relay from its received block.
    Estimated,
}

impl fmt::Display for SnrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrMode::Exact => "exact",
            SnrMode::Estimated => "estimated",
        })
    }
}

impl FromStr for SnrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SnrMode::Exact),
            "estimated" => Ok(SnrMode::Estimated),
            other => param(format!(
                "unknown snr mode '{other}' (expected exact or estimated)"
            )),
        }
    }
}

/// Link-level configuration shared by the simulator and the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transmit SNR `P0/N0` in dB.
    pub p0_over_n0_db: f64,
    /// Channel variances of the S-D, S-R and R-D links.
    pub sigma_sq: [f64; 3],
    /// Data bits per block (one extra reference symbol is sent).
    pub block_len: usize,
    pub snr_mode: SnrMode,
}

impl SystemParams {
    pub fn new(p0_over_n0_db: f64, sigma_sq: [f64; 3]) -> Self {
        Self {
            p0_over_n0_db,
            sigma_sq,
            block_len: 256,
            snr_mode: SnrMode::Exact,
        }
    }

    pub fn with_block_len(mut self, block_len: usize) -> Self {
        self.block_len = block_len;
        self
    }

    pub fn with_snr_mode(mut self, snr_mode: SnrMode) -> Self {
        self.snr_mode = snr_mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_len == 0 {
            return param("block length must be >= 1");
        }
        if !self.p0_over_n0_db.is_finite() {
            return param(format!(
                "P0/N0 must be finite, got {} dB",
                self.p0_over_n0_db
            ));
        }
        if self.sigma_sq.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return param(format!(
                "channel variances must be finite and >= 0, got {:?}",
                self.sigma_sq
            ));
        }
        Ok(())
    }

    /// Linear transmit power with `N0 = 1`.
    pub fn p0(&self) -> f64 {
        10f64.powf(self.p0_over_n0_db / 10.0)
    }

    /// Average SNRs `[gamma_bar0, gamma_bar1, gamma_bar2]`.
    pub fn gamma_bar(&self) -> [f64; 3] {
        let p0 = self.p0();
        self.sigma_sq.map(|s| p0 * s)
    }

    /// True when all three links have the same variance.
    pub fn is_symmetric(&self) -> bool {
        let [a, b, c] = self.sigma_sq;
        a == b && b == c
    }
}

/// Everything the destination combiners need from one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockObservables {
    /// Direct-link decision variables.
    pub xi0: Vec<f64>,
    /// Relay-link decision variables (relay at full power).
    pub xi2: Vec<f64>,
    /// Relay-link decision variables with the relay power scaled by `lar_power`.
    pub xi_lar: Vec<f64>,
    pub gamma1_exact: f64,
    pub gamma1_est: f64,
    /// Power scale applied at the relay for the LAR observables.
    pub lar_power: f64,
    pub relay_bits: Vec<i8>,
    pub tx_bits: Vec<i8>,
}

impl BlockObservables {
    /// Source-relay SNR according to `mode`.
    pub fn gamma1(&self, mode: SnrMode) -> f64 {
        match mode {
            SnrMode::Exact => self.gamma1_exact,
            SnrMode::Estimated => self.gamma1_est,
        }
    }

    pub fn len(&self) -> usize {
        self.tx_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tx_bits.is_empty()
    }
}

/// Differential encoding `s(k) = s(k-1) d(k)` with reference `s(0) = 1`.
pub fn diff_encode(bits: &[i8]) -> Result<Vec<i8>> {
    if bits.is_empty() {
        return param("cannot differentially encode an empty bit sequence");
    }
    let mut out = Vec::with_capacity(bits.len() + 1);
    let mut s = 1i8;
    out.push(s);
    for &d in bits {
        s *= d;
        out.push(s);
    }
    Ok(out)
}

/// `Re{y(k) y*(k-1)}`.
#[inline]
pub fn decision_variable(y_k: ComplexSample, y_km1: ComplexSample) -> f64 {
    y_k.re * y_km1.re + y_k.im * y_km1.im
}

/// Non-coherent differential detection of a received block.
pub fn relay_detect(y: &[ComplexSample]) -> Result<Vec<i8>> {
    if y.len() < 2 {
        return param(format!(
            "differential detection needs >= 2 symbols, got {}",
            y.len()
        ));
    }
    Ok(y.windows(2)
        .map(|w| sign_bit(decision_variable(w[1], w[0])))
        .collect())
}

/// Energy-based estimate of the source-relay SNR, `max(0, |y|^2/(n N0) - 1)`
/// over the `n` observed symbols.
pub fn estimate_relay_snr(y: &[ComplexSample]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    let energy: f64 = y.iter().map(|s| s.norm_sqr()).sum();
    (energy / y.len() as f64 - 1.0).max(0.0)
}

/// Simulates one block end to end.
///
/// Draw order from `rng`: fading gains `(h0, h1, h2)`, `L` data bits, then
/// `L + 1` samples each of `n0`, `n1` and `n2`. The LAR relay branch reuses
/// the `n2` realisations so scheme comparisons are paired.
pub fn simulate_block(params: &SystemParams, rng: &mut RngStream) -> Result<BlockObservables> {
    params.validate()?;
    let l = params.block_len;
    let p0 = params.p0();
    let amp = p0.sqrt();
    let gains = sample_fading_block(rng, params.sigma_sq)?;

    let tx_bits: Vec<i8> = (0..l).map(|_| rng.bit()).collect();
    let mut noise =
        || -> Vec<ComplexSample> { (0..=l).map(|_| unit_complex_gaussian(rng)).collect() };
    let n0 = noise();
    let n1 = noise();
    let n2 = noise();

    let s = diff_encode(&tx_bits)?;
    let received =
        |h: ComplexSample, a: f64, sym: &[i8], n: &[ComplexSample]| -> Vec<ComplexSample> {
            sym.iter()
                .zip(n)
                .map(|(&x, &w)| h * (a * f64::from(x)) + w)
                .collect()
        };
    let y0 = received(gains.h0, amp, &s, &n0);
    let y1 = received(gains.h1, amp, &s, &n1);

    let relay_bits = relay_detect(&y1)?;
    let s_hat = diff_encode(&relay_bits)?;
    let gamma1_exact = p0 * gains.h1.norm_sqr();
    let gamma1_est = estimate_relay_snr(&y1);
    let gamma_bar2 = p0 * params.sigma_sq[2];
    let lar_power = lar_power_factor(
        match params.snr_mode {
            SnrMode::Exact => gamma1_exact,
            SnrMode::Estimated => gamma1_est,
        },
        gamma_bar2,
    );

    let y2 = received(gains.h2, amp, &s_hat, &n2);
    let y_lar = received(gains.h2, (lar_power * p0).sqrt(), &s_hat, &n2);

    let dv = |y: &[ComplexSample]| -> Vec<f64> {
        y.windows(2)
            .map(|w| decision_variable(w[1], w[0]))
            .collect()
    };

    Ok(BlockObservables {
        xi0: dv(&y0),
        xi2: dv(&y2),
        xi_lar: dv(&y_lar),
        gamma1_exact,
        gamma1_est,
        lar_power,
        relay_bits,
        tx_bits,
    })
}
