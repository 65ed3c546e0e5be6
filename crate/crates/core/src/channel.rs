//! Seeded Rayleigh block-fading gains and complex Gaussian noise.
//!
//! Every fading block draws from its own [`RngStream`], derived from the run
//! seed and the block index. Streams are ChaCha8 keystreams: the seed fixes
//! the key and the block index selects the 64-bit stream number, so block
//! `b` sees the same samples no matter which worker handles it or in which
//! order blocks are visited.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{param, Result};

/// Complex baseband sample (fading gain, noise or received symbol).
pub type ComplexSample = Complex64;

/// Independent, reproducible random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Derives the stream `stream_id` of the generator keyed by `seed`.
    pub fn derive(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Equiprobable antipodal bit, `+1` or `-1`.
    pub fn bit(&mut self) -> i8 {
        if self.rng.random::<bool>() {
            1
        } else {
            -1
        }
    }

    fn std_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Convenience wrapper for [`RngStream::derive`].
pub fn derive_stream(seed: u64, stream_id: u64) -> RngStream {
    RngStream::derive(seed, stream_id)
}

/// Circularly symmetric complex Gaussian sample with `E|z|^2 = variance`.
pub fn sample_complex_gaussian(rng: &mut RngStream, variance: f64) -> Result<ComplexSample> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return param(format!("variance must be finite and >= 0, got {variance}"));
    }
    Ok(unit_complex_gaussian(rng) * variance.sqrt())
}

/// `CN(0, 1)` sample. Hot path of the simulator, no argument checks.
#[inline]
pub(crate) fn unit_complex_gaussian(rng: &mut RngStream) -> ComplexSample {
    let re = rng.std_normal();
    let im = rng.std_normal();
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Channel gains of one fading block: source-destination, source-relay and
/// relay-destination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingGains {
    pub h0: ComplexSample,
    pub h1: ComplexSample,
    pub h2: ComplexSample,
}

/// Draws the three independent Rayleigh gains held constant over one block.
pub fn sample_fading_block(rng: &mut RngStream, sigma_sq: [f64; 3]) -> Result<FadingGains> {
    Ok(FadingGains {
        h0: sample_complex_gaussian(rng, sigma_sq[0])?,
        h1: sample_complex_gaussian(rng, sigma_sq[1])?,
        h2: sample_complex_gaussian(rng, sigma_sq[2])?,
    })
}
