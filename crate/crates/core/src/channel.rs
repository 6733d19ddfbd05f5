//! BPSK over AWGN.
//!
//! Bit 0 maps to +1 and bit 1 to -1. Noise variance follows the
//! energy-per-information-bit convention,
//! `sigma^2 = 1 / (2 * rate * 10^(ebn0_db / 10))`, so systems that send the
//! same number of channel bits for the same payload see the same noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bits::{BitBlock, BitWord, BLOCK_BITS};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    /// Information bits per transmitted bit.
    pub code_rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    /// `ebn0_db = +inf` is accepted as the noiseless channel.
    pub fn new(ebn0_db: f64, code_rate: f64, seed: u64) -> Result<Self, Error> {
        if ebn0_db.is_nan() || ebn0_db == f64::NEG_INFINITY {
            return Err(Error::Config(format!(
                "Eb/N0 must be a number, got {ebn0_db}"
            )));
        }
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(Error::Config(format!(
                "code rate must lie in (0, 1], got {code_rate}"
            )));
        }
        Ok(ChannelConfig {
            ebn0_db,
            code_rate,
            seed,
        })
    }

    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.code_rate * 10f64.powf(self.ebn0_db / 10.0))
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_variance().sqrt()
    }
}

/// Received amplitudes for one transmitted word.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftVector {
    pub observations: Vec<f64>,
    pub noise_sigma: f64,
}

impl SoftVector {
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// `|y_i|`; rank order equals that of `|LLR_i|` on this channel.
    pub fn reliabilities(&self) -> Vec<f64> {
        self.observations.iter().map(|y| y.abs()).collect()
    }

    pub fn reliabilities_into(&self, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.observations.iter().map(|y| y.abs()));
    }
}

pub fn modulate(bits: &BitWord) -> Vec<f64> {
    bits.iter().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

pub fn modulate_block(block: BitBlock) -> Vec<f64> {
    block.bits().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

/// Adds noise drawn from a stream seeded by `cfg.seed`.
pub fn add_noise(symbols: &[f64], cfg: &ChannelConfig) -> SoftVector {
    add_noise_with(symbols, cfg, &mut ChaCha8Rng::seed_from_u64(cfg.seed))
}

/// Adds noise drawn from a caller-owned stream.
pub fn add_noise_with<R: Rng + ?Sized>(
    symbols: &[f64],
    cfg: &ChannelConfig,
    rng: &mut R,
) -> SoftVector {
    let sigma = cfg.noise_sigma();
    let observations = if sigma == 0.0 {
        symbols.to_vec()
    } else {
        symbols
            .iter()
            .map(|&s| s + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect()
    };
    SoftVector {
        observations,
        noise_sigma: sigma,
    }
}

/// Sign slicer; an observation of exactly zero decides 0.
pub fn hard_decision(soft: &SoftVector) -> BitWord {
    BitWord::from_bits(soft.observations.iter().map(|&y| y < 0.0))
}

pub fn hard_decision_block(soft: &SoftVector) -> Result<BitBlock, Error> {
    if soft.len() != BLOCK_BITS {
        return Err(Error::LengthMismatch {
            expected: BLOCK_BITS,
            found: soft.len(),
        });
    }
    let mut value = 0u128;
    for (i, &y) in soft.observations.iter().enumerate() {
        if y < 0.0 {
            value |= BitBlock::mask(i);
        }
    }
    Ok(BitBlock::from_u128(value))
}
