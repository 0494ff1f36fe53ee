//! BPSK over AWGN and channel LLRs.
//!
//! Eb/N0 uses the rate convention R = K/N: CRC bits are overhead. Frame
//! randomness comes from counter-based per-frame streams so that Monte
//! Carlo results are reproducible regardless of worker scheduling.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// LLR magnitude used for the noiseless degenerate channel.
pub const NOISELESS_LLR: f64 = 300.0;

/// Channel log-likelihood ratios for one frame; positive favors bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame(pub Vec<f64>);

impl LlrFrame {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Bit 0 -> +1.0, bit 1 -> -1.0.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Noise variance per dimension for BPSK at the given Eb/N0 and rate.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> Result<f64> {
    if rate <= 0.0 || rate > 1.0 {
        return Err(Error::invalid("rate", format!("{rate} not in (0, 1]")));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

/// y = s + n with n ~ N(0, sigma^2) i.i.d.; llr = 2y/sigma^2.
pub fn transmit(symbols: &[f64], ebn0_db: f64, rate: f64, rng: &mut impl Rng) -> Result<LlrFrame> {
    let sigma2 = noise_variance(ebn0_db, rate)?;
    let sigma = sigma2.sqrt();
    let scale = 2.0 / sigma2;
    Ok(LlrFrame(
        symbols
            .iter()
            .map(|&s| {
                let noise: f64 = rng.sample(StandardNormal);
                scale * (s + sigma * noise)
            })
            .collect(),
    ))
}

/// Degenerate sigma -> 0 channel: sign preserved, magnitude clamped.
pub fn transmit_noiseless(symbols: &[f64]) -> LlrFrame {
    LlrFrame(symbols.iter().map(|&s| s.signum() * NOISELESS_LLR).collect())
}

/// Deterministic per-frame RNG stream derived from (seed, frame index).
pub fn frame_rng(seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(frame_index.wrapping_add(1));
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
