//! Gray-mapped QPSK over a unit-variance complex AWGN channel.
//!
//! Symbol energy equals the SNR `lambda`, so each coded bit carries
//! `E_c = lambda / 2` against a noise variance of `1/2` per real dimension.
//! Channel LLRs are `4 sqrt(lambda/2) y`, with mean `2 E_c / sigma^2 = 2 lambda`
//! and variance twice the mean. Positive values favour bit 0.

use crate::rng::SeededRng;

/// Mean of the channel LLR for a transmitted 0 at symbol SNR `lambda`.
pub fn qpsk_llr_mean(lambda: f64) -> f64 {
    2.0 * lambda
}

/// Per-coded-bit `E_c / sigma^2` (noise variance per real dimension) at symbol SNR `lambda`.
pub fn qpsk_ec_over_sigma2(lambda: f64) -> f64 {
    lambda
}

/// Modulates `codeword`, adds noise and returns one LLR per bit. An odd
/// trailing bit rides on the in-phase rail of a final symbol whose
/// quadrature rail is padded with a zero.
pub fn awgn_qpsk_llrs(codeword: &[u8], lambda: f64, rng: &mut SeededRng) -> Vec<f64> {
    let amp = (lambda / 2.0).sqrt();
    let noise_sd = 0.5f64.sqrt();
    let gain = 4.0 * amp;
    let mut llrs = Vec::with_capacity(codeword.len());
    for pair in codeword.chunks(2) {
        let (ni, nq) = rng.normal_pair();
        let rails = [ni, nq];
        for (&b, n) in pair.iter().zip(rails) {
            let x = if b & 1 == 0 { amp } else { -amp };
            llrs.push(gain * (x + noise_sd * n));
        }
    }
    llrs
}
