//! Dense random scrambling of message blocks.
//!
//! The scrambler multiplies each `k`-bit block by a random invertible GF(2)
//! matrix. Descrambling applies the inverse, so any residual error pattern
//! left by the decoder is spread over about half of the descrambled bits.

use super::gf2::{BitMatrix, BitRow};
use crate::rng::SeededRng;

#[derive(Debug, Clone)]
pub struct Scrambler {
    forward: BitMatrix,
    inverse: BitMatrix,
    seed: u64,
}

impl Scrambler {
    /// Draws uniform random `k x k` matrices from the seed until one is invertible
    /// (about 3.5 draws on average).
    pub fn new(k: usize, seed: u64) -> Self {
        let root = SeededRng::new(seed);
        for attempt in 0.. {
            let mut rng = root.fork(attempt);
            let rows = (0..k)
                .map(|_| {
                    let mut r = BitRow::zeros(k);
                    for i in 0..k {
                        if rng.bit() == 1 {
                            r.set(i);
                        }
                    }
                    r
                })
                .collect();
            let forward = BitMatrix::from_rows(rows, k);
            if let Some(inverse) = forward.inverse() {
                return Self { forward, inverse, seed };
            }
        }
        unreachable!()
    }

    pub fn k(&self) -> usize {
        self.forward.nrows()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scramble(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.k(), "block length");
        self.forward.mul_vec(&BitRow::from_bits(bits)).to_bits()
    }

    pub fn descramble(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.k(), "block length");
        self.inverse.mul_vec(&BitRow::from_bits(bits)).to_bits()
    }
}

/// One-shot scrambling with a matrix derived from `seed`.
pub fn scramble(bits: &[u8], seed: u64) -> Vec<u8> {
    Scrambler::new(bits.len(), seed).scramble(bits)
}

pub fn descramble(bits: &[u8], seed: u64) -> Vec<u8> {
    Scrambler::new(bits.len(), seed).descramble(bits)
}
