//! Systematic encoder derived from a parity-check matrix by GF(2) elimination.

use super::gf2::{BitMatrix, BitRow};
use super::matrix::ParityCheckMatrix;

/// Maps `k` message bits onto codewords of `H`.
///
/// Elimination picks one pivot column per independent row; the remaining
/// `k = n - rank` columns form the information set and carry the message
/// unchanged. Each pivot bit is the parity of a subset of message bits.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Row `i` selects the message bits that sum to parity bit `i`.
    parity_rows: BitMatrix,
}

impl Encoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let n = h.n();
        let m = h.num_checks();
        let mut rows: Vec<BitRow> = h
            .checks()
            .iter()
            .map(|c| {
                let mut r = BitRow::zeros(n);
                for &v in c {
                    r.set(v);
                }
                r
            })
            .collect();

        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }

        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k = info_positions.len();
        let parity_rows = pivots
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let mut r = BitRow::zeros(k);
                for (j, &c) in info_positions.iter().enumerate() {
                    if rows[i].get(c) {
                        r.set(j);
                    }
                }
                r
            })
            .collect();
        Self {
            n,
            info_positions,
            parity_positions: pivots,
            parity_rows: BitMatrix::from_rows(parity_rows, k),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Message length, `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn rank(&self) -> usize {
        self.parity_positions.len()
    }

    /// True code rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode(&self, message: &[u8]) -> Vec<u8> {
        assert_eq!(message.len(), self.k(), "message length");
        let msg = BitRow::from_bits(message);
        let mut word = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(message) {
            word[pos] = b & 1;
        }
        for (i, &pos) in self.parity_positions.iter().enumerate() {
            word[pos] = self.parity_rows.row(i).dot(&msg);
        }
        word
    }

    /// Reads the message back from a codeword.
    pub fn extract(&self, word: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| word[p]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn hamming() -> ParityCheckMatrix {
        ParityCheckMatrix::from_dense(&[
            vec![1, 1, 0, 1, 1, 0, 0],
            vec![1, 0, 1, 1, 0, 1, 0],
            vec![0, 1, 1, 1, 0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn zero_message_zero_codeword() {
        let enc = Encoder::new(&hamming());
        assert_eq!(enc.k(), 4);
        assert_eq!(enc.encode(&[0; 4]), vec![0; 7]);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        // third row is the sum of the first two
        let h = ParityCheckMatrix::from_dense(&[
            vec![1, 1, 0, 0, 1, 0],
            vec![0, 1, 1, 0, 0, 1],
            vec![1, 0, 1, 0, 1, 1],
        ])
        .unwrap();
        let enc = Encoder::new(&h);
        assert_eq!(enc.rank(), 2);
        assert_eq!(enc.k(), 4);
        let mut rng = SeededRng::new(1);
        for _ in 0..20 {
            let msg: Vec<u8> = (0..4).map(|_| rng.bit()).collect();
            let c = enc.encode(&msg);
            assert!(h.is_codeword(&c));
            assert_eq!(enc.extract(&c), msg);
        }
    }
}
