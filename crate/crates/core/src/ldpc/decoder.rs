//! Log-domain sum-product decoding with a flooding schedule.

use super::matrix::ParityCheckMatrix;

/// LLR magnitudes are clamped to this value before entering `tanh`.
pub const LLR_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Edge-indexed Tanner graph reused across frames.
#[derive(Debug, Clone)]
pub struct SumProductDecoder {
    n: usize,
    /// Edges grouped by check: `check_start[c]..check_start[c + 1]`.
    check_start: Vec<usize>,
    edge_bit: Vec<usize>,
    /// Edge ids touching each bit.
    bit_edges: Vec<Vec<usize>>,
}

impl SumProductDecoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut check_start = Vec::with_capacity(h.num_checks() + 1);
        let mut edge_bit = Vec::with_capacity(h.num_edges());
        let mut bit_edges = vec![Vec::new(); h.n()];
        check_start.push(0);
        for row in h.checks() {
            for &v in row {
                bit_edges[v].push(edge_bit.len());
                edge_bit.push(v);
            }
            check_start.push(edge_bit.len());
        }
        Self { n: h.n(), check_start, edge_bit, bit_edges }
    }

    fn hard_decision(&self, totals: &[f64], bits: &mut [u8]) -> bool {
        let mut decided = true;
        for (b, &t) in bits.iter_mut().zip(totals) {
            // a zero LLR carries no information and cannot be decided
            decided &= t != 0.0;
            *b = (t < 0.0) as u8;
        }
        decided
    }

    fn checks_satisfied(&self, bits: &[u8]) -> bool {
        self.check_start
            .windows(2)
            .all(|w| self.edge_bit[w[0]..w[1]].iter().fold(0u8, |a, &v| a ^ bits[v]) == 0)
    }

    pub fn decode(&self, llrs: &[f64], max_iter: usize) -> DecodeResult {
        assert_eq!(llrs.len(), self.n, "LLR vector length");
        let channel: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
        let mut bits = vec![0u8; self.n];
        if self.hard_decision(&channel, &mut bits) && self.checks_satisfied(&bits) {
            return DecodeResult { bits, converged: true, iterations: 0 };
        }

        let edges = self.edge_bit.len();
        let mut v2c: Vec<f64> = self.edge_bit.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; edges];
        let mut t = vec![0.0; edges];
        let mut totals = channel.clone();
        for iter in 1..=max_iter {
            for w in self.check_start.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                for e in lo..hi {
                    t[e] = (0.5 * v2c[e]).tanh();
                }
                // leave-one-out products via a forward and a backward sweep
                let mut fwd = 1.0;
                for e in lo..hi {
                    c2v[e] = fwd;
                    fwd *= t[e];
                }
                let mut bwd = 1.0;
                for e in (lo..hi).rev() {
                    let p = (c2v[e] * bwd).clamp(-1.0, 1.0);
                    c2v[e] = (2.0 * p.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
                    bwd *= t[e];
                }
            }
            for (v, es) in self.bit_edges.iter().enumerate() {
                let total = channel[v] + es.iter().map(|&e| c2v[e]).sum::<f64>();
                totals[v] = total;
                for &e in es {
                    v2c[e] = (total - c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            if self.hard_decision(&totals, &mut bits) && self.checks_satisfied(&bits) {
                return DecodeResult { bits, converged: true, iterations: iter };
            }
        }
        DecodeResult { bits, converged: false, iterations: max_iter }
    }
}

/// One-shot decoding; build a [`SumProductDecoder`] to decode many frames.
pub fn sum_product_decode(h: &ParityCheckMatrix, llrs: &[f64], max_iter: usize) -> DecodeResult {
    SumProductDecoder::new(h).decode(llrs, max_iter)
}
