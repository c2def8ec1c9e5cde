//! Sparse binary parity-check matrices.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Sparse parity-check matrix stored both by check (row) and by bit (column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    checks: Vec<Vec<usize>>,
    bits: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds the matrix from per-check bit index lists.
    pub fn from_checks(n: usize, mut checks: Vec<Vec<usize>>) -> Result<Self> {
        let mut bits = vec![Vec::new(); n];
        for (c, row) in checks.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InfeasibleCode(format!("check {c} lists a bit twice")));
            }
            for &v in row.iter() {
                if v >= n {
                    return Err(Error::DimensionMismatch(format!("check {c} refers to bit {v} >= n = {n}")));
                }
                bits[v].push(c);
            }
        }
        Ok(Self { n, checks, bits })
    }

    /// Builds the matrix from a dense 0/1 row-major description.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        let checks = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i).collect())
            .collect();
        Self::from_checks(n, checks)
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Design message length `n - m` (the true dimension can be larger if
    /// the rows are dependent).
    pub fn design_k(&self) -> usize {
        self.n.saturating_sub(self.checks.len())
    }

    pub fn design_rate(&self) -> f64 {
        self.design_k() as f64 / self.n as f64
    }

    pub fn check(&self, c: usize) -> &[usize] {
        &self.checks[c]
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    /// Checks attached to bit `v`.
    pub fn bit(&self, v: usize) -> &[usize] {
        &self.bits[v]
    }

    pub fn num_edges(&self) -> usize {
        self.checks.iter().map(Vec::len).sum()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        self.bits.iter().map(Vec::len).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.checks.iter().map(Vec::len).collect()
    }

    /// Number of columns whose weight differs from `w_c`.
    pub fn irregular_columns(&self, w_c: usize) -> usize {
        self.bits.iter().filter(|b| b.len() != w_c).count()
    }

    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        self.checks
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n
            && self
                .checks
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)) == 0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.checks
            .iter()
            .map(|row| {
                let mut dense = vec![0u8; self.n];
                for &v in row {
                    dense[v] = 1;
                }
                dense
            })
            .collect()
    }

    /// Length of the shortest cycle in the Tanner graph, or `None` if the
    /// graph is a forest.
    pub fn girth(&self) -> Option<usize> {
        let m = self.checks.len();
        let total = self.n + m;
        // nodes 0..n are bits, n..n+m are checks
        let neighbours = |u: usize| -> &[usize] {
            if u < self.n {
                &self.bits[u]
            } else {
                &self.checks[u - self.n]
            }
        };
        let offset = |u: usize, w: usize| if u < self.n { w + self.n } else { w };

        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            for &u in &touched {
                dist[u] = usize::MAX;
                parent[u] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                // any cycle closed from u or later is at least 2 * dist[u] long
                if 2 * dist[u] >= best {
                    break;
                }
                for &w in neighbours(u) {
                    let w = offset(u, w);
                    if w == parent[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        touched.push(w);
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                        if best == 4 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == 4 {
                break;
            }
        }
        (best != usize::MAX).then_some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> ParityCheckMatrix {
        ParityCheckMatrix::from_dense(&[
            vec![1, 1, 0, 1, 1, 0, 0],
            vec![1, 0, 1, 1, 0, 1, 0],
            vec![0, 1, 1, 1, 0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn weights_and_dense_round_trip() {
        let h = hamming();
        assert_eq!(h.n(), 7);
        assert_eq!(h.design_k(), 4);
        assert_eq!(h.row_weights(), vec![4, 4, 4]);
        assert_eq!(h.column_weights(), vec![2, 2, 2, 3, 1, 1, 1]);
        assert_eq!(ParityCheckMatrix::from_dense(&h.to_dense()).unwrap(), h);
    }

    #[test]
    fn syndrome_of_codeword_is_zero() {
        let h = hamming();
        assert!(h.is_codeword(&[0; 7]));
        assert!(h.is_codeword(&[1, 0, 0, 0, 1, 1, 0]));
        assert!(!h.is_codeword(&[1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(h.syndrome(&[1, 0, 0, 0, 0, 0, 0]), vec![1, 1, 0]);
    }

    #[test]
    fn girth_examples() {
        // bits 0 and 3 share checks 0 and 1: a 4-cycle
        assert_eq!(hamming().girth(), Some(4));
        // 6-cycle: bit0-c0-bit1-c1-bit2-c2-bit0
        let h = ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(h.girth(), Some(6));
        // a path has no cycle
        let h = ParityCheckMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(h.girth(), None);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![0, 3]]).is_err());
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![1, 1]]).is_err());
    }
}
