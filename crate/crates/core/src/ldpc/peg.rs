//! Progressive edge growth.
//!
//! Bits are connected one edge at a time. The first edge of a bit goes to a
//! lowest-degree check; each further edge goes to a lowest-degree check
//! among those farthest from the bit in the current graph (unreachable if
//! any, otherwise at the last depth reached before the tree stops growing
//! or covers every check). This maximizes the local girth greedily.

use super::matrix::ParityCheckMatrix;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Summary of a constructed code.
#[derive(Debug, Clone, PartialEq)]
pub struct PegReport {
    pub n: usize,
    pub m: usize,
    pub w_c: usize,
    pub girth: Option<usize>,
    pub irregular_columns: usize,
    pub min_row_weight: usize,
    pub max_row_weight: usize,
}

pub fn peg_construct(n: usize, rate: f64, w_c: usize, rng: &mut SeededRng) -> Result<ParityCheckMatrix> {
    if w_c < 2 {
        return Err(Error::InfeasibleCode(format!("column weight must be at least 2, got {w_c}")));
    }
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InfeasibleCode(format!("rate must lie in (0, 1), got {rate}")));
    }
    let m_real = n as f64 * (1.0 - rate);
    let m = m_real.round() as usize;
    if (m_real - m as f64).abs() > 1e-9 {
        return Err(Error::InfeasibleCode(format!("n (1 - rate) = {m_real} is not an integer")));
    }
    if m < w_c {
        return Err(Error::InfeasibleCode(format!("{m} checks cannot host column weight {w_c}")));
    }

    // tie-break rank among equal-degree candidates
    let rank = rng.permutation(m);
    let mut check_deg = vec![0usize; m];
    let mut bit_adj: Vec<Vec<usize>> = vec![Vec::with_capacity(w_c); n];
    let mut check_adj: Vec<Vec<usize>> = vec![Vec::new(); m];

    // BFS scratch, reset lazily by bumping the stamp
    let mut check_seen = vec![0u32; m];
    let mut check_new = vec![0u32; m];
    let mut bit_seen = vec![0u32; n];
    let mut stamp: u32 = 0;

    let pick = |cands: &mut dyn Iterator<Item = usize>, check_deg: &[usize]| {
        cands.min_by_key(|&c| (check_deg[c], rank[c]))
    };

    for v in 0..n {
        for edge in 0..w_c {
            let chosen = if edge == 0 {
                pick(&mut (0..m), &check_deg)
            } else {
                stamp += 1;
                bit_seen[v] = stamp;
                let mut frontier: Vec<usize> = bit_adj[v].clone();
                for &c in &frontier {
                    check_seen[c] = stamp;
                }
                let mut reached = frontier.len();
                loop {
                    let mut fresh = Vec::new();
                    for &c in &frontier {
                        for &b in &check_adj[c] {
                            if bit_seen[b] == stamp {
                                continue;
                            }
                            bit_seen[b] = stamp;
                            for &c2 in &bit_adj[b] {
                                if check_seen[c2] != stamp && check_new[c2] != stamp {
                                    check_new[c2] = stamp;
                                    fresh.push(c2);
                                }
                            }
                        }
                    }
                    // Stop when the tree no longer grows or would cover every
                    // check at the next depth; either way choose outside it.
                    if fresh.is_empty() || reached + fresh.len() == m {
                        break pick(&mut (0..m).filter(|&c| check_seen[c] != stamp), &check_deg);
                    }
                    for &c in &fresh {
                        check_seen[c] = stamp;
                    }
                    reached += fresh.len();
                    frontier = fresh;
                }
            };
            let c = chosen.ok_or_else(|| Error::InfeasibleCode(format!("no check available for bit {v}")))?;
            bit_adj[v].push(c);
            check_adj[c].push(v);
            check_deg[c] += 1;
        }
    }
    ParityCheckMatrix::from_checks(n, check_adj)
}

pub fn peg_report(h: &ParityCheckMatrix, w_c: usize) -> PegReport {
    let rw = h.row_weights();
    PegReport {
        n: h.n(),
        m: h.num_checks(),
        w_c,
        girth: h.girth(),
        irregular_columns: h.irregular_columns(w_c),
        min_row_weight: rw.iter().copied().min().unwrap_or(0),
        max_row_weight: rw.iter().copied().max().unwrap_or(0),
    }
}
