//! Reading and writing parity-check matrices in MacKay's alist format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines: 1-based check indices of each column, zero-padded
//! m lines: 1-based bit indices of each row, zero-padded
//! ```

use std::fmt::Write as _;

use super::matrix::ParityCheckMatrix;
use crate::error::{Error, Result};

pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let cw = h.column_weights();
    let rw = h.row_weights();
    let max_c = cw.iter().copied().max().unwrap_or(0);
    let max_r = rw.iter().copied().max().unwrap_or(0);
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{} {}", h.n(), h.num_checks());
    let _ = writeln!(out, "{max_c} {max_r}");
    let _ = writeln!(out, "{}", join(&mut cw.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut rw.iter().copied()));
    for v in 0..h.n() {
        let idx = h.bit(v).iter().map(|&c| c + 1).chain(std::iter::repeat(0));
        let _ = writeln!(out, "{}", join(&mut idx.take(max_c)));
    }
    for c in 0..h.num_checks() {
        let idx = h.check(c).iter().map(|&v| v + 1).chain(std::iter::repeat(0));
        let _ = writeln!(out, "{}", join(&mut idx.take(max_r)));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_numbers(&mut self) -> Result<Vec<usize>> {
        for (i, text) in self.inner.by_ref() {
            self.line = i + 1;
            if text.trim().is_empty() {
                continue;
            }
            return text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Alist {
                        line: i + 1,
                        msg: format!("not a non-negative integer: {tok:?}"),
                    })
                })
                .collect();
        }
        Err(Error::Alist { line: self.line + 1, msg: "unexpected end of input".into() })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Alist { line: self.line, msg: msg.into() }
    }
}

pub fn from_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = Lines { inner: text.lines().enumerate(), line: 0 };
    let dims = lines.next_numbers()?;
    let [n, m] = dims[..] else {
        return Err(lines.err("expected `n m`"));
    };
    let maxes = lines.next_numbers()?;
    if maxes.len() != 2 {
        return Err(lines.err("expected `max_col_weight max_row_weight`"));
    }
    let col_w = lines.next_numbers()?;
    if col_w.len() != n {
        return Err(lines.err(format!("expected {n} column weights, got {}", col_w.len())));
    }
    let row_w = lines.next_numbers()?;
    if row_w.len() != m {
        return Err(lines.err(format!("expected {m} row weights, got {}", row_w.len())));
    }
    let mut from_cols = vec![Vec::new(); m];
    for (v, &w) in col_w.iter().enumerate() {
        let idx: Vec<usize> = lines.next_numbers()?.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != w {
            return Err(lines.err(format!("column {} lists {} checks, weight says {w}", v + 1, idx.len())));
        }
        for c in idx {
            if c > m {
                return Err(lines.err(format!("check index {c} exceeds m = {m}")));
            }
            from_cols[c - 1].push(v);
        }
    }
    let mut checks = Vec::with_capacity(m);
    for (c, &w) in row_w.iter().enumerate() {
        let mut idx: Vec<usize> = lines.next_numbers()?.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        if idx.len() != w {
            return Err(lines.err(format!("row {} lists {} bits, weight says {w}", c + 1, idx.len())));
        }
        idx.sort_unstable();
        from_cols[c].sort_unstable();
        if idx != from_cols[c] {
            return Err(lines.err(format!("row {} disagrees with the column lists", c + 1)));
        }
        checks.push(idx);
    }
    ParityCheckMatrix::from_checks(n, checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING: &str = "7 3
3 4
2 2 2 3 1 1 1
4 4 4
1 2 0
1 3 0
2 3 0
1 2 3
1 0 0
2 0 0
3 0 0
1 2 4 5
1 3 4 6
2 3 4 7
";

    #[test]
    fn parses_and_writes_hamming() {
        let h = from_alist(HAMMING).unwrap();
        assert_eq!(h.n(), 7);
        assert_eq!(h.check(0), &[0, 1, 3, 4]);
        assert_eq!(to_alist(&h), HAMMING);
    }

    #[test]
    fn reports_inconsistencies() {
        let bad = HAMMING.replace("1 2 4 5", "1 2 4 6");
        assert!(matches!(from_alist(&bad), Err(Error::Alist { .. })));
        assert!(matches!(from_alist("7 3\n3 4\n"), Err(Error::Alist { .. })));
        assert!(matches!(from_alist("7 x\n"), Err(Error::Alist { line: 1, .. })));
    }
}
