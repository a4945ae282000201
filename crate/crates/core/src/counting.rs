//! Rooted trees counted by their number of increasing edges.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::letter::check_alphabet;
use crate::rooted::FreeTrees;

/// `a[i]` is the number of rooted trees on `n` letters with `i` increasing
/// edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub n: usize,
    pub a: Vec<u64>,
}

impl CountTable {
    pub fn total(&self) -> u64 {
        self.a.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.iter().eq(self.a.iter().rev())
    }
}

/// Streams every free tree and every root choice; no tree list is kept.
pub fn count_by_increasing_edges(n: usize) -> Result<CountTable> {
    check_alphabet(n)?;
    if n == 1 {
        return Ok(CountTable { n, a: vec![1] });
    }
    let a = FreeTrees::new(n)
        .par_bridge()
        .fold(
            || vec![0u64; n],
            |mut acc, edges| {
                let mut adj = vec![Vec::with_capacity(4); n + 1];
                for &(u, v) in &edges {
                    adj[u.index() as usize].push(v.index() as usize);
                    adj[v.index() as usize].push(u.index() as usize);
                }
                let mut stack = Vec::with_capacity(n);
                for root in 1..=n {
                    let mut inc = 0;
                    stack.clear();
                    stack.push((root, 0usize));
                    while let Some((v, from)) = stack.pop() {
                        for &w in &adj[v] {
                            if w != from {
                                inc += usize::from(v < w);
                                stack.push((w, v));
                            }
                        }
                    }
                    acc[inc] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    Ok(CountTable { n, a })
}

/// Coefficients of `prod_{k=1}^{n-1} (k x + (n - k))`, constant term first.
pub fn increasing_edge_polynomial(n: usize) -> Result<Vec<u64>> {
    check_alphabet(n)?;
    let mut poly = vec![1u64];
    for k in 1..n as u64 {
        let c = n as u64 - k;
        let mut next = vec![0u64; poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i] += p * c;
            next[i + 1] += p * k;
        }
        poly = next;
    }
    Ok(poly)
}
