//! Deterministic reductions.
//!
//! Sums over kernel pairs go through [`pairwise_sum`], whose association
//! order depends only on the slice length. Parallel callers compute per-row
//! partial sums into an ordered buffer and reduce that buffer with the same
//! routine, so results are bit-identical for any thread count.

use rayon::prelude::*;

const BLOCK: usize = 32;

/// Tree-ordered sum with error growth O(ε log n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        // eight lanes, fixed order
        let mut acc = [0.0f64; 8];
        let chunks = values.chunks_exact(8);
        let rest = chunks.remainder();
        for c in chunks {
            for (a, v) in acc.iter_mut().zip(c) {
                *a += v;
            }
        }
        let mut s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
        for v in rest {
            s += v;
        }
        s
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Evaluates `row(i)` for `i in 0..n` in parallel and returns the ordered
/// results.
pub fn par_rows<T, F>(n: usize, row: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(row).collect()
}

/// Sum of `term(i)` for `i in 0..n`, evaluated in parallel, reduced
/// deterministically.
pub fn par_sum<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    pairwise_sum(&par_rows(n, term))
}
