use std::cmp::Ordering;

use super::{PreferenceProfile, CANONICAL_MAX_N};
use crate::error::{Error, Result};

/// Lexicographically smallest row-major matrix over all simultaneous
/// row/column permutations. Two profiles are isomorphic iff their canonical
/// forms are equal.
pub fn canonical_profile(p: &PreferenceProfile) -> Result<PreferenceProfile> {
    let n = p.n();
    if n > CANONICAL_MAX_N {
        return Err(Error::LimitExceeded {
            what: "agents for factorial canonicalization",
            limit: CANONICAL_MAX_N as u128,
            actual: n as u128,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = order.clone();
    // Heap's algorithm, iterative
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            if compare_relabeled(p, &order, &best) == Ordering::Less {
                best.copy_from_slice(&order);
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(p.relabel(&best))
}

/// Compares `p` relabeled by `a` against `p` relabeled by `b` without
/// materializing either matrix.
fn compare_relabeled(p: &PreferenceProfile, a: &[usize], b: &[usize]) -> Ordering {
    let n = a.len();
    for r in 0..n {
        for c in 0..n {
            let ord = p.get(a[r], a[c]).cmp(&p.get(b[r], b[c]));
            if ord != Ordering::Equal {
                return ord;
            }
        }
    }
    Ordering::Equal
}
