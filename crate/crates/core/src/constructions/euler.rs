use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::profile::{Arrangement, PreferenceProfile};

/// Closed Euler tour of the complete graph `K_k` for odd `k >= 3`, as the
/// vertex sequence without the repeated start. Hierholzer's algorithm,
/// always leaving through the lowest-numbered unused edge.
pub fn complete_graph_euler_tour(k: usize) -> Vec<usize> {
    assert!(k >= 3 && k % 2 == 1, "K_k is Eulerian only for odd k");
    let mut used = vec![vec![false; k]; k];
    let mut next = vec![0usize; k];
    let mut stack = vec![0usize];
    let mut tour = Vec::with_capacity(k * (k - 1) / 2 + 1);
    while let Some(&v) = stack.last() {
        while next[v] < k && (next[v] == v || used[v][next[v]]) {
            next[v] += 1;
        }
        if next[v] < k {
            let u = next[v];
            used[v][u] = true;
            used[u][v] = true;
            stack.push(u);
        } else {
            tour.push(v);
            stack.pop();
        }
    }
    tour.reverse();
    tour.pop();
    tour
}

/// `2l + 1` disjoint copies of a base profile, arranged on a cycle along an
/// Euler tour of the complete graph on the copies.
#[derive(Clone, Debug)]
pub struct BlockwiseEuler {
    pub profile: PreferenceProfile,
    pub arrangement: Arrangement,
    /// Agents of each copy; copy `i` holds agents `i*l .. (i+1)*l`.
    pub components: Vec<Vec<usize>>,
}

pub fn blockwise_euler(base: &PreferenceProfile) -> Result<BlockwiseEuler> {
    let l = base.n();
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "blockwise_euler needs a base of at least 2 agents, got {l}"
        )));
    }
    let k = 2 * l + 1;
    let n = k * l;
    let profile = PreferenceProfile::from_fn(n, |i, j| {
        if i / l == j / l {
            base.get(i % l, j % l)
        } else {
            0
        }
    });
    let mut used = vec![0usize; k];
    let seats = complete_graph_euler_tour(k)
        .into_iter()
        .map(|c| {
            let agent = c * l + used[c];
            used[c] += 1;
            agent
        })
        .collect();
    Ok(BlockwiseEuler {
        profile,
        arrangement: Arrangement::new(seats)?,
        components: (0..k).map(|c| (c * l..(c + 1) * l).collect()).collect(),
    })
}

/// Structural hypotheses for zero-utility stability on a cycle: each agent's
/// two neighbors come from two different components, neither of them its
/// own, and any two components meet in at most one adjacent pair.
pub fn satisfies_component_lemma(p: &PreferenceProfile, a: &Arrangement) -> bool {
    let n = a.len();
    if n < 3 || p.n() != n {
        return false;
    }
    let mut comp = vec![0usize; n];
    for (c, members) in p.components().iter().enumerate() {
        for &m in members {
            comp[m] = c;
        }
    }
    let at = |s: usize| comp[a.agent_at(s % n)];
    let mut met = HashSet::new();
    for s in 0..n {
        let (left, me, right) = (at(s + n - 1), at(s), at(s + 1));
        if left == me || right == me || left == right {
            return false;
        }
        if !met.insert((me.min(right), me.max(right))) {
            return false;
        }
    }
    true
}
