//! Brute-force solvers and counters over symmetry-reduced arrangements.
//!
//! Agent mode walks agent permutations. Class mode walks class sequences
//! only: whether an arrangement is stable or envy-free depends on the class
//! labels of the seats alone, so one sequence stands for every assignment of
//! agents within classes.

mod sequences;

pub use sequences::{multinomial, next_permutation, SequenceIter};

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::constructions::{hamiltonian_cycle_profile, hamiltonian_path_profile, Digraph};
use crate::error::{Error, Result};
use crate::judge::fast::{satisfies, SeatValues};
use crate::judge::Criterion;
use crate::profile::{Arrangement, ClassStructure, PreferenceProfile, Topology, TopologyKind};

pub const DEFAULT_MAX_AGENTS: usize = 11;
pub const DEFAULT_MAX_SEQUENCES: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest agent count for agent-mode enumeration.
    pub max_agents: usize,
    /// Largest raw class-sequence count for class-mode enumeration.
    pub max_sequences: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_agents: DEFAULT_MAX_AGENTS,
            max_sequences: DEFAULT_MAX_SEQUENCES,
        }
    }
}

/// Result of a complete search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(Arrangement),
    /// Certified nonexistence after examining `examined` sequences.
    None {
        examined: u64,
    },
}

impl Outcome {
    pub fn arrangement(&self) -> Option<&Arrangement> {
        match self {
            Outcome::Found(a) => Some(a),
            Outcome::None { .. } => None,
        }
    }

    pub fn into_arrangement(self) -> Option<Arrangement> {
        match self {
            Outcome::Found(a) => Some(a),
            Outcome::None { .. } => None,
        }
    }

    pub fn exists(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

fn check_agents(t: &Topology, n: usize, limits: &Limits) -> Result<()> {
    if t.n() != n {
        return Err(Error::InvalidTopology(format!(
            "topology has {} seats for {n} agents",
            t.n()
        )));
    }
    if n > limits.max_agents {
        return Err(Error::LimitExceeded {
            what: "agents for exhaustive enumeration",
            limit: limits.max_agents as u128,
            actual: n as u128,
        });
    }
    Ok(())
}

fn check_sequences(t: &Topology, sizes: &[usize], limits: &Limits) -> Result<()> {
    if t.n() != sizes.iter().sum::<usize>() {
        return Err(Error::InvalidTopology(format!(
            "topology has {} seats for {} agents",
            t.n(),
            sizes.iter().sum::<usize>()
        )));
    }
    let raw = SequenceIter::raw_count(t, sizes).unwrap_or(u128::MAX);
    if raw > limits.max_sequences {
        return Err(Error::LimitExceeded {
            what: "class sequences",
            limit: limits.max_sequences,
            actual: raw,
        });
    }
    Ok(())
}

/// First satisfying label sequence in enumeration order, searching shards in
/// parallel.
fn search<V: SeatValues + Sync>(
    v: &V,
    t: &Topology,
    sizes: &[usize],
    criterion: Criterion,
) -> std::result::Result<Vec<usize>, u64> {
    let shards = SequenceIter::shard_labels(t, sizes);
    // lowest shard index with a hit; later shards may stop early
    let best = AtomicUsize::new(usize::MAX);
    let hits: Vec<std::result::Result<Vec<usize>, u64>> = shards
        .par_iter()
        .enumerate()
        .map(|(i, &c)| {
            let mut it = SequenceIter::shard(t, sizes, c);
            let mut examined = 0u64;
            while let Some(seq) = it.next_seq() {
                examined += 1;
                if satisfies(v, t, seq, criterion) {
                    best.fetch_min(i, Ordering::Relaxed);
                    return Ok(seq.to_vec());
                }
                if examined.is_multiple_of(4096) && best.load(Ordering::Relaxed) < i {
                    break;
                }
            }
            Err(examined)
        })
        .collect();
    let mut total = 0;
    for h in hits {
        match h {
            Ok(seq) => return Ok(seq),
            Err(e) => total += e,
        }
    }
    Err(total)
}

fn count<V: SeatValues + Sync>(v: &V, t: &Topology, sizes: &[usize], criterion: Criterion) -> u64 {
    SequenceIter::shard_labels(t, sizes)
        .par_iter()
        .map(|&c| {
            let mut it = SequenceIter::shard(t, sizes, c);
            let mut hits = 0u64;
            while let Some(seq) = it.next_seq() {
                if satisfies(v, t, seq, criterion) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Agent-mode search with explicit limits.
pub fn solve_agents(
    p: &PreferenceProfile,
    t: &Topology,
    criterion: Criterion,
    limits: &Limits,
) -> Result<Outcome> {
    check_agents(t, p.n(), limits)?;
    Ok(match search(p, t, &vec![1; p.n()], criterion) {
        Ok(seats) => Outcome::Found(Arrangement::new(seats)?),
        Err(examined) => Outcome::None { examined },
    })
}

/// Some arrangement satisfying `criterion`, or `None` after a complete
/// enumeration.
///
/// ```
/// use seating::{exact, Criterion, PreferenceProfile, Topology};
///
/// let p = PreferenceProfile::zeros(5);
/// let t = Topology::cycle(5).unwrap();
/// assert!(exact::find_arrangement(&p, &t, Criterion::Stable).unwrap().is_some());
/// ```
pub fn find_arrangement(
    p: &PreferenceProfile,
    t: &Topology,
    criterion: Criterion,
) -> Result<Option<Arrangement>> {
    Ok(solve_agents(p, t, criterion, &Limits::default())?.into_arrangement())
}

/// Class-mode search with explicit limits. Agents are assigned to the
/// seats of their class in ascending order.
pub fn solve_classes(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
    limits: &Limits,
) -> Result<Outcome> {
    check_sequences(t, c.sizes(), limits)?;
    Ok(match search(c, t, c.sizes(), criterion) {
        Ok(seq) => Outcome::Found(assign_agents(c, &seq)?),
        Err(examined) => Outcome::None { examined },
    })
}

pub fn find_class_arrangement(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
) -> Result<Option<Arrangement>> {
    Ok(solve_classes(c, t, criterion, &Limits::default())?.into_arrangement())
}

/// Turns a class sequence into an arrangement of the expanded profile
/// (see [`crate::profile::expand_classes`]), filling each class's seats with
/// its agents in ascending order.
pub fn assign_agents(c: &ClassStructure, seq: &[usize]) -> Result<Arrangement> {
    let members = c.members();
    let mut next = vec![0usize; c.k()];
    let mut seats = Vec::with_capacity(seq.len());
    for &cls in seq {
        let m = members
            .get(cls)
            .and_then(|m| m.get(next[cls]))
            .ok_or_else(|| {
                Error::InvalidArrangement("class sequence does not match sizes".into())
            })?;
        seats.push(*m);
        next[cls] += 1;
    }
    if next.iter().zip(c.sizes()).any(|(a, b)| a != b) {
        return Err(Error::InvalidArrangement(
            "class sequence does not match sizes".into(),
        ));
    }
    Arrangement::new(seats)
}

/// Single-threaded class-mode search with early exit, for callers that
/// already run many small instances in parallel. Checks `limits` like
/// [`solve_classes`].
pub fn find_sequence_sequential<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    sizes: &[usize],
    criterion: Criterion,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    check_sequences(t, sizes, limits)?;
    let mut it = SequenceIter::new(t, sizes);
    while let Some(seq) = it.next_seq() {
        if satisfies(v, t, seq, criterion) {
            return Ok(Some(seq.to_vec()));
        }
    }
    Ok(None)
}

/// Number of symmetry-reduced arrangements satisfying `criterion`.
pub fn count_satisfying(p: &PreferenceProfile, t: &Topology, criterion: Criterion) -> Result<u64> {
    check_agents(t, p.n(), &Limits::default())?;
    Ok(count(p, t, &vec![1; p.n()], criterion))
}

/// Number of stable arrangements, one per reflection class on a path or per
/// rotation-and-reflection class on a cycle.
pub fn count_stable(p: &PreferenceProfile, t: &Topology) -> Result<u64> {
    count_satisfying(p, t, Criterion::Stable)
}

/// Number of stable class sequences (multiset orbits may be counted more
/// than once on cycles).
pub fn count_class_satisfying(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
) -> Result<u64> {
    check_sequences(t, c.sizes(), &Limits::default())?;
    Ok(count(c, t, c.sizes(), criterion))
}

/// Whether the digraph has a Hamiltonian cycle (`Cycle`) or a Hamiltonian
/// path (`Path`), by permutation search. A single vertex counts as both.
pub fn is_hamiltonian(g: &Digraph, kind: TopologyKind) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let chain = order.windows(2).all(|w| g.has_edge(w[0], w[1]));
        let closes = kind == TopologyKind::Path || g.has_edge(order[n - 1], order[0]);
        if chain && closes {
            return true;
        }
        if kind == TopologyKind::Cycle {
            // rotations are equivalent, so keep vertex 0 first
            if !next_permutation(&mut order[1..]) {
                return false;
            }
        } else if !next_permutation(&mut order) {
            return false;
        }
    }
}

/// Largest vertex count accepted by [`ef_equiv_hamiltonicity`].
pub const REDUCTION_MAX_VERTICES: usize = 4;

/// Decides envy-free existence on the reduction gadget and Hamiltonicity of
/// the digraph independently. On a path the last vertex is the sink.
pub fn ef_equiv_hamiltonicity(g: &Digraph, kind: TopologyKind) -> Result<(bool, bool)> {
    if g.n() > REDUCTION_MAX_VERTICES {
        return Err(Error::LimitExceeded {
            what: "digraph vertices for the reduction check",
            limit: REDUCTION_MAX_VERTICES as u128,
            actual: g.n() as u128,
        });
    }
    let p = match kind {
        TopologyKind::Cycle => hamiltonian_cycle_profile(g),
        TopologyKind::Path => hamiltonian_path_profile(g)?,
    };
    let t = Topology::new(kind, p.n())?;
    let limits = Limits {
        max_agents: 3 * REDUCTION_MAX_VERTICES,
        ..Limits::default()
    };
    let ef = solve_agents(&p, &t, Criterion::EnvyFree, &limits)?.exists();
    Ok((ef, is_hamiltonian(g, kind)))
}
