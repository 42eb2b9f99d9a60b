//! Polynomial-time decision for profiles with a bounded number of classes.
//!
//! An arrangement is read as a class sequence. Each seat contributes the
//! triple (left class, own class, right class); on a path the missing
//! neighbors are a dummy class 0 that nobody cares about. The arrangement is
//! envy-free (stable) iff every pair of non-adjacent triples is long-range
//! compatible and every pair of adjacent triples is short-range compatible.
//! Deciding existence is a search over states made of the last three
//! symbols, the per-class usage, and per-triple counts capped at 4.

mod table;

pub use table::TripleTable;

use std::collections::VecDeque;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::assign_agents;
use crate::judge::{self, Criterion};
use crate::profile::{expand_classes, Arrangement, ClassStructure, Topology, TopologyKind};

/// Largest class count accepted; the triple table has `(k + 1)^6` entries.
pub const MAX_CLASSES: usize = 8;
/// Default cap on the per-triple counters.
pub const COUNTER_CAP: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Counters {
    /// Counters saturate at the given value.
    Capped(u8),
    /// Counters hold true counts.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Traversal {
    BreadthFirst,
    DepthFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub counters: Counters,
    pub traversal: Traversal,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            counters: Counters::Capped(COUNTER_CAP),
            traversal: Traversal::BreadthFirst,
        }
    }
}

/// Outcome of a search together with its diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    /// Class sequence, one class per seat.
    pub sequence: Option<Vec<usize>>,
    /// Agent arrangement of the expanded profile, verified by the judge.
    pub arrangement: Option<Arrangement>,
    pub visited: usize,
    pub frontier_peak: usize,
}

const NONE: u8 = u8::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    /// Number of seats whose symbol is fixed (cycles count the guessed last
    /// seat only once it is reached).
    placed: u8,
    window: [u8; 3],
    usage: Box<[u8]>,
    /// Sorted `(triple id, count)` pairs with nonzero count.
    counts: Box<[(u16, u8)]>,
    /// `(s_n, s_1, s_2)` on cycles.
    guess: Option<[u8; 3]>,
}

struct Searcher<'a> {
    table: &'a TripleTable,
    sizes: Vec<u8>,
    n: usize,
    kind: TopologyKind,
    counters: Counters,
}

impl Searcher<'_> {
    fn bump(&self, counts: &[(u16, u8)], id: u16) -> Box<[(u16, u8)]> {
        let mut out: Vec<(u16, u8)> = counts.to_vec();
        match out.binary_search_by_key(&id, |&(t, _)| t) {
            Ok(pos) => {
                let c = out[pos].1;
                out[pos].1 = match self.counters {
                    Counters::Capped(cap) => c.saturating_add(1).min(cap),
                    Counters::Exact => c + 1,
                };
            }
            Err(pos) => out.insert(pos, (id, 1)),
        }
        out.into_boxed_slice()
    }

    /// Whether triple `new` is compatible with the far triples: every
    /// recorded triple except one occurrence each of `prev` and `skip`.
    fn far_ok(&self, counts: &[(u16, u8)], new: u16, prev: Option<u16>, skip: Option<u16>) -> bool {
        counts.iter().all(|&(t, c)| {
            let d = u8::from(Some(t) == prev) + u8::from(Some(t) == skip);
            c <= d || self.table.long_ids(t, new)
        })
    }

    fn starts(&self) -> Vec<State> {
        let k = self.sizes.len() - 1;
        match self.kind {
            TopologyKind::Path => (1..=k)
                .map(|x| {
                    let mut usage = vec![0u8; k + 1];
                    usage[x] = 1;
                    State {
                        placed: 1,
                        window: [NONE, 0, x as u8],
                        usage: usage.into(),
                        counts: Box::new([]),
                        guess: None,
                    }
                })
                .collect(),
            TopologyKind::Cycle => {
                // rotate so that seat 1 holds class 1
                let g1 = 1usize;
                let mut out = Vec::new();
                for gn in 1..=k {
                    for g2 in 1..=k {
                        let mut usage = vec![0u8; k + 1];
                        for x in [gn, g1, g2] {
                            usage[x] += 1;
                        }
                        if (1..=k).any(|x| usage[x] > self.sizes[x]) {
                            continue;
                        }
                        let t1 = self.table.id(gn, g1, g2);
                        out.push(State {
                            placed: 2,
                            window: [gn as u8, g1 as u8, g2 as u8],
                            usage: usage.into(),
                            counts: vec![(t1, 1)].into(),
                            guess: Some([gn as u8, g1 as u8, g2 as u8]),
                        });
                    }
                }
                out
            }
        }
    }

    /// Pushes successor states; returns `true` when `s` itself completes a
    /// compatible sequence.
    fn expand(&self, s: &State, out: &mut Vec<State>) -> bool {
        let k = self.sizes.len() - 1;
        let [w0, w1, w2] = s.window.map(usize::from);
        let prev = (s.window[0] != NONE).then(|| self.table.id(w0, w1, w2));
        let placed = usize::from(s.placed);
        let step = |x: usize, counts: &[(u16, u8)], skip: Option<u16>| -> Option<u16> {
            let id = self.table.id(w1, w2, x);
            let short_ok = prev.is_none_or(|_| self.table.short(w0, w1, w2, x));
            (short_ok && self.far_ok(counts, id, prev, skip)).then_some(id)
        };
        match (self.kind, s.guess) {
            (TopologyKind::Path, _) => {
                if placed == self.n {
                    return step(0, &s.counts, None).is_some();
                }
                for x in 1..=k {
                    if s.usage[x] < self.sizes[x] {
                        if let Some(id) = step(x, &s.counts, None) {
                            out.push(self.advance(s, x, id, true));
                        }
                    }
                }
                false
            }
            (TopologyKind::Cycle, Some([gn, g1, g2])) => {
                let (gn, g1, g2) = (usize::from(gn), usize::from(g1), usize::from(g2));
                if placed == self.n {
                    let t1 = self.table.id(gn, g1, g2);
                    return step(g1, &s.counts, Some(t1)).is_some()
                        && self.table.short(w1, w2, g1, g2);
                }
                if placed + 1 == self.n {
                    if let Some(id) = step(gn, &s.counts, None) {
                        out.push(self.advance(s, gn, id, false));
                    }
                    return false;
                }
                for x in 1..=k {
                    // the guessed last symbol is already reserved in usage
                    if s.usage[x] < self.sizes[x] {
                        if let Some(id) = step(x, &s.counts, None) {
                            out.push(self.advance(s, x, id, true));
                        }
                    }
                }
                false
            }
            (TopologyKind::Cycle, None) => unreachable!("cycle states carry a guess"),
        }
    }

    fn advance(&self, s: &State, x: usize, id: u16, use_class: bool) -> State {
        let mut usage = s.usage.clone();
        if use_class {
            usage[x] += 1;
        }
        State {
            placed: s.placed + 1,
            window: [s.window[1], s.window[2], x as u8],
            usage,
            counts: self.bump(&s.counts, id),
            guess: s.guess,
        }
    }
}

fn reconstruct(visited: &IndexMap<State, usize>, mut idx: usize, kind: TopologyKind) -> Vec<usize> {
    let mut rev = Vec::new();
    loop {
        let (s, &parent) = visited.get_index(idx).expect("index in range");
        if parent == usize::MAX {
            match kind {
                TopologyKind::Path => rev.push(usize::from(s.window[2])),
                TopologyKind::Cycle => {
                    rev.push(usize::from(s.window[2]));
                    rev.push(usize::from(s.window[1]));
                }
            }
            break;
        }
        rev.push(usize::from(s.window[2]));
        idx = parent;
    }
    rev.reverse();
    // internal classes are shifted by one for the dummy
    rev.into_iter().map(|c| c - 1).collect()
}

/// Decides existence with explicit options and returns diagnostics.
pub fn search(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let n = c.n();
    if t.n() != n {
        return Err(Error::InvalidTopology(format!(
            "topology has {} seats for {n} agents",
            t.n()
        )));
    }
    if c.k() > MAX_CLASSES {
        return Err(Error::LimitExceeded {
            what: "classes for the triple table",
            limit: MAX_CLASSES as u128,
            actual: c.k() as u128,
        });
    }
    if n >= usize::from(NONE) {
        return Err(Error::LimitExceeded {
            what: "agents for the class search",
            limit: u128::from(NONE) - 1,
            actual: n as u128,
        });
    }
    let trivial = t.kind() == TopologyKind::Path && n <= 2;
    let sequence = if trivial {
        Some(c.class_of_agents())
    } else {
        let table = TripleTable::new(c, t.kind(), criterion);
        let searcher = Searcher {
            table: &table,
            sizes: std::iter::once(0)
                .chain(c.sizes().iter().map(|&s| s as u8))
                .collect(),
            n,
            kind: t.kind(),
            counters: opts.counters,
        };
        let found = run(&searcher, opts.traversal);
        let report = SearchReport {
            sequence: found.0,
            arrangement: None,
            visited: found.1,
            frontier_peak: found.2,
        };
        return finish(c, t, criterion, report);
    };
    finish(
        c,
        t,
        criterion,
        SearchReport {
            sequence,
            arrangement: None,
            visited: 0,
            frontier_peak: 0,
        },
    )
}

fn run(searcher: &Searcher<'_>, traversal: Traversal) -> (Option<Vec<usize>>, usize, usize) {
    let mut visited: IndexMap<State, usize> = IndexMap::new();
    let mut pending: VecDeque<usize> = VecDeque::new();
    for s in searcher.starts() {
        if !visited.contains_key(&s) {
            let (idx, _) = visited.insert_full(s, usize::MAX);
            pending.push_back(idx);
        }
    }
    let mut peak = pending.len();
    let mut buf = Vec::new();
    loop {
        let next = match traversal {
            Traversal::BreadthFirst => pending.pop_front(),
            Traversal::DepthFirst => pending.pop_back(),
        };
        let Some(idx) = next else { break };
        buf.clear();
        let (state, _) = visited.get_index(idx).expect("index in range");
        let state = state.clone();
        if searcher.expand(&state, &mut buf) {
            return (
                Some(reconstruct(&visited, idx, searcher.kind)),
                visited.len(),
                peak,
            );
        }
        for s in buf.drain(..) {
            if !visited.contains_key(&s) {
                let (child, _) = visited.insert_full(s, idx);
                pending.push_back(child);
            }
        }
        peak = peak.max(pending.len());
    }
    (None, visited.len(), peak)
}

fn finish(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
    mut report: SearchReport,
) -> Result<SearchReport> {
    if let Some(seq) = &report.sequence {
        let a = assign_agents(c, seq)?;
        let p = expand_classes(c);
        if let Err(w) = judge::check(&p, t, &a, criterion) {
            return Err(Error::Internal(format!(
                "class search produced {a} on a {}, which fails {criterion}: {w:?}",
                t.kind()
            )));
        }
        report.arrangement = Some(a);
    }
    Ok(report)
}

/// A stable or envy-free path arrangement, or `None` when none exists.
///
/// ```
/// use seating::{polyclass, ClassStructure, Criterion};
///
/// let c = ClassStructure::new(vec![2, 3], vec![vec![1, -1], vec![0, 2]]).unwrap();
/// assert!(polyclass::decide_path(&c, Criterion::Stable).unwrap().is_some());
/// ```
pub fn decide_path(c: &ClassStructure, criterion: Criterion) -> Result<Option<Arrangement>> {
    decide(c, &Topology::path(c.n())?, criterion)
}

pub fn decide_cycle(c: &ClassStructure, criterion: Criterion) -> Result<Option<Arrangement>> {
    decide(c, &Topology::cycle(c.n())?, criterion)
}

pub fn decide(
    c: &ClassStructure,
    t: &Topology,
    criterion: Criterion,
) -> Result<Option<Arrangement>> {
    Ok(search(c, t, criterion, &SearchOptions::default())?.arrangement)
}

/// Checks every pair of seats of a class sequence against the triple
/// conditions. On failure returns the first offending seat pair in
/// lexicographic order.
pub fn check_compatible(
    c: &ClassStructure,
    t: &Topology,
    seq: &[usize],
    criterion: Criterion,
) -> Result<std::result::Result<(), (usize, usize)>> {
    let n = t.n();
    if seq.len() != n || c.n() != n {
        return Err(Error::InvalidArrangement(format!(
            "sequence of length {} for {n} seats",
            seq.len()
        )));
    }
    let mut used = vec![0usize; c.k()];
    for &x in seq {
        if x >= c.k() {
            return Err(Error::InvalidArrangement(format!("unknown class {x}")));
        }
        used[x] += 1;
    }
    if used != c.sizes() {
        return Err(Error::InvalidArrangement(
            "sequence does not match class sizes".into(),
        ));
    }
    let table = TripleTable::new(c, t.kind(), criterion);
    // shift by one so that 0 is the dummy beyond the path ends
    let sym = |i: isize| -> usize {
        if t.is_cycle() {
            seq[i.rem_euclid(n as isize) as usize] + 1
        } else if i < 0 || i >= n as isize {
            0
        } else {
            seq[i as usize] + 1
        }
    };
    let triple = |i: usize| {
        let i = i as isize;
        (sym(i - 1), sym(i), sym(i + 1))
    };
    for i in 0..n {
        for j in i + 1..n {
            let ok = if t.adjacent(i, j) {
                // orient so the pair reads (x, y) left to right
                let (x, y) = if j == i + 1 { (i, j) } else { (j, i) };
                let (a, b, cc) = triple(x);
                let d = triple(y).2;
                table.short(a, b, cc, d)
            } else {
                let (a, b, cc) = triple(i);
                let (d, e, f) = triple(j);
                table.long(a, b, cc, d, e, f)
            };
            if !ok {
                return Ok(Err((i, j)));
            }
        }
    }
    Ok(Ok(()))
}
