//! Swap dynamics: repeatedly exchange a blocking pair until none is left,
//! a state repeats, or the step budget runs out.

mod rewrite;

pub use rewrite::{apply_f, expand_chain, BitString, Operator, RewriteStep, RewriteTrace};

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::judge::{self, PotentialValue};
use crate::profile::{Arrangement, PreferenceProfile, Topology, TopologyKind};

/// How the next swap is picked among the admissible blocking pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Smallest pair of agent ids.
    #[default]
    Lexicographic,
    /// Uniformly at random from the run's generator.
    SeededRandom,
    /// Largest potential after the swap (welfare, then the edge sequence on
    /// binary paths); ties go to the smallest pair.
    MaxPotentialGain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SwapPolicy {
    /// Largest seat distance of an admissible swap; `None` for no bound.
    pub max_distance: Option<usize>,
    pub selection: Selection,
}

impl SwapPolicy {
    pub fn unrestricted() -> Self {
        Self::default()
    }

    pub fn within(distance: usize) -> Self {
        Self {
            max_distance: Some(distance),
            ..Self::default()
        }
    }

    pub fn with_selection(self, selection: Selection) -> Self {
        Self { selection, ..self }
    }

    fn admits(&self, t: &Topology, a: &Arrangement, pair: [usize; 2]) -> bool {
        self.max_distance
            .is_none_or(|d| t.distance(a.seat_of(pair[0]), a.seat_of(pair[1])) <= d)
    }
}

/// Blocking pairs a policy may swap, in ascending agent order.
pub fn admissible_pairs(
    p: &PreferenceProfile,
    t: &Topology,
    a: &Arrangement,
    policy: &SwapPolicy,
) -> Vec<[usize; 2]> {
    judge::blocking_pairs(p, t, a)
        .into_iter()
        .map(|w| w.agents)
        .filter(|&pair| policy.admits(t, a, pair))
        .collect()
}

fn score(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> (i64, Vec<u8>) {
    let edges = judge::edge_sequence(p, a, t).unwrap_or_default();
    (judge::welfare(p, t, a), edges)
}

/// One swap of an admissible blocking pair, or `None` when there is none.
pub fn step<R: Rng + ?Sized>(
    p: &PreferenceProfile,
    t: &Topology,
    a: &Arrangement,
    policy: &SwapPolicy,
    rng: &mut R,
) -> Option<([usize; 2], Arrangement)> {
    let pairs = admissible_pairs(p, t, a, policy);
    let swap = |[i, j]: [usize; 2]| a.swapped(i, j);
    let pair = match policy.selection {
        Selection::Lexicographic => *pairs.first()?,
        Selection::SeededRandom => *pairs.choose(rng)?,
        Selection::MaxPotentialGain => {
            let mut best: Option<([usize; 2], (i64, Vec<u8>))> = None;
            for &pair in &pairs {
                let s = score(p, t, &swap(pair));
                if best.as_ref().is_none_or(|(_, b)| s > *b) {
                    best = Some((pair, s));
                }
            }
            best?.0
        }
    };
    Some((pair, swap(pair)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    /// No admissible blocking pair is left.
    Converged,
    /// The arrangement (up to seat symmetry) repeats after `period` swaps.
    LoopDetected {
        period: usize,
    },
    StepCapReached,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub pair: [usize; 2],
    pub arrangement: Arrangement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsReport {
    pub outcome: Outcome,
    pub topology: Topology,
    pub start: Arrangement,
    pub trace: Vec<TraceStep>,
    /// Potential of the start and after every swap, on binary paths.
    pub potentials: Option<Vec<PotentialValue>>,
}

impl DynamicsReport {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }

    pub fn last(&self) -> &Arrangement {
        self.trace.last().map_or(&self.start, |s| &s.arrangement)
    }
}

/// Default step budget for `n` agents.
pub fn default_max_steps(n: usize) -> usize {
    10_000 * n.max(1)
}

/// Runs the dynamics from `a0`. Deterministic in `seed`.
pub fn run(
    p: &PreferenceProfile,
    t: &Topology,
    a0: &Arrangement,
    policy: &SwapPolicy,
    max_steps: usize,
    seed: u64,
) -> Result<DynamicsReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_with(p, t, a0, policy, max_steps, &mut rng)
}

fn run_with<R: Rng + ?Sized>(
    p: &PreferenceProfile,
    t: &Topology,
    a0: &Arrangement,
    policy: &SwapPolicy,
    max_steps: usize,
    rng: &mut R,
) -> Result<DynamicsReport> {
    if max_steps == 0 {
        return Err(Error::InvalidParameter(
            "max_steps must be at least 1".into(),
        ));
    }
    if p.n() != t.n() || a0.len() != t.n() {
        return Err(Error::InvalidArrangement(format!(
            "{} agents, {} seats, arrangement of {}",
            p.n(),
            t.n(),
            a0.len()
        )));
    }
    let track = t.kind() == TopologyKind::Path && p.is_binary();
    let mut potentials = track.then(|| vec![judge::potential(p, a0, t).expect("binary path")]);
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(a0.canonical(t.kind()), 0);
    let mut trace = Vec::new();
    let mut current = a0.clone();
    let outcome = loop {
        if trace.len() == max_steps {
            break Outcome::StepCapReached;
        }
        let Some((pair, next)) = step(p, t, &current, policy, rng) else {
            break Outcome::Converged;
        };
        if let Some(ps) = potentials.as_mut() {
            ps.push(judge::potential(p, &next, t).expect("binary path"));
        }
        trace.push(TraceStep {
            pair,
            arrangement: next.clone(),
        });
        current = next;
        let now = trace.len();
        if let Some(before) = seen.insert(current.canonical(t.kind()), now) {
            break Outcome::LoopDetected {
                period: now - before,
            };
        }
    };
    Ok(DynamicsReport {
        outcome,
        topology: *t,
        start: a0.clone(),
        trace,
        potentials,
    })
}

/// Whether the potential strictly increased at every swap of the report.
/// Needs a binary profile on a path.
pub fn audit_potential(p: &PreferenceProfile, report: &DynamicsReport) -> Result<bool> {
    let t = &report.topology;
    let mut prev = judge::potential(p, &report.start, t)?;
    for s in &report.trace {
        let next = judge::potential(p, &s.arrangement, t)?;
        if next <= prev {
            return Ok(false);
        }
        prev = next;
    }
    Ok(true)
}

/// Summary of one run of an ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub run: u64,
    pub start: Arrangement,
    pub outcome: Outcome,
    pub steps: usize,
}

/// `runs` independent runs from uniformly random starts. Run `r` draws
/// from stream `r` of a generator seeded with `seed`, so results do not
/// depend on the number of worker threads.
pub fn ensemble(
    p: &PreferenceProfile,
    t: &Topology,
    policy: &SwapPolicy,
    runs: u64,
    max_steps: usize,
    seed: u64,
) -> Result<Vec<RunSummary>> {
    (0..runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run);
            let mut seats: Vec<usize> = (0..t.n()).collect();
            seats.shuffle(&mut rng);
            let start = Arrangement::new(seats)?;
            let report = run_with(p, t, &start, policy, max_steps, &mut rng)?;
            Ok(RunSummary {
                run,
                start,
                outcome: report.outcome,
                steps: report.steps(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::p4_loop;

    fn pi1() -> Arrangement {
        Arrangement::new(vec![0, 3, 1, 2]).unwrap()
    }

    #[test]
    fn p4_first_swap() {
        let p = p4_loop();
        let t = Topology::path(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (pair, next) = step(&p, &t, &pi1(), &SwapPolicy::unrestricted(), &mut rng).unwrap();
        assert_eq!(pair, [0, 2]);
        assert_eq!(next.seats(), &[2, 3, 1, 0]);
        assert!(step(
            &p,
            &t,
            &Arrangement::identity(4),
            &SwapPolicy::unrestricted(),
            &mut rng
        )
        .is_none());
    }

    #[test]
    fn p4_loops_with_period_two() {
        let p = p4_loop();
        let t = Topology::path(4).unwrap();
        let r = run(&p, &t, &pi1(), &SwapPolicy::unrestricted(), 100, 0).unwrap();
        assert_eq!(r.outcome, Outcome::LoopDetected { period: 2 });
        assert!(!audit_potential(&p, &r).unwrap());
    }

    #[test]
    fn distance_bound_filters_pairs() {
        let p = p4_loop();
        let t = Topology::path(4).unwrap();
        // (0, 2) sit three seats apart
        assert!(admissible_pairs(&p, &t, &pi1(), &SwapPolicy::within(2)).is_empty());
    }

    #[test]
    fn stable_start_is_vacuously_audited() {
        let p = p4_loop();
        let t = Topology::path(4).unwrap();
        let r = run(
            &p,
            &t,
            &Arrangement::identity(4),
            &SwapPolicy::within(2),
            10,
            0,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Converged);
        assert!(r.trace.is_empty());
        assert!(audit_potential(&p, &r).unwrap());
    }

    #[test]
    fn ensembles_ignore_thread_count() {
        let p = crate::constructions::abf_cycle(6).unwrap();
        let t = Topology::cycle(6).unwrap();
        let policy = SwapPolicy::unrestricted().with_selection(Selection::SeededRandom);
        let a = ensemble(&p, &t, &policy, 16, 200, 7).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| ensemble(&p, &t, &policy, 16, 200, 7).unwrap());
        assert_eq!(a, b);
    }
}
