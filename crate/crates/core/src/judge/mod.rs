//! Ground-truth evaluation of arrangements.
//!
//! Every public function here evaluates the definition directly: an agent
//! envies another when its utility in the fully swapped arrangement is
//! strictly larger. The solvers use the constant-time delta kernel in
//! [`fast`], which is checked against these definitions in the tests.

pub mod fast;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Arrangement, PreferenceProfile, Topology, TopologyKind};

/// Which property an arrangement must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "ef")]
    EnvyFree,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stable" => Ok(Criterion::Stable),
            "ef" | "envy-free" | "envyfree" => Ok(Criterion::EnvyFree),
            other => Err(Error::Parse(format!("unknown criterion `{other}`"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Stable => "stable",
            Criterion::EnvyFree => "ef",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `agents[0]` envies `agents[1]`.
    Envy,
    /// The two agents envy each other.
    BlockingPair,
}

/// A certificate that an arrangement violates a criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub agents: [usize; 2],
}

impl Witness {
    pub fn seats(&self, a: &Arrangement) -> [usize; 2] {
        [a.seat_of(self.agents[0]), a.seat_of(self.agents[1])]
    }

    /// Re-evaluates the witness against the definition.
    pub fn confirms(&self, p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> bool {
        let [i, j] = self.agents;
        match self.kind {
            WitnessKind::Envy => envies(p, t, a, i, j),
            WitnessKind::BlockingPair => envies(p, t, a, i, j) && envies(p, t, a, j, i),
        }
    }
}

fn check_dims(p: &PreferenceProfile, t: &Topology, a: &Arrangement) {
    assert_eq!(p.n(), t.n(), "profile and topology sizes differ");
    assert_eq!(a.len(), t.n(), "arrangement and topology sizes differ");
}

/// Sum of `agent`'s preferences toward its seat neighbors.
pub fn utility(p: &PreferenceProfile, t: &Topology, a: &Arrangement, agent: usize) -> i64 {
    check_dims(p, t, a);
    t.neighbors(a.seat_of(agent))
        .into_iter()
        .map(|s| p.get(agent, a.agent_at(s)))
        .sum()
}

/// Whether `i` strictly gains by exchanging seats with `j`.
pub fn envies(p: &PreferenceProfile, t: &Topology, a: &Arrangement, i: usize, j: usize) -> bool {
    assert_ne!(i, j, "an agent cannot envy itself");
    let swapped = a.swapped(i, j);
    utility(p, t, a, i) < utility(p, t, &swapped, i)
}

/// All blocking pairs, sorted lexicographically by agent id.
pub fn blocking_pairs(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> Vec<Witness> {
    check_dims(p, t, a);
    let n = p.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if envies(p, t, a, i, j) && envies(p, t, a, j, i) {
                out.push(Witness {
                    kind: WitnessKind::BlockingPair,
                    agents: [i, j],
                });
            }
        }
    }
    out
}

/// All envy relations `(i, j)`, sorted lexicographically.
pub fn envy_edges(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> Vec<Witness> {
    check_dims(p, t, a);
    let n = p.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && envies(p, t, a, i, j) {
                out.push(Witness {
                    kind: WitnessKind::Envy,
                    agents: [i, j],
                });
            }
        }
    }
    out
}

/// `Ok(())` when stable, otherwise the lexicographically first blocking pair.
pub fn check_stable(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> Result<(), Witness> {
    check_dims(p, t, a);
    let n = p.n();
    for i in 0..n {
        for j in i + 1..n {
            if envies(p, t, a, i, j) && envies(p, t, a, j, i) {
                return Err(Witness {
                    kind: WitnessKind::BlockingPair,
                    agents: [i, j],
                });
            }
        }
    }
    Ok(())
}

/// `Ok(())` when envy-free, otherwise the lexicographically first envy edge.
pub fn check_envy_free(
    p: &PreferenceProfile,
    t: &Topology,
    a: &Arrangement,
) -> Result<(), Witness> {
    check_dims(p, t, a);
    let n = p.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && envies(p, t, a, i, j) {
                return Err(Witness {
                    kind: WitnessKind::Envy,
                    agents: [i, j],
                });
            }
        }
    }
    Ok(())
}

pub fn is_stable(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> bool {
    check_stable(p, t, a).is_ok()
}

pub fn is_envy_free(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> bool {
    check_envy_free(p, t, a).is_ok()
}

pub fn check(
    p: &PreferenceProfile,
    t: &Topology,
    a: &Arrangement,
    criterion: Criterion,
) -> Result<(), Witness> {
    match criterion {
        Criterion::Stable => check_stable(p, t, a),
        Criterion::EnvyFree => check_envy_free(p, t, a),
    }
}

/// Utilitarian welfare: the sum of all utilities.
pub fn welfare(p: &PreferenceProfile, t: &Topology, a: &Arrangement) -> i64 {
    (0..p.n()).map(|i| utility(p, t, a, i)).sum()
}

/// Codes each adjacent seat pair of a binary path arrangement: 0 neither
/// likes the other, 1 only the left agent likes the right one, 2 only the
/// right likes the left, 3 mutual.
pub fn edge_sequence(p: &PreferenceProfile, a: &Arrangement, t: &Topology) -> Result<Vec<u8>> {
    if t.kind() != TopologyKind::Path {
        return Err(Error::RequiresPath);
    }
    if !p.is_binary() {
        return Err(Error::NonBinary);
    }
    check_dims(p, t, a);
    Ok(a.seats()
        .windows(2)
        .map(|w| {
            let lr = p.get(w[0], w[1]) == 1;
            let rl = p.get(w[1], w[0]) == 1;
            match (lr, rl) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            }
        })
        .collect())
}

/// The potential `(welfare, edge sequence)`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PotentialValue {
    pub welfare: i64,
    pub edge_seq: Vec<u8>,
}

pub fn potential(p: &PreferenceProfile, a: &Arrangement, t: &Topology) -> Result<PotentialValue> {
    let edge_seq = edge_sequence(p, a, t)?;
    Ok(PotentialValue {
        welfare: welfare(p, t, a),
        edge_seq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> PreferenceProfile {
        // a->b->c->d->a
        PreferenceProfile::from_approvals(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    #[test]
    fn zero_profile() {
        let p = PreferenceProfile::zeros(5);
        let t = Topology::cycle(5).unwrap();
        let a = Arrangement::new(vec![3, 1, 4, 0, 2]).unwrap();
        assert_eq!(utility(&p, &t, &a, 2), 0);
        assert!(blocking_pairs(&p, &t, &a).is_empty());
        assert!(is_envy_free(&p, &t, &a));
        assert_eq!(welfare(&p, &t, &a), 0);
    }

    #[test]
    fn three_agent_path_utility() {
        let p = PreferenceProfile::from_rows(&[[0, 2, 3], [5, 0, 7], [1, 1, 0]]).unwrap();
        let t = Topology::path(3).unwrap();
        let a = Arrangement::identity(3);
        assert_eq!(utility(&p, &t, &a, 1), 5 + 7);
        assert_eq!(utility(&p, &t, &a, 0), 2);
    }

    #[test]
    fn p4_utilities_and_pairs() {
        let p = p4();
        let t = Topology::path(4).unwrap();
        let star = Arrangement::identity(4);
        let u: Vec<i64> = (0..4).map(|i| utility(&p, &t, &star, i)).collect();
        assert_eq!(u, vec![1, 1, 1, 0]);
        assert_eq!(welfare(&p, &t, &star), 3);
        assert!(is_stable(&p, &t, &star));

        let pi1 = Arrangement::new(vec![0, 3, 1, 2]).unwrap();
        assert!(envies(&p, &t, &pi1, 0, 2));
        let bp = blocking_pairs(&p, &t, &pi1);
        assert_eq!(
            bp,
            vec![Witness {
                kind: WitnessKind::BlockingPair,
                agents: [0, 2]
            }]
        );
        assert_eq!(check_stable(&p, &t, &pi1), Err(bp[0]));
        assert!(bp[0].confirms(&p, &t, &pi1));
    }

    #[test]
    fn all_ones_path_endpoint_envies() {
        let p = PreferenceProfile::from_fn(4, |_, _| 1);
        let t = Topology::path(4).unwrap();
        let a = Arrangement::identity(4);
        let w = check_envy_free(&p, &t, &a).unwrap_err();
        assert_eq!(w.agents, [0, 1]);
        assert!(is_stable(&p, &t, &a));
    }

    #[test]
    fn edge_sequences() {
        let t = Topology::path(4).unwrap();
        let a = Arrangement::identity(4);
        assert_eq!(
            edge_sequence(&PreferenceProfile::zeros(4), &a, &t).unwrap(),
            vec![0, 0, 0]
        );
        let ones = PreferenceProfile::from_fn(4, |_, _| 1);
        assert_eq!(edge_sequence(&ones, &a, &t).unwrap(), vec![3, 3, 3]);
        assert_eq!(edge_sequence(&p4(), &a, &t).unwrap(), vec![1, 1, 1]);
        let rev = Arrangement::new(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(edge_sequence(&p4(), &rev, &t).unwrap(), vec![2, 2, 2]);

        let neg = PreferenceProfile::from_fn(4, |_, _| -1);
        assert!(matches!(edge_sequence(&neg, &a, &t), Err(Error::NonBinary)));
        let c = Topology::cycle(4).unwrap();
        assert!(matches!(
            edge_sequence(&p4(), &a, &c),
            Err(Error::RequiresPath)
        ));
    }

    #[test]
    fn potential_order_is_lexicographic() {
        let hi = PotentialValue {
            welfare: 3,
            edge_seq: vec![1, 1, 1],
        };
        let lo = PotentialValue {
            welfare: 3,
            edge_seq: vec![0, 2, 2],
        };
        assert!(hi > lo);
        let more_welfare = PotentialValue {
            welfare: 4,
            edge_seq: vec![0, 0, 0],
        };
        assert!(more_welfare > hi);
        let p = potential(
            &p4(),
            &Arrangement::identity(4),
            &Topology::path(4).unwrap(),
        )
        .unwrap();
        assert_eq!(p, hi);
    }

    #[test]
    fn witness_json_shape() {
        let w = Witness {
            kind: WitnessKind::BlockingPair,
            agents: [0, 2],
        };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"kind":"blocking_pair","agents":[0,2]}"#
        );
    }
}
