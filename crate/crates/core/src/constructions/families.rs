//! Named instance families.

use crate::error::{Error, Result};
use crate::judge;
use crate::profile::{Arrangement, PreferenceProfile, Topology};

fn at_least(what: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!(
            "{what} needs n >= {min}, got {n}"
        )));
    }
    Ok(())
}

/// Alice (agent 0), Bob (agent 1) and `n - 2` friends. Alice prefers
/// friends to Bob, Bob prefers Alice to friends, and friends prefer Bob,
/// then each other, then Alice. No cycle arrangement is stable.
pub fn abf_cycle(n: usize) -> Result<PreferenceProfile> {
    at_least("abf_cycle", n, 4)?;
    Ok(PreferenceProfile::from_fn(n, |i, j| match (i, j) {
        (0, 1) => 0,
        (0, _) => 1,
        (1, 0) => 1,
        (1, _) => 0,
        (_, 0) => 0,
        (_, 1) => 2,
        _ => 1,
    }))
}

/// Alice (agent 0), three Bobs (agents 1 to 3) and `n - 4` friends. Alice
/// likes only friends, the Bobs like only Alice, and friends value Bobs at
/// 3, each other at 1 and Alice at 0. No path arrangement is stable.
pub fn abf_path(n: usize) -> Result<PreferenceProfile> {
    at_least("abf_path", n, 12)?;
    let bob = |i: usize| (1..=3).contains(&i);
    Ok(PreferenceProfile::from_fn(n, |i, j| {
        if i == 0 {
            i64::from(j >= 4)
        } else if bob(i) {
            i64::from(j == 0)
        } else if j == 0 {
            0
        } else if bob(j) {
            3
        } else {
            1
        }
    }))
}

/// Binary four-class profile with no stable cycle arrangement. Agents:
/// `a = 0`, `b1 = 1`, `b2 = 2`, `c = 3`, then `n - 4` members of `D`.
/// `a` likes `c`; the `b`s like `a` and `c`; `c` likes all of `D`; each `d`
/// likes the other `d`s and both `b`s.
pub fn four_class_cycle(n: usize) -> Result<PreferenceProfile> {
    at_least("four_class_cycle", n, 7)?;
    Ok(four_class_like(n, 2))
}

/// Same shape as [`four_class_cycle`] with `bs` members of `B` at agents
/// `1..=bs`, `c = bs + 1` and `D` after it.
fn four_class_like(n: usize, bs: usize) -> PreferenceProfile {
    let c = bs + 1;
    let is_b = |i: usize| (1..=bs).contains(&i);
    let is_d = |i: usize| i > c;
    PreferenceProfile::from_fn(n, |i, j| {
        let like = if i == 0 {
            j == c
        } else if is_b(i) {
            j == 0 || j == c
        } else if i == c {
            is_d(j)
        } else {
            is_d(j) || is_b(j)
        };
        i64::from(like)
    })
}

/// Alice (agent 0), Bob (agent 1) and `n - 2` friends over `{-1, 1}`. Bob
/// likes Alice, Alice likes friends, friends like Bob and each other; every
/// other preference is -1. No path arrangement is stable.
pub fn pm1_path(n: usize) -> Result<PreferenceProfile> {
    at_least("pm1_path", n, 3)?;
    Ok(PreferenceProfile::from_fn(n, |i, j| match (i, j) {
        (1, 0) => 1,
        (0, j) if j >= 2 => 1,
        (i, 1) if i >= 2 => 1,
        (i, j) if i >= 2 && j >= 2 => 1,
        _ => -1,
    }))
}

/// The directed 4-cycle `a -> b -> c -> d -> a` on agents 0 to 3.
pub fn p4_loop() -> PreferenceProfile {
    PreferenceProfile::from_approvals(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
}

/// Checks a 4-agent profile against the looping story: `(a,b,c,d)` is a
/// stable path arrangement with utilities `(1,1,1,0)`, the only blocking
/// pair of `(a,d,b,c)` is `(a,c)`, and the only blocking pair of
/// `(c,d,b,a)` is `(b,d)`.
pub fn matches_p4_story(p: &PreferenceProfile) -> bool {
    if p.n() != 4 {
        return false;
    }
    let t = Topology::path(4).expect("valid");
    let star = Arrangement::identity(4);
    let pi1 = Arrangement::new(vec![0, 3, 1, 2]).expect("valid");
    let pi2 = Arrangement::new(vec![2, 3, 1, 0]).expect("valid");
    let utilities: Vec<i64> = (0..4).map(|i| judge::utility(p, &t, &star, i)).collect();
    let pairs = |a: &Arrangement| -> Vec<[usize; 2]> {
        judge::blocking_pairs(p, &t, a)
            .iter()
            .map(|w| w.agents)
            .collect()
    };
    judge::is_stable(p, &t, &star)
        && utilities == [1, 1, 1, 0]
        && pairs(&pi1) == [[0, 2]]
        && pi1.swapped(0, 2) == pi2
        && pairs(&pi2) == [[1, 3]]
}

/// Every 4-agent profile in which each agent approves exactly one other and
/// the looping story holds.
pub fn p4_scan() -> Vec<PreferenceProfile> {
    let mut out = Vec::new();
    for code in 0..81usize {
        let mut c = code;
        let likes: Vec<(usize, usize)> = (0..4)
            .map(|i| {
                let pick = c % 3;
                c /= 3;
                let targets: Vec<usize> = (0..4).filter(|&j| j != i).collect();
                (i, targets[pick])
            })
            .collect();
        let p = PreferenceProfile::from_approvals(4, likes);
        if matches_p4_story(&p) {
            out.push(p);
        }
    }
    out
}

/// Profiles showing that adding an agent can both destroy and restore
/// stability, with stable arrangements for the two stable ones.
#[derive(Clone, Debug)]
pub struct NonmonotoneTriple {
    /// `four_class_cycle(n + 1)`, which has no stable cycle arrangement.
    pub unstable: PreferenceProfile,
    /// `four_class_cycle(n + 1)` without `a`: agents `b1 = 0`, `b2 = 1`,
    /// `c = 2`, then `D`.
    pub minus_a: PreferenceProfile,
    /// `c` seated between `b1` and `b2`.
    pub minus_a_arrangement: Arrangement,
    /// `four_class_cycle(n)` with a third `b`: `a = 0`, `b1..b3 = 1..=3`,
    /// `c = 4`, then `D`.
    pub plus_b3: PreferenceProfile,
    /// `b1, c, b2, a, b3` consecutively, then `D`.
    pub plus_b3_arrangement: Arrangement,
}

pub fn nonmonotone_pair(n: usize) -> Result<NonmonotoneTriple> {
    at_least("nonmonotone_pair", n, 7)?;
    let unstable = four_class_cycle(n + 1)?;
    let minus_a = unstable.induced(&(1..=n).collect::<Vec<_>>());
    let minus_a_arrangement = Arrangement::new([0, 2, 1].into_iter().chain(3..n).collect())?;
    let plus_b3 = four_class_like(n + 1, 3);
    let plus_b3_arrangement = Arrangement::new([1, 4, 2, 0, 3].into_iter().chain(5..=n).collect())?;
    Ok(NonmonotoneTriple {
        unstable,
        minus_a,
        minus_a_arrangement,
        plus_b3,
        plus_b3_arrangement,
    })
}
