//! Preference profiles, seat topologies, arrangements and agent classes.
//!
//! A [`PreferenceProfile`] is an `n x n` integer matrix where entry `(i, j)` is
//! the utility agent `i` gains from sitting next to agent `j`. The diagonal
//! is always zero. All arithmetic is exact.

mod canon;
mod classes;
mod io;
mod topology;

pub use canon::canonical_profile;
pub use classes::{detect_classes, expand_classes, ClassPartition, ClassStructure};
pub use io::{emit_classes, emit_profile, parse_classes, parse_profile};
pub use topology::{Arrangement, SeatNeighbors, Topology, TopologyKind};

use crate::error::{Error, Result};

/// Largest agent count accepted by the factorial canonicalization.
pub const CANONICAL_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceProfile {
    n: usize,
    values: Vec<i64>,
}

/// Serializes as the profile JSON document `{"n": .., "values": [[..]]}`.
impl serde::Serialize for PreferenceProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PreferenceProfile", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("values", &self.rows())?;
        st.end()
    }
}

/// Summary of the distinct off-diagonal values of a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueProfileMeta {
    pub value_set: Vec<i64>,
    pub is_binary: bool,
    pub is_nonnegative: bool,
    pub k_valued: usize,
}

impl PreferenceProfile {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0; n * n],
        }
    }

    /// Builds a profile from `f(i, j)`; the diagonal is forced to zero.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut values = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = f(i, j);
                }
            }
        }
        Self { n, values }
    }

    /// Builds a profile from explicit rows, rejecting ragged input and a
    /// nonzero diagonal.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            if row[i] != 0 {
                return Err(Error::NonZeroDiagonal(i));
            }
            values.extend_from_slice(row);
        }
        Ok(Self { n, values })
    }

    /// Binary profile from a directed approval graph given as edge pairs.
    pub fn from_approvals(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut values = vec![0; n * n];
        for (i, j) in edges {
            assert!(
                i < n && j < n && i != j,
                "approval edge ({i}, {j}) out of range"
            );
            values[i * n + j] = 1;
        }
        Self { n, values }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Preference of agent `i` towards agent `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major flat view of the matrix.
    pub fn as_slice(&self) -> &[i64] {
        &self.values
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.values[i * n + j]))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.off_diagonal().all(|(i, j, v)| self.get(j, i) == v)
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 0 || v == 1)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    pub fn meta(&self) -> ValueProfileMeta {
        let mut value_set: Vec<i64> = self.off_diagonal().map(|(_, _, v)| v).collect();
        value_set.sort_unstable();
        value_set.dedup();
        ValueProfileMeta {
            is_binary: value_set.iter().all(|&v| v == 0 || v == 1),
            is_nonnegative: value_set.iter().all(|&v| v >= 0),
            k_valued: value_set.len(),
            value_set,
        }
    }

    /// Simultaneous row/column permutation: new agent `a` is old agent
    /// `order[a]`.
    pub fn relabel(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n);
        Self::from_fn(self.n, |a, b| self.get(order[a], order[b]))
    }

    /// Sub-profile induced on `agents`, in the given order.
    pub fn induced(&self, agents: &[usize]) -> Self {
        Self::from_fn(agents.len(), |a, b| self.get(agents[a], agents[b]))
    }

    /// Per-row positive affine normalization: every row is shifted so that its
    /// smallest off-diagonal entry becomes 0 and then divided by the gcd of
    /// the shifted entries. On a cycle every agent has exactly two neighbors,
    /// so this leaves every envy relation unchanged. Two-valued rows become
    /// binary.
    pub fn normalize_for_cycle(&self) -> Self {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            let entries: Vec<i64> = (0..n).filter(|&j| j != i).map(|j| self.get(i, j)).collect();
            let mapped = affine_normalize(&entries);
            let mut it = mapped.into_iter();
            for j in (0..n).filter(|&j| j != i) {
                out[i * n + j] = it.next().expect("row length");
            }
        }
        Self { n, values: out }
    }

    /// Connected components of the "cares about" relation: `i` and `j` are
    /// linked when either preference between them is nonzero. Components are
    /// returned sorted by their smallest member; members ascend.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if comp[v] == usize::MAX && (self.get(u, v) != 0 || self.get(v, u) != 0) {
                        comp[v] = id;
                        members.push(v);
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Shift-and-scale a list so its minimum is 0 and the gcd of its entries is
/// 1 (or everything is 0). Order and ties are preserved.
pub(crate) fn affine_normalize(entries: &[i64]) -> Vec<i64> {
    let Some(&min) = entries.iter().min() else {
        return Vec::new();
    };
    let shifted: Vec<i64> = entries.iter().map(|&v| v - min).collect();
    let g = shifted.iter().fold(0, |acc, &v| gcd(acc, v));
    if g == 0 {
        shifted
    } else {
        shifted.into_iter().map(|v| v / g).collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
