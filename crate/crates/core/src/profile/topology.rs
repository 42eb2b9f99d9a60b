use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Path,
    Cycle,
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "path" => Ok(TopologyKind::Path),
            "cycle" => Ok(TopologyKind::Cycle),
            other => Err(Error::InvalidTopology(format!(
                "unknown topology `{other}`"
            ))),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::Path => "path",
            TopologyKind::Cycle => "cycle",
        })
    }
}

/// The seat graph: a path or a cycle on `n` seats numbered `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Topology {
    kind: TopologyKind,
    n: usize,
}

/// At most two neighboring seats.
#[derive(Clone, Copy, Debug)]
pub struct SeatNeighbors {
    seats: [usize; 2],
    len: u8,
}

impl SeatNeighbors {
    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.seats[..self.len as usize]
    }
}

impl IntoIterator for SeatNeighbors {
    type Item = usize;
    type IntoIter = std::iter::Take<std::array::IntoIter<usize, 2>>;

    fn into_iter(self) -> Self::IntoIter {
        self.seats.into_iter().take(self.len as usize)
    }
}

impl Topology {
    pub fn new(kind: TopologyKind, n: usize) -> Result<Self> {
        match kind {
            TopologyKind::Path if n < 1 => Err(Error::InvalidTopology(
                "a path needs at least one seat".into(),
            )),
            // a 2-cycle would count the single neighbor twice
            TopologyKind::Cycle if n < 3 => Err(Error::InvalidTopology(
                "a cycle needs at least three seats".into(),
            )),
            _ => Ok(Self { kind, n }),
        }
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Path, n)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Cycle, n)
    }

    #[inline]
    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_cycle(&self) -> bool {
        self.kind == TopologyKind::Cycle
    }

    #[inline]
    pub fn neighbors(&self, seat: usize) -> SeatNeighbors {
        let n = self.n;
        match self.kind {
            TopologyKind::Cycle => SeatNeighbors {
                seats: [(seat + n - 1) % n, (seat + 1) % n],
                len: 2,
            },
            TopologyKind::Path => {
                let mut seats = [0; 2];
                let mut len = 0;
                if seat > 0 {
                    seats[len] = seat - 1;
                    len += 1;
                }
                if seat + 1 < n {
                    seats[len] = seat + 1;
                    len += 1;
                }
                SeatNeighbors {
                    seats,
                    len: len as u8,
                }
            }
        }
    }

    /// Seat-index distance; on a cycle the shorter arc.
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        match self.kind {
            TopologyKind::Path => d,
            TopologyKind::Cycle => d.min(self.n - d),
        }
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.distance(a, b) == 1
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.n)
    }
}

/// A bijection between seats and agents: `seats[s]` is the agent in seat `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement {
    seats: Vec<usize>,
    position: Vec<usize>,
}

impl Arrangement {
    pub fn new(seats: Vec<usize>) -> Result<Self> {
        let n = seats.len();
        let mut position = vec![usize::MAX; n];
        for (s, &a) in seats.iter().enumerate() {
            if a >= n {
                return Err(Error::InvalidArrangement(format!(
                    "agent {a} out of range for {n} seats"
                )));
            }
            if position[a] != usize::MAX {
                return Err(Error::InvalidArrangement(format!("agent {a} seated twice")));
            }
            position[a] = s;
        }
        Ok(Self { seats, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            seats: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.seats.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.seats.is_empty()
    }

    #[inline]
    pub fn seats(&self) -> &[usize] {
        &self.seats
    }

    #[inline]
    pub fn agent_at(&self, seat: usize) -> usize {
        self.seats[seat]
    }

    #[inline]
    pub fn seat_of(&self, agent: usize) -> usize {
        self.position[agent]
    }

    /// The arrangement with agents `i` and `j` exchanging seats.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        let (si, sj) = (self.position[i], self.position[j]);
        out.seats.swap(si, sj);
        out.position.swap(i, j);
        out
    }

    pub fn reversed(&self) -> Self {
        let seats: Vec<usize> = self.seats.iter().rev().copied().collect();
        Self::new(seats).expect("reversal of a permutation")
    }

    /// Representative of the seat-symmetry orbit: reflection on a path,
    /// rotation plus reflection on a cycle. Lexicographically smallest seat
    /// vector of the orbit.
    pub fn canonical(&self, kind: TopologyKind) -> Vec<usize> {
        let n = self.seats.len();
        match kind {
            TopologyKind::Path => {
                let rev: Vec<usize> = self.seats.iter().rev().copied().collect();
                rev.min(self.seats.clone())
            }
            TopologyKind::Cycle => {
                if n == 0 {
                    return Vec::new();
                }
                // agent 0 is pinned to seat 0; pick the smaller orientation
                let p = self.position[0];
                let fwd: Vec<usize> = (0..n).map(|k| self.seats[(p + k) % n]).collect();
                let bwd: Vec<usize> = (0..n).map(|k| self.seats[(p + n - k) % n]).collect();
                fwd.min(bwd)
            }
        }
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.seats {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Arrangement {
    type Err = Error;

    /// Comma-separated agent ids, seat order.
    fn from_str(s: &str) -> Result<Self> {
        let seats = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad agent id `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(seats)
    }
}

impl Serialize for Arrangement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.seats.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let seats = Vec::<usize>::deserialize(d)?;
        Arrangement::new(seats).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_bounds() {
        assert!(Topology::path(0).is_err());
        assert!(Topology::path(1).is_ok());
        assert!(Topology::cycle(2).is_err());
        assert!(Topology::cycle(3).is_ok());
    }

    #[test]
    fn neighbors() {
        let p = Topology::path(4).unwrap();
        assert_eq!(p.neighbors(0).as_slice(), &[1]);
        assert_eq!(p.neighbors(2).as_slice(), &[1, 3]);
        assert_eq!(p.neighbors(3).as_slice(), &[2]);
        assert!(Topology::path(1)
            .unwrap()
            .neighbors(0)
            .as_slice()
            .is_empty());
        let c = Topology::cycle(5).unwrap();
        assert_eq!(c.neighbors(0).as_slice(), &[4, 1]);
        assert_eq!(c.distance(0, 4), 1);
        assert_eq!(c.distance(1, 4), 2);
        assert_eq!(p.distance(0, 3), 3);
    }

    #[test]
    fn arrangement_validation_and_swap() {
        assert!(Arrangement::new(vec![0, 0, 1]).is_err());
        assert!(Arrangement::new(vec![0, 3, 1]).is_err());
        let a: Arrangement = "0, 3, 1, 2".parse().unwrap();
        assert_eq!(a.seat_of(3), 1);
        let b = a.swapped(0, 2);
        assert_eq!(b.seats(), &[2, 3, 1, 0]);
        assert_eq!(b.seat_of(2), 0);
        assert_eq!(a.to_string(), "0,3,1,2");
    }

    #[test]
    fn canonical_orbits() {
        let a = Arrangement::new(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(a.canonical(TopologyKind::Path), vec![1, 3, 0, 2]);
        assert_eq!(a.canonical(TopologyKind::Cycle), vec![0, 2, 1, 3]);
        let rotated = Arrangement::new(vec![3, 1, 2, 0]).unwrap();
        let reflected = Arrangement::new(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(
            rotated.canonical(TopologyKind::Cycle),
            reflected.canonical(TopologyKind::Cycle)
        );
    }
}
