use std::collections::BTreeSet;

use super::families::{abf_cycle, pm1_path};
use crate::error::{Error, Result};
use crate::profile::PreferenceProfile;

/// A directed graph without self-loops on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("digraph has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parse(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Parse(format!("self-loop at vertex {u}")));
            }
            set.insert((u, v));
        }
        Ok(Self { n, edges: set })
    }

    /// Every labeled digraph on `n` vertices, in edge-mask order over the
    /// `n(n-1)` ordered pairs.
    pub fn all(n: usize) -> impl Iterator<Item = Digraph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        (0u64..1 << pairs.len()).map(move |mask| Digraph {
            n,
            edges: pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect(),
        })
    }

    /// Every labeled digraph on `n` vertices in which vertex `n - 1` has no
    /// outgoing edges.
    pub fn all_with_sink(n: usize) -> impl Iterator<Item = Digraph> {
        Self::all(n).filter(move |g| n == 0 || g.out_degree(n - 1) == 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.edges.range((u, 0)..(u + 1, 0)).count()
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }
}

/// Parses an edge list: one `u v` pair per line, 0-based. Blank lines and
/// lines starting with `#` are skipped. An optional `n <count>` line fixes
/// the vertex count; otherwise it is one more than the largest endpoint.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {}: expected `u v`, got `{line}`", lineno + 1));
        match fields.as_slice() {
            ["n", count] => n = Some(count.parse().map_err(|_| bad())?),
            [u, v] => edges.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)),
            _ => return Err(bad()),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Digraph::new(n, edges)
}

/// Three agents that care about nobody.
pub fn canonical_yes_instance() -> PreferenceProfile {
    PreferenceProfile::zeros(3)
}

fn gadget(g: &Digraph) -> PreferenceProfile {
    let n = g.n();
    let (x, y, z) = (|v: usize| 3 * v, |v: usize| 3 * v + 1, |v: usize| 3 * v + 2);
    let mut likes = Vec::new();
    for v in 0..n {
        likes.push((x(v), y(v)));
        likes.push((y(v), z(v)));
        likes.extend(g.successors(v).map(|u| (z(v), x(u))));
    }
    PreferenceProfile::from_approvals(3 * n, likes)
}

/// Binary profile with an envy-free cycle arrangement iff `g` has a
/// Hamiltonian cycle. Agent `3v` likes `3v+1`, which likes `3v+2`, which
/// likes `3u` for every edge `(v, u)`.
pub fn hamiltonian_cycle_profile(g: &Digraph) -> PreferenceProfile {
    if g.n() == 1 {
        return canonical_yes_instance();
    }
    if (0..g.n()).any(|v| g.out_degree(v) == 0) {
        return abf_cycle(4).expect("fixed size is valid");
    }
    gadget(g)
}

/// Path variant: the last vertex is the sink and must have no outgoing
/// edges; every other vertex needs one.
pub fn hamiltonian_path_profile(g: &Digraph) -> Result<PreferenceProfile> {
    let sink = g.n() - 1;
    if g.out_degree(sink) > 0 {
        return Err(Error::InvalidParameter(format!(
            "sink vertex {sink} has outgoing edges"
        )));
    }
    if (0..sink).any(|v| g.out_degree(v) == 0) {
        return Ok(pm1_path(3).expect("fixed size is valid"));
    }
    Ok(gadget(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_edge_lists() {
        let g = parse_digraph("# triangle\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(2, 0));
        let h = parse_digraph("n 4\n0 1\n").unwrap();
        assert_eq!(h.n(), 4);
        assert!(parse_digraph("0 0\n").is_err());
        assert!(parse_digraph("0 x\n").is_err());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(Digraph::all(3).count(), 64);
        assert_eq!(Digraph::all_with_sink(3).count(), 16);
    }

    #[test]
    fn gadget_shape() {
        let tri = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = hamiltonian_cycle_profile(&tri);
        assert_eq!(p.n(), 9);
        assert!(p.is_binary());
        assert_eq!(p.get(0, 1), 1);
        assert_eq!(p.get(1, 2), 1);
        assert_eq!(p.get(2, 3), 1);
        assert_eq!(p.get(8, 0), 1);
        assert_eq!(p.off_diagonal().filter(|&(_, _, v)| v == 1).count(), 9);

        let lonely = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(hamiltonian_cycle_profile(&lonely), abf_cycle(4).unwrap());
        let single = Digraph::new(1, []).unwrap();
        assert_eq!(hamiltonian_cycle_profile(&single), canonical_yes_instance());

        let line = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(hamiltonian_path_profile(&line).unwrap().n(), 9);
        let stuck = Digraph::new(3, [(0, 2)]).unwrap();
        assert_eq!(
            hamiltonian_path_profile(&stuck).unwrap(),
            pm1_path(3).unwrap()
        );
        assert!(hamiltonian_path_profile(&Digraph::new(3, [(2, 0)]).unwrap()).is_err());
    }
}
