use crate::profile::{Topology, TopologyKind};

/// Rearranges `v` into the next lexicographic permutation; returns `false`
/// (leaving `v` sorted ascending) after the last one. Handles repeated
/// elements, so it walks multiset permutations without duplicates.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `m! / (k_1! ... k_r!)` with `m = Σ k`, or `None` on overflow.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut total: u128 = 1;
    let mut m: u128 = 0;
    for &k in counts {
        for i in 1..=k as u128 {
            m += 1;
            // total * m / i stays integral: it is a running binomial product
            total = total.checked_mul(m)? / i;
        }
    }
    Some(total)
}

/// Symmetry-reduced label sequences over a multiset of labels.
///
/// Labels are `0..sizes.len()` with multiplicities `sizes`. On a path every
/// reflection pair is represented by its lexicographically smaller member
/// (both when palindromic). On a cycle label 0 is pinned at seat 0 and the
/// orientation is chosen so that `seq[1] <= seq[n-1]`; this covers every
/// orbit under rotation and reflection, occasionally more than once.
///
/// With all sizes equal to one this yields exactly `n!/2` path arrangements
/// (`n >= 2`) or `(n-1)!/2` cycle arrangements.
#[derive(Clone, Debug)]
pub struct SequenceIter {
    kind: TopologyKind,
    seq: Vec<usize>,
    lo: usize,
    pin: Option<usize>,
    first: bool,
    done: bool,
}

impl SequenceIter {
    pub fn new(t: &Topology, sizes: &[usize]) -> Self {
        let (lo, seq) = initial(t, sizes, None);
        Self {
            kind: t.kind(),
            seq,
            lo,
            pin: None,
            first: true,
            done: false,
        }
    }

    /// Only the sequences whose first free seat holds `label`.
    pub fn shard(t: &Topology, sizes: &[usize], label: usize) -> Self {
        let (lo, seq) = initial(t, sizes, Some(label));
        let done = seq.get(lo) != Some(&label);
        Self {
            kind: t.kind(),
            seq,
            lo,
            pin: Some(label),
            first: true,
            done,
        }
    }

    /// Labels that start a non-empty shard, ascending.
    pub fn shard_labels(t: &Topology, sizes: &[usize]) -> Vec<usize> {
        let mut rest = sizes.to_vec();
        if t.is_cycle() {
            rest[0] -= 1;
        }
        (0..rest.len()).filter(|&c| rest[c] > 0).collect()
    }

    /// Number of raw sequences walked before the symmetry filter.
    pub fn raw_count(t: &Topology, sizes: &[usize]) -> Option<u128> {
        let mut rest = sizes.to_vec();
        if t.is_cycle() {
            rest[0] -= 1;
        }
        multinomial(&rest)
    }

    fn keep(&self) -> bool {
        let s = &self.seq;
        let n = s.len();
        match self.kind {
            TopologyKind::Path => s.iter().le(s.iter().rev()),
            TopologyKind::Cycle => s[1] <= s[n - 1],
        }
    }

    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if self.first {
            self.first = false;
        } else if !next_permutation(&mut self.seq[self.lo..]) {
            self.done = true;
            return false;
        }
        if let Some(p) = self.pin {
            if self.seq[self.lo] != p {
                self.done = true;
                return false;
            }
        }
        true
    }

    /// Advances to the next kept sequence and borrows it.
    pub fn next_seq(&mut self) -> Option<&[usize]> {
        while self.advance() {
            if self.keep() {
                return Some(&self.seq);
            }
        }
        None
    }
}

impl Iterator for SequenceIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_seq().map(<[usize]>::to_vec)
    }
}

fn initial(t: &Topology, sizes: &[usize], pin: Option<usize>) -> (usize, Vec<usize>) {
    assert_eq!(sizes.iter().sum::<usize>(), t.n(), "sizes must sum to n");
    let mut rest = sizes.to_vec();
    let mut seq = Vec::with_capacity(t.n());
    let lo = if t.is_cycle() {
        rest[0] -= 1;
        seq.push(0);
        1
    } else {
        0
    };
    if let Some(p) = pin {
        if rest.get(p).copied().unwrap_or(0) > 0 {
            rest[p] -= 1;
            seq.push(p);
        }
    }
    for (c, &k) in rest.iter().enumerate() {
        seq.extend(std::iter::repeat_n(c, k));
    }
    // an impossible pin leaves seq one short; callers treat the shard as empty
    if seq.len() < t.n() {
        seq.push(usize::MAX);
    }
    (lo, seq)
}
