//! Constructive stable arrangements for two classes (paths and cycles) and
//! for three two-valued classes on a cycle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::assign_agents;
use crate::judge::fast::first_blocking;
use crate::judge::{self, Criterion};
use crate::polyclass;
use crate::profile::{expand_classes, Arrangement, ClassStructure, Topology, TopologyKind};

/// How a constructed arrangement was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "route")]
pub enum Route {
    /// The case construction was stable as built.
    Primary,
    /// The case construction became stable after swapping blocking pairs.
    Repaired { swaps: usize },
    /// Neither worked; the class search supplied the arrangement.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Built {
    /// Class of the agent in each seat.
    pub sequence: Vec<usize>,
    pub arrangement: Arrangement,
    pub route: Route,
}

/// Preference of a class toward its own kind relative to the other class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lean {
    Indifferent,
    Own,
    Other,
}

fn lean(c: &ClassStructure, a: usize) -> Lean {
    let b = 1 - a;
    if c.sizes()[a] == 1 {
        return Lean::Indifferent;
    }
    match c.value(a, a).cmp(&c.value(a, b)) {
        std::cmp::Ordering::Equal => Lean::Indifferent,
        std::cmp::Ordering::Greater => Lean::Own,
        std::cmp::Ordering::Less => Lean::Other,
    }
}

fn repeat(x: usize, k: usize) -> impl Iterator<Item = usize> {
    std::iter::repeat_n(x, k)
}

/// `big, small, big, small, ...` until `small` runs out, then the rest of
/// `big`.
fn alternate(big: usize, nb: usize, small: usize, ns: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(nb + ns);
    let (mut lb, mut ls) = (nb, ns);
    while lb > 0 || ls > 0 {
        if lb > 0 {
            out.push(big);
            lb -= 1;
        }
        if ls > 0 {
            out.push(small);
            ls -= 1;
        }
    }
    out
}

fn alternate_from_larger(x: usize, nx: usize, y: usize, ny: usize) -> Vec<usize> {
    if nx >= ny {
        alternate(x, nx, y, ny)
    } else {
        alternate(y, ny, x, nx)
    }
}

fn two_class_cycle_pattern(c: &ClassStructure) -> Vec<usize> {
    let s = c.sizes();
    match (lean(c, 0), lean(c, 1)) {
        (Lean::Other, Lean::Other) => alternate_from_larger(0, s[0], 1, s[1]),
        _ => repeat(0, s[0]).chain(repeat(1, s[1])).collect(),
    }
}

/// The single agent of class `x` where its utility is largest.
fn singleton_pattern(c: &ClassStructure, x: usize) -> Vec<usize> {
    let y = 1 - x;
    let ny = c.sizes()[y];
    if c.value(x, y) > 0 && ny >= 2 {
        repeat(y, 1)
            .chain(repeat(x, 1))
            .chain(repeat(y, ny - 1))
            .collect()
    } else {
        repeat(x, 1).chain(repeat(y, ny)).collect()
    }
}

/// All of `x` in the middle with `y` split around it.
fn middle_pattern(x: usize, nx: usize, y: usize, ny: usize) -> Vec<usize> {
    let left = ny / 2;
    repeat(y, left)
        .chain(repeat(x, nx))
        .chain(repeat(y, ny - left))
        .collect()
}

fn two_class_path_pattern(c: &ClassStructure) -> Vec<usize> {
    let s = c.sizes();
    let (l0, l1) = (lean(c, 0), lean(c, 1));
    let blocks = || repeat(0, s[0]).chain(repeat(1, s[1])).collect::<Vec<_>>();
    if let Some(x) = [0, 1].into_iter().find(|&x| s[x] == 1) {
        let y = 1 - x;
        if s[y] == 1 || lean(c, y) == Lean::Indifferent && c.value(y, y) == 0 {
            return blocks();
        }
        return singleton_pattern(c, x);
    }
    if let Some(x) = [0, 1]
        .into_iter()
        .find(|&x| [l0, l1][x] == Lean::Indifferent)
    {
        let y = 1 - x;
        let v = c.value(x, x);
        return if v < 0 {
            // one member of x at each end
            repeat(x, 1)
                .chain(repeat(y, s[y]))
                .chain(repeat(x, s[x] - 1))
                .collect()
        } else if v > 0 {
            middle_pattern(x, s[x], y, s[y])
        } else {
            blocks()
        };
    }
    match (l0, l1) {
        (Lean::Own, Lean::Other) => middle_pattern(0, s[0], 1, s[1]),
        (Lean::Other, Lean::Own) => middle_pattern(1, s[1], 0, s[0]),
        (Lean::Other, Lean::Other) => alternate_from_larger(0, s[0], 1, s[1]),
        _ => blocks(),
    }
}

fn is_stable_seq(c: &ClassStructure, t: &Topology, seq: &[usize]) -> bool {
    first_blocking(c, t, seq).is_none()
}

/// Swaps blocking pairs (first in adjacent-first order) until none is left,
/// giving up after `limit` swaps.
fn repair(c: &ClassStructure, t: &Topology, seq: &mut [usize], limit: usize) -> Option<usize> {
    for swaps in 0..=limit {
        match first_blocking(c, t, seq) {
            None => return Some(swaps),
            Some((x, y)) => seq.swap(x, y),
        }
    }
    None
}

fn finish(c: &ClassStructure, t: &Topology, pattern: Vec<usize>) -> Result<Built> {
    let mut seq = pattern.clone();
    let route = match repair(c, t, &mut seq, 2 * t.n()) {
        Some(0) => Route::Primary,
        Some(swaps) => Route::Repaired { swaps },
        None => {
            seq = polyclass::search(c, t, Criterion::Stable, &Default::default())?
                .sequence
                .ok_or_else(|| {
                    Error::Internal(format!("no stable {} arrangement found", t.kind()))
                })?;
            Route::Fallback
        }
    };
    let arrangement = assign_agents(c, &seq)?;
    if !judge::is_stable(&expand_classes(c), t, &arrangement) {
        return Err(Error::Internal(format!(
            "constructed {arrangement} is not stable"
        )));
    }
    debug_assert!(is_stable_seq(c, t, &seq));
    Ok(Built {
        sequence: seq,
        arrangement,
        route,
    })
}

/// A stable arrangement for at most two classes, built by the case
/// construction: a class that prefers its own kind sits consecutively, two
/// classes that prefer each other alternate, and on a path the constant and
/// singleton cases are seated by their preferred position.
///
/// ```
/// use seating::constructions::two_class_stable;
/// use seating::{ClassStructure, Topology};
///
/// let c = ClassStructure::new(vec![4, 2], vec![vec![0, 1], vec![1, 0]]).unwrap();
/// let built = two_class_stable(&c, &Topology::cycle(6).unwrap()).unwrap();
/// assert_eq!(built.sequence, [0, 1, 0, 1, 0, 0]);
/// ```
pub fn two_class_stable(c: &ClassStructure, t: &Topology) -> Result<Built> {
    if c.k() > 2 {
        return Err(Error::InvalidClasses(format!(
            "expected at most 2 classes, got {}",
            c.k()
        )));
    }
    if t.n() != c.n() {
        return Err(Error::InvalidTopology(format!(
            "topology has {} seats for {} agents",
            t.n(),
            c.n()
        )));
    }
    if c.k() == 1 {
        return finish(c, t, vec![0; c.n()]);
    }
    let pattern = match t.kind() {
        TopologyKind::Cycle => two_class_cycle_pattern(&c.normalize_for_cycle()),
        TopologyKind::Path => two_class_path_pattern(c),
    };
    finish(c, t, pattern)
}

/// Three classes over a binary (after normalization) matrix; `likes[a][b]`.
struct Three {
    sizes: [usize; 3],
    likes: [[bool; 3]; 3],
}

impl Three {
    fn self_likers(&self) -> Vec<usize> {
        (0..3).filter(|&a| self.likes[a][a]).collect()
    }

    fn others(a: usize) -> (usize, usize) {
        ((a + 1) % 3, (a + 2) % 3)
    }

    fn block(&self, a: usize) -> impl Iterator<Item = usize> {
        repeat(a, self.sizes[a])
    }

    /// Two or more classes like their own kind.
    fn two_self_likers(&self, r: usize, b: usize) -> Vec<usize> {
        let g = 3 - r - b;
        let wedge =
            self.sizes[g] > 1 && !self.likes[g][g] && (self.likes[r][g] || self.likes[b][g]);
        if wedge {
            self.block(r)
                .chain(repeat(g, 1))
                .chain(self.block(b))
                .chain(repeat(g, self.sizes[g] - 1))
                .collect()
        } else {
            self.block(r)
                .chain(self.block(b))
                .chain(self.block(g))
                .collect()
        }
    }

    /// Only `r` likes its own kind, and it likes `b` too.
    fn one_self_liker_likes_other(&self, r: usize, b: usize) -> Vec<usize> {
        let g = 3 - r - b;
        let (nb, ng) = (self.sizes[b], self.sizes[g]);
        let tail = if ng < nb {
            alternate(b, nb, g, ng)
        } else if self.likes[g][b] {
            alternate(g, ng, b, nb)
        } else if nb == 1 {
            [g, b].into_iter().chain(repeat(g, ng - 1)).collect()
        } else {
            let mut out = vec![g];
            let (mut lb, mut lg) = (nb, ng - 1);
            while lb > 0 {
                let take = lb.min(2);
                out.extend(repeat(b, take));
                lb -= take;
                let take = lg.min(2);
                out.extend(repeat(g, take));
                lg -= take;
            }
            out.extend(repeat(g, lg));
            out
        };
        self.block(r).chain(tail).collect()
    }

    /// Block of `r`, then the other two alternating from the larger.
    fn block_then_alternate(&self, r: usize) -> Vec<usize> {
        let (x, y) = Self::others(r);
        self.block(r)
            .chain(alternate_from_larger(x, self.sizes[x], y, self.sizes[y]))
            .collect()
    }

    /// Nobody likes its own kind, `r` likes both others and `b` likes `r`.
    fn likes_both(&self, r: usize, b: usize) -> Vec<usize> {
        let g = 3 - r - b;
        let (nr, nb, ng) = (self.sizes[r], self.sizes[b], self.sizes[g]);
        let mut out = Vec::with_capacity(nr + nb + ng);
        match nr.cmp(&nb) {
            std::cmp::Ordering::Greater => {
                for _ in 0..nb {
                    out.extend([r, b]);
                }
                out.extend(alternate(r, nr - nb, g, ng));
            }
            std::cmp::Ordering::Less => {
                for _ in 0..nr {
                    out.extend([b, r]);
                }
                out.extend(alternate(b, nb - nr, g, ng));
            }
            std::cmp::Ordering::Equal => {
                for _ in 0..nr {
                    out.extend([r, b]);
                }
                out.extend(repeat(g, ng));
            }
        }
        out
    }

    fn pattern(&self) -> Vec<usize> {
        let selfish = self.self_likers();
        if selfish.len() >= 2 {
            return self.two_self_likers(selfish[0], selfish[1]);
        }
        if let [r] = selfish[..] {
            let (x, y) = Self::others(r);
            return match (self.likes[r][x], self.likes[r][y]) {
                (true, _) => self.one_self_liker_likes_other(r, x),
                (false, true) => self.one_self_liker_likes_other(r, y),
                (false, false) => self.block_then_alternate(r),
            };
        }
        let disliked = (0..3).find(|&r| {
            let (x, y) = Self::others(r);
            !self.likes[x][r] && !self.likes[y][r]
        });
        if let Some(r) = disliked {
            return self.block_then_alternate(r);
        }
        let friendly = (0..3).find(|&r| {
            let (x, y) = Self::others(r);
            self.likes[r][x] && self.likes[r][y]
        });
        if let Some(r) = friendly {
            let (x, y) = Self::others(r);
            let b = if self.likes[x][r] { x } else { y };
            return self.likes_both(r, b);
        }
        fewest_same_class_neighbors(&self.sizes)
    }
}

/// Cycle class sequence with the fewest adjacent same-class pairs, namely
/// `max(0, 2m - n)` for a largest class of size `m`.
pub fn fewest_same_class_neighbors(sizes: &[usize]) -> Vec<usize> {
    let n: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(sizes[c]));
    let big = order[0];
    let m = sizes[big];
    let o = n - m;
    if 2 * m > n {
        let rest: Vec<usize> = order[1..]
            .iter()
            .flat_map(|&c| repeat(c, sizes[c]))
            .collect();
        if o == 0 {
            return vec![big; n];
        }
        let mut out = Vec::with_capacity(n);
        for (i, &x) in rest.iter().enumerate() {
            let group = m / o + usize::from(i < m % o);
            out.extend(repeat(big, group));
            out.push(x);
        }
        return out;
    }
    let listed: Vec<usize> = order.iter().flat_map(|&c| repeat(c, sizes[c])).collect();
    let mut out = vec![0; n];
    let evens = n.div_ceil(2);
    for (i, &x) in listed.iter().enumerate() {
        out[if i < evens {
            2 * i
        } else {
            2 * (i - evens) + 1
        }] = x;
    }
    out
}

/// Number of adjacent seat pairs on a cycle holding the same class.
pub fn same_class_neighbors(seq: &[usize]) -> usize {
    let n = seq.len();
    (0..n).filter(|&i| seq[i] == seq[(i + 1) % n]).count()
}

/// A stable cycle arrangement for three classes with two distinct values.
/// After normalizing each row to 0/1, self-liking classes sit in blocks, a
/// class that likes both others is alternated with the ones that like it,
/// and when each class likes exactly one other the arrangement minimizes
/// same-class neighbors.
pub fn three_class_two_valued_cycle_stable(c: &ClassStructure) -> Result<Built> {
    if c.k() != 3 {
        return Err(Error::InvalidClasses(format!(
            "expected 3 classes, got {}",
            c.k()
        )));
    }
    if c.realized_values().len() > 2 {
        return Err(Error::InvalidClasses(
            "preferences must take at most two distinct values".into(),
        ));
    }
    let t = Topology::cycle(c.n())?;
    let norm = c.normalize_for_cycle();
    let mut likes = [[false; 3]; 3];
    for (a, row) in likes.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = norm.value(a, b) > 0;
        }
    }
    let three = Three {
        sizes: [c.sizes()[0], c.sizes()[1], c.sizes()[2]],
        likes,
    };
    finish(c, &t, three.pattern())
}
