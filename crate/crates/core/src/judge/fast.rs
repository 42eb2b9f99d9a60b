//! Constant-time swap evaluation over seat labels.
//!
//! `labels[s]` names whoever occupies seat `s`: an agent id for agent-level
//! profiles, or a class id for class structures. Two distinct seats always
//! hold distinct agents, so `value(labels[x], labels[y])` is the preference
//! between the occupants even when both labels are the same class.

use super::Criterion;
use crate::profile::{ClassStructure, PreferenceProfile, Topology};

/// Preference lookup between seat labels.
pub trait SeatValues {
    fn value(&self, from: usize, to: usize) -> i64;
}

impl SeatValues for PreferenceProfile {
    #[inline]
    fn value(&self, from: usize, to: usize) -> i64 {
        self.get(from, to)
    }
}

impl SeatValues for ClassStructure {
    #[inline]
    fn value(&self, from: usize, to: usize) -> i64 {
        ClassStructure::value(self, from, to)
    }
}

impl<V: SeatValues + ?Sized> SeatValues for &V {
    #[inline]
    fn value(&self, from: usize, to: usize) -> i64 {
        (**self).value(from, to)
    }
}

#[inline]
pub fn seat_utility<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    seat: usize,
) -> i64 {
    let me = labels[seat];
    t.neighbors(seat)
        .into_iter()
        .map(|u| v.value(me, labels[u]))
        .sum()
}

/// Utility change for the occupant of `from` if it exchanges seats with the
/// occupant of `to`.
#[inline]
pub fn swap_gain<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    from: usize,
    to: usize,
) -> i64 {
    let me = labels[from];
    let other = labels[to];
    let before = seat_utility(v, t, labels, from);
    let after: i64 = t
        .neighbors(to)
        .into_iter()
        .map(|u| v.value(me, if u == from { other } else { labels[u] }))
        .sum();
    after - before
}

#[inline]
pub fn envies_seat<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    from: usize,
    to: usize,
) -> bool {
    swap_gain(v, t, labels, from, to) > 0
}

#[inline]
pub fn blocking_seats<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    x: usize,
    y: usize,
) -> bool {
    envies_seat(v, t, labels, x, y) && envies_seat(v, t, labels, y, x)
}

/// Every unordered seat pair once, adjacent pairs first.
pub fn seat_pairs(t: &Topology) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = t.n();
    let wrap = t.is_cycle() && n >= 3;
    let adjacent = (0..n.saturating_sub(1))
        .map(|x| (x, x + 1))
        .chain(wrap.then_some((0, n - 1)));
    let far = (0..n).flat_map(move |x| {
        (x + 2..n)
            .filter(move |&y| !(wrap && x == 0 && y == n - 1))
            .map(move |y| (x, y))
    });
    adjacent.chain(far)
}

/// First blocking seat pair in adjacent-first order.
pub fn first_blocking<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
) -> Option<(usize, usize)> {
    seat_pairs(t).find(|&(x, y)| blocking_seats(v, t, labels, x, y))
}

/// First envy relation `(envier seat, envied seat)` in adjacent-first order.
pub fn first_envy<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
) -> Option<(usize, usize)> {
    for (x, y) in seat_pairs(t) {
        if envies_seat(v, t, labels, x, y) {
            return Some((x, y));
        }
        if envies_seat(v, t, labels, y, x) {
            return Some((y, x));
        }
    }
    None
}

/// First violation of `criterion`, as a seat pair.
pub fn first_violation<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    criterion: Criterion,
) -> Option<(usize, usize)> {
    match criterion {
        Criterion::Stable => first_blocking(v, t, labels),
        Criterion::EnvyFree => first_envy(v, t, labels),
    }
}

#[inline]
pub fn satisfies<V: SeatValues + ?Sized>(
    v: &V,
    t: &Topology,
    labels: &[usize],
    criterion: Criterion,
) -> bool {
    first_violation(v, t, labels, criterion).is_none()
}
