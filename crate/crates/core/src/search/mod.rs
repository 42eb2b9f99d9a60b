//! Exhaustive and sampled scans of profile spaces for instances without a
//! stable arrangement, and sweeps over small class structures.
//!
//! A profile over a value set `Γ` is encoded as a base-`|Γ|` integer whose
//! digits are the `n(n-1)` off-diagonal cells in row-major order, most
//! significant first. Shards are integer ranges of that encoding.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Limits};
use crate::judge::Criterion;
use crate::polyclass;
use crate::profile::{
    canonical_profile, ClassStructure, PreferenceProfile, Topology, TopologyKind,
};
use crate::randomized::stream;

/// Default cap on the number of profiles a single scan may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

const CHUNK: u128 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    Full,
    /// Shard `index` of `count` equal integer ranges.
    Sharded {
        index: u64,
        count: u64,
    },
    Sampled {
        trials: u64,
        seed: u64,
    },
}

impl FromStr for Mode {
    type Err = Error;

    /// `full`, `shard:a/b` or `sampled:trials:seed`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown mode `{s}`"));
        if s == "full" {
            return Ok(Mode::Full);
        }
        if let Some(rest) = s.strip_prefix("shard:") {
            let (a, b) = rest.split_once('/').ok_or_else(bad)?;
            return Ok(Mode::Sharded {
                index: a.parse().map_err(|_| bad())?,
                count: b.parse().map_err(|_| bad())?,
            });
        }
        if let Some(rest) = s.strip_prefix("sampled:") {
            let (a, b) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(Mode::Sampled {
                trials: a.parse().map_err(|_| bad())?,
                seed: b.parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Full => f.write_str("full"),
            Mode::Sharded { index, count } => write!(f, "shard:{index}/{count}"),
            Mode::Sampled { trials, seed } => write!(f, "sampled:{trials}:{seed}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub values: Vec<i64>,
    pub topology: TopologyKind,
    pub mode: Mode,
    pub scanned: u64,
    /// Profiles without a stable arrangement, counted with multiplicity.
    pub unstable: u64,
    /// Canonical forms of the unstable profiles, sorted and deduplicated.
    pub families: Vec<PreferenceProfile>,
}

impl SearchReport {
    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    /// Combines reports over disjoint ranges of the same space.
    pub fn merge(reports: &[SearchReport]) -> Result<SearchReport> {
        let first = reports
            .first()
            .ok_or_else(|| Error::InvalidParameter("nothing to merge".into()))?;
        let mut families = BTreeSet::new();
        let (mut scanned, mut unstable) = (0, 0);
        for r in reports {
            if (r.n, &r.values, r.topology) != (first.n, &first.values, first.topology) {
                return Err(Error::InvalidParameter(
                    "reports cover different spaces".into(),
                ));
            }
            scanned += r.scanned;
            unstable += r.unstable;
            families.extend(r.families.iter().map(|p| p.as_slice().to_vec()));
        }
        Ok(SearchReport {
            n: first.n,
            values: first.values.clone(),
            topology: first.topology,
            mode: Mode::Full,
            scanned,
            unstable,
            families: from_keys(first.n, families),
        })
    }
}

fn from_keys(n: usize, keys: BTreeSet<Vec<i64>>) -> Vec<PreferenceProfile> {
    keys.into_iter()
        .map(|k| {
            let rows: Vec<&[i64]> = k.chunks(n).collect();
            PreferenceProfile::from_rows(&rows).expect("canonical form is a profile")
        })
        .collect()
}

/// Number of profiles on `n` agents over `k` values, if it fits.
pub fn space_size(n: usize, k: usize) -> Option<u128> {
    let cells = u32::try_from(n * n.saturating_sub(1)).ok()?;
    (k as u128).checked_pow(cells)
}

/// The profile with the given index.
pub fn decode(n: usize, values: &[i64], mut index: u128) -> PreferenceProfile {
    let k = values.len() as u128;
    let cells = n * (n - 1);
    let mut digits = vec![0i64; cells];
    for d in digits.iter_mut().rev() {
        *d = values[(index % k) as usize];
        index /= k;
    }
    let mut next = digits.into_iter();
    PreferenceProfile::from_fn(n, |i, j| {
        if i == j {
            0
        } else {
            next.next().expect("cell")
        }
    })
}

fn has_stable(p: &PreferenceProfile, t: &Topology) -> Result<bool> {
    let sizes = vec![1; p.n()];
    Ok(
        exact::find_sequence_sequential(p, t, &sizes, Criterion::Stable, &Limits::default())?
            .is_some(),
    )
}

fn check_values(values: &[i64]) -> Result<Vec<i64>> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() < 2 {
        return Err(Error::InvalidParameter(
            "the value set needs at least two values".into(),
        ));
    }
    Ok(v)
}

/// Scans profiles for instances without a stable arrangement.
pub fn exhaust(n: usize, values: &[i64], t: &Topology, mode: Mode) -> Result<SearchReport> {
    exhaust_with_budget(n, values, t, mode, DEFAULT_BUDGET)
}

pub fn exhaust_with_budget(
    n: usize,
    values: &[i64],
    t: &Topology,
    mode: Mode,
    budget: u128,
) -> Result<SearchReport> {
    let values = check_values(values)?;
    if t.n() != n || n < 2 {
        return Err(Error::InvalidTopology(format!("{t} for {n} agents")));
    }
    let total = space_size(n, values.len()).ok_or(Error::LimitExceeded {
        what: "profile space",
        limit: budget,
        actual: u128::MAX,
    })?;
    let over = |actual: u128| Error::LimitExceeded {
        what: "profiles in one scan",
        limit: budget,
        actual,
    };
    let found: Vec<(u64, Vec<Vec<i64>>)> = match mode {
        Mode::Full | Mode::Sharded { .. } => {
            let (lo, hi) = match mode {
                Mode::Sharded { index, count } => {
                    if count == 0 || index >= count {
                        return Err(Error::InvalidParameter(format!(
                            "shard {index} of {count} does not exist"
                        )));
                    }
                    (
                        total * u128::from(index) / u128::from(count),
                        total * (u128::from(index) + 1) / u128::from(count),
                    )
                }
                _ => (0, total),
            };
            if hi - lo > budget {
                return Err(over(hi - lo));
            }
            let chunks: Vec<u128> = (0..(hi - lo).div_ceil(CHUNK)).collect();
            chunks
                .into_par_iter()
                .map(|c| {
                    let start = lo + c * CHUNK;
                    let end = (start + CHUNK).min(hi);
                    scan((start..end).map(|i| decode(n, &values, i)), t)
                })
                .collect::<Result<_>>()?
        }
        Mode::Sampled { trials, seed } => {
            if u128::from(trials) > budget {
                return Err(over(u128::from(trials)));
            }
            let chunks: Vec<u64> = (0..trials.div_ceil(CHUNK as u64)).collect();
            chunks
                .into_par_iter()
                .map(|c| {
                    let start = c * CHUNK as u64;
                    let end = (start + CHUNK as u64).min(trials);
                    scan(
                        (start..end).map(|trial| {
                            let mut rng = stream(seed, trial);
                            PreferenceProfile::from_fn(n, |i, j| {
                                if i == j {
                                    0
                                } else {
                                    values[rng.gen_range(0..values.len())]
                                }
                            })
                        }),
                        t,
                    )
                })
                .collect::<Result<_>>()?
        }
    };
    let scanned = match mode {
        Mode::Full => total as u64,
        Mode::Sharded { index, count } => {
            let lo = total * u128::from(index) / u128::from(count);
            let hi = total * (u128::from(index) + 1) / u128::from(count);
            (hi - lo) as u64
        }
        Mode::Sampled { trials, .. } => trials,
    };
    let mut keys = BTreeSet::new();
    let mut unstable = 0;
    for (count, forms) in found {
        unstable += count;
        keys.extend(forms);
    }
    Ok(SearchReport {
        n,
        values,
        topology: t.kind(),
        mode,
        scanned,
        unstable,
        families: from_keys(n, keys),
    })
}

fn scan(
    profiles: impl Iterator<Item = PreferenceProfile>,
    t: &Topology,
) -> Result<(u64, Vec<Vec<i64>>)> {
    let mut count = 0;
    let mut forms = BTreeSet::new();
    for p in profiles {
        if !has_stable(&p, t)? {
            count += 1;
            forms.insert(canonical_profile(&p)?.as_slice().to_vec());
        }
    }
    Ok((count, forms.into_iter().collect()))
}

/// The `index`-th unstable family (in canonical order) of a full scan.
pub fn recover_family(
    n: usize,
    values: &[i64],
    t: &Topology,
    index: usize,
) -> Result<PreferenceProfile> {
    let report = exhaust(n, values, t, Mode::Full)?;
    report.families.get(index).cloned().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "family {index} requested, the scan found {}",
            report.families.len()
        ))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub k: usize,
    pub max_per_class: usize,
    pub values: Vec<i64>,
    pub topology: TopologyKind,
    /// Every `(matrix, sizes)` pair in the grid.
    pub instances: u64,
    /// Instances decided, one per orbit under relabeling the classes.
    pub decided: u64,
    /// Decided instances where the class search also ran and agreed.
    pub cross_checked: u64,
    pub unstable: Vec<ClassStructure>,
}

/// Options for [`kclass_sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Run the polynomial class search on every `verify_every`-th decided
    /// instance (and on every unstable one) and assert agreement.
    pub verify_every: u64,
    pub budget: u128,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            verify_every: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    while exact::next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

fn instance_key(sizes: &[usize], m: &[Vec<i64>], order: &[usize]) -> (Vec<usize>, Vec<i64>) {
    (
        order.iter().map(|&c| sizes[c]).collect(),
        order
            .iter()
            .flat_map(|&a| order.iter().map(move |&b| m[a][b]))
            .collect(),
    )
}

/// Decides stability for every `k`-class structure with matrix entries
/// from `values` and class sizes `1..=max_per_class`.
pub fn kclass_sweep(
    k: usize,
    max_per_class: usize,
    values: &[i64],
    kind: TopologyKind,
) -> Result<SweepReport> {
    kclass_sweep_with(k, max_per_class, values, kind, &SweepOptions::default())
}

pub fn kclass_sweep_with(
    k: usize,
    max_per_class: usize,
    values: &[i64],
    kind: TopologyKind,
    opts: &SweepOptions,
) -> Result<SweepReport> {
    let values = check_values(values)?;
    if k == 0 || max_per_class == 0 {
        return Err(Error::InvalidParameter(
            "k and max_per_class must be positive".into(),
        ));
    }
    let matrices = (values.len() as u128)
        .checked_pow((k * k) as u32)
        .unwrap_or(u128::MAX);
    let size_tuples = (max_per_class as u128).pow(k as u32);
    let instances = matrices.saturating_mul(size_tuples);
    if instances > opts.budget {
        return Err(Error::LimitExceeded {
            what: "class instances in one sweep",
            limit: opts.budget,
            actual: instances,
        });
    }
    let perms = permutations(k);
    let depth_first = polyclass::SearchOptions {
        traversal: polyclass::Traversal::DepthFirst,
        ..polyclass::SearchOptions::default()
    };
    let results: Vec<(u64, u64, Vec<ClassStructure>)> = (0..matrices as u64)
        .into_par_iter()
        .map(|code| {
            let mut x = code;
            let mut m = vec![vec![0i64; k]; k];
            for cell in m.iter_mut().flatten() {
                *cell = values[(x % values.len() as u64) as usize];
                x /= values.len() as u64;
            }
            let mut decided = 0;
            let mut checked = 0;
            let mut unstable = Vec::new();
            for s in 0..size_tuples as u64 {
                let mut y = s;
                let sizes: Vec<usize> = (0..k)
                    .map(|_| {
                        let v = (y % max_per_class as u64) as usize + 1;
                        y /= max_per_class as u64;
                        v
                    })
                    .collect();
                let id: Vec<usize> = (0..k).collect();
                let key = instance_key(&sizes, &m, &id);
                if perms.iter().any(|p| instance_key(&sizes, &m, p) < key) {
                    continue;
                }
                decided += 1;
                let c = ClassStructure::new(sizes.clone(), m.clone())?;
                let n = c.n();
                let Ok(t) = Topology::new(kind, n) else {
                    continue;
                };
                let answer = polyclass::search(&c, &t, Criterion::Stable, &depth_first)?
                    .sequence
                    .is_some();
                let verify =
                    !answer || (code * size_tuples as u64 + s).is_multiple_of(opts.verify_every);
                if verify {
                    let slow = exact::find_sequence_sequential(
                        &c,
                        &t,
                        &sizes,
                        Criterion::Stable,
                        &Limits::default(),
                    )?
                    .is_some();
                    if slow != answer {
                        return Err(Error::Internal(format!(
                            "class search and enumeration disagree on sizes {sizes:?}, matrix {m:?}"
                        )));
                    }
                    checked += 1;
                }
                if !answer {
                    unstable.push(c);
                }
            }
            Ok((decided, checked, unstable))
        })
        .collect::<Result<_>>()?;
    let mut report = SweepReport {
        k,
        max_per_class,
        values,
        topology: kind,
        instances: instances as u64,
        decided: 0,
        cross_checked: 0,
        unstable: Vec::new(),
    };
    for (d, c, u) in results {
        report.decided += d;
        report.cross_checked += c;
        report.unstable.extend(u);
    }
    Ok(report)
}
