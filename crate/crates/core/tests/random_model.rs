use num_traits::ToPrimitive;
use proptest::prelude::*;

use seating::judge;
use seating::profile::canonical_profile;
use seating::randomized::{
    blocking_probability, estimate_expected_stable, lll_applies, lll_bound, lll_constant,
    sample_profile, sample_with, stream, GnpSpec, Probability,
};
use seating::search::{self, Mode};
use seating::{Arrangement, PreferenceProfile, Topology};

fn approvals(p: &PreferenceProfile) -> usize {
    p.rows().iter().flatten().filter(|&&v| v == 1).count()
}

#[test]
fn edge_frequency_within_four_sigma() {
    let p = Probability::new(3, 10).unwrap();
    let n = 40;
    let profile = sample_profile(&GnpSpec { n, p, seed: 11 });
    let cells = (n * (n - 1)) as f64;
    let mean = cells * 0.3;
    let sigma = (cells * 0.3 * 0.7).sqrt();
    let got = approvals(&profile) as f64;
    assert!(
        (got - mean).abs() <= 4.0 * sigma,
        "{got} approvals, expected {mean} ± {sigma}"
    );
}

#[test]
fn same_seed_same_profile() {
    let spec = GnpSpec {
        n: 9,
        p: Probability::new(1, 2).unwrap(),
        seed: 3,
    };
    assert_eq!(sample_profile(&spec), sample_profile(&spec));
}

#[test]
fn blocking_frequency_matches_formula() {
    let p = Probability::new(3, 10).unwrap();
    let n = 8;
    let t = Topology::cycle(n).unwrap();
    let a = Arrangement::identity(n);
    let trials = 20_000u64;
    for (j, near) in [(1, true), (3, false)] {
        let hits = (0..trials)
            .filter(|&i| {
                let prof = sample_with(n, p, &mut stream(5, i));
                judge::envies(&prof, &t, &a, 0, j) && judge::envies(&prof, &t, &a, j, 0)
            })
            .count() as f64;
        let q = blocking_probability(p, near).to_f64().unwrap();
        let sigma = (trials as f64 * q * (1.0 - q)).sqrt();
        assert!(
            (hits - trials as f64 * q).abs() <= 4.0 * sigma,
            "distance {j}: {hits} hits, expected {}",
            trials as f64 * q
        );
    }
}

#[test]
fn certain_approval_makes_every_arrangement_stable() {
    let est = estimate_expected_stable(6, Probability::ONE, 5, 0).unwrap();
    assert_eq!(est.mean, 60.0);
    assert_eq!(est.std_error, 0.0);
    let est = estimate_expected_stable(6, Probability::ZERO, 5, 0).unwrap();
    assert_eq!(est.mean, 60.0);
}

#[test]
fn bound_needs_extreme_probability() {
    let c = lll_constant();
    assert!((c - 0.0619).abs() < 1e-3);
    assert!(!lll_applies(7, Probability::new(1, 2).unwrap()));
    assert!(lll_bound(7, Probability::new(1, 2).unwrap()).is_none());
    let low = Probability::floor_of(0.5 * c / 7f64.sqrt(), 1_000_000).unwrap();
    assert!(lll_applies(7, low));
    assert!(
        blocking_probability(low, true)
            < blocking_probability(Probability::new(1, 2).unwrap(), true)
    );
}

#[test]
fn probability_parsing() {
    assert_eq!(
        "3/10".parse::<Probability>().unwrap(),
        Probability::new(3, 10).unwrap()
    );
    assert_eq!(
        "0.25".parse::<Probability>().unwrap(),
        Probability::new(1, 4).unwrap()
    );
    assert!("5/4".parse::<Probability>().is_err());
}

#[test]
fn estimate_too_large_is_rejected() {
    assert!(estimate_expected_stable(12, Probability::ONE, 1, 0).is_err());
}

#[test]
fn two_valued_cycle_scans_match_binary() {
    for n in 3..=5 {
        let t = Topology::cycle(n).unwrap();
        let binary = search::exhaust(n, &[0, 1], &t, Mode::Full).unwrap();
        let norm = |fs: &[PreferenceProfile]| {
            let mut v: Vec<PreferenceProfile> = fs
                .iter()
                .map(|f| canonical_profile(&f.normalize_for_cycle()).unwrap())
                .collect();
            v.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
            v.dedup();
            v
        };
        for values in [[1, 3], [-2, 5]] {
            let other = search::exhaust(n, &values, &t, Mode::Full).unwrap();
            assert_eq!(other.unstable, binary.unstable, "n={n}, {values:?}");
            assert_eq!(
                norm(&other.families),
                norm(&binary.families),
                "n={n}, {values:?}"
            );
        }
    }
}

#[test]
fn shards_partition_the_space() {
    let t = Topology::cycle(4).unwrap();
    let full = search::exhaust(4, &[0, 1], &t, Mode::Full).unwrap();
    let parts: Vec<_> = (0..3)
        .map(|index| search::exhaust(4, &[0, 1], &t, Mode::Sharded { index, count: 3 }).unwrap())
        .collect();
    let merged = search::SearchReport::merge(&parts).unwrap();
    assert_eq!(merged.scanned, full.scanned);
    assert_eq!(merged.families, full.families);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_a_fixed_point(n in 2usize..=6, cells in proptest::collection::vec(-2i64..=2, 36)) {
        let p = PreferenceProfile::from_fn(n, |i, j| if i == j { 0 } else { cells[i * 6 + j] });
        let c = canonical_profile(&p).unwrap();
        prop_assert_eq!(canonical_profile(&c).unwrap(), c.clone());
        prop_assert!(c.as_slice() <= p.as_slice());
    }
}
