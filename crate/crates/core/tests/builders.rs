use seating::constructions::{
    fewest_same_class_neighbors, same_class_neighbors, three_class_two_valued_cycle_stable,
    two_class_stable, Route,
};
use seating::judge::{self, fast};
use seating::profile::expand_classes;
use seating::{ClassStructure, Topology};

#[test]
fn two_class_builder_over_the_sign_grid() {
    let values = [-2i64, -1, 0, 1, 2];
    let mut fallbacks = 0;
    let mut total = 0;
    for code in 0..values.len().pow(4) {
        let mut x = code;
        let mut m = vec![vec![0; 2]; 2];
        for cell in m.iter_mut().flatten() {
            *cell = values[x % values.len()];
            x /= values.len();
        }
        for s0 in 1..=5 {
            for s1 in 1..=(8 - s0).min(5) {
                let c = ClassStructure::new(vec![s0, s1], m.clone()).unwrap();
                for t in [Topology::path(s0 + s1).ok(), Topology::cycle(s0 + s1).ok()]
                    .into_iter()
                    .flatten()
                {
                    let b = two_class_stable(&c, &t).unwrap();
                    assert!(judge::is_stable(&expand_classes(&c), &t, &b.arrangement));
                    total += 1;
                    fallbacks += usize::from(b.route == Route::Fallback);
                }
            }
        }
    }
    assert_eq!(
        fallbacks, 0,
        "{fallbacks} of {total} needed the class search"
    );
}

#[test]
fn three_class_builder_over_all_binary_matrices() {
    let mut fallbacks = 0;
    for mask in 0u32..512 {
        let m: Vec<Vec<i64>> = (0..3)
            .map(|a| (0..3).map(|b| i64::from(mask >> (3 * a + b) & 1)).collect())
            .collect();
        for r in 1..=6 {
            for g in 1..=6 {
                for b in 1..=6 {
                    if r + g + b > 10 {
                        continue;
                    }
                    let c = ClassStructure::new(vec![r, g, b], m.clone()).unwrap();
                    let built = three_class_two_valued_cycle_stable(&c).unwrap();
                    let t = Topology::cycle(c.n()).unwrap();
                    assert!(judge::is_stable(
                        &expand_classes(&c),
                        &t,
                        &built.arrangement
                    ));
                    if built.route == Route::Fallback {
                        fallbacks += 1;
                        assert!(no_stable_with_block(&c, &t), "{:?} {:?}", c.sizes(), m);
                    }
                }
            }
        }
    }
    // the block-first shape is impossible in a handful of cases
    assert!(fallbacks <= 12, "{fallbacks}");
}

/// No stable arrangement seats the self-liking class consecutively.
fn no_stable_with_block(c: &ClassStructure, t: &Topology) -> bool {
    let Some(r) = (0..3).find(|&a| c.value(a, a) > 0 && c.sizes()[a] >= 2) else {
        return false;
    };
    let mut rest: Vec<usize> = (0..3)
        .filter(|&x| x != r)
        .flat_map(|x| std::iter::repeat_n(x, c.sizes()[x]))
        .collect();
    loop {
        let seq: Vec<usize> = std::iter::repeat_n(r, c.sizes()[r])
            .chain(rest.iter().copied())
            .collect();
        if fast::first_blocking(c, t, &seq).is_none() {
            return false;
        }
        if !next_permutation(&mut rest) {
            return true;
        }
    }
}

#[test]
fn fewest_same_class_neighbors_is_optimal() {
    for r in 1..=4 {
        for g in 1..=4 {
            for b in 1..=4 {
                let sizes = [r, g, b];
                if r + g + b > 9 {
                    continue;
                }
                let seq = fewest_same_class_neighbors(&sizes);
                assert_eq!(same_class_neighbors(&seq), min_same(&sizes), "{sizes:?}");
            }
        }
    }
}

fn min_same(sizes: &[usize]) -> usize {
    let mut seq: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let mut best = usize::MAX;
    loop {
        best = best.min(same_class_neighbors(&seq));
        if !next_permutation(&mut seq) {
            return best;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
