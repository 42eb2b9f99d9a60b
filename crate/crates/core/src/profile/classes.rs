use serde::{Deserialize, Serialize};

use super::{affine_normalize, PreferenceProfile};
use crate::error::{Error, Result};

/// Compressed form of a profile whose agents fall into `k` classes of
/// indistinguishable agents.
///
/// `matrix[a][b]` is the preference of any class-`a` agent for any class-`b`
/// agent; the diagonal entry is the within-class preference (meaningless for
/// a class of size one).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassStructure {
    sizes: Vec<usize>,
    matrix: Vec<Vec<i64>>,
}

impl ClassStructure {
    pub fn new(sizes: Vec<usize>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let k = sizes.len();
        if k == 0 {
            return Err(Error::InvalidClasses(
                "at least one class is required".into(),
            ));
        }
        if let Some(c) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidClasses(format!("class {c} is empty")));
        }
        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidClasses(format!(
                "class matrix must be {k}x{k}"
            )));
        }
        Ok(Self { sizes, matrix })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    #[inline]
    pub fn value(&self, from: usize, to: usize) -> i64 {
        self.matrix[from][to]
    }

    /// Class label of every agent of the expanded profile; class 0 agents
    /// come first, then class 1, and so on.
    pub fn class_of_agents(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect()
    }

    /// Agents of each class, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut next = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let m = (next..next + s).collect();
                next += s;
                m
            })
            .collect()
    }

    /// Sorted distinct values that occur between actual agents (the diagonal
    /// only counts for classes with two or more members).
    pub fn realized_values(&self) -> Vec<i64> {
        let mut vals = Vec::new();
        for a in 0..self.k() {
            for b in 0..self.k() {
                if a != b || self.sizes[a] >= 2 {
                    vals.push(self.matrix[a][b]);
                }
            }
        }
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// Per-row positive affine normalization (see
    /// [`PreferenceProfile::normalize_for_cycle`]). Diagonal entries of
    /// singleton classes are set to 0.
    pub fn normalize_for_cycle(&self) -> Self {
        let k = self.k();
        let mut matrix = vec![vec![0; k]; k];
        for a in 0..k {
            let cols: Vec<usize> = (0..k).filter(|&b| a != b || self.sizes[a] >= 2).collect();
            let entries: Vec<i64> = cols.iter().map(|&b| self.matrix[a][b]).collect();
            for (&b, v) in cols.iter().zip(affine_normalize(&entries)) {
                matrix[a][b] = v;
            }
        }
        Self {
            sizes: self.sizes.clone(),
            matrix,
        }
    }

    /// Applies a class relabeling: new class `c` is old class `order[c]`.
    pub fn relabel(&self, order: &[usize]) -> Self {
        let k = self.k();
        Self {
            sizes: order.iter().map(|&c| self.sizes[c]).collect(),
            matrix: (0..k)
                .map(|a| (0..k).map(|b| self.matrix[order[a]][order[b]]).collect())
                .collect(),
        }
    }
}

/// Expands a class structure into an agent-level profile. Agents are grouped
/// by class in class order.
pub fn expand_classes(c: &ClassStructure) -> PreferenceProfile {
    let class_of = c.class_of_agents();
    PreferenceProfile::from_fn(class_of.len(), |i, j| c.value(class_of[i], class_of[j]))
}

/// The coarsest partition of a profile's agents into classes, along with the
/// agent-to-class map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub structure: ClassStructure,
    /// `class_of[agent]` is the agent's class.
    pub class_of: Vec<usize>,
    /// Members of each class, ascending.
    pub members: Vec<Vec<usize>>,
}

/// Two agents are indistinguishable when their rows agree off the pair,
/// their columns agree off the pair, and their mutual preferences coincide.
fn indistinguishable(p: &PreferenceProfile, i: usize, j: usize) -> bool {
    if p.get(i, j) != p.get(j, i) {
        return false;
    }
    (0..p.n())
        .filter(|&l| l != i && l != j)
        .all(|l| p.get(i, l) == p.get(j, l) && p.get(l, i) == p.get(l, j))
}

/// Computes the coarsest class partition. Classes are numbered by their
/// smallest member.
pub fn detect_classes(p: &PreferenceProfile) -> ClassPartition {
    let n = p.n();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    // indistinguishability is an equivalence relation, so comparing with one
    // representative per class suffices
    for i in 0..n {
        match reps.iter().position(|&r| indistinguishable(p, r, i)) {
            Some(c) => {
                class_of[i] = c;
                members[c].push(i);
            }
            None => {
                class_of[i] = reps.len();
                reps.push(i);
                members.push(vec![i]);
            }
        }
    }
    let k = reps.len();
    let matrix = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    if a != b {
                        p.get(reps[a], reps[b])
                    } else if members[a].len() >= 2 {
                        p.get(members[a][0], members[a][1])
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let sizes = members.iter().map(Vec::len).collect();
    ClassPartition {
        structure: ClassStructure { sizes, matrix },
        class_of,
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_is_one_class() {
        let part = detect_classes(&PreferenceProfile::zeros(5));
        assert_eq!(part.structure.k(), 1);
        assert_eq!(part.structure.sizes(), &[5]);
    }

    #[test]
    fn expand_single_class() {
        let c = ClassStructure::new(vec![3], vec![vec![7]]).unwrap();
        let p = expand_classes(&c);
        assert_eq!(p.rows(), vec![vec![0, 7, 7], vec![7, 0, 7], vec![7, 7, 0]]);
    }

    #[test]
    fn expand_two_singletons() {
        let c = ClassStructure::new(vec![1, 1], vec![vec![9, 2], vec![-1, 9]]).unwrap();
        let p = expand_classes(&c);
        assert_eq!(p.rows(), vec![vec![0, 2], vec![-1, 0]]);
    }

    #[test]
    fn asymmetric_pair_is_split() {
        // identical everywhere else, but 0 and 1 disagree about each other
        let p = PreferenceProfile::from_rows(&[[0, 1, 5], [0, 0, 5], [2, 2, 0]]).unwrap();
        assert_eq!(detect_classes(&p).structure.k(), 3);
    }

    #[test]
    fn invalid_structures() {
        assert!(ClassStructure::new(vec![], vec![]).is_err());
        assert!(ClassStructure::new(vec![1, 0], vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(ClassStructure::new(vec![1, 1], vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn realized_values_skip_singleton_diagonal() {
        let c = ClassStructure::new(vec![1, 2], vec![vec![5, 1], vec![0, 1]]).unwrap();
        assert_eq!(c.realized_values(), vec![0, 1]);
    }
}
