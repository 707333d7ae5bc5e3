//! Colored set families, their simplification to multiplicity-free form,
//! and the automorphism computation built on cardinality Venn diagrams.

mod tower;
mod venn;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

pub use tower::{
    autom_set, cardinality_partition, index_bound, tower_step, tower_step_from, AutomSetResult,
    CardinalityPartition, StepOutcome, TowerStep, TowerTrace,
};
pub use venn::{venn_diagram, venn_good, VennCellMap};

/// One member of a colored family: a set of ground points carrying a
/// color, repeated `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entry {
    pub set: Vec<usize>,
    pub color: usize,
    pub multiplicity: usize,
}

impl Entry {
    pub fn new(set: Vec<usize>, color: usize, multiplicity: usize) -> Self {
        Self {
            set,
            color,
            multiplicity,
        }
    }
}

/// A family of subsets of `{0, .., ground_size-1}` partitioned into colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredSetFamily {
    pub ground_size: usize,
    pub entries: Vec<Entry>,
}

impl ColoredSetFamily {
    /// Builds and validates a family.
    pub fn new(ground_size: usize, entries: Vec<Entry>) -> Result<Self> {
        let f = Self {
            ground_size,
            entries,
        };
        f.validate()?;
        Ok(f)
    }

    /// Convenience constructor: one color, multiplicity one; sets are sorted.
    pub fn uncolored(ground_size: usize, sets: &[&[usize]]) -> Result<Self> {
        let entries = sets
            .iter()
            .map(|s| {
                let mut v = s.to_vec();
                v.sort_unstable();
                Entry::new(v, 0, 1)
            })
            .collect();
        Self::new(ground_size, entries)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for e in &self.entries {
            if e.set.is_empty() {
                return Err(Error::InvalidFamily("empty member set".into()));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidFamily(format!(
                    "set {:?} has multiplicity zero",
                    e.set
                )));
            }
            if e.set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidFamily(format!(
                    "set {:?} is not strictly increasing",
                    e.set
                )));
            }
            if let Some(&x) = e.set.last() {
                if x >= self.ground_size {
                    return Err(Error::InvalidFamily(format!(
                        "point {x} outside ground set of size {}",
                        self.ground_size
                    )));
                }
            }
            if !seen.insert((e.color, &e.set)) {
                return Err(Error::InvalidFamily(format!(
                    "set {:?} listed twice in color {}",
                    e.set, e.color
                )));
            }
        }
        Ok(())
    }

    pub fn num_colors(&self) -> usize {
        self.entries.iter().map(|e| e.color + 1).max().unwrap_or(0)
    }

    /// Distinct member sets, ignoring color and multiplicity, sorted.
    pub fn distinct_sets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.entries.iter().map(|e| e.set.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Maximum number of pairwise inclusion-incomparable distinct sets.
    pub fn max_antichain(&self) -> usize {
        max_antichain(&self.distinct_sets())
    }
}

/// One point of the multiset domain: a copy of a colored member set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainPoint {
    pub color: usize,
    pub set: Vec<usize>,
    pub copy: usize,
}

/// The points permuted by the automorphism group of a colored family,
/// ordered by (color, cardinality, set, copy).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetDomain {
    pub points: Vec<DomainPoint>,
}

impl MultisetDomain {
    pub fn of(family: &ColoredSetFamily) -> Self {
        let mut entries: Vec<&Entry> = family.entries.iter().collect();
        entries.sort_by(|x, y| (x.color, x.set.len(), &x.set).cmp(&(y.color, y.set.len(), &y.set)));
        let points = entries
            .into_iter()
            .flat_map(|e| {
                (0..e.multiplicity).map(move |copy| DomainPoint {
                    color: e.color,
                    set: e.set.clone(),
                    copy,
                })
            })
            .collect();
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Position of every point, for lookups by value.
    pub fn index(&self) -> HashMap<DomainPoint, usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect()
    }
}

/// A multiplicity-free family: every distinct set appears once, colored by
/// the class of its multiplicity vector over the input colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFamily {
    pub ground_size: usize,
    /// Sorted by (refined color, cardinality, set).
    pub sets: Vec<Vec<usize>>,
    pub refined_color: Vec<usize>,
    /// For each refined color, its multiplicity vector as sorted
    /// `(input color, multiplicity)` pairs.
    pub color_vectors: Vec<Vec<(usize, usize)>>,
}

impl SimpleFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn vector_of(&self, set_index: usize) -> &[(usize, usize)] {
        &self.color_vectors[self.refined_color[set_index]]
    }

    /// The simple family viewed as a one-color-per-class family.
    pub fn to_colored(&self) -> ColoredSetFamily {
        ColoredSetFamily {
            ground_size: self.ground_size,
            entries: self
                .sets
                .iter()
                .zip(&self.refined_color)
                .map(|(s, &c)| Entry::new(s.clone(), c, 1))
                .collect(),
        }
    }
}

/// Merges repeated sets and recolors by multiplicity vectors.
pub fn simplify(family: &ColoredSetFamily) -> SimpleFamily {
    let mut vectors: BTreeMap<&Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for e in &family.entries {
        vectors
            .entry(&e.set)
            .or_default()
            .push((e.color, e.multiplicity));
    }
    for v in vectors.values_mut() {
        v.sort_unstable();
    }
    let mut classes: Vec<Vec<(usize, usize)>> = vectors.values().cloned().collect();
    classes.sort();
    classes.dedup();
    let class_of: HashMap<&Vec<(usize, usize)>, usize> =
        classes.iter().enumerate().map(|(i, v)| (v, i)).collect();

    let mut rows: Vec<(usize, Vec<usize>)> = vectors
        .iter()
        .map(|(set, v)| (class_of[v], (*set).clone()))
        .collect();
    rows.sort_by(|x, y| (x.0, x.1.len(), &x.1).cmp(&(y.0, y.1.len(), &y.1)));
    SimpleFamily {
        ground_size: family.ground_size,
        refined_color: rows.iter().map(|r| r.0).collect(),
        sets: rows.into_iter().map(|r| r.1).collect(),
        color_vectors: classes,
    }
}

/// Lifts a group acting on the sets of `simple` to the multiset domain of
/// `family`: copy `c` of a set goes to copy `c` of its image, and the copies
/// of each repeated colored set are permuted freely.
pub fn expand_solution(
    family: &ColoredSetFamily,
    simple: &SimpleFamily,
    simple_group: &PermGroup,
    domain: &MultisetDomain,
) -> Result<PermGroup> {
    let set_index: HashMap<&Vec<usize>, usize> = simple
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    // first domain point of each (color, simple set)
    let mut first: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, p) in domain.points.iter().enumerate() {
        if p.copy == 0 {
            first.insert((p.color, set_index[&p.set]), i);
        }
    }
    let n = domain.len();
    let mut gens = Vec::new();
    for g in simple_group.generators() {
        let mut images = vec![0u32; n];
        for (i, p) in domain.points.iter().enumerate() {
            let target = g.apply(set_index[&p.set]);
            let base = *first.get(&(p.color, target)).ok_or_else(|| {
                Error::InvalidFamily("generator does not respect multiplicity vectors".into())
            })?;
            images[i] = (base + p.copy) as u32;
        }
        let p = Permutation::from_images(images)?;
        if !p.is_identity() {
            gens.push(p);
        }
    }
    let mut parts = Vec::new();
    for e in &family.entries {
        if e.multiplicity >= 2 {
            let base = first[&(e.color, set_index[&e.set])];
            parts.push((base..base + e.multiplicity).collect::<Vec<_>>());
        }
    }
    gens.extend(
        PermGroup::symmetric_product(&parts, n)?
            .generators()
            .iter()
            .cloned(),
    );
    PermGroup::new(n, gens)
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Width of the inclusion order on sorted sets (duplicates count once), as
/// the number of distinct sets minus a maximum matching in the
/// strict-inclusion bipartite graph (a minimum chain cover).
pub fn max_antichain(sets: &[Vec<usize>]) -> usize {
    let mut sets = sets.to_vec();
    sets.sort();
    sets.dedup();
    let n = sets.len();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| is_strict_subset(&sets[i], &sets[j]))
                .collect()
        })
        .collect();
    let mut matched_to: Vec<Option<usize>> = vec![None; n];

    fn augment(
        u: usize,
        succ: &[Vec<usize>],
        visited: &mut [bool],
        matched_to: &mut [Option<usize>],
    ) -> bool {
        for &v in &succ[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if matched_to[v].is_none_or(|w| augment(w, succ, visited, matched_to)) {
                matched_to[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut matching = 0;
    for u in 0..n {
        let mut visited = vec![false; n];
        if augment(u, &succ, &mut visited, &mut matched_to) {
            matching += 1;
        }
    }
    n - matching
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ColoredSetFamily::new(3, vec![Entry::new(vec![], 0, 1)]).is_err());
        assert!(ColoredSetFamily::new(3, vec![Entry::new(vec![1, 0], 0, 1)]).is_err());
        assert!(ColoredSetFamily::new(3, vec![Entry::new(vec![3], 0, 1)]).is_err());
        assert!(ColoredSetFamily::new(3, vec![Entry::new(vec![1], 0, 0)]).is_err());
        let dup = vec![Entry::new(vec![1], 0, 1), Entry::new(vec![1], 0, 2)];
        assert!(ColoredSetFamily::new(3, dup).is_err());
        let ok = vec![Entry::new(vec![1], 0, 1), Entry::new(vec![1], 1, 2)];
        assert!(ColoredSetFamily::new(3, ok).is_ok());
    }

    #[test]
    fn simplify_already_simple() {
        let f = ColoredSetFamily::uncolored(4, &[&[0, 1], &[2, 3], &[1, 2]]).unwrap();
        let s = simplify(&f);
        assert_eq!(s.sets, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(s.refined_color, vec![0, 0, 0]);
        assert_eq!(s.color_vectors, vec![vec![(0, 1)]]);
    }

    #[test]
    fn simplify_splits_by_multiplicity() {
        let f = ColoredSetFamily::new(
            4,
            vec![Entry::new(vec![0, 1], 0, 2), Entry::new(vec![2, 3], 0, 1)],
        )
        .unwrap();
        let s = simplify(&f);
        assert_eq!(s.color_vectors, vec![vec![(0, 1)], vec![(0, 2)]]);
        assert_eq!(s.sets, vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(s.refined_color, vec![0, 1]);
    }

    #[test]
    fn simplify_merges_across_colors() {
        let f = ColoredSetFamily::new(
            2,
            vec![Entry::new(vec![0, 1], 1, 1), Entry::new(vec![0, 1], 2, 1)],
        )
        .unwrap();
        let s = simplify(&f);
        assert_eq!(s.sets, vec![vec![0, 1]]);
        assert_eq!(s.color_vectors, vec![vec![(1, 1), (2, 1)]]);
    }

    #[test]
    fn domain_order() {
        let f = ColoredSetFamily::new(
            4,
            vec![
                Entry::new(vec![0, 1, 2], 0, 1),
                Entry::new(vec![3], 1, 1),
                Entry::new(vec![2, 3], 0, 2),
            ],
        )
        .unwrap();
        let d = MultisetDomain::of(&f);
        let keys: Vec<_> = d
            .points
            .iter()
            .map(|p| (p.color, p.set.clone(), p.copy))
            .collect();
        assert_eq!(
            keys,
            vec![
                (0, vec![2, 3], 0),
                (0, vec![2, 3], 1),
                (0, vec![0, 1, 2], 0),
                (1, vec![3], 0)
            ]
        );
    }

    #[test]
    fn expand_examples() {
        let f = ColoredSetFamily::uncolored(4, &[&[0, 1], &[2, 3]]).unwrap();
        let s = simplify(&f);
        let d = MultisetDomain::of(&f);
        let swap = PermGroup::new(2, vec![Permutation::transposition(2, 0, 1)]).unwrap();
        assert_eq!(
            expand_solution(&f, &s, &swap, &d).unwrap().order(),
            2u32.into()
        );

        let f = ColoredSetFamily::new(2, vec![Entry::new(vec![0, 1], 0, 3)]).unwrap();
        let s = simplify(&f);
        let d = MultisetDomain::of(&f);
        let g = expand_solution(&f, &s, &PermGroup::trivial(1), &d).unwrap();
        assert_eq!(g.order(), 6u32.into());

        let f = ColoredSetFamily::new(
            4,
            vec![Entry::new(vec![0, 1], 0, 2), Entry::new(vec![2, 3], 0, 2)],
        )
        .unwrap();
        let s = simplify(&f);
        let d = MultisetDomain::of(&f);
        let g = expand_solution(&f, &s, &swap, &d).unwrap();
        assert_eq!(g.order(), 8u32.into());
    }

    #[test]
    fn antichain_width() {
        let chain = vec![vec![0], vec![0, 1], vec![0, 1, 2]];
        assert_eq!(max_antichain(&chain), 1);
        let disjoint = vec![vec![0], vec![1], vec![2], vec![3]];
        assert_eq!(max_antichain(&disjoint), 4);
        // two chains {0}<{0,1}<{0,1,2}, {3}<{2,3} plus {1}
        let mixed = vec![
            vec![0],
            vec![0, 1],
            vec![0, 1, 2],
            vec![3],
            vec![2, 3],
            vec![1],
        ];
        assert_eq!(max_antichain(&mixed), 3);
        assert_eq!(max_antichain(&[]), 0);
    }
}
