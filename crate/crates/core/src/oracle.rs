//! Brute-force ground truth and random instance generation.
//!
//! Everything here works by exhaustive enumeration over all permutations of
//! the ground set (or vertex set) and shares nothing with the fast pipeline
//! beyond the plain data types.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::interval::Graph;
use crate::marked::MarkedInstance;
use crate::par;
use crate::perm::Permutation;
use crate::setfamily::{ColoredSetFamily, Entry, MultisetDomain};

/// Limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_ground: usize,
    pub max_permutations: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_ground: 8,
            max_permutations: 40_320,
        }
    }
}

impl OracleBudget {
    fn check(&self, n: usize) -> Result<u64> {
        let total = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
        match total {
            Some(t) if n <= self.max_ground && t <= self.max_permutations => Ok(t),
            _ => Err(Error::BudgetExceeded(format!(
                "{n}! permutations exceed the budget ({} points, {} permutations)",
                self.max_ground, self.max_permutations
            ))),
        }
    }
}

/// A group found by enumeration, with its element count obtained by
/// counting rather than from the stabilizer chain.
#[derive(Clone, Debug)]
pub struct OracleGroup {
    pub group: PermGroup,
    pub order: BigUint,
}

/// The `index`-th permutation of `0..n` in lexicographic order.
pub fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut fact = vec![1u64; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as u64;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let q = (index / fact[k]) as usize;
        index %= fact[k];
        out.push(pool.remove(q));
    }
    out
}

fn image_of(sigma: &[usize], set: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&x| sigma[x]).collect();
    v.sort_unstable();
    v
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

/// Induced actions of all admissible ground permutations on the multiset
/// domain of `family`; `admissible` filters ground permutations first.
fn induced_group<F>(
    family: &ColoredSetFamily,
    budget: &OracleBudget,
    admissible: F,
) -> Result<OracleGroup>
where
    F: Fn(&[usize]) -> bool + Sync + Send,
{
    let n = family.ground_size;
    let total = budget.check(n)?;
    let domain = MultisetDomain::of(family);
    let index = domain.index();
    let mult: HashMap<(usize, Vec<usize>), usize> = family
        .entries
        .iter()
        .map(|e| ((e.color, e.set.clone()), e.multiplicity))
        .collect();

    let actions: Vec<Option<Vec<u32>>> = par::map_range(total as usize, |i| {
        let sigma = nth_permutation(n, i as u64);
        if !admissible(&sigma) {
            return None;
        }
        let mut images = Vec::with_capacity(domain.len());
        for p in &domain.points {
            let img = image_of(&sigma, &p.set);
            if mult.get(&(p.color, img.clone())) != mult.get(&(p.color, p.set.clone())) {
                return None;
            }
            let q = crate::setfamily::DomainPoint {
                color: p.color,
                set: img,
                copy: p.copy,
            };
            images.push(index[&q] as u32);
        }
        Some(images)
    });
    let distinct: BTreeSet<Vec<u32>> = actions.into_iter().flatten().collect();

    let mut order = BigUint::from(distinct.len());
    let mut gens: Vec<Permutation> = distinct
        .into_iter()
        .map(|v| Permutation::from_images(v).expect("induced action is a bijection"))
        .filter(|p| !p.is_identity())
        .collect();
    for e in &family.entries {
        order *= factorial(e.multiplicity);
        if e.multiplicity >= 2 {
            let first = index[&crate::setfamily::DomainPoint {
                color: e.color,
                set: e.set.clone(),
                copy: 0,
            }];
            let copies: Vec<usize> = (first..first + e.multiplicity).collect();
            gens.push(Permutation::transposition(
                domain.len(),
                copies[0],
                copies[1],
            ));
            gens.push(Permutation::cycle(domain.len(), &copies));
        }
    }
    Ok(OracleGroup {
        group: PermGroup::new(domain.len(), gens)?,
        order,
    })
}

/// All permutations of the member sets (with copies) induced by ground
/// permutations that preserve colors and multiplicities.
pub fn brute_autom_set(family: &ColoredSetFamily, budget: &OracleBudget) -> Result<OracleGroup> {
    family.validate()?;
    induced_group(family, budget, |_| true)
}

/// Every vertex bijection that maps edges to edges.
pub fn brute_graph_autom(g: &Graph, budget: &OracleBudget) -> Result<OracleGroup> {
    let n = g.n();
    let total = budget.check(n)?;
    let edges = g.edges();
    let autos: Vec<Option<Permutation>> = par::map_range(total as usize, |i| {
        let sigma = nth_permutation(n, i as u64);
        edges
            .iter()
            .all(|&(u, v)| g.has_edge(sigma[u], sigma[v]))
            .then(|| Permutation::from_usize_images(&sigma).unwrap())
    });
    let autos: Vec<Permutation> = autos.into_iter().flatten().collect();
    let order = BigUint::from(autos.len());
    Ok(OracleGroup {
        group: PermGroup::new(n, autos)?,
        order,
    })
}

/// Action on the marked sets (with copies) of the graph automorphisms that
/// preserve every colored marked set with its multiplicity.
pub fn brute_autom_marked(marked: &MarkedInstance, budget: &OracleBudget) -> Result<OracleGroup> {
    let g = &marked.graph;
    let edges = g.edges();
    induced_group(&marked.sets, budget, |sigma| {
        edges.iter().all(|&(u, v)| g.has_edge(sigma[u], sigma[v]))
    })
}

/// Exact maximum antichain by exhaustive branching over the distinct sets.
pub fn max_antichain(sets: &[Vec<usize>]) -> Result<usize> {
    let mut distinct: Vec<Vec<usize>> = sets.to_vec();
    distinct.sort();
    distinct.dedup();
    let m = distinct.len();
    if m > 128 {
        return Err(Error::BudgetExceeded(format!("{m} sets exceed 128")));
    }
    let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|x| b.contains(x));
    let mut incomparable = vec![0u128; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && !subset(&distinct[i], &distinct[j]) && !subset(&distinct[j], &distinct[i])
            {
                incomparable[i] |= 1 << j;
            }
        }
    }
    fn grow(cands: u128, size: usize, best: &mut usize, inc: &[u128]) {
        if cands == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cands.count_ones() as usize <= *best {
            return;
        }
        let i = cands.trailing_zeros() as usize;
        grow(cands & inc[i], size + 1, best, inc);
        grow(cands & !(1 << i), size, best, inc);
    }
    let all = if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    };
    let mut best = 0;
    grow(all, 0, &mut best, &incomparable);
    Ok(best)
}

/// Parameters for random set families.
#[derive(Clone, Copy, Debug)]
pub struct FamilyShape {
    pub max_ground: usize,
    pub max_sets: usize,
    pub max_colors: usize,
    pub max_multiplicity: usize,
}

impl Default for FamilyShape {
    fn default() -> Self {
        Self {
            max_ground: 7,
            max_sets: 10,
            max_colors: 3,
            max_multiplicity: 3,
        }
    }
}

/// A random colored family; the same seed always gives the same family.
pub fn gen_set_family(seed: u64, shape: &FamilyShape) -> ColoredSetFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=shape.max_ground);
    let count = rng.random_range(1..=shape.max_sets);
    let colors = rng.random_range(1..=shape.max_colors);
    let mut entries: Vec<Entry> = Vec::new();
    for _ in 0..count {
        let size = rng.random_range(1..=n);
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(&mut rng);
        let mut set = pts[..size].to_vec();
        set.sort_unstable();
        let color = rng.random_range(0..colors);
        let multiplicity = rng.random_range(1..=shape.max_multiplicity);
        if !entries.iter().any(|e| e.color == color && e.set == set) {
            entries.push(Entry::new(set, color, multiplicity));
        }
    }
    ColoredSetFamily::new(n, entries).expect("generated family is valid")
}

/// Random intervals with small integer endpoints.
pub fn gen_intervals(rng: &mut impl Rng, n: usize) -> Vec<(f64, f64)> {
    let span = (2 * n).max(2) as i64;
    (0..n)
        .map(|_| {
            let a = rng.random_range(0..span);
            let len = rng.random_range(0..=span / 2);
            (a as f64, (a + len) as f64)
        })
        .collect()
}

/// A random interval graph on `n` vertices.
pub fn gen_interval_graph(seed: u64, n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Graph::from_intervals(&gen_intervals(&mut rng, n))
}

/// A uniformly random relabeling of `0..n`.
pub fn gen_relabeling(seed: u64, n: usize) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng);
    Permutation::from_usize_images(&v).unwrap()
}

/// Maximal cliques of an interval model: the sets of intervals through
/// each endpoint, keeping the inclusion-maximal ones.
fn model_cliques(intervals: &[(f64, f64)]) -> Vec<Vec<usize>> {
    let mut cliques: Vec<Vec<usize>> = intervals
        .iter()
        .map(|&(x, _)| {
            (0..intervals.len())
                .filter(|&i| intervals[i].0 <= x && x <= intervals[i].1)
                .collect()
        })
        .collect();
    cliques.sort();
    cliques.dedup();
    let all = cliques.clone();
    cliques.retain(|c| {
        !all.iter()
            .any(|d| d.len() > c.len() && c.iter().all(|x| d.contains(x)))
    });
    cliques
}

/// A random interval graph with marked sets drawn as random nonempty
/// subsets of random maximal cliques.
pub fn gen_interval_instance(
    seed: u64,
    n: usize,
    set_count: usize,
    color_count: usize,
) -> MarkedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = gen_intervals(&mut rng, n.max(1));
    let graph = Graph::from_intervals(&intervals);
    let cliques = model_cliques(&intervals);
    let mut entries: Vec<Entry> = Vec::new();
    for _ in 0..set_count {
        let clique = &cliques[rng.random_range(0..cliques.len())];
        let size = rng.random_range(1..=clique.len());
        let mut pts = clique.clone();
        pts.shuffle(&mut rng);
        let mut set = pts[..size].to_vec();
        set.sort_unstable();
        let color = rng.random_range(0..color_count.max(1));
        let multiplicity = if rng.random_bool(0.2) { 2 } else { 1 };
        if !entries.iter().any(|e| e.color == color && e.set == set) {
            entries.push(Entry::new(set, color, multiplicity));
        }
    }
    MarkedInstance::new(graph, entries).expect("generated instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_unranking() {
        let all: Vec<Vec<usize>> = (0..6).map(|i| nth_permutation(3, i)).collect();
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 2, 1]);
        assert_eq!(all[5], vec![2, 1, 0]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::path(9);
        assert!(matches!(
            brute_graph_autom(&g, &OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn graph_examples() {
        let b = OracleBudget::default();
        assert_eq!(
            brute_graph_autom(&Graph::complete(3), &b).unwrap().order,
            6u32.into()
        );
        assert_eq!(
            brute_graph_autom(&Graph::path(3), &b).unwrap().order,
            2u32.into()
        );
        assert_eq!(
            brute_graph_autom(&Graph::new(1, &[]).unwrap(), &b)
                .unwrap()
                .order,
            1u32.into()
        );
    }

    #[test]
    fn set_examples() {
        let b = OracleBudget::default();
        let one = ColoredSetFamily::uncolored(3, &[&[0, 1]]).unwrap();
        assert_eq!(brute_autom_set(&one, &b).unwrap().order, 1u32.into());
        let path = ColoredSetFamily::uncolored(4, &[&[0, 1], &[2, 3], &[1, 2]]).unwrap();
        assert_eq!(brute_autom_set(&path, &b).unwrap().order, 2u32.into());
        let pairs = ColoredSetFamily::uncolored(6, &[&[0, 1], &[2, 3], &[4, 5]]).unwrap();
        let r = brute_autom_set(&pairs, &b).unwrap();
        assert_eq!(r.order, 6u32.into());
        assert_eq!(r.group.order(), r.order);
    }

    #[test]
    fn marked_examples() {
        let b = OracleBudget::default();
        let k3 = MarkedInstance::new(
            Graph::complete(3),
            vec![
                Entry::new(vec![0], 0, 1),
                Entry::new(vec![1], 0, 1),
                Entry::new(vec![2], 0, 1),
            ],
        )
        .unwrap();
        assert_eq!(brute_autom_marked(&k3, &b).unwrap().order, 6u32.into());
        let ends = |c: usize| {
            MarkedInstance::new(
                Graph::path(3),
                vec![Entry::new(vec![0], 0, 1), Entry::new(vec![2], c, 1)],
            )
            .unwrap()
        };
        assert_eq!(brute_autom_marked(&ends(0), &b).unwrap().order, 2u32.into());
        assert_eq!(brute_autom_marked(&ends(1), &b).unwrap().order, 1u32.into());
    }

    #[test]
    fn antichain_examples() {
        let chain = vec![vec![0], vec![0, 1], vec![0, 1, 2]];
        assert_eq!(max_antichain(&chain).unwrap(), 1);
        let disjoint: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        assert_eq!(max_antichain(&disjoint).unwrap(), 5);
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        let shape = FamilyShape::default();
        assert_eq!(gen_set_family(7, &shape), gen_set_family(7, &shape));
        let a = gen_interval_instance(11, 6, 4, 2);
        let b = gen_interval_instance(11, 6, 4, 2);
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.sets, b.sets);
        let single = gen_interval_instance(3, 1, 2, 1);
        assert_eq!(single.graph.n(), 1);
        for seed in 0..100 {
            let inst = gen_interval_instance(seed, 8, 6, 3);
            assert!(inst.validate().is_ok());
            for e in &inst.sets.entries {
                assert!(inst.graph.is_clique(&e.set));
            }
        }
    }

    #[test]
    fn oracle_groups_are_closed() {
        let b = OracleBudget::default();
        let shape = FamilyShape::default();
        for seed in 0..20 {
            let f = gen_set_family(seed, &shape);
            let r = brute_autom_set(&f, &b).unwrap();
            // the enumerated actions form a group iff their count equals
            // the order of the group they generate
            assert_eq!(r.group.order(), r.order, "seed {seed}");
        }
    }
}
