use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::par;

use super::venn::{venn_diagram, VennCellMap};
use super::{expand_solution, simplify, ColoredSetFamily, MultisetDomain, SimpleFamily};

/// Groups of simple-family indices sharing refined color and cardinality,
/// in increasing (color, cardinality) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CardinalityPartition {
    pub parts: Vec<Vec<usize>>,
}

impl CardinalityPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_part(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn cardinality_partition(family: &SimpleFamily) -> CardinalityPartition {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut last_key = None;
    // sets are already sorted by (refined color, cardinality, set)
    for (i, set) in family.sets.iter().enumerate() {
        let key = (family.refined_color[i], set.len());
        if last_key != Some(key) {
            parts.push(Vec::new());
            last_key = Some(key);
        }
        parts.last_mut().unwrap().push(i);
    }
    CardinalityPartition { parts }
}

/// `(a!)^a`, saturating at `u128::MAX`.
pub fn index_bound(a: usize) -> u128 {
    let mut fact: u128 = 1;
    for i in 2..=a as u128 {
        fact = fact.saturating_mul(i);
    }
    let mut bound: u128 = 1;
    for _ in 0..a {
        bound = bound.saturating_mul(fact);
    }
    bound
}

#[derive(Clone, Debug)]
pub enum StepOutcome {
    /// The whole family is Venn-good with every generator.
    AllGood,
    /// `parts` (indices into the partition) form a subfamily that some
    /// generator breaks; `group` is the stabilizer of its Venn diagram.
    Refined { parts: Vec<usize>, group: PermGroup },
}

fn union_of(w: &CardinalityPartition, chosen: &[usize], prefix: usize) -> Vec<usize> {
    let mut members: Vec<usize> = w.parts[..prefix].iter().flatten().copied().collect();
    for &j in chosen {
        members.extend_from_slice(&w.parts[j]);
    }
    members
}

fn breaks_some_generator(map: &VennCellMap, gamma: &PermGroup) -> bool {
    par::any(gamma.generators(), |g| !map.is_good_unchecked(g))
}

/// Smallest `q` in `lo+1..=k` with `breaks(q)`, for a predicate that stays
/// true once it holds (a subfamily of a Venn-good family is Venn-good) and
/// is known to be false at `lo`. Probes `lo+1, lo+2, lo+4, ..` and then
/// bisects.
fn first_breaking(k: usize, lo: usize, breaks: impl Fn(usize) -> bool) -> Option<usize> {
    let mut lo = lo;
    let mut step = 1;
    let mut hi = lo + step;
    loop {
        if hi >= k {
            if lo >= k || !breaks(k) {
                return None;
            }
            hi = k;
            break;
        }
        if breaks(hi) {
            break;
        }
        lo = hi;
        step *= 2;
        hi = lo + step;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if breaks(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// One refinement step of the tower of groups.
///
/// `gamma_prev` must stabilize every part of `w` set-wise, and every part
/// must have at most `a` sets.
pub fn tower_step(
    family: &SimpleFamily,
    w: &CardinalityPartition,
    gamma_prev: &PermGroup,
    a: usize,
) -> Result<StepOutcome> {
    tower_step_from(family, w, gamma_prev, a, 0).map(|(outcome, _)| outcome)
}

/// [`tower_step`] for a group known to be Venn-good with the union of the
/// first `known_good` parts. Also returns a prefix length with the same
/// property for the resulting group (Venn-goodness with a fixed subfamily
/// is closed under composition, so it passes to subgroups).
pub fn tower_step_from(
    family: &SimpleFamily,
    w: &CardinalityPartition,
    gamma_prev: &PermGroup,
    a: usize,
    known_good: usize,
) -> Result<(StepOutcome, usize)> {
    let k = w.len();
    let a = a.max(1);
    let mut chosen: Vec<usize> = Vec::new();
    let mut good_prefix = known_good.min(k);
    for p in 1..=a {
        let breaks = |q: usize| {
            breaks_some_generator(&venn_diagram(family, &union_of(w, &chosen, q)), gamma_prev)
        };
        let lo = if p == 1 { good_prefix } else { 0 };
        let Some(jp) = first_breaking(k, lo, breaks) else {
            return Ok((StepOutcome::AllGood, k));
        };
        if p == 1 {
            good_prefix = jp - 1;
        }
        chosen.push(jp - 1);
        if jp == 1 || p == a {
            break;
        }
    }
    chosen.sort_unstable();
    chosen.dedup();

    let t = venn_diagram(family, &union_of(w, &chosen, 0));
    if !breaks_some_generator(&t, gamma_prev) {
        return Err(Error::TowerStalled);
    }
    let group =
        gamma_prev.subgroup_by_membership(|rho| t.is_good_unchecked(rho), index_bound(a))?;
    Ok((
        StepOutcome::Refined {
            parts: chosen,
            group,
        },
        good_prefix,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerStep {
    pub index: usize,
    pub parts: Vec<usize>,
    #[serde(serialize_with = "big_as_string")]
    pub order: BigUint,
}

/// Record of the refinement chain from the starting product of symmetric
/// groups down to the answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerTrace {
    pub antichain: usize,
    #[serde(serialize_with = "big_as_string")]
    pub start_order: BigUint,
    pub steps: Vec<TowerStep>,
}

fn big_as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl TowerTrace {
    pub fn height(&self) -> usize {
        self.steps.len()
    }

    /// Orders of the groups in the chain, starting group included.
    pub fn orders(&self) -> Vec<BigUint> {
        std::iter::once(self.start_order.clone())
            .chain(self.steps.iter().map(|s| s.order.clone()))
            .collect()
    }

    /// Each step's index, as `|previous| / |next|`.
    pub fn step_indices(&self) -> Vec<BigUint> {
        self.orders().windows(2).map(|w| &w[0] / &w[1]).collect()
    }

    /// `true` if every step index is at most `(a!)^a` and divides exactly.
    pub fn indices_within_bound(&self) -> bool {
        let bound = BigUint::from(index_bound(self.antichain.max(1)));
        self.orders()
            .windows(2)
            .all(|w| (&w[0] % &w[1]) == BigUint::ZERO && &w[0] / &w[1] <= bound)
    }

    /// `true` if the chain is no longer than `log2` of the starting order.
    pub fn height_within_bound(&self) -> bool {
        (self.steps.len() as u64) <= self.start_order.bits().saturating_sub(1)
    }

    /// `true` if the orders strictly decrease along the chain.
    pub fn strictly_decreasing(&self) -> bool {
        self.orders().windows(2).all(|w| w[0] > w[1])
    }
}

/// Output of [`autom_set`].
#[derive(Clone, Debug)]
pub struct AutomSetResult {
    pub domain: MultisetDomain,
    pub group: PermGroup,
    pub simple: SimpleFamily,
    pub simple_group: PermGroup,
    pub trace: TowerTrace,
}

/// Automorphism group of a colored set family, acting on its multiset
/// domain: all color- and multiplicity-respecting permutations of the
/// member sets that are induced by some permutation of the ground set.
pub fn autom_set(family: &ColoredSetFamily) -> Result<AutomSetResult> {
    family.validate()?;
    let simple = simplify(family);
    let w = cardinality_partition(&simple);
    let a = family.max_antichain();
    let mut gamma = PermGroup::symmetric_product(&w.parts, simple.len())?;
    let mut trace = TowerTrace {
        antichain: a,
        start_order: gamma.order(),
        steps: Vec::new(),
    };
    let mut good_prefix = 0;
    loop {
        let (outcome, prefix) = tower_step_from(&simple, &w, &gamma, a, good_prefix)?;
        good_prefix = prefix;
        match outcome {
            StepOutcome::AllGood => break,
            StepOutcome::Refined { parts, group } => {
                trace.steps.push(TowerStep {
                    index: trace.steps.len() + 1,
                    parts,
                    order: group.order(),
                });
                gamma = group;
            }
        }
    }
    let domain = MultisetDomain::of(family);
    let group = expand_solution(family, &simple, &gamma, &domain)?;
    Ok(AutomSetResult {
        domain,
        group,
        simple,
        simple_group: gamma,
        trace,
    })
}
