//! Automorphisms of interval graphs that preserve colored families of
//! marked cliques, computed by reduction to a colored set family.
//!
//! The reduction builds the PQ-tree of the graph, discards the subtrees
//! containing no marked vertex, and adds to the marked sets one vertex set
//! per remaining node (the union of the cliques below it), colored by a
//! relabeling-invariant description of the node. Marked sets are recolored
//! by their position profile in the tree. The automorphism group of the
//! resulting family, restricted to the marked sets, is the answer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::interval::{mirror, CanonicalCode, Graph, NodeId, NodeKind, PQTree, TreeCodes};
use crate::setfamily::{
    autom_set, max_antichain, ColoredSetFamily, DomainPoint, Entry, MultisetDomain, TowerTrace,
};

/// An interval graph with colored families of marked cliques.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedInstance {
    pub graph: Graph,
    /// Marked sets over the vertices of `graph`.
    pub sets: ColoredSetFamily,
}

impl MarkedInstance {
    pub fn new(graph: Graph, entries: Vec<Entry>) -> Result<Self> {
        let sets = ColoredSetFamily {
            ground_size: graph.n(),
            entries,
        };
        let inst = Self { graph, sets };
        inst.validate()?;
        Ok(inst)
    }

    /// Checks that the marked sets are valid and each induces a clique.
    /// Whether the graph is an interval graph is checked by [`reduce`].
    pub fn validate(&self) -> Result<()> {
        if self.sets.ground_size != self.graph.n() {
            return Err(Error::DomainMismatch {
                expected: self.graph.n(),
                found: self.sets.ground_size,
            });
        }
        self.sets.validate()?;
        for e in &self.sets.entries {
            if !self.graph.is_clique(&e.set) {
                return Err(Error::MarkedSetNotClique {
                    color: e.color,
                    set: e.set.clone(),
                });
            }
        }
        Ok(())
    }

    /// The points permuted by the answer group.
    pub fn domain(&self) -> MultisetDomain {
        MultisetDomain::of(&self.sets)
    }
}

/// Which nodes carry marked inner vertices, and which survive pruning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Node whose inner vertices miss every marked set.
    pub clean: Vec<bool>,
    /// Node whose whole subtree is clean.
    pub clean_subtree: Vec<bool>,
    /// Nodes outside every clean subtree, increasing.
    pub kept: Vec<NodeId>,
}

impl Classification {
    /// Roots of the maximal clean subtrees, increasing.
    pub fn clean_roots(&self, tree: &PQTree) -> Vec<NodeId> {
        (0..tree.len())
            .filter(|&x| {
                self.clean_subtree[x] && tree.node(x).parent.is_none_or(|p| !self.clean_subtree[p])
            })
            .collect()
    }
}

pub fn classify_clean(tree: &PQTree, marked: &MarkedInstance) -> Classification {
    let mut is_marked = vec![false; tree.vertex_count()];
    for e in &marked.sets.entries {
        for &v in &e.set {
            is_marked[v] = true;
        }
    }
    let n = tree.len();
    let clean: Vec<bool> = (0..n)
        .map(|x| tree.inner(x).iter().all(|&v| !is_marked[v]))
        .collect();
    let mut clean_subtree = clean.clone();
    for x in 0..n {
        let node = tree.node(x);
        clean_subtree[x] = clean[x] && node.children.iter().all(|&c| clean_subtree[c]);
    }
    let kept = (0..n).filter(|&x| !clean_subtree[x]).collect();
    Classification {
        clean,
        clean_subtree,
        kept,
    }
}

/// Inner vertices of a marked set at one tree level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LevelCount {
    pub level: usize,
    pub count: usize,
    /// `(rank, count)` pairs, sorted; empty unless the node is a Q-node.
    pub ranks: Vec<(Vec<usize>, usize)>,
}

/// Where the elements of a marked set sit in the tree, level by level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SetAnnotation {
    /// Levels with at least one element, increasing.
    pub levels: Vec<LevelCount>,
}

impl SetAnnotation {
    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.count).sum()
    }
}

/// Annotation of one marked set; the nodes holding its elements must lie
/// on one root-to-leaf path.
pub fn annotate_set(tree: &PQTree, color: usize, set: &[usize]) -> Result<SetAnnotation> {
    let mut by_node: BTreeMap<(usize, NodeId), Vec<usize>> = BTreeMap::new();
    for &v in set {
        let x = tree.inner_of(v);
        by_node.entry((tree.node(x).depth, x)).or_default().push(v);
    }
    let nodes: Vec<(usize, NodeId)> = by_node.keys().copied().collect();
    let on_path = nodes
        .windows(2)
        .all(|w| w[0].0 < w[1].0 && tree.is_ancestor(w[0].1, w[1].1));
    if !on_path {
        return Err(Error::MarkedSetNotClique {
            color,
            set: set.to_vec(),
        });
    }
    let levels = by_node
        .into_iter()
        .map(|((level, _), vs)| {
            let mut ranks: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for &v in &vs {
                let r = tree.rank(v);
                if !r.is_empty() {
                    *ranks.entry(r).or_default() += 1;
                }
            }
            LevelCount {
                level,
                count: vs.len(),
                ranks: ranks.into_iter().collect(),
            }
        })
        .collect();
    Ok(SetAnnotation { levels })
}

/// Annotations of all marked sets, in entry order.
pub fn annotate_sets(tree: &PQTree, marked: &MarkedInstance) -> Result<Vec<SetAnnotation>> {
    marked
        .sets
        .entries
        .iter()
        .map(|e| annotate_set(tree, e.color, &e.set))
        .collect()
}

/// Relabeling-invariant description of a kept node together with its clean
/// children. Kept children appear as `None`; for Q-nodes the child list and
/// the inner spans are read in whichever direction gives the smaller value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeAnnotation {
    pub kind: NodeKind,
    pub children: Vec<Option<CanonicalCode>>,
    pub inner_spans: Vec<(usize, usize)>,
    pub symmetric: bool,
}

/// A node annotation plus the node's children in the annotation's order.
fn annotate_node(
    tree: &PQTree,
    codes: &TreeCodes,
    cls: &Classification,
    x: NodeId,
) -> (NodeAnnotation, Vec<NodeId>) {
    let node = tree.node(x);
    let label = |c: NodeId| (cls.clean_subtree[c]).then(|| codes.code[c].clone());
    let mut spans: Vec<(usize, usize)> = tree.inner(x).iter().map(|&v| tree.span(v)).collect();
    spans.sort_unstable();
    match node.kind {
        NodeKind::Leaf | NodeKind::P => {
            let mut order = node.children.clone();
            order.sort_by_key(|&c| label(c));
            let ann = NodeAnnotation {
                kind: node.kind,
                children: order.iter().map(|&c| label(c)).collect(),
                inner_spans: spans,
                symmetric: false,
            };
            (ann, order)
        }
        NodeKind::Q => {
            let k = node.children.len();
            let fwd: Vec<Option<CanonicalCode>> = node.children.iter().map(|&c| label(c)).collect();
            let rev: Vec<Option<CanonicalCode>> = fwd.iter().rev().cloned().collect();
            let mut rev_spans: Vec<(usize, usize)> = spans.iter().map(|&s| mirror(s, k)).collect();
            rev_spans.sort_unstable();
            let forward = (fwd, spans);
            let backward = (rev, rev_spans);
            let symmetric = forward == backward;
            let mut order = node.children.clone();
            let (children, inner_spans) = if backward < forward {
                order.reverse();
                backward
            } else {
                forward
            };
            let ann = NodeAnnotation {
                kind: NodeKind::Q,
                children,
                inner_spans,
                symmetric,
            };
            (ann, order)
        }
    }
}

/// `C_q` for every kept node: the union of the cliques at the leaves
/// below it.
pub fn node_sets(tree: &PQTree, cls: &Classification) -> Vec<(NodeId, Vec<usize>)> {
    cls.kept
        .iter()
        .map(|&x| (x, tree.vertices_below(x)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Prefix,
    Suffix,
    Either,
}

/// Color classes of the reduced family. The variant order places every
/// marked-set class before every node class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum ColorKey {
    Marked(usize, SetAnnotation),
    Node(NodeAnnotation),
    Run(NodeAnnotation, usize, Side),
}

/// A marked instance turned into a colored set family on the vertices.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub tree: PQTree,
    pub classification: Classification,
    pub family: ColoredSetFamily,
    /// Colors `0..marked_colors` hold the marked sets.
    pub marked_colors: usize,
    /// For each point of the marked domain, its index in the domain of
    /// `family`.
    pub marked_points: Vec<usize>,
    /// `C_q` for every kept node.
    pub node_sets: Vec<(NodeId, Vec<usize>)>,
    /// Largest antichain among the marked sets.
    pub antichain: usize,
    /// Largest antichain among the marked sets and the `C_q` sets.
    pub antichain_with_nodes: usize,
    /// Largest antichain of the whole reduced family.
    pub antichain_reduced: usize,
}

fn union_below(tree: &PQTree, nodes: &[NodeId]) -> Vec<usize> {
    let mut v: Vec<usize> = nodes.iter().flat_map(|&c| tree.vertices_below(c)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn reduce(marked: &MarkedInstance) -> Result<ReducedInstance> {
    marked.validate()?;
    let tree = PQTree::build(&marked.graph)?;
    let codes = TreeCodes::compute(&tree);
    let cls = classify_clean(&tree, marked);
    let annotations = annotate_sets(&tree, marked)?;
    let cq = node_sets(&tree, &cls);

    let mut keyed: Vec<(ColorKey, Vec<usize>, usize)> = Vec::new();
    for (e, ann) in marked.sets.entries.iter().zip(annotations) {
        keyed.push((
            ColorKey::Marked(e.color, ann),
            e.set.clone(),
            e.multiplicity,
        ));
    }
    for (x, set) in &cq {
        let (ann, order) = annotate_node(&tree, &codes, &cls, *x);
        keyed.push((ColorKey::Node(ann.clone()), set.clone(), 1));
        if ann.kind == NodeKind::Q {
            let k = order.len();
            let (ps, ss) = if ann.symmetric {
                (Side::Either, Side::Either)
            } else {
                (Side::Prefix, Side::Suffix)
            };
            for t in 1..k {
                keyed.push((
                    ColorKey::Run(ann.clone(), t, ps),
                    union_below(&tree, &order[..t]),
                    1,
                ));
                keyed.push((
                    ColorKey::Run(ann.clone(), t, ss),
                    union_below(&tree, &order[k - t..]),
                    1,
                ));
            }
        }
    }

    let mut keys: Vec<&ColorKey> = keyed.iter().map(|(k, _, _)| k).collect();
    keys.sort();
    keys.dedup();
    let color_of: BTreeMap<&ColorKey, usize> =
        keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let marked_colors = keys
        .iter()
        .filter(|k| matches!(k, ColorKey::Marked(..)))
        .count();

    let mut merged: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for (key, set, mult) in &keyed {
        *merged.entry((color_of[key], set.clone())).or_default() += mult;
    }
    let marked_color_of: BTreeMap<(usize, &[usize]), usize> = keyed
        .iter()
        .filter_map(|(key, set, _)| match key {
            ColorKey::Marked(c, _) => Some(((*c, set.as_slice()), color_of[key])),
            _ => None,
        })
        .collect();
    let family = ColoredSetFamily::new(
        marked.graph.n(),
        merged
            .into_iter()
            .map(|((color, set), m)| Entry::new(set, color, m))
            .collect(),
    )?;

    let index = MultisetDomain::of(&family).index();
    let marked_points = marked
        .domain()
        .points
        .iter()
        .map(|p| {
            index[&DomainPoint {
                color: marked_color_of[&(p.color, p.set.as_slice())],
                set: p.set.clone(),
                copy: p.copy,
            }]
        })
        .collect();

    let a_sets = marked.sets.distinct_sets();
    let mut with_nodes = a_sets.clone();
    with_nodes.extend(cq.iter().map(|(_, s)| s.clone()));
    Ok(ReducedInstance {
        antichain: max_antichain(&a_sets),
        antichain_with_nodes: max_antichain(&with_nodes),
        antichain_reduced: family.max_antichain(),
        tree,
        classification: cls,
        family,
        marked_colors,
        marked_points,
        node_sets: cq,
    })
}

/// The answer group together with the reduction it came from.
#[derive(Clone, Debug)]
pub struct MarkedResult {
    /// Points permuted by `group`: copies of the colored marked sets.
    pub domain: MultisetDomain,
    pub group: PermGroup,
    pub reduced: Option<ReducedInstance>,
    pub trace: Option<TowerTrace>,
}

/// The group induced on the marked sets by the automorphisms of the graph
/// that map every marked set to a marked set of the same color and
/// multiplicity. With no marked sets the result is the trivial group on an
/// empty domain.
pub fn autom_marked_int(marked: &MarkedInstance) -> Result<MarkedResult> {
    marked.validate()?;
    if marked.sets.entries.is_empty() {
        PQTree::build(&marked.graph)?;
        return Ok(MarkedResult {
            domain: MultisetDomain { points: Vec::new() },
            group: PermGroup::trivial(0),
            reduced: None,
            trace: None,
        });
    }
    let reduced = reduce(marked)?;
    let solved = autom_set(&reduced.family)?;
    let group = solved.group.restrict(&reduced.marked_points)?.pruned();
    Ok(MarkedResult {
        domain: marked.domain(),
        group,
        reduced: Some(reduced),
        trace: Some(solved.trace),
    })
}
