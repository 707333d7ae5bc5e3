use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::group::PermGroup;
use crate::perm::Permutation;

use super::pqtree::{NodeId, NodeKind, PQTree};
use super::Graph;

/// Isomorphism-invariant description of a subtree together with the inner
/// vertices at each of its nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CanonicalCode {
    Leaf {
        inner: usize,
    },
    P {
        inner: usize,
        children: Vec<CanonicalCode>,
    },
    /// Spans are child-position pairs in the chosen orientation, sorted.
    Q {
        children: Vec<CanonicalCode>,
        spans: Vec<(usize, usize)>,
    },
}

/// Codes of every node plus the orientation chosen for each Q-node.
#[derive(Clone, Debug)]
pub struct TreeCodes {
    pub code: Vec<CanonicalCode>,
    /// Q-node read right to left in its canonical orientation.
    pub reversed: Vec<bool>,
    /// Q-node whose two orientations give the same code.
    pub symmetric: Vec<bool>,
}

pub(crate) fn mirror(span: (usize, usize), k: usize) -> (usize, usize) {
    (k - 1 - span.1, k - 1 - span.0)
}

impl TreeCodes {
    pub fn compute(tree: &PQTree) -> Self {
        let n = tree.len();
        let mut code: Vec<Option<CanonicalCode>> = vec![None; n];
        let mut reversed = vec![false; n];
        let mut symmetric = vec![false; n];
        // children always precede their parent in the arena
        for x in 0..n {
            let node = tree.node(x);
            let inner = tree.inner(x);
            let c = match node.kind {
                NodeKind::Leaf => CanonicalCode::Leaf { inner: inner.len() },
                NodeKind::P => {
                    let mut children: Vec<CanonicalCode> = node
                        .children
                        .iter()
                        .map(|&c| code[c].clone().unwrap())
                        .collect();
                    children.sort();
                    CanonicalCode::P {
                        inner: inner.len(),
                        children,
                    }
                }
                NodeKind::Q => {
                    let k = node.children.len();
                    let fwd_children: Vec<CanonicalCode> = node
                        .children
                        .iter()
                        .map(|&c| code[c].clone().unwrap())
                        .collect();
                    let mut fwd_spans: Vec<(usize, usize)> =
                        inner.iter().map(|&v| tree.span(v)).collect();
                    fwd_spans.sort_unstable();
                    let rev_children: Vec<CanonicalCode> =
                        fwd_children.iter().rev().cloned().collect();
                    let mut rev_spans: Vec<(usize, usize)> =
                        fwd_spans.iter().map(|&s| mirror(s, k)).collect();
                    rev_spans.sort_unstable();
                    let fwd = (fwd_children, fwd_spans);
                    let rev = (rev_children, rev_spans);
                    symmetric[x] = fwd == rev;
                    reversed[x] = rev < fwd;
                    let (children, spans) = if reversed[x] { rev } else { fwd };
                    CanonicalCode::Q { children, spans }
                }
            };
            code[x] = Some(c);
        }
        Self {
            code: code.into_iter().map(Option::unwrap).collect(),
            reversed,
            symmetric,
        }
    }

    /// Children of `x` in canonical order: sorted by code for P-nodes
    /// (stable), in canonical orientation for Q-nodes.
    pub fn canonical_children(&self, tree: &PQTree, x: NodeId) -> Vec<NodeId> {
        let node = tree.node(x);
        let mut ch = node.children.clone();
        match node.kind {
            NodeKind::P => ch.sort_by(|&a, &b| self.code[a].cmp(&self.code[b])),
            NodeKind::Q if self.reversed[x] => ch.reverse(),
            _ => {}
        }
        ch
    }

    /// Span of `v` (inner to `x`) in the canonical orientation of `x`.
    pub fn canonical_span(&self, tree: &PQTree, v: usize) -> (usize, usize) {
        let x = tree.inner_of(v);
        let s = tree.span(v);
        if tree.node(x).kind == NodeKind::Q && self.reversed[x] {
            mirror(s, tree.node(x).children.len())
        } else {
            s
        }
    }

    /// Inner vertices of `x` grouped by canonical span, each group sorted.
    fn inner_groups(&self, tree: &PQTree, x: NodeId) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &v in tree.inner(x) {
            groups
                .entry(self.canonical_span(tree, v))
                .or_default()
                .push(v);
        }
        groups
    }

    /// Writes into `map` an isomorphism from the vertices inner to the
    /// subtree of `a` onto those of `b`; the codes must be equal.
    pub fn isomorphism(&self, tree: &PQTree, a: NodeId, b: NodeId, map: &mut [usize]) {
        debug_assert_eq!(self.code[a], self.code[b]);
        let ga = self.inner_groups(tree, a);
        let gb = self.inner_groups(tree, b);
        for (span, va) in &ga {
            for (&x, &y) in va.iter().zip(&gb[span]) {
                map[x] = y;
            }
        }
        let ca = self.canonical_children(tree, a);
        let cb = self.canonical_children(tree, b);
        for (&x, &y) in ca.iter().zip(&cb) {
            self.isomorphism(tree, x, y, map);
        }
    }

    fn swap_subtrees(&self, tree: &PQTree, a: NodeId, b: NodeId, images: &mut [usize]) {
        let mut map = vec![usize::MAX; images.len()];
        self.isomorphism(tree, a, b, &mut map);
        for (x, &y) in map.iter().enumerate() {
            if y != usize::MAX {
                images[x] = y;
                images[y] = x;
            }
        }
    }
}

/// Code of the subtree rooted at `x`.
pub fn canonical_code(tree: &PQTree, x: NodeId) -> CanonicalCode {
    TreeCodes::compute(tree).code[x].clone()
}

fn perm_from(images: Vec<usize>) -> Permutation {
    Permutation::from_usize_images(&images).expect("subtree swaps are bijective")
}

/// Generators of the automorphism group of the graph of `tree`: swaps of
/// equal-code P-node children, reversals of symmetric Q-nodes, and
/// transpositions of twin inner vertices.
pub fn tree_automorphisms(tree: &PQTree, codes: &TreeCodes) -> Vec<Permutation> {
    let n = tree.vertex_count();
    let id: Vec<usize> = (0..n).collect();
    let mut gens = Vec::new();
    for x in 0..tree.len() {
        let node = tree.node(x);
        match node.kind {
            NodeKind::P => {
                let ch = codes.canonical_children(tree, x);
                for w in ch.windows(2) {
                    if codes.code[w[0]] == codes.code[w[1]] {
                        let mut images = id.clone();
                        codes.swap_subtrees(tree, w[0], w[1], &mut images);
                        gens.push(perm_from(images));
                    }
                }
            }
            NodeKind::Q if codes.symmetric[x] => {
                let k = node.children.len();
                let mut images = id.clone();
                for t in 0..k / 2 {
                    codes.swap_subtrees(
                        tree,
                        node.children[t],
                        node.children[k - 1 - t],
                        &mut images,
                    );
                }
                let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
                for &v in tree.inner(x) {
                    groups.entry(tree.span(v)).or_default().push(v);
                }
                for (span, vs) in &groups {
                    for (&u, &w) in vs.iter().zip(&groups[&mirror(*span, k)]) {
                        images[u] = w;
                    }
                }
                gens.push(perm_from(images));
            }
            _ => {}
        }
        let mut twins: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &v in tree.inner(x) {
            twins.entry(tree.span(v)).or_default().push(v);
        }
        for vs in twins.values() {
            for w in vs.windows(2) {
                gens.push(Permutation::transposition(n, w[0], w[1]));
            }
        }
    }
    gens
}

/// The automorphism group of an interval graph.
pub fn interval_automorphism_group(g: &Graph) -> Result<PermGroup> {
    let tree = PQTree::build(g)?;
    let codes = TreeCodes::compute(&tree);
    PermGroup::new(g.n(), tree_automorphisms(&tree, &codes))
}

fn clique_label(g: &Graph, clique: &[usize]) -> String {
    let mut names: Vec<String> = clique.iter().map(|&v| g.label(v)).collect();
    names.sort();
    let sep = if names.iter().all(|s| s.chars().count() == 1) {
        ""
    } else {
        " "
    };
    names.join(sep)
}

fn inner_label(g: &Graph, tree: &PQTree, x: NodeId) -> String {
    clique_label(g, tree.inner(x))
}

/// A text form of the tree that does not depend on equivalence
/// transformations: `P[inner](..)` with children sorted, `Q[inner](..)` in
/// the lexicographically smaller reading direction, leaves as their clique.
pub fn describe(g: &Graph, tree: &PQTree, x: NodeId) -> String {
    let node = tree.node(x);
    let parts: Vec<String> = node
        .children
        .iter()
        .map(|&c| describe(g, tree, c))
        .collect();
    match node.kind {
        NodeKind::Leaf => clique_label(g, &tree.cliques()[node.clique.unwrap()]),
        NodeKind::P => {
            let mut parts = parts;
            parts.sort();
            format!("P[{}]({})", inner_label(g, tree, x), parts.join(","))
        }
        NodeKind::Q => {
            let fwd = parts.join(",");
            let rev = parts.iter().rev().cloned().collect::<Vec<_>>().join(",");
            format!("Q[{}]({})", inner_label(g, tree, x), fwd.min(rev))
        }
    }
}

/// Graphviz rendering: P-nodes as triangles, Q-nodes as boxes, leaves as
/// ellipses labeled by their clique.
pub fn to_dot(g: &Graph, tree: &PQTree) -> String {
    let mut s = String::from("digraph pqtree {\n  node [fontname=\"Helvetica\"];\n");
    for x in tree.subtree(tree.root()) {
        let node = tree.node(x);
        let (shape, label) = match node.kind {
            NodeKind::Leaf => (
                "ellipse",
                clique_label(g, &tree.cliques()[node.clique.unwrap()]),
            ),
            NodeKind::P => ("triangle", inner_label(g, tree, x)),
            NodeKind::Q => ("box", inner_label(g, tree, x)),
        };
        let _ = writeln!(s, "  n{x} [shape={shape}, label=\"{label}\"];");
        for &c in &node.children {
            let _ = writeln!(s, "  n{x} -> n{c};");
        }
    }
    s.push_str("}\n");
    s
}
