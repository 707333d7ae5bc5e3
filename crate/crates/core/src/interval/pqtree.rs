use serde::Serialize;

use crate::error::{Error, Result};

use super::cliques::maximal_cliques;
use super::Graph;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeKind {
    Leaf,
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// Maximal clique index, for leaves.
    pub clique: Option<usize>,
    pub depth: usize,
}

/// A PQ-tree over the maximal cliques of an interval graph, with the inner
/// vertex of every vertex and its child span at that node.
#[derive(Clone, Debug)]
pub struct PQTree {
    nodes: Vec<Node>,
    root: NodeId,
    cliques: Vec<Vec<usize>>,
    leaf_of: Vec<NodeId>,
    inner_of: Vec<NodeId>,
    span_of: Vec<(usize, usize)>,
    inner: Vec<Vec<usize>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
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

fn intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn overlap(a: &[usize], b: &[usize]) -> bool {
    intersects(a, b) && !is_subset(a, b) && !is_subset(b, a)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Components of the overlap graph, each as increasing set indices,
/// ordered by their first index.
fn overlap_components(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let s = sets.len();
    let mut parent: Vec<usize> = (0..s).collect();
    for i in 0..s {
        for j in i + 1..s {
            if overlap(&sets[i], &sets[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; s];
    for i in 0..s {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(i);
    }
    comps
}

fn union_of(sets: &[Vec<usize>], comp: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = comp.iter().flat_map(|&i| sets[i].iter().copied()).collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Orders the atoms of an overlap-connected component so that every set is
/// a consecutive run of atoms. The order is unique up to reversal.
fn arrange(sets: &[Vec<usize>], comp: &[usize], m: usize) -> Result<Vec<Vec<usize>>> {
    let fail = || Error::NotInterval("no consecutive arrangement of the cliques exists".into());

    // breadth-first order over the overlap graph, so every set after the
    // first overlaps an earlier one
    let mut order = vec![comp[0]];
    let mut taken = vec![false; comp.len()];
    taken[0] = true;
    let mut head = 0;
    while head < order.len() {
        let cur = order[head];
        head += 1;
        for (k, &other) in comp.iter().enumerate() {
            if !taken[k] && overlap(&sets[cur], &sets[other]) {
                taken[k] = true;
                order.push(other);
            }
        }
    }

    let mut placed = vec![false; m];
    let mut blocks: Vec<Vec<usize>> = vec![sets[order[0]].clone()];
    for &x in &sets[order[0]] {
        placed[x] = true;
    }
    let mut in_s = vec![false; m];
    for &si in &order[1..] {
        let s = &sets[si];
        for &x in s {
            in_s[x] = true;
        }
        let counts: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().filter(|&&x| in_s[x]).count())
            .collect();
        let full = |i: usize| counts[i] == blocks[i].len();
        let hit: Vec<usize> = (0..blocks.len()).filter(|&i| counts[i] > 0).collect();
        let (l, r) = (hit[0], *hit.last().unwrap());
        if hit.len() != r - l + 1 || !(l + 1..r).all(full) {
            return Err(fail());
        }
        let fresh: Vec<usize> = s.iter().copied().filter(|&x| !placed[x]).collect();
        let last = blocks.len() - 1;
        let split = |b: &Vec<usize>, inside_first: bool| -> Vec<Vec<usize>> {
            let (ins, outs): (Vec<usize>, Vec<usize>) = b.iter().partition(|&&x| in_s[x]);
            let pair = if inside_first {
                [ins, outs]
            } else {
                [outs, ins]
            };
            pair.into_iter().filter(|p| !p.is_empty()).collect()
        };
        if fresh.is_empty() {
            if l == r {
                return Err(fail());
            }
            let right = split(&blocks[r], true);
            let left = split(&blocks[l], false);
            blocks.splice(r..=r, right);
            blocks.splice(l..=l, left);
        } else if blocks.len() == 1 || (r == last && (l + 1..=r).all(full)) {
            let left = split(&blocks[l], false);
            blocks.splice(l..=l, left);
            blocks.push(fresh.clone());
        } else if l == 0 && (l..r).all(full) {
            let right = split(&blocks[r], true);
            blocks.splice(r..=r, right);
            blocks.insert(0, fresh.clone());
        } else {
            return Err(fail());
        }
        for &x in &fresh {
            placed[x] = true;
        }
        for &x in s {
            in_s[x] = false;
        }
    }

    let mut block_of = vec![usize::MAX; m];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            block_of[x] = i;
        }
    }
    for &si in comp {
        let mut idx: Vec<usize> = sets[si].iter().map(|&x| block_of[x]).collect();
        idx.sort_unstable();
        idx.dedup();
        let (lo, hi) = (idx[0], *idx.last().unwrap());
        let size: usize = (lo..=hi).map(|i| blocks[i].len()).sum();
        if idx.len() != hi - lo + 1 || size != sets[si].len() {
            return Err(fail());
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    Ok(blocks)
}

struct Builder {
    nodes: Vec<Node>,
    m: usize,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, children: Vec<NodeId>, clique: Option<usize>) -> NodeId {
        let id = self.nodes.len();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(Node {
            kind,
            children,
            parent: None,
            clique,
            depth: 0,
        });
        id
    }

    fn build(&mut self, universe: &[usize], sets: Vec<Vec<usize>>) -> Result<NodeId> {
        if universe.len() == 1 {
            return Ok(self.push(NodeKind::Leaf, Vec::new(), Some(universe[0])));
        }
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .filter(|s| s.len() >= 2 && s.len() < universe.len())
            .collect();
        sets.sort();
        sets.dedup();
        if sets.is_empty() {
            let leaves = universe
                .iter()
                .map(|&x| self.push(NodeKind::Leaf, Vec::new(), Some(x)))
                .collect();
            return Ok(self.push(NodeKind::P, leaves, None));
        }
        let comps = overlap_components(&sets);
        let unions: Vec<Vec<usize>> = comps.iter().map(|c| union_of(&sets, c)).collect();

        if let Some(ci) = unions.iter().position(|u| u.len() == universe.len()) {
            let blocks = arrange(&sets, &comps[ci], self.m)?;
            let mut rest: Vec<Vec<usize>> = sets
                .iter()
                .enumerate()
                .filter(|(i, _)| !comps[ci].contains(i))
                .map(|(_, s)| s.clone())
                .collect();
            let mut children = Vec::with_capacity(blocks.len());
            for b in &blocks {
                let (inside, outside): (Vec<_>, Vec<_>) =
                    rest.into_iter().partition(|s| is_subset(s, b));
                rest = outside;
                children.push(self.build(b, inside)?);
            }
            if !rest.is_empty() {
                return Err(Error::NotInterval(
                    "a vertex straddles two atoms of a rigid component".into(),
                ));
            }
            return Ok(self.push(NodeKind::Q, children, None));
        }

        let mut order: Vec<usize> = (0..unions.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(unions[i].len()));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in order {
            if !blocks.iter().any(|b| is_subset(&unions[i], b)) {
                blocks.push(unions[i].clone());
            }
        }
        let mut covered = vec![false; self.m];
        for b in &blocks {
            for &x in b {
                covered[x] = true;
            }
        }
        blocks.extend(universe.iter().filter(|&&x| !covered[x]).map(|&x| vec![x]));
        blocks.sort_by_key(|b| b[0]);
        let mut children = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let inside: Vec<Vec<usize>> =
                sets.iter().filter(|s| is_subset(s, b)).cloned().collect();
            children.push(self.build(b, inside)?);
        }
        Ok(self.push(NodeKind::P, children, None))
    }
}

impl PQTree {
    /// Builds the PQ-tree of an interval graph from the consecutive-ones
    /// structure of its clique-vertex incidence.
    pub fn build(g: &Graph) -> Result<Self> {
        let cliques = match maximal_cliques(g) {
            Ok(c) => c,
            Err(Error::NotChordal) => {
                return Err(Error::NotInterval("graph is not chordal".into()))
            }
            Err(e) => return Err(e),
        };
        let m = cliques.len();
        let n = g.n();
        let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, c) in cliques.iter().enumerate() {
            for &v in c {
                member[v].push(ci);
            }
        }
        let mut b = Builder {
            nodes: Vec::new(),
            m,
        };
        let universe: Vec<usize> = (0..m).collect();
        let root = b.build(&universe, member.clone())?;
        let mut nodes = b.nodes;

        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for i in 0..nodes[x].children.len() {
                let c = nodes[x].children[i];
                nodes[c].depth = nodes[x].depth + 1;
                stack.push(c);
            }
        }
        let mut leaf_of = vec![0; m];
        for (id, node) in nodes.iter().enumerate() {
            if let Some(c) = node.clique {
                leaf_of[c] = id;
            }
        }

        let mut tree = PQTree {
            nodes,
            root,
            cliques,
            leaf_of,
            inner_of: vec![0; n],
            span_of: vec![(0, 0); n],
            inner: Vec::new(),
        };

        let frontier = tree.frontier();
        let mut pos = vec![0; m];
        for (i, &c) in frontier.iter().enumerate() {
            pos[c] = i;
        }
        for (v, cs) in member.iter().enumerate() {
            let mut p: Vec<usize> = cs.iter().map(|&c| pos[c]).collect();
            p.sort_unstable();
            if p.last().unwrap() - p[0] + 1 != p.len() {
                return Err(Error::NotInterval(format!(
                    "cliques of vertex {v} are not consecutive"
                )));
            }
        }

        tree.inner = vec![Vec::new(); tree.nodes.len()];
        for (v, cs) in member.iter().enumerate() {
            let leaves: Vec<NodeId> = cs.iter().map(|&c| tree.leaf_of[c]).collect();
            let x = leaves[1..]
                .iter()
                .fold(leaves[0], |acc, &l| tree.lca(acc, l));
            tree.inner_of[v] = x;
            tree.inner[x].push(v);
            let node = &tree.nodes[x];
            tree.span_of[v] = match node.kind {
                NodeKind::Leaf => (0, 0),
                _ => {
                    let idx: Vec<usize> = leaves.iter().map(|&l| tree.child_toward(x, l)).collect();
                    (*idx.iter().min().unwrap(), *idx.iter().max().unwrap())
                }
            };
        }
        Ok(tree)
    }

    fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.nodes[a].depth > self.nodes[b].depth {
            a = self.nodes[a].parent.unwrap();
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Position among `x`'s children of the child whose subtree holds `d`.
    pub fn child_toward(&self, x: NodeId, mut d: NodeId) -> usize {
        while self.nodes[d].parent != Some(x) {
            d = self.nodes[d].parent.expect("descendant");
        }
        self.nodes[x].children.iter().position(|&c| c == d).unwrap()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.inner_of.len()
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn leaf_of(&self, clique: usize) -> NodeId {
        self.leaf_of[clique]
    }

    /// The node at which `v` is an inner vertex.
    pub fn inner_of(&self, v: usize) -> NodeId {
        self.inner_of[v]
    }

    /// Inner vertices of `x`, increasing.
    pub fn inner(&self, x: NodeId) -> &[usize] {
        &self.inner[x]
    }

    /// First and last child position of `v` at its inner node; `(0, 0)` at
    /// a leaf, the full range at a P-node.
    pub fn span(&self, v: usize) -> (usize, usize) {
        self.span_of[v]
    }

    /// Multiset of palindromic child indices spanned by `v`, sorted; empty
    /// unless `v` is inner to a Q-node.
    pub fn rank(&self, v: usize) -> Vec<usize> {
        let x = self.inner_of[v];
        if self.nodes[x].kind != NodeKind::Q {
            return Vec::new();
        }
        let k = self.nodes[x].children.len();
        let (i, j) = self.span_of[v];
        let mut r: Vec<usize> = (i..=j).map(|t| t.min(k - 1 - t) + 1).collect();
        r.sort_unstable();
        r
    }

    /// Clique indices in left-to-right leaf order.
    pub fn frontier(&self) -> Vec<usize> {
        self.leaves_below(self.root)
    }

    pub fn leaves_below(&self, x: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            let node = &self.nodes[y];
            if let Some(c) = node.clique {
                out.push(c);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Nodes of the subtree of `x` in preorder.
    pub fn subtree(&self, x: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            out.push(y);
            stack.extend(self.nodes[y].children.iter().rev());
        }
        out
    }

    /// `true` if `a` is `d` or one of its ancestors.
    pub fn is_ancestor(&self, a: NodeId, mut d: NodeId) -> bool {
        loop {
            if a == d {
                return true;
            }
            match self.nodes[d].parent {
                Some(p) => d = p,
                None => return false,
            }
        }
    }

    /// Union of the cliques at the leaves below `x`, sorted.
    pub fn vertices_below(&self, x: NodeId) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .leaves_below(x)
            .into_iter()
            .flat_map(|c| self.cliques[c].iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Vertices inner to some node of the subtree of `x`, sorted.
    pub fn inner_below(&self, x: NodeId) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .subtree(x)
            .into_iter()
            .flat_map(|y| self.inner[y].iter().copied())
            .collect();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_a_leaf() {
        let t = PQTree::build(&Graph::new(1, &[]).unwrap()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.node(t.root()).kind, NodeKind::Leaf);
        assert_eq!(t.inner(t.root()), &[0]);
    }

    #[test]
    fn four_cycle_is_not_interval() {
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(PQTree::build(&c4), Err(Error::NotInterval(_))));
    }

    #[test]
    fn claw_with_long_arms_is_not_interval() {
        // chordal, but three pairwise non-adjacent arms around a center
        let g = Graph::new(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert!(matches!(PQTree::build(&g), Err(Error::NotInterval(_))));
    }

    #[test]
    fn path_gives_q_node() {
        let t = PQTree::build(&Graph::path(4)).unwrap();
        let root = t.node(t.root());
        assert_eq!(root.kind, NodeKind::Q);
        assert_eq!(root.children.len(), 3);
        assert_eq!(t.inner_of(1), t.root());
        assert_eq!(t.rank(1), vec![1, 2]);
        assert_eq!(t.rank(2), vec![1, 2]);
        assert_ne!(t.span(1), t.span(2));
        assert_eq!(t.node(t.inner_of(0)).kind, NodeKind::Leaf);
    }

    #[test]
    fn star_gives_p_node() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = PQTree::build(&g).unwrap();
        assert_eq!(t.node(t.root()).kind, NodeKind::P);
        assert_eq!(t.node(t.root()).children.len(), 3);
        assert_eq!(t.inner(t.root()), &[0]);
    }

    #[test]
    fn disconnected_gives_root_p() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let t = PQTree::build(&g).unwrap();
        assert_eq!(t.node(t.root()).kind, NodeKind::P);
        assert!(t.inner(t.root()).is_empty());
    }

    #[test]
    fn palindromic_rank() {
        // five cliques in a row at points 1..5, plus w covering points 2..4
        let mut iv: Vec<(f64, f64)> = (1..=5).map(|t| (t as f64, t as f64)).collect();
        iv.extend((1..=4).map(|t| (t as f64, t as f64 + 1.0)));
        iv.push((2.0, 4.0));
        let g = Graph::from_intervals(&iv);
        let t = PQTree::build(&g).unwrap();
        let root = t.node(t.root());
        assert_eq!(root.kind, NodeKind::Q);
        assert_eq!(root.children.len(), 5);
        let w = 9;
        assert_eq!(t.inner_of(w), t.root());
        assert_eq!(t.rank(w), vec![2, 2, 3]);
        let (i, j) = t.span(w);
        assert_eq!(j - i, 2);
        assert!(i == 1);
    }
}
