//! Interval graphs: maximal cliques, PQ-trees with inner vertices and
//! ranks, canonical codes, and automorphism groups.

mod canon;
mod cliques;
mod graph;
mod pqtree;

pub(crate) use canon::mirror;
pub use canon::{
    canonical_code, describe, interval_automorphism_group, to_dot, tree_automorphisms,
    CanonicalCode, TreeCodes,
};
pub use cliques::{is_perfect_elimination, lex_bfs, maximal_cliques};
pub use graph::Graph;
pub use pqtree::{Node, NodeId, NodeKind, PQTree};

/// Builds the PQ-tree of `g`.
pub fn build_pq_tree(g: &Graph) -> crate::Result<PQTree> {
    PQTree::build(g)
}
