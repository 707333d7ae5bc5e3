use crate::error::{Error, Result};

use super::Graph;

/// Lexicographic breadth-first search; ties go to the smallest vertex.
/// Returns vertices in visiting order.
pub fn lex_bfs(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut label: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| label[a].cmp(&label[b]).then(b.cmp(&a)))
            .unwrap();
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                label[w].push(n - step);
            }
        }
    }
    order
}

/// Checks that `elim` (first vertex eliminated first) is a perfect
/// elimination ordering: the later neighbors of each vertex form a clique.
pub fn is_perfect_elimination(g: &Graph, elim: &[usize]) -> bool {
    let mut pos = vec![0; g.n()];
    for (i, &v) in elim.iter().enumerate() {
        pos[v] = i;
    }
    elim.iter().all(|&v| {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] > pos[v])
            .collect();
        match later.iter().min_by_key(|&&w| pos[w]) {
            None => true,
            Some(&u) => later.iter().all(|&w| w == u || g.has_edge(u, w)),
        }
    })
}

/// All maximal cliques of a chordal graph, each sorted, in lexicographic
/// order.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut elim = lex_bfs(g);
    elim.reverse();
    if !is_perfect_elimination(g, &elim) {
        return Err(Error::NotChordal);
    }
    let mut pos = vec![0; g.n()];
    for (i, &v) in elim.iter().enumerate() {
        pos[v] = i;
    }
    let mut candidates: Vec<Vec<usize>> = elim
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| pos[w] > pos[v])
                .collect();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    candidates.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for c in candidates {
        let covered = cliques
            .iter()
            .any(|k| c.iter().all(|x| k.binary_search(x).is_ok()));
        if !covered {
            cliques.push(c);
        }
    }
    cliques.sort();
    Ok(cliques)
}
