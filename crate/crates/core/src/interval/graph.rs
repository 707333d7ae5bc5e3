use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) outside {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Self {
            n,
            adj,
            labels: None,
        })
    }

    /// Intersection graph of closed intervals `[l, r]`.
    pub fn from_intervals(intervals: &[(f64, f64)]) -> Self {
        let mut edges = Vec::new();
        for (i, a) in intervals.iter().enumerate() {
            for (j, b) in intervals.iter().enumerate().skip(i + 1) {
                if a.0.max(b.0) <= a.1.min(b.1) {
                    edges.push((i, j));
                }
            }
        }
        Self::new(intervals.len(), &edges).expect("interval edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&&v| v > u)
                    .map(move |&v| (u, v))
            })
            .collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, or its index when unlabeled.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// `true` if `p` maps edges onto edges.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.domain_size() == self.n
            && (0..self.n).all(|u| {
                self.adj[u]
                    .iter()
                    .all(|&v| self.has_edge(p.apply(u), p.apply(v)))
            })
    }

    /// The graph with vertex `v` renamed to `p(v)`.
    pub fn relabel(&self, p: &Permutation) -> Graph {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (p.apply(u), p.apply(v)))
            .collect();
        let mut g = Graph::new(self.n, &edges).unwrap();
        if let Some(l) = &self.labels {
            let mut moved = vec![String::new(); self.n];
            for (v, name) in l.iter().enumerate() {
                moved[p.apply(v)] = name.clone();
            }
            g.labels = Some(moved);
        }
        g
    }
}
