#![allow(dead_code)]

use automset::interval::Graph;
use automset::setfamily::SimpleFamily;

/// Twenty-three labeled intervals whose graph has a three-level PQ-tree
/// mixing P- and Q-nodes.
pub fn labeled_intervals() -> Vec<(char, f64, f64)> {
    vec![
        ('a', -4.0, -2.4),
        ('b', -4.0, -1.0),
        ('c', -4.0, -3.65),
        ('d', -3.4, -3.05),
        ('e', -2.8, -2.46),
        ('f', -2.2, 3.9),
        ('g', -2.2, -1.8),
        ('h', -1.9, -1.5),
        ('i', -1.6, -1.2),
        ('j', -1.3, -0.9),
        ('k', -0.7, -0.35),
        ('l', -0.1, 0.25),
        ('m', 0.53, 0.88),
        ('n', -0.7, 0.88),
        ('o', 1.1, 1.5),
        ('p', 1.4, 1.8),
        ('q', 1.7, 2.1),
        ('r', 2.0, 2.4),
        ('s', 2.6, 3.9),
        ('t', 2.6, 3.0),
        ('u', 2.9, 3.3),
        ('v', 3.2, 3.6),
        ('w', 3.5, 3.9),
    ]
}

pub fn interval_example() -> Graph {
    let iv = labeled_intervals();
    let spans: Vec<(f64, f64)> = iv.iter().map(|&(_, a, b)| (a, b)).collect();
    let labels = iv.iter().map(|&(c, _, _)| c.to_string()).collect();
    Graph::from_intervals(&spans).with_labels(labels).unwrap()
}

/// Vertex indices of a word of single-letter labels, sorted.
pub fn vertices(word: &str) -> Vec<usize> {
    let iv = labeled_intervals();
    let mut v: Vec<usize> = word
        .chars()
        .map(|c| iv.iter().position(|&(l, _, _)| l == c).unwrap())
        .collect();
    v.sort_unstable();
    v
}

pub fn word(set: &[usize]) -> String {
    let iv = labeled_intervals();
    let mut s: Vec<char> = set.iter().map(|&v| iv[v].0).collect();
    s.sort_unstable();
    s.into_iter().collect()
}

/// Four sets A, B, C, D on twenty points realizing the Venn cell sizes
/// D 3, C 1, B 2, A 3, DC 2, CA 2, DCB 2, DCA 1, DBA 2, CBA 2.
pub fn four_sets() -> SimpleFamily {
    let cells: [(&[usize], usize); 10] = [
        (&[3], 3),
        (&[2], 1),
        (&[1], 2),
        (&[0], 3),
        (&[3, 2], 2),
        (&[2, 0], 2),
        (&[3, 2, 1], 2),
        (&[3, 2, 0], 1),
        (&[3, 1, 0], 2),
        (&[2, 1, 0], 2),
    ];
    let mut sets = vec![Vec::new(); 4];
    let mut x = 0;
    for (members, count) in cells {
        for _ in 0..count {
            for &m in members {
                sets[m].push(x);
            }
            x += 1;
        }
    }
    SimpleFamily {
        ground_size: x,
        sets,
        refined_color: vec![0; 4],
        color_vectors: vec![vec![(0, 1)]],
    }
}
