//! Permutations of `{0, .., n-1}` stored as image sequences.
//!
//! Composition uses the right-action convention common in computational
//! group theory: `p.then(&q)` first applies `p`, then `q`, so
//! `p.then(&q).apply(i) == q.apply(p.apply(i))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation);
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn from_usize_images(images: &[usize]) -> Result<Self, Error> {
        Self::from_images(images.iter().map(|&x| x as u32).collect())
    }

    /// Product of disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, Error> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x >= n || y >= n || touched[x] {
                    return Err(Error::NotAPermutation);
                }
                touched[x] = true;
                images[x] = y as u32;
            }
        }
        Self::from_images(images)
    }

    /// The transposition `(a b)` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(a, b);
        Self { images }
    }

    /// The cycle `points[0] -> points[1] -> .. -> points[0]`.
    pub fn cycle(n: usize, points: &[usize]) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (k, &x) in points.iter().enumerate() {
            images[x] = points[(k + 1) % points.len()] as u32;
        }
        Self { images }
    }

    #[inline]
    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.domain_size(), other.domain_size());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    /// First point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }

    /// Parity via cycle count: even iff `n - #cycles` is even.
    pub fn is_even(&self) -> bool {
        let n = self.images.len();
        (n - self.cycles_with_fixed().len()).is_multiple_of(2)
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Disjoint cycles of length at least two, each starting at its
    /// smallest element, sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Parses the output of [`Permutation::to_cycle_string`].
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "()" {
            return Ok(Self::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in s.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('(').ok_or(Error::NotAPermutation)?;
            let cycle = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::NotAPermutation))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(n, &refs)
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self, Self::Error> {
        Self::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.domain_size(), self)
    }
}
