use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::Permutation;

use super::SimpleFamily;

/// Nonzero cells of the cardinality Venn diagram of a subfamily.
///
/// A cell is keyed by the sorted indices (into the simple family) of the
/// members containing its points, and stores how many ground points lie in
/// exactly those members of the subfamily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VennCellMap {
    members: Vec<usize>,
    cells: Vec<(Vec<usize>, usize)>,
    // for each member (by position in `members`), the cells containing it
    member_cells: Vec<Vec<usize>>,
}

impl VennCellMap {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// `(signature, size)` pairs sorted by signature.
    pub fn cells(&self) -> &[(Vec<usize>, usize)] {
        &self.cells
    }

    pub fn get(&self, signature: &[usize]) -> usize {
        self.cells
            .binary_search_by(|(k, _)| k.as_slice().cmp(signature))
            .map_or(0, |i| self.cells[i].1)
    }

    /// `true` if `rho` maps the subfamily onto itself.
    pub fn is_stabilized_by(&self, rho: &Permutation) -> bool {
        self.members
            .iter()
            .all(|&i| self.members.binary_search(&rho.apply(i)).is_ok())
    }

    /// Venn-goodness of the subfamily with `rho`: every cell has the same
    /// size as its image cell. `rho` must stabilize the subfamily.
    pub fn is_good_with(&self, rho: &Permutation) -> Result<bool> {
        if !self.is_stabilized_by(rho) {
            return Err(Error::NonStabilizedSubfamily);
        }
        Ok(self.is_good_unchecked(rho))
    }

    pub(crate) fn is_good_unchecked(&self, rho: &Permutation) -> bool {
        let moved: Vec<usize> = (0..self.members.len())
            .filter(|&p| rho.apply(self.members[p]) != self.members[p])
            .collect();
        let mut touched: Vec<usize> = moved
            .iter()
            .flat_map(|&p| self.member_cells[p].iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let mut image = Vec::new();
        touched.into_iter().all(|c| {
            let (key, count) = &self.cells[c];
            let contains = |m: usize| key.binary_search(&m).is_ok();
            if moved.iter().all(|&p| {
                let m = self.members[p];
                contains(m) == contains(rho.apply(m))
            }) {
                return true;
            }
            image.clear();
            image.extend(key.iter().map(|&i| rho.apply(i)));
            image.sort_unstable();
            self.get(&image) == *count
        })
    }
}

/// Tallies every ground point by the set of subfamily members containing it.
pub fn venn_diagram(family: &SimpleFamily, subfamily: &[usize]) -> VennCellMap {
    let mut members = subfamily.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut signature: Vec<Vec<usize>> = vec![Vec::new(); family.ground_size];
    for &i in &members {
        for &x in &family.sets[i] {
            signature[x].push(i);
        }
    }
    let mut tally = BTreeMap::new();
    for sig in signature.into_iter().filter(|s| !s.is_empty()) {
        *tally.entry(sig).or_insert(0) += 1;
    }
    let cells: Vec<(Vec<usize>, usize)> = tally.into_iter().collect();
    let mut member_cells = vec![Vec::new(); members.len()];
    for (c, (key, _)) in cells.iter().enumerate() {
        for m in key {
            let p = members.binary_search(m).expect("cell key lists members");
            member_cells[p].push(c);
        }
    }
    VennCellMap {
        members,
        cells,
        member_cells,
    }
}

/// Venn-goodness of `subfamily` with `rho`, a permutation of the sets of
/// `family` that must map the subfamily onto itself.
pub fn venn_good(family: &SimpleFamily, subfamily: &[usize], rho: &Permutation) -> Result<bool> {
    if rho.domain_size() != family.len() {
        return Err(Error::DomainMismatch {
            expected: family.len(),
            found: rho.domain_size(),
        });
    }
    venn_diagram(family, subfamily).is_good_with(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfamily::{simplify, ColoredSetFamily};

    fn plain(ground_size: usize, sets: Vec<Vec<usize>>) -> SimpleFamily {
        let n = sets.len();
        SimpleFamily {
            ground_size,
            sets,
            refined_color: vec![0; n],
            color_vectors: vec![vec![(0, 1)]],
        }
    }

    /// Four sets A, B, C, D realizing the cell sizes
    /// D 3, C 1, B 2, A 3, DC 2, CA 2, DCB 2, DCA 1, DBA 2, CBA 2.
    pub(crate) fn four_sets() -> SimpleFamily {
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
        plain(x, sets)
    }

    #[test]
    fn single_set() {
        let f = plain(5, vec![vec![0, 1, 2, 3, 4]]);
        let m = venn_diagram(&f, &[0]);
        assert_eq!(m.cells().len(), 1);
        assert_eq!(m.get(&[0]), 5);
    }

    #[test]
    fn two_overlapping_pairs() {
        let f = plain(3, vec![vec![0, 1], vec![1, 2]]);
        let m = venn_diagram(&f, &[0, 1]);
        assert_eq!(m.get(&[0]), 1);
        assert_eq!(m.get(&[1]), 1);
        assert_eq!(m.get(&[0, 1]), 1);
        assert_eq!(m.cells().len(), 3);
    }

    #[test]
    fn four_set_cells() {
        let f = four_sets();
        assert_eq!(f.ground_size, 20);
        let m = venn_diagram(&f, &[0, 1, 2, 3]);
        assert_eq!(m.cells().len(), 10);
        assert_eq!(m.get(&[3]), 3);
        assert_eq!(m.get(&[0, 1, 3]), 2);
        assert_eq!(m.get(&[0, 1, 2, 3]), 0);
        assert_eq!(m.get(&[1, 2]), 0);
        assert_eq!(m.cells().iter().map(|c| c.1).sum::<usize>(), 20);
    }

    #[test]
    fn four_set_goodness() {
        let f = four_sets();
        let all = [0, 1, 2, 3];
        assert!(venn_good(&f, &all, &Permutation::identity(4)).unwrap());
        assert!(venn_good(&f, &all, &Permutation::transposition(4, 0, 3)).unwrap());
        assert!(!venn_good(&f, &all, &Permutation::transposition(4, 1, 2)).unwrap());
    }

    #[test]
    fn unstabilized_subfamily() {
        let f = plain(3, vec![vec![0, 1], vec![1, 2]]);
        let err = venn_good(&f, &[0], &Permutation::transposition(2, 0, 1)).unwrap_err();
        assert_eq!(err, Error::NonStabilizedSubfamily);
    }

    #[test]
    fn works_on_simplified_families() {
        let fam = ColoredSetFamily::uncolored(4, &[&[0, 1], &[2, 3], &[1, 2]]).unwrap();
        let s = simplify(&fam);
        // sets sorted: {0,1}, {1,2}, {2,3}
        let swap_ends = Permutation::transposition(3, 0, 2);
        let swap_first = Permutation::transposition(3, 0, 1);
        assert!(venn_good(&s, &[0, 1, 2], &swap_ends).unwrap());
        assert!(!venn_good(&s, &[0, 1, 2], &swap_first).unwrap());
    }
}
