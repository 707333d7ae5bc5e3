//! Permutation groups given by generators, backed by a deterministic
//! Schreier–Sims stabilizer chain.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::par;
use crate::perm::Permutation;

/// One level of a stabilizer chain: a base point, the strong generators
/// fixing all earlier base points, and a transversal of the base point's
/// orbit (`transversal[x]` maps the base point to `x`).
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
    // number of generators already combined with each orbit point
    processed: Vec<usize>,
}

impl Level {
    fn new(n: usize, base: usize) -> Self {
        let mut transversal = vec![None; n];
        let mut inverse = vec![None; n];
        transversal[base] = Some(Permutation::identity(n));
        inverse[base] = Some(Permutation::identity(n));
        Self {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            inverse,
            processed: vec![0],
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    n: usize,
    levels: Vec<Level>,
    // input generators that enlarged the group when added, in input order
    essential: Vec<Permutation>,
    // order of the generated group when known in advance
    target: Option<(BigUint, f64)>,
    log_order: f64,
    complete: bool,
}

impl StabChain {
    fn build(n: usize, gens: &[Permutation]) -> Self {
        Self::build_inner(n, gens, None)
    }

    /// Chain for a group whose order is known. Construction stops as soon
    /// as the product of the orbit lengths reaches `order`, at which point
    /// the chain is complete.
    ///
    /// Levels hold cumulative strong generators: a residue that first fails
    /// to sift at level `j` is added to every level up to `j`. Schreier
    /// generators are sifted only when the inputs fall short of `order`.
    fn build_with_order(n: usize, gens: &[Permutation], order: BigUint) -> Self {
        let mut chain = Self::build_inner(n, &[], Some(order));
        for g in gens {
            if chain.complete {
                break;
            }
            let (residue, j) = chain.strip(g.clone(), 0);
            if !residue.is_identity() {
                chain.essential.push(g.clone());
                chain.insert(residue, j);
            }
        }
        while !chain.complete {
            match chain.failing_schreier_generator() {
                Some((residue, j)) => chain.insert(residue, j),
                None => break,
            }
        }
        if !chain.complete {
            return Self::build(n, gens);
        }
        chain
    }

    fn insert(&mut self, residue: Permutation, j: usize) {
        if j == self.levels.len() {
            let base = residue.first_moved().expect("non-identity residue");
            self.levels.push(Level::new(self.n, base));
        }
        for level in &mut self.levels[..=j] {
            level.gens.push(residue.clone());
        }
        for i in (0..=j).rev() {
            self.extend_orbit(i);
            if self.complete {
                return;
            }
        }
    }

    fn extend_orbit(&mut self, i: usize) {
        let mut oi = 0;
        while oi < self.levels[i].orbit.len() {
            while self.levels[i].processed[oi] < self.levels[i].gens.len() {
                let level = &mut self.levels[i];
                let gi = level.processed[oi];
                level.processed[oi] += 1;
                let beta = level.orbit[oi];
                let s = &level.gens[gi];
                let gamma = s.apply(beta);
                if level.inverse[gamma].is_none() {
                    let u = level.transversal[beta].as_ref().unwrap().then(s);
                    level.inverse[gamma] = Some(u.inverse());
                    level.transversal[gamma] = Some(u);
                    level.orbit.push(gamma);
                    level.processed.push(0);
                    let len = level.orbit.len();
                    self.grew(len - 1);
                    if self.complete {
                        return;
                    }
                }
            }
            oi += 1;
        }
    }

    fn failing_schreier_generator(&self) -> Option<(Permutation, usize)> {
        for (i, level) in self.levels.iter().enumerate() {
            for &beta in &level.orbit {
                let u = level.transversal[beta].as_ref().unwrap();
                for s in &level.gens {
                    let gamma = s.apply(beta);
                    let h = u.then(s).then(level.inverse[gamma].as_ref().unwrap());
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.strip(h, i + 1);
                    if !residue.is_identity() {
                        return Some((residue, j));
                    }
                }
            }
        }
        None
    }

    fn build_inner(n: usize, gens: &[Permutation], order: Option<BigUint>) -> Self {
        let complete = order.as_ref().is_some_and(|o| o.is_one());
        let target = order.map(|o| {
            let bits = o.bits() as f64;
            (o, bits)
        });
        let mut chain = StabChain {
            n,
            levels: Vec::new(),
            essential: Vec::new(),
            target,
            log_order: 0.0,
            complete,
        };
        for g in gens {
            if chain.complete {
                break;
            }
            if g.is_identity() {
                continue;
            }
            let (residue, _) = chain.strip(g.clone(), 0);
            if !residue.is_identity() {
                chain.essential.push(g.clone());
                chain.add_gen(0, g.clone());
            }
        }
        chain
    }

    fn grew(&mut self, old_len: usize) {
        let Some((order, bits)) = &self.target else {
            return;
        };
        self.log_order += ((old_len + 1) as f64).log2() - (old_len as f64).log2();
        if self.log_order + 2.0 >= *bits && &self.order() == order {
            self.complete = true;
        }
    }

    /// Sifts `g` through levels `start..`; returns the residue and the
    /// level at which sifting stopped (`levels.len()` if it went through).
    fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let image = g.apply(level.base);
            if image == level.base {
                continue;
            }
            match &level.inverse[image] {
                None => return (g, l),
                Some(inv) => g = g.then(inv),
            }
        }
        (g, self.levels.len())
    }

    /// Adds `g` (which fixes the first `i` base points) to the strong
    /// generators of level `i` and restores the invariant that every
    /// Schreier generator of that level sifts through the levels below.
    fn add_gen(&mut self, i: usize, g: Permutation) {
        if i == self.levels.len() {
            let base = g.first_moved().expect("non-identity generator");
            self.levels.push(Level::new(self.n, base));
        }
        self.levels[i].gens.push(g);
        let mut oi = 0;
        while oi < self.levels[i].orbit.len() {
            while self.levels[i].processed[oi] < self.levels[i].gens.len() {
                let level = &mut self.levels[i];
                let gi = level.processed[oi];
                level.processed[oi] += 1;
                let beta = level.orbit[oi];
                let s = &level.gens[gi];
                let gamma = s.apply(beta);
                let u_beta_s = level.transversal[beta].as_ref().unwrap().then(s);
                match &level.inverse[gamma] {
                    None => {
                        level.inverse[gamma] = Some(u_beta_s.inverse());
                        level.transversal[gamma] = Some(u_beta_s);
                        level.orbit.push(gamma);
                        level.processed.push(0);
                        let len = level.orbit.len();
                        self.grew(len - 1);
                        if self.complete {
                            return;
                        }
                    }
                    Some(inv) => {
                        let h = u_beta_s.then(inv);
                        if h.is_identity() {
                            continue;
                        }
                        let (residue, _) = self.strip(h, i + 1);
                        if !residue.is_identity() {
                            self.add_gen(i + 1, residue);
                            if self.complete {
                                return;
                            }
                        }
                    }
                }
            }
            oi += 1;
        }
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    fn contains(&self, g: &Permutation) -> bool {
        let (residue, _) = self.strip(g.clone(), 0);
        residue.is_identity()
    }
}

/// A permutation group on `{0, .., domain_size-1}` given by generators.
///
/// The stabilizer chain is computed on first use and cached; the value is
/// immutable afterwards, so shared references may be used from several
/// threads.
#[derive(Clone, Debug)]
pub struct PermGroup {
    domain_size: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(domain_size: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.domain_size() != domain_size {
                return Err(Error::DomainMismatch {
                    expected: domain_size,
                    found: g.domain_size(),
                });
            }
        }
        Ok(Self {
            domain_size,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(domain_size: usize) -> Self {
        Self {
            domain_size,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// Group generated by `generators` with its stabilizer chain built.
    pub fn schreier_sims(domain_size: usize, generators: Vec<Permutation>) -> Result<Self> {
        let g = Self::new(domain_size, generators)?;
        g.chain();
        Ok(g)
    }

    /// Same group, generated only by the input generators that enlarged
    /// the group when added in order.
    pub fn pruned(&self) -> PermGroup {
        let chain = self.chain().clone();
        PermGroup {
            domain_size: self.domain_size,
            generators: chain.essential.clone(),
            chain: OnceLock::from(chain),
        }
    }

    fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.domain_size, &self.generators))
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for level in &self.chain().levels {
            for g in &level.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain().levels.is_empty()
    }

    /// Membership by sifting through the stabilizer chain.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.domain_size() != self.domain_size {
            return Err(Error::DomainMismatch {
                expected: self.domain_size,
                found: p.domain_size(),
            });
        }
        Ok(self.chain().contains(p))
    }

    /// `true` if every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of element sets via mutual membership of generators.
    pub fn same_elements(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.is_subgroup_of(other)? && other.is_subgroup_of(self)?)
    }

    /// Direct product of the symmetric groups on the given disjoint parts;
    /// points outside every part are fixed.
    pub fn symmetric_product(parts: &[Vec<usize>], domain_size: usize) -> Result<Self> {
        let mut used = vec![false; domain_size];
        let mut gens = Vec::new();
        for part in parts {
            for &x in part {
                if x >= domain_size {
                    return Err(Error::InvalidPartition(format!(
                        "point {x} outside domain of size {domain_size}"
                    )));
                }
                if used[x] {
                    return Err(Error::InvalidPartition(format!("point {x} in two parts")));
                }
                used[x] = true;
            }
            if part.len() >= 2 {
                gens.push(Permutation::transposition(domain_size, part[0], part[1]));
                if part.len() >= 3 {
                    gens.push(Permutation::cycle(domain_size, part));
                }
            }
        }
        Self::new(domain_size, gens)
    }

    /// Generators of `{g in self : predicate(g)}`, which must be a subgroup
    /// of index at most `index_bound`.
    ///
    /// Right-coset representatives are grown from the identity: for each
    /// representative `r` and generator `s`, `r*s` either lands in the coset
    /// of a known representative `r'` (detected by `predicate(r*s*r'^-1)`),
    /// contributing the Schreier generator `r*s*r'^-1`, or becomes a new
    /// representative.
    pub fn subgroup_by_membership<P>(&self, predicate: P, index_bound: u128) -> Result<PermGroup>
    where
        P: Fn(&Permutation) -> bool + Sync + Send,
    {
        let n = self.domain_size;
        let mut reps = vec![Permutation::identity(n)];
        let mut inv_reps = vec![Permutation::identity(n)];
        let mut schreier: Vec<Permutation> = Vec::new();
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut idx = 0;
        while idx < reps.len() {
            for s in &self.generators {
                let x = reps[idx].then(s);
                let hit = par::position_first(&inv_reps, |rinv| predicate(&x.then(rinv)));
                match hit {
                    Some(j) => {
                        let h = x.then(&inv_reps[j]);
                        if !h.is_identity() && seen.insert(h.clone()) {
                            schreier.push(h);
                        }
                    }
                    None => {
                        if reps.len() as u128 >= index_bound {
                            return Err(Error::IndexBoundExceeded { bound: index_bound });
                        }
                        inv_reps.push(x.inverse());
                        reps.push(x);
                    }
                }
            }
            idx += 1;
        }
        let order = self.order() / BigUint::from(reps.len());
        let chain = StabChain::build_with_order(n, &schreier, order);
        Ok(PermGroup {
            domain_size: n,
            generators: chain.essential.clone(),
            chain: OnceLock::from(chain),
        })
    }

    /// The action on an invariant subdomain, re-indexed so that
    /// `subdomain[k]` becomes point `k`.
    pub fn restrict(&self, subdomain: &[usize]) -> Result<PermGroup> {
        let mut index = vec![usize::MAX; self.domain_size];
        for (k, &x) in subdomain.iter().enumerate() {
            if x >= self.domain_size || index[x] != usize::MAX {
                return Err(Error::InvalidPartition(format!(
                    "subdomain point {x} out of range or repeated"
                )));
            }
            index[x] = k;
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut images = Vec::with_capacity(subdomain.len());
            for &x in subdomain {
                let k = index[g.apply(x)];
                if k == usize::MAX {
                    return Err(Error::NonInvariantSubdomain { generator: gi });
                }
                images.push(k as u32);
            }
            let p = Permutation::from_images(images)?;
            if !p.is_identity() {
                gens.push(p);
            }
        }
        PermGroup::new(subdomain.len(), gens)
    }
}
