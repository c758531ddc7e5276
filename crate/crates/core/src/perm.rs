//! Permutations and explicitly enumerated permutation groups.
//!
//! Products compose right to left: `a.compose(&b)` applies `b` first. The
//! commutator is `(g, h) = g h g⁻¹ h⁻¹` throughout the crate.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    /// Checks that `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Malformed(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        Permutation { images }
    }

    /// Builds a permutation of `degree` points from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::Malformed(format!("cycle point out of range in {cycle:?}")));
                }
                images[a] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse()).compose(&other.inverse())
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    pub fn pow(&self, exp: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..exp {
            acc = acc.compose(self);
        }
        acc
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Breadth-first closure of `gens` under right multiplication.
///
/// Element `i > 0` equals `elements[parent] ∘ gens[gen]` for
/// `tree[i] = Some((parent, gen))`. Since the queue is processed in order and
/// generators are tried by index, the tree path to each element spells the
/// shortlex-least positive generator word reaching it.
pub(crate) struct Closure {
    pub elements: Vec<Permutation>,
    pub index: HashMap<Permutation, usize>,
    pub tree: Vec<Option<(usize, usize)>>,
}

pub(crate) fn bfs_closure(degree: usize, gens: &[Permutation], cap: usize) -> Result<Closure> {
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut tree = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for (g, gen) in gens.iter().enumerate() {
            let next = elements[cur].compose(gen);
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Resource { what: "permutation group closure", cap });
            }
            index.insert(next.clone(), elements.len());
            elements.push(next);
            tree.push(Some((cur, g)));
            queue.push_back(elements.len() - 1);
        }
    }
    Ok(Closure { elements, index, tree })
}

/// A permutation group with its full element list materialized.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    tree: Vec<Option<(usize, usize)>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.elements.iter().all(|e| other.contains(e))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// The subgroup generated by `gens`; elements are listed in breadth-first order.
    pub fn generate(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<PermGroup> {
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::Malformed(format!(
                "generator of degree {} in a group of degree {degree}",
                bad.degree()
            )));
        }
        let Closure { elements, index, tree } = bfs_closure(degree, &gens, cap)?;
        Ok(PermGroup { degree, generators: gens, elements, index, tree })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::generate(degree, Vec::new(), 1).expect("trivial group fits any cap")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Generator indices of the shortlex-least positive word for element `i`.
    pub fn word_for(&self, mut i: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((parent, gen)) = self.tree[i] {
            word.push(gen);
            i = parent;
        }
        word.reverse();
        word
    }

    /// The breadth-first spanning tree: `(parent, generator)` per element.
    pub fn tree(&self) -> &[Option<(usize, usize)>] {
        &self.tree
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Pairwise commutation of generators.
    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..].iter().all(|b| a.compose(b) == b.compose(a))
        })
    }

    /// Smallest subgroup of `self` containing `seeds` and normalized by `self`.
    fn normal_closure(&self, seeds: impl IntoIterator<Item = Permutation>, cap: usize) -> Result<PermGroup> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut current = PermGroup::trivial(self.degree);
        let mut pending: VecDeque<Permutation> = seeds.into_iter().collect();
        while let Some(p) = pending.pop_front() {
            if current.contains(&p) {
                continue;
            }
            gens.push(p.clone());
            current = PermGroup::generate(self.degree, gens.clone(), cap)?;
            for c in &self.generators {
                let ci = c.inverse();
                for g in &gens {
                    pending.push_back(c.compose(g).compose(&ci));
                }
            }
        }
        Ok(current)
    }

    /// `Γ₁ = G`, `Γ_{k+1}` the normal closure of `(g, h)` for `g ∈ Γ_k` and `h` a generator.
    pub fn lower_central_series(&self, cap: usize) -> Result<GroupSeries> {
        let mut chain = vec![self.clone()];
        loop {
            let last = chain.last().expect("chain starts nonempty");
            let mut seeds = HashSet::new();
            for g in last.elements() {
                for h in &self.generators {
                    let c = g.commutator(h);
                    if !c.is_identity() {
                        seeds.insert(c);
                    }
                }
            }
            let mut seeds: Vec<_> = seeds.into_iter().collect();
            seeds.sort();
            let next = self.normal_closure(seeds, cap)?;
            if next.order() == last.order() {
                break;
            }
            chain.push(next);
        }
        Ok(GroupSeries { kind: SeriesKind::LowerCentral, chain })
    }

    pub fn derived_series(&self, cap: usize) -> Result<GroupSeries> {
        let mut chain = vec![self.clone()];
        loop {
            let last = chain.last().expect("chain starts nonempty");
            let mut seeds = HashSet::new();
            for a in last.generators() {
                for b in last.generators() {
                    let c = a.commutator(b);
                    if !c.is_identity() {
                        seeds.insert(c);
                    }
                }
            }
            let mut seeds: Vec<_> = seeds.into_iter().collect();
            seeds.sort();
            let next = last.normal_closure(seeds, cap)?;
            if next.order() == last.order() {
                break;
            }
            chain.push(next);
        }
        Ok(GroupSeries { kind: SeriesKind::Derived, chain })
    }

    pub fn is_nilpotent(&self, cap: usize) -> Result<bool> {
        Ok(self.lower_central_series(cap)?.reaches_trivial())
    }

    pub fn is_solvable(&self, cap: usize) -> Result<bool> {
        Ok(self.derived_series(cap)?.reaches_trivial())
    }
}

/// Shorthand for [`PermGroup::generate`].
pub fn subgroup_closure(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<PermGroup> {
    PermGroup::generate(degree, gens, cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

/// A strictly descending chain `G = G₀ ⊋ G₁ ⊋ …` that stops once it stabilizes.
#[derive(Debug, Clone)]
pub struct GroupSeries {
    pub kind: SeriesKind,
    pub chain: Vec<PermGroup>,
}

impl GroupSeries {
    pub fn reaches_trivial(&self) -> bool {
        self.chain.last().is_some_and(PermGroup::is_trivial)
    }

    /// Nilpotency class (lower central) or derived length, when the chain ends in `{1}`.
    pub fn length(&self) -> Option<usize> {
        self.reaches_trivial().then(|| self.chain.len() - 1)
    }

    pub fn orders(&self) -> Vec<usize> {
        self.chain.iter().map(PermGroup::order).collect()
    }
}
