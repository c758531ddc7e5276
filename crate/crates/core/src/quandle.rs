//! Finite quandles as operation tables over `0..n`.

use std::collections::BTreeSet;

use crate::caps::Caps;
use crate::error::{Axiom, AxiomViolation, Error, Result};
use crate::group::FiniteGroup;
use crate::perm::{PermGroup, Permutation};

/// A validated finite quandle; `table[x][y] = x ▷ y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuandle {
    table: Vec<Vec<usize>>,
}

fn check_shape(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Malformed("a quandle needs at least one element".into()));
    }
    for (x, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!("row {x} has {} entries, expected {n}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&e| e >= n) {
            return Err(Error::Malformed(format!("entry {bad} out of range in row {x}")));
        }
    }
    Ok(())
}

/// The first violated axiom, checked in the order a, b, c.
pub fn first_violation(table: &[Vec<usize>]) -> Result<Option<AxiomViolation>> {
    check_shape(table)?;
    let n = table.len();
    if let Some(x) = (0..n).find(|&x| table[x][x] != x) {
        return Ok(Some(AxiomViolation { axiom: Axiom::Idempotence, witness: vec![x] }));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table[x][table[y][z]] != table[table[x][y]][table[x][z]] {
                    return Ok(Some(AxiomViolation {
                        axiom: Axiom::SelfDistributivity,
                        witness: vec![x, y, z],
                    }));
                }
            }
        }
    }
    for (x, row) in table.iter().enumerate() {
        let mut hit = vec![None; n];
        for (y, &v) in row.iter().enumerate() {
            if let Some(y1) = hit[v] {
                return Ok(Some(AxiomViolation { axiom: Axiom::LeftInvertibility, witness: vec![x, y1, y] }));
            }
            hit[v] = Some(y);
        }
    }
    Ok(None)
}

pub fn validate_quandle(table: Vec<Vec<usize>>) -> Result<FiniteQuandle> {
    match first_violation(&table)? {
        None => Ok(FiniteQuandle { table }),
        Some(v) => Err(Error::Axiom(v)),
    }
}

pub fn trivial_quandle(n: usize) -> Result<FiniteQuandle> {
    if n == 0 {
        return Err(Error::Domain("trivial quandle needs n ≥ 1".into()));
    }
    Ok(FiniteQuandle { table: vec![(0..n).collect(); n] })
}

/// `x ▷ y = x y x⁻¹` on the elements of `g`.
pub fn conj_quandle(g: &FiniteGroup) -> FiniteQuandle {
    let n = g.order();
    let table = (0..n)
        .map(|x| (0..n).map(|y| g.mul(g.mul(x, y), g.inv(x))).collect())
        .collect();
    FiniteQuandle { table }
}

/// `x ▷ y = x y⁻¹ x` on the elements of `g`.
pub fn core_quandle(g: &FiniteGroup) -> FiniteQuandle {
    let n = g.order();
    let table = (0..n)
        .map(|x| (0..n).map(|y| g.mul(g.mul(x, g.inv(y)), x)).collect())
        .collect();
    FiniteQuandle { table }
}

/// Dihedral quandle `R_n`: `x ▷ y = 2x − y mod n`.
pub fn dihedral_quandle(n: usize) -> Result<FiniteQuandle> {
    if n == 0 {
        return Err(Error::Domain("dihedral quandle needs n ≥ 1".into()));
    }
    let table = (0..n).map(|x| (0..n).map(|y| (2 * x + n - y) % n).collect()).collect();
    validate_quandle(table)
}

/// The three-element quandle `{x, y, z}` (indices 0, 1, 2) where `y` swaps `x`
/// and `z` and both `x`, `z` act trivially.
pub fn q3_example() -> FiniteQuandle {
    FiniteQuandle { table: vec![vec![0, 1, 2], vec![2, 1, 0], vec![0, 1, 2]] }
}

/// A partition of `0..n` into sorted blocks, ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Malformed("empty block in partition".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n || seen[i] {
                    return Err(Error::Malformed(format!("blocks do not partition 0..{n}")));
                }
                seen[i] = true;
            }
        }
        blocks.sort();
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok()).expect("x lies in some block")
    }
}

impl FiniteQuandle {
    /// Test helper and parser target: trusts the caller that the table is a quandle.
    pub(crate) fn from_table_unchecked(table: Vec<Vec<usize>>) -> FiniteQuandle {
        debug_assert!(matches!(first_violation(&table), Ok(None)));
        FiniteQuandle { table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|row| row.iter().enumerate().all(|(y, &v)| v == y))
    }

    /// `L_x : y ↦ x ▷ y`.
    pub fn left_translation(&self, x: usize) -> Permutation {
        Permutation::from_images_unchecked(self.table[x].clone())
    }

    pub fn translations(&self) -> Vec<Permutation> {
        (0..self.len()).map(|x| self.left_translation(x)).collect()
    }

    /// `Inn(Q)`, with generator `i` equal to `L_i`.
    pub fn inner_group(&self, caps: &Caps) -> Result<PermGroup> {
        PermGroup::generate(self.len(), self.translations(), caps.closure)
    }

    /// Orbits of `Inn(Q)`.
    pub fn orbits(&self) -> Partition {
        let all: Vec<usize> = (0..self.len()).collect();
        Partition::new(orbits_within(self, &all)).expect("orbits partition Q")
    }

    pub fn is_indecomposable(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Whether `subset` is closed under `▷` (hence a subquandle, `Q` being finite).
    pub fn is_subquandle(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        subset.iter().all(|&a| subset.iter().all(|&b| member[self.op(a, b)]))
    }

    /// The quandle induced on a closed subset, relabelled by position in `subset`.
    pub fn subquandle(&self, subset: &[usize]) -> Result<FiniteQuandle> {
        if subset.is_empty() || !self.is_subquandle(subset) {
            return Err(Error::Domain(format!("{subset:?} is not a subquandle")));
        }
        let pos = |v: usize| subset.iter().position(|&s| s == v).expect("closed subset");
        let table = subset
            .iter()
            .map(|&a| subset.iter().map(|&b| pos(self.op(a, b))).collect())
            .collect();
        Ok(FiniteQuandle { table })
    }

    /// Maximal indecomposable subquandles `Q_x`, found by enumerating every subset.
    pub fn indecomposable_components(&self, caps: &Caps) -> Result<Partition> {
        let n = self.len();
        if n > caps.component_size || n >= usize::BITS as usize {
            return Err(Error::Resource { what: "subquandle enumeration size", cap: caps.component_size });
        }
        // best[x] = largest indecomposable subquandle through x, as a bitmask
        let mut best: Vec<u64> = (0..n).map(|x| 1u64 << x).collect();
        let mut through: Vec<Vec<u64>> = vec![Vec::new(); n];
        for mask in 1u64..(1u64 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !self.is_subquandle(&subset) || orbits_within(self, &subset).len() != 1 {
                continue;
            }
            for &x in &subset {
                through[x].push(mask);
                if mask.count_ones() > best[x].count_ones() {
                    best[x] = mask;
                }
            }
        }
        for x in 0..n {
            if let Some(&m) = through[x].iter().find(|&&m| m & !best[x] != 0) {
                return Err(Error::Internal(format!(
                    "indecomposable subquandles through {x} have no common upper bound ({m:#b} vs {:#b})",
                    best[x]
                )));
            }
        }
        let blocks: BTreeSet<u64> = best.into_iter().collect();
        let blocks = blocks
            .into_iter()
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        Partition::new(blocks)
            .map_err(|_| Error::Internal("maximal indecomposable subquandles overlap".into()))
    }

    /// Disjoint-union quandle where `self` and `other` act trivially on each other.
    pub fn disjoint_union(&self, other: &FiniteQuandle) -> FiniteQuandle {
        let (n, m) = (self.len(), other.len());
        let table = (0..n + m)
            .map(|x| {
                (0..n + m)
                    .map(|y| match (x < n, y < n) {
                        (true, true) => self.op(x, y),
                        (false, false) => n + other.op(x - n, y - n),
                        _ => y,
                    })
                    .collect()
            })
            .collect();
        FiniteQuandle { table }
    }
}

/// Orbits of `subset` under the translations `L_a`, `a ∈ subset`.
fn orbits_within(q: &FiniteQuandle, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut block = vec![usize::MAX; q.len()];
    let mut blocks = Vec::new();
    for &start in subset {
        if block[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        block[start] = id;
        let mut i = 0;
        while i < members.len() {
            let y = members[i];
            for &a in subset {
                let v = q.op(a, y);
                if block[v] == usize::MAX {
                    block[v] = id;
                    members.push(v);
                }
            }
            i += 1;
        }
        blocks.push(members);
    }
    blocks
}

pub fn left_translation(q: &FiniteQuandle, x: usize) -> Permutation {
    q.left_translation(x)
}

pub fn inner_group(q: &FiniteQuandle, caps: &Caps) -> Result<PermGroup> {
    q.inner_group(caps)
}

pub fn orbits(q: &FiniteQuandle) -> Partition {
    q.orbits()
}

pub fn is_indecomposable(q: &FiniteQuandle) -> bool {
    q.is_indecomposable()
}

pub fn indecomposable_components(q: &FiniteQuandle, caps: &Caps) -> Result<Partition> {
    q.indecomposable_components(caps)
}

/// Whether `f(a ▷ b) = f(a) ▷' f(b)` for all pairs.
pub fn is_morphism(source: &FiniteQuandle, target: &FiniteQuandle, f: &[usize]) -> bool {
    f.len() == source.len()
        && f.iter().all(|&v| v < target.len())
        && (0..source.len()).all(|a| {
            (0..source.len()).all(|b| f[source.op(a, b)] == target.op(f[a], f[b]))
        })
}

/// All quandle morphisms `source → target`, sorted lexicographically.
///
/// Backtracks over partial maps; after each choice the forced values
/// `f(a ▷ b) = f(a) ▷ f(b)` are propagated and contradictions prune the branch.
pub fn enumerate_morphisms(
    source: &FiniteQuandle,
    target: &FiniteQuandle,
    caps: &Caps,
) -> Result<Vec<Vec<usize>>> {
    let mut search = MorphismSearch {
        source,
        target,
        assignment: vec![None; source.len()],
        found: Vec::new(),
        nodes: 0,
        cap: caps.morphism_nodes,
    };
    search.descend()?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}

struct MorphismSearch<'a> {
    source: &'a FiniteQuandle,
    target: &'a FiniteQuandle,
    assignment: Vec<Option<usize>>,
    found: Vec<Vec<usize>>,
    nodes: usize,
    cap: usize,
}

impl MorphismSearch<'_> {
    /// Closes the assignment under forced values; returns the newly set indices,
    /// or `None` (after undoing them) on a contradiction.
    fn propagate(&mut self, start: usize) -> Option<Vec<usize>> {
        let mut set = vec![start];
        let mut queue = vec![start];
        while let Some(a) = queue.pop() {
            let fa = self.assignment[a].expect("queued entries are assigned");
            for b in 0..self.source.len() {
                let Some(fb) = self.assignment[b] else { continue };
                for (x, y, fx, fy) in [(a, b, fa, fb), (b, a, fb, fa)] {
                    let z = self.source.op(x, y);
                    let fz = self.target.op(fx, fy);
                    match self.assignment[z] {
                        Some(v) if v != fz => {
                            for &i in &set {
                                self.assignment[i] = None;
                            }
                            return None;
                        }
                        Some(_) => {}
                        None => {
                            self.assignment[z] = Some(fz);
                            set.push(z);
                            queue.push(z);
                        }
                    }
                }
            }
        }
        Some(set)
    }

    fn descend(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::Resource { what: "morphism search nodes", cap: self.cap });
        }
        let Some(next) = self.assignment.iter().position(Option::is_none) else {
            self.found.push(self.assignment.iter().map(|v| v.expect("complete")).collect());
            return Ok(());
        };
        for value in 0..self.target.len() {
            self.assignment[next] = Some(value);
            if let Some(set) = self.propagate(next) {
                self.descend()?;
                for i in set {
                    self.assignment[i] = None;
                }
            }
        }
        self.assignment[next] = None;
        Ok(())
    }
}
