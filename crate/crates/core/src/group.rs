//! Finite groups given by Cayley tables, plus a small library of groups of
//! order at most 12.

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    id: usize,
}

impl FiniteGroup {
    /// Validates a Cayley table: closure, identity, inverses and associativity.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::Malformed("a group needs at least one element".into()));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= n) {
                return Err(Error::Malformed(format!("entry {bad} out of range in row {i}")));
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::Domain("Cayley table has no identity".into()))?;
        let mut inv = vec![0; n];
        for x in 0..n {
            inv[x] = (0..n)
                .find(|&y| mul[x][y] == id && mul[y][x] == id)
                .ok_or_else(|| Error::Domain(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Domain(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { mul, inv, id })
    }

    /// Group whose elements are `0..n` with product `f`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
        let mul = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        FiniteGroup::from_table(mul)
    }

    /// The permutation group generated by `gens`, relabelled as a Cayley table.
    pub fn from_permutations(degree: usize, gens: Vec<Permutation>) -> Result<FiniteGroup> {
        let g = PermGroup::generate(degree, gens, usize::MAX)?;
        let elems = g.elements();
        FiniteGroup::from_fn(elems.len(), |a, b| {
            g.index_of(&elems[a].compose(&elems[b])).expect("closure is closed")
        })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// `y ↦ g·y` for every `g`, as permutations of the underlying set.
    pub fn left_regular(&self) -> Vec<Permutation> {
        (0..self.order())
            .map(|g| Permutation::from_images_unchecked(self.mul[g].clone()))
            .collect()
    }

    /// The left-regular permutation image of the whole group.
    pub fn regular_perm_group(&self) -> PermGroup {
        PermGroup::generate(self.order(), self.left_regular(), self.order() + 1)
            .expect("left-regular image has exactly |G| elements")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (a..self.order()).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.regular_perm_group()
            .is_nilpotent(usize::MAX)
            .expect("cap is unbounded")
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order();
        FiniteGroup::from_fn(self.order() * m, |a, b| {
            self.mul(a / m, b / m) * m + other.mul(a % m, b % m)
        })
        .expect("product of groups is a group")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1, "cyclic group of order 0");
        FiniteGroup::from_fn(n, |a, b| (a + b) % n).expect("ℤ/n is a group")
    }

    /// Dihedral group of order `2n`: `r^a s^b` is encoded as `2a + b`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        FiniteGroup::from_fn(2 * n, |x, y| {
            let (a, b) = (x / 2, x % 2);
            let (c, d) = (y / 2, y % 2);
            // r^a s^b r^c s^d = r^(a ± c) s^(b+d)
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            2 * rot + (b + d) % 2
        })
        .expect("dihedral group")
    }

    /// Dicyclic group of order `4n`: `⟨a, x | a^2n, x² = aⁿ, x a x⁻¹ = a⁻¹⟩`,
    /// `a^i x^j` encoded as `2i + j`. `dicyclic(2)` is the quaternion group.
    pub fn dicyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let m = 2 * n;
        FiniteGroup::from_fn(2 * m, |x, y| {
            let (i, j) = (x / 2, x % 2);
            let (k, l) = (y / 2, y % 2);
            if j == 0 {
                2 * ((i + k) % m) + l
            } else if l == 0 {
                2 * ((i + m - k) % m) + 1
            } else {
                2 * ((i + m - k + n) % m)
            }
        })
        .expect("dicyclic group")
    }

    pub fn quaternion() -> FiniteGroup {
        FiniteGroup::dicyclic(2)
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).expect("transposition"));
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).expect("n-cycle"));
        }
        FiniteGroup::from_permutations(n.max(1), gens).expect("symmetric group")
    }

    /// Alternating group on four points, order 12.
    pub fn alternating4() -> FiniteGroup {
        FiniteGroup::from_permutations(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1, 2]]).expect("3-cycle"),
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).expect("double transposition"),
            ],
        )
        .expect("A4")
    }
}

/// One representative of every isomorphism class of groups of order ≤ 12.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let c = FiniteGroup::cyclic;
    let mut out: Vec<(String, FiniteGroup)> = (1..=12).map(|n| (format!("Z{n}"), c(n))).collect();
    out.extend([
        ("Z2xZ2".to_string(), c(2).direct_product(&c(2))),
        ("S3".to_string(), FiniteGroup::dihedral(3)),
        ("Z2xZ4".to_string(), c(2).direct_product(&c(4))),
        ("Z2xZ2xZ2".to_string(), c(2).direct_product(&c(2)).direct_product(&c(2))),
        ("D4".to_string(), FiniteGroup::dihedral(4)),
        ("Q8".to_string(), FiniteGroup::quaternion()),
        ("Z3xZ3".to_string(), c(3).direct_product(&c(3))),
        ("D5".to_string(), FiniteGroup::dihedral(5)),
        ("Z2xZ6".to_string(), c(2).direct_product(&c(6))),
        ("D6".to_string(), FiniteGroup::dihedral(6)),
        ("Dic3".to_string(), FiniteGroup::dicyclic(3)),
        ("A4".to_string(), FiniteGroup::alternating4()),
    ]);
    out.sort_by_key(|(name, g)| (g.order(), name.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_has_the_24_groups_of_order_at_most_12() {
        let groups = small_groups();
        assert_eq!(groups.len(), 24);
        let mut per_order = [0usize; 13];
        for (_, g) in &groups {
            per_order[g.order()] += 1;
        }
        assert_eq!(per_order[1..], [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]);
    }

    #[test]
    fn abelian_and_nilpotent_flags() {
        let groups = small_groups();
        let get = |n: &str| groups.iter().find(|(m, _)| m == n).unwrap().1.clone();
        assert!(!get("S3").is_abelian());
        assert!(!get("S3").is_nilpotent());
        assert!(get("D4").is_nilpotent());
        assert!(get("Q8").is_nilpotent());
        assert!(!get("Q8").is_abelian());
        assert!(!get("A4").is_nilpotent());
        assert!(!get("Dic3").is_nilpotent());
        assert!(get("Z2xZ6").is_abelian());
    }

    #[test]
    fn dihedral_and_symmetric_agree_on_order_six() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert!(!FiniteGroup::symmetric(3).is_abelian());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(matches!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]), Err(Error::Malformed(_))));
        assert!(matches!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]), Err(Error::Domain(_))));
        assert!(matches!(FiniteGroup::from_table(vec![vec![0, 2], vec![1, 0]]), Err(Error::Malformed(_))));
    }
}
