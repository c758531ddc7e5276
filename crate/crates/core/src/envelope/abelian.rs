use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntRow, SmithForm};

/// `ℤ^rank × ℤ/m₁ × ⋯ × ℤ/m_k` with `2 ≤ m₁ | m₂ | ⋯`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelian {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// An element of an [`FgAbelian`]: free coordinates, then residues in `[0, mᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KCoordinates {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl KCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn free_is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }

    /// Free coordinates followed by torsion residues.
    pub fn flat(&self) -> IntRow {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }
}

impl fmt::Display for KCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        let tors: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "[{}; {}]", free.join(", "), tors.join(", "))
    }
}

impl FgAbelian {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<FgAbelian> {
        if torsion.iter().any(|m| m < &BigInt::from(2)) {
            return Err(Error::Contract("invariant factors must be at least 2".into()));
        }
        if torsion.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(Error::Contract("invariant factors must form a divisor chain".into()));
        }
        Ok(FgAbelian { rank, torsion })
    }

    pub fn free(rank: usize) -> FgAbelian {
        FgAbelian { rank, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().fold(BigUint::one(), |acc, m| acc * m.magnitude())
    }

    /// Number of coordinates (`rank + #torsion`).
    pub fn width(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn zero(&self) -> KCoordinates {
        KCoordinates { free: vec![BigInt::zero(); self.rank], torsion: vec![BigInt::zero(); self.torsion.len()] }
    }

    /// The `i`-th canonical generator: free generators first, then torsion.
    pub fn unit(&self, i: usize) -> KCoordinates {
        let mut k = self.zero();
        if i < self.rank {
            k.free[i] = BigInt::one();
        } else {
            k.torsion[i - self.rank] = BigInt::one();
        }
        k
    }

    fn reduce(&self, k: &mut KCoordinates) {
        for (r, m) in k.torsion.iter_mut().zip(&self.torsion) {
            *r = r.mod_floor(m);
        }
    }

    /// Element with the given flat coordinates, torsion residues reduced.
    pub fn from_flat(&self, flat: &[BigInt]) -> KCoordinates {
        assert_eq!(flat.len(), self.width(), "coordinate width");
        let mut k = KCoordinates { free: flat[..self.rank].to_vec(), torsion: flat[self.rank..].to_vec() };
        self.reduce(&mut k);
        k
    }

    pub fn add(&self, a: &KCoordinates, b: &KCoordinates) -> KCoordinates {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    pub fn add_assign(&self, a: &mut KCoordinates, b: &KCoordinates) {
        for (x, y) in a.free.iter_mut().zip(&b.free) {
            *x += y;
        }
        for ((x, y), m) in a.torsion.iter_mut().zip(&b.torsion).zip(&self.torsion) {
            *x += y;
            if &*x >= m {
                *x -= m;
            }
        }
    }

    pub fn sub_assign(&self, a: &mut KCoordinates, b: &KCoordinates) {
        for (x, y) in a.free.iter_mut().zip(&b.free) {
            *x -= y;
        }
        for ((x, y), m) in a.torsion.iter_mut().zip(&b.torsion).zip(&self.torsion) {
            *x -= y;
            if x.is_negative() {
                *x += m;
            }
        }
    }

    pub fn neg(&self, a: &KCoordinates) -> KCoordinates {
        let mut out = self.zero();
        self.sub_assign(&mut out, a);
        out
    }

    pub fn scale(&self, a: &KCoordinates, factor: &BigInt) -> KCoordinates {
        let mut out = KCoordinates {
            free: a.free.iter().map(|x| x * factor).collect(),
            torsion: a.torsion.iter().map(|x| x * factor).collect(),
        };
        self.reduce(&mut out);
        out
    }

    /// Reads the group off a Smith form and returns it with the coordinates
    /// of every original generator `e_j`.
    pub fn from_smith(smith: &SmithForm) -> (FgAbelian, Vec<KCoordinates>) {
        let mut free_cols = Vec::new();
        let mut torsion_cols = Vec::new();
        for i in 0..smith.width {
            let d = smith.factor(i);
            if d.is_zero() {
                free_cols.push(i);
            } else if !d.is_one() {
                torsion_cols.push((i, d));
            }
        }
        let group = FgAbelian {
            rank: free_cols.len(),
            torsion: torsion_cols.iter().map(|(_, d)| d.clone()).collect(),
        };
        let coords = smith
            .column_transform
            .iter()
            .map(|row| KCoordinates {
                free: free_cols.iter().map(|&i| row[i].clone()).collect(),
                torsion: torsion_cols.iter().map(|(i, d)| row[*i].mod_floor(d)).collect(),
            })
            .collect();
        (group, coords)
    }

    /// The quotient `ℤ^width / span(relations)`.
    pub fn from_relations(relations: &[IntRow], width: usize) -> FgAbelian {
        FgAbelian::from_smith(&smith_normal_form(relations, width)).0
    }
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// JSON number when the value fits in `i64`, decimal string otherwise.
pub(crate) fn big_json<S: Serializer>(value: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&value.to_string()),
    }
}

pub(crate) fn biguint_json<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&value.to_string()),
    }
}

pub(crate) fn opt_biguint_json<S: Serializer>(value: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => biguint_json(v, s),
        None => s.serialize_none(),
    }
}

struct BigList<'a>(&'a [BigInt]);

impl Serialize for BigList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for v in self.0 {
            seq.serialize_element(&BigJson(v))?;
        }
        seq.end()
    }
}

pub(crate) struct BigJson<'a>(pub &'a BigInt);

impl Serialize for BigJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        big_json(self.0, s)
    }
}

impl Serialize for FgAbelian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FgAbelian", 2)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &BigList(&self.torsion))?;
        st.end()
    }
}

impl Serialize for KCoordinates {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KCoordinates", 2)?;
        st.serialize_field("free", &BigList(&self.free))?;
        st.serialize_field("torsion", &BigList(&self.torsion))?;
        st.end()
    }
}
