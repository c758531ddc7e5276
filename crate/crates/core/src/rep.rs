//! Faithful integral representations of `G(Q)` and their finite reductions.
//!
//! A finitely generated abelian group embeds in `GL_n(ℤ)` block-diagonally:
//! `ℤ/m` acts by the `m×m` cyclic shift `ρ_m` and `ℤ` by the unipotent
//! `ρ₀ = [[1,1],[0,1]]`. Inducing a faithful representation of the central
//! subgroup `K` up the finite index `|Inn(Q)|` gives a faithful
//! representation of `G(Q)` whose matrices are block-monomial with unimodular
//! blocks. Reducing modulo a suitable prime separates the elements of
//! `Q_conj` inside a finite matrix group.
//!
//! The degree of every irreducible complex representation of `G(Q)` divides
//! `|Inn(Q)|`; that fact is not computed here.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::Serialize;

use crate::caps::Caps;
use crate::envelope::{qconj, EnvelopeModel, FgAbelian, GroupWord, KCoordinates, Letter, NormalForm, QConj};
use crate::error::{Error, Result};
use crate::lattice::determinant;
use crate::quandle::FiniteQuandle;

/// Square matrix over `ℤ`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> IntMatrix {
        IntMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed("matrix is not square".into()));
        }
        Ok(IntMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<IntMatrix> {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// `ρ₀(k) = [[1,k],[0,1]]`.
    pub fn unipotent(k: &BigInt) -> IntMatrix {
        let mut m = IntMatrix::identity(2);
        m.entries[1] = k.clone();
        m
    }

    /// `ρ_m(k)`: the `k`-th power of the shift `e_i ↦ e_{i+1 mod m}`, which
    /// has ones on the subdiagonal and in the top-right corner.
    pub fn cyclic_shift(m: usize, k: &BigInt) -> IntMatrix {
        let s = k.mod_floor(&BigInt::from(m)).to_usize().expect("residue fits");
        let mut out = IntMatrix::zero(m);
        for j in 0..m {
            out.entries[((j + s) % m) * m + j] = BigInt::one();
        }
        out
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut out = IntMatrix::zero(dim);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out.entries[(off + i) * dim + off + j] = b.get(i, j).clone();
                }
            }
            off += b.dim;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = IntMatrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k * d + j];
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.rows())
    }

    /// Exact inverse; a contract error unless the determinant is `±1`.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let d = self.dim;
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| BigRational::from(self.get(i, j).clone())).collect();
                row.extend((0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !a[r][c].is_zero()).ok_or_else(|| Error::Contract("singular matrix".into()))?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for e in a[c].iter_mut() {
                *e = &*e * &inv;
            }
            let pivot = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (e, pv) in row.iter_mut().zip(&pivot) {
                        *e -= &f * pv;
                    }
                }
            }
        }
        let mut out = IntMatrix::zero(d);
        for (i, row) in a.iter().enumerate() {
            for j in 0..d {
                let v = &row[d + j];
                if !v.is_integer() {
                    return Err(Error::Contract("matrix is not unimodular".into()));
                }
                out.set(i, j, v.to_integer());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: &BigInt) -> Result<IntMatrix> {
        let base = if e.is_negative() { self.inverse()? } else { self.clone() };
        let mut e = e.magnitude().clone();
        let mut acc = IntMatrix::identity(self.dim);
        let mut sq = base;
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if !e.is_zero() {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    pub fn reduce_mod(&self, p: u64) -> ModMatrix {
        let m = BigInt::from(p);
        ModMatrix {
            p,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mod_floor(&m).to_u64().expect("residue fits")).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

struct StringRows<'a, T: fmt::Display>(&'a [T], usize);

impl<T: fmt::Display> Serialize for StringRows<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.1))?;
        for row in self.0.chunks(self.1.max(1)).take(self.1) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&cells)?;
        }
        seq.end()
    }
}

/// Serialized as an array of rows of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StringRows(&self.entries, self.dim).serialize(s)
    }
}

/// Square matrix over `ℤ/p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    p: u64,
    dim: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(p: u64, dim: usize) -> ModMatrix {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % p;
        }
        ModMatrix { p, dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let d = self.dim;
        let mut entries = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let b = other.entries[k * d + j];
                    if b != 0 {
                        entries[i * d + j] = (entries[i * d + j] + a * b) % self.p;
                    }
                }
            }
        }
        ModMatrix { p: self.p, dim: d, entries }
    }
}

impl Serialize for ModMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StringRows(&self.entries, self.dim).serialize(s)
    }
}

/// A block-monomial matrix: column block `τ` is nonzero only in row block
/// `perm[τ]`, where it holds `blocks[τ]`. Dense matrices are the one-block case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockMatrix<M = IntMatrix> {
    pub perm: Vec<usize>,
    pub blocks: Vec<M>,
}

pub type ModBlockMatrix = BlockMatrix<ModMatrix>;

impl BlockMatrix<IntMatrix> {
    pub fn dense(m: IntMatrix) -> BlockMatrix {
        BlockMatrix { perm: vec![0], blocks: vec![m] }
    }

    pub fn identity(block_count: usize, block_dim: usize) -> BlockMatrix {
        BlockMatrix { perm: (0..block_count).collect(), blocks: vec![IntMatrix::identity(block_dim); block_count] }
    }

    pub fn block_dim(&self) -> usize {
        self.blocks.first().map_or(0, IntMatrix::dim)
    }

    pub fn dim(&self) -> usize {
        self.block_dim() * self.blocks.len()
    }

    pub fn mul(&self, other: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.perm.len(), other.perm.len(), "block count mismatch");
        BlockMatrix {
            perm: other.perm.iter().map(|&t| self.perm[t]).collect(),
            blocks: other.perm.iter().zip(&other.blocks).map(|(&t, b)| self.blocks[t].mul(b)).collect(),
        }
    }

    pub fn inverse(&self) -> Result<BlockMatrix> {
        let mut perm = vec![0; self.perm.len()];
        let mut blocks = vec![IntMatrix::zero(0); self.perm.len()];
        for (t, (&r, b)) in self.perm.iter().zip(&self.blocks).enumerate() {
            perm[r] = t;
            blocks[r] = b.inverse()?;
        }
        Ok(BlockMatrix { perm, blocks })
    }

    /// `sign(perm)^{block_dim} · ∏ det(block)`.
    pub fn determinant(&self) -> BigInt {
        let mut seen = vec![false; self.perm.len()];
        let mut odd = false;
        for start in 0..self.perm.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                odd = !odd;
            }
        }
        let mut det: BigInt = self.blocks.iter().map(IntMatrix::determinant).product();
        if odd && self.block_dim() % 2 == 1 {
            det = -det;
        }
        det
    }

    /// A bijective block pattern with every block of determinant `±1`.
    pub fn is_unimodular_block_monomial(&self) -> bool {
        let mut rows: Vec<usize> = self.perm.clone();
        rows.sort_unstable();
        rows.dedup();
        rows.len() == self.perm.len() && self.blocks.iter().all(|b| b.determinant().abs().is_one())
    }

    pub fn to_dense(&self) -> IntMatrix {
        let d = self.block_dim();
        let n = self.dim();
        let mut out = IntMatrix::zero(n);
        for (t, (&r, b)) in self.perm.iter().zip(&self.blocks).enumerate() {
            for i in 0..d {
                for j in 0..d {
                    out.set(r * d + i, t * d + j, b.get(i, j).clone());
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.blocks.iter().all(IntMatrix::is_identity)
    }

    pub fn reduce_mod(&self, p: u64) -> ModBlockMatrix {
        BlockMatrix { perm: self.perm.clone(), blocks: self.blocks.iter().map(|b| b.reduce_mod(p)).collect() }
    }
}

impl BlockMatrix<ModMatrix> {
    pub fn mul(&self, other: &ModBlockMatrix) -> ModBlockMatrix {
        BlockMatrix {
            perm: other.perm.iter().map(|&t| self.perm[t]).collect(),
            blocks: other.perm.iter().zip(&other.blocks).map(|(&t, b)| self.blocks[t].mul(b)).collect(),
        }
    }

    pub fn identity_like(&self) -> ModBlockMatrix {
        let (p, d) = self.blocks.first().map_or((2, 0), |b| (b.p, b.dim));
        BlockMatrix { perm: (0..self.perm.len()).collect(), blocks: vec![ModMatrix::identity(p, d); self.perm.len()] }
    }

    pub fn to_dense(&self) -> ModMatrix {
        let (p, d) = self.blocks.first().map_or((2, 0), |b| (b.p, b.dim));
        let n = d * self.perm.len();
        let mut entries = vec![0; n * n];
        for (t, (&r, b)) in self.perm.iter().zip(&self.blocks).enumerate() {
            for i in 0..d {
                for j in 0..d {
                    entries[(r * d + i) * n + t * d + j] = b.get(i, j);
                }
            }
        }
        ModMatrix { p, dim: n, entries }
    }
}

/// Block-sparse JSON: `{dim, block_dim, blocks: [{row, col, block}]}`.
impl<M: Serialize> Serialize for BlockMatrix<M>
where
    M: HasDim,
{
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a, M> {
            row: usize,
            col: usize,
            block: &'a M,
        }
        let block_dim = self.blocks.first().map_or(0, HasDim::dim_of);
        let entries: Vec<Entry<'_, M>> =
            self.perm.iter().zip(&self.blocks).enumerate().map(|(col, (&row, block))| Entry { row, col, block }).collect();
        let mut st = s.serialize_struct("BlockMatrix", 3)?;
        st.serialize_field("dim", &(block_dim * self.perm.len()))?;
        st.serialize_field("block_dim", &block_dim)?;
        st.serialize_field("blocks", &entries)?;
        st.end()
    }
}

pub trait HasDim {
    fn dim_of(&self) -> usize;
}

impl HasDim for IntMatrix {
    fn dim_of(&self) -> usize {
        self.dim
    }
}

impl HasDim for ModMatrix {
    fn dim_of(&self) -> usize {
        self.dim
    }
}

/// What a [`GroupRep`] represents; `images[i]` is the image of generator `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepSource {
    /// The canonical generators of a finitely generated abelian group.
    Abelian(FgAbelian),
    /// The generators `φ(x)` of `G(Q)`.
    Envelope { quandle_size: usize, inn_order: usize },
}

#[derive(Debug, Clone)]
pub struct GroupRep {
    pub source: RepSource,
    pub dim: usize,
    pub images: Vec<BlockMatrix>,
}

/// `ρ(k) = ⊕ ρ₀(kᵢ) ⊕ ρ_{mⱼ}(kⱼ)`, dimension `2·rank + Σ mⱼ`.
pub fn abelian_rep_eval(a: &FgAbelian, k: &KCoordinates) -> IntMatrix {
    let mut blocks: Vec<IntMatrix> = k.free.iter().map(IntMatrix::unipotent).collect();
    for (m, r) in a.torsion().iter().zip(&k.torsion) {
        blocks.push(IntMatrix::cyclic_shift(m.to_usize().expect("invariant factor fits in memory"), r));
    }
    IntMatrix::block_diagonal(&blocks)
}

/// The faithful block-diagonal representation of `A`.
pub fn abelian_faithful_rep(a: &FgAbelian) -> GroupRep {
    let images: Vec<BlockMatrix> =
        (0..a.width()).map(|i| BlockMatrix::dense(abelian_rep_eval(a, &a.unit(i)))).collect();
    let dim = 2 * a.rank() + a.torsion().iter().map(|m| m.to_usize().expect("fits")).sum::<usize>();
    GroupRep { source: RepSource::Abelian(a.clone()), dim, images }
}

/// Checks that `rho` is a representation of `a` on its generators.
fn check_abelian_rep(a: &FgAbelian, rho: &GroupRep) -> Result<Vec<IntMatrix>> {
    if rho.images.len() != a.width() {
        return Err(Error::Contract(format!("{} generator images for a group of width {}", rho.images.len(), a.width())));
    }
    let dense: Vec<IntMatrix> = rho.images.iter().map(BlockMatrix::<IntMatrix>::to_dense).collect();
    if dense.iter().any(|m| m.dim != rho.dim) {
        return Err(Error::Contract("generator image of the wrong dimension".into()));
    }
    for i in 0..dense.len() {
        dense[i].inverse()?;
        for j in i + 1..dense.len() {
            if dense[i].mul(&dense[j]) != dense[j].mul(&dense[i]) {
                return Err(Error::Contract(format!("generator images {i} and {j} do not commute")));
            }
        }
    }
    for (j, m) in a.torsion().iter().enumerate() {
        if !dense[a.rank() + j].pow(m)?.is_identity() {
            return Err(Error::Contract(format!("torsion generator {j} image has order not dividing {m}")));
        }
    }
    Ok(dense)
}

/// `Ind_K^{G(Q)} ρ`, blocks indexed by the transversal order.
///
/// `g = t_σ k` sends block `τ` to block `στ` through `ρ(k + c(σ, τ))`.
pub fn induced_rep(model: &EnvelopeModel, rho: &GroupRep) -> Result<GroupRep> {
    let k = model.k_group();
    let gens = check_abelian_rep(k, rho)?;
    let standard = rho.source == RepSource::Abelian(k.clone()) && *rho == abelian_faithful_rep(k);
    let mut cache: HashMap<KCoordinates, IntMatrix> = HashMap::new();
    let mut eval = |c: KCoordinates| -> Result<IntMatrix> {
        if let Some(m) = cache.get(&c) {
            return Ok(m.clone());
        }
        let m = if standard {
            abelian_rep_eval(k, &c)
        } else {
            let mut acc = IntMatrix::identity(rho.dim);
            for (g, e) in gens.iter().zip(c.free.iter().chain(&c.torsion)) {
                acc = acc.mul(&g.pow(e)?);
            }
            acc
        };
        cache.insert(c, m.clone());
        Ok(m)
    };
    let m = model.inn_order();
    let mut images = Vec::with_capacity(model.quandle().len());
    for x in 0..model.quandle().len() {
        let g = model.generator(x);
        let mut perm = Vec::with_capacity(m);
        let mut blocks = Vec::with_capacity(m);
        for tau in 0..m {
            perm.push(model.inn_product(g.sigma, tau));
            blocks.push(eval(k.add(&g.k, model.cocycle(g.sigma, tau)))?);
        }
        images.push(BlockMatrix { perm, blocks });
    }
    Ok(GroupRep {
        source: RepSource::Envelope { quandle_size: model.quandle().len(), inn_order: m },
        dim: m * rho.dim,
        images,
    })
}

impl GroupRep {
    /// Mutable access to the blocks of generator `x`'s image.
    pub fn blocks_mut(&mut self, x: usize) -> &mut [IntMatrix] {
        &mut self.images[x].blocks
    }
}

impl PartialEq for GroupRep {
    fn eq(&self, other: &GroupRep) -> bool {
        self.dim == other.dim && self.images == other.images
    }
}

/// First pair `(x, y)` with `M_x M_y M_x⁻¹ ≠ M_{x▷y}`, or `None` when every
/// conjugation relation holds; a contract error if some image is not invertible.
pub fn verify_rep(q: &FiniteQuandle, rep: &GroupRep) -> Result<Option<(usize, usize)>> {
    if rep.images.len() != q.len() {
        return Err(Error::Contract(format!("{} images for a quandle of size {}", rep.images.len(), q.len())));
    }
    for (x, m) in rep.images.iter().enumerate() {
        if !m.determinant().abs().is_one() {
            return Err(Error::Contract(format!("image of {x} is not invertible over the integers")));
        }
    }
    for x in 0..q.len() {
        for y in 0..q.len() {
            let lhs = rep.images[x].mul(&rep.images[y]);
            let rhs = rep.images[q.op(x, y)].mul(&rep.images[x]);
            if lhs != rhs {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// `Q → G(Q_conj) → GL_n(ℤ)` through the induced representation.
#[derive(Debug, Clone)]
pub struct QuandleRep {
    pub qconj: QConj,
    pub model: EnvelopeModel,
    /// Representation of `G(Q_conj)`, one image per element of `Q_conj`.
    pub rep: GroupRep,
    /// Image of each element of `Q`.
    pub images: Vec<BlockMatrix>,
}

pub fn quandle_rep(q: &FiniteQuandle, caps: &Caps) -> Result<QuandleRep> {
    let qc = qconj(&EnvelopeModel::build(q, caps)?);
    let model = EnvelopeModel::build(&qc.quandle, caps)?;
    let rep = induced_rep(&model, &abelian_faithful_rep(model.k_group()))?;
    let distinct: HashSet<&BlockMatrix> = rep.images.iter().collect();
    if distinct.len() != rep.images.len() {
        return Err(Error::Internal("distinct elements of Q_conj received equal matrices".into()));
    }
    let images = qc.theta.iter().map(|&c| rep.images[c].clone()).collect();
    Ok(QuandleRep { qconj: qc, model, rep, images })
}

/// Result of comparing normal forms with matrices on a ball of words.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub faithful: bool,
    pub ball_size: usize,
    /// Two words with different normal forms but equal matrices, or equal
    /// normal forms but different matrices.
    pub witness: Option<(GroupWord, GroupWord)>,
}

/// Compares `nf` and the matrix of every word of length `≤ length_bound`.
pub fn faithfulness_probe(model: &EnvelopeModel, rep: &GroupRep, length_bound: usize) -> Result<ProbeReport> {
    let n = model.quandle().len();
    if rep.images.len() != n {
        return Err(Error::Contract(format!("{} images for a quandle of size {n}", rep.images.len())));
    }
    let mut letters: Vec<(Letter, NormalForm, BlockMatrix)> = Vec::with_capacity(2 * n);
    for x in 0..n {
        let g = model.generator(x).clone();
        letters.push((Letter::pos(x), g.clone(), rep.images[x].clone()));
        // a singular image (a corrupted representation) only contributes its positive letter
        if let Ok(inv) = rep.images[x].inverse() {
            letters.push((Letter::neg(x), model.invert(&g), inv));
        }
    }
    let identity = BlockMatrix::identity(rep.images.first().map_or(1, |m| m.perm.len()), rep.images.first().map_or(0, BlockMatrix::<IntMatrix>::block_dim));
    let mut by_nf: HashMap<NormalForm, (GroupWord, BlockMatrix)> = HashMap::new();
    let mut by_matrix: HashMap<BlockMatrix, NormalForm> = HashMap::new();
    by_nf.insert(model.identity(), (GroupWord::empty(), identity.clone()));
    by_matrix.insert(identity, model.identity());
    let mut queue: VecDeque<(NormalForm, usize)> = VecDeque::from([(model.identity(), 0)]);
    while let Some((g, depth)) = queue.pop_front() {
        if depth == length_bound {
            continue;
        }
        let (word, mat) = by_nf[&g].clone();
        for (l, lnf, lmat) in &letters {
            let h = model.multiply(&g, lnf);
            let hm = mat.mul(lmat);
            let hw = word.concat(&GroupWord::new(vec![*l]));
            if let Some((w0, m0)) = by_nf.get(&h) {
                if *m0 != hm {
                    return Ok(ProbeReport { faithful: false, ball_size: by_nf.len(), witness: Some((w0.clone(), hw)) });
                }
                continue;
            }
            if let Some(other) = by_matrix.get(&hm) {
                let w0 = by_nf[other].0.clone();
                return Ok(ProbeReport { faithful: false, ball_size: by_nf.len(), witness: Some((w0, hw)) });
            }
            by_matrix.insert(hm.clone(), h.clone());
            by_nf.insert(h.clone(), (hw, hm));
            queue.push_back((h, depth + 1));
        }
    }
    Ok(ProbeReport { faithful: true, ball_size: by_nf.len(), witness: None })
}

/// Primes `2, 3, 5, …` up to `cap`.
pub fn primes_up_to(cap: u64) -> Vec<u64> {
    (2..=cap).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// A prime whose reduction keeps `Q_conj` inside a finite matrix group.
#[derive(Debug, Clone)]
pub struct Separation {
    pub prime: u64,
    /// Whether the search ran on `Q_conj` because `Q` is not injective.
    pub used_qconj: bool,
    pub qconj_size: usize,
    pub dim: usize,
    /// Images of the elements of `Q_conj` modulo `prime`.
    pub images: Vec<ModBlockMatrix>,
}

/// Smallest prime `p ≤ min(prime_cap, caps.prime)` such that the mod-`p`
/// images of `Q_conj` are pairwise distinct and satisfy the conjugation relations.
pub fn separating_finite_quotient(q: &FiniteQuandle, caps: &Caps, prime_cap: u64) -> Result<Separation> {
    let qr = quandle_rep(q, caps)?;
    let cap = prime_cap.min(caps.prime);
    let qc = &qr.qconj.quandle;
    for p in primes_up_to(cap) {
        let images: Vec<ModBlockMatrix> = qr.rep.images.iter().map(|m| m.reduce_mod(p)).collect();
        let distinct: HashSet<&ModBlockMatrix> = images.iter().collect();
        if distinct.len() != images.len() {
            continue;
        }
        let relations = (0..qc.len())
            .all(|a| (0..qc.len()).all(|b| images[a].mul(&images[b]) == images[qc.op(a, b)].mul(&images[a])));
        if relations {
            return Ok(Separation {
                prime: p,
                used_qconj: !qr.qconj.is_injective(),
                qconj_size: qc.len(),
                dim: qr.rep.dim,
                images,
            });
        }
    }
    Err(Error::Resource { what: "separating prime", cap: cap as usize })
}

/// Order of the group generated by `gens`, by closure under right multiplication.
pub fn matrix_group_order(gens: &[ModBlockMatrix], cap: usize) -> Result<usize> {
    let Some(first) = gens.first() else { return Ok(1) };
    let id = first.identity_like();
    let mut seen: HashSet<ModBlockMatrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(Error::Resource { what: "matrix group closure", cap });
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(seen.len())
}

/// `|GL_n(ℤ/p)| = ∏_{i<n} (pⁿ − pⁱ)`.
pub fn gl_order(n: usize, p: u64) -> BigUint {
    let p = BigUint::from(p);
    let pn = num_traits::pow(p.clone(), n);
    (0..n).map(|i| &pn - num_traits::pow(p.clone(), i)).product()
}
