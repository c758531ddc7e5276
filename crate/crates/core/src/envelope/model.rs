//! Exact model of `G(Q)` as a central extension `1 → K → G(Q) → Inn(Q) → 1`.
//!
//! `h : G(Q) → Inn(Q)` sends the generator `x` to `L_x`. Its kernel `K`
//! centralizes every generator (conjugation by `g` sends `x` to `h(g)(x)`), so
//! `K` is central and abelian and the abelianized Reidemeister–Schreier
//! presentation of `K` presents `K` itself. Every element is written uniquely
//! as `t_σ · k` with `t_σ` a transversal word and `k ∈ K` in Smith
//! coordinates; products follow `t_σ t_τ = t_{στ} · c(σ, τ)`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::abelian::{FgAbelian, KCoordinates};
use super::word::{GroupWord, Letter};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntRow};
use crate::perm::{PermGroup, Permutation};
use crate::quandle::FiniteQuandle;

/// `t_σ · k`, with `σ` given by its index in [`EnvelopeModel::inn`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub sigma: usize,
    pub k: KCoordinates,
}

#[derive(Debug, Clone)]
pub struct EnvelopeModel {
    quandle: FiniteQuandle,
    inn: PermGroup,
    transversal: Vec<GroupWord>,
    /// `[σ][x]` → index of `σ ∘ L_x`.
    right: Vec<Vec<usize>>,
    /// `[σ][x]` → index of `σ ∘ L_x⁻¹`.
    right_inv: Vec<Vec<usize>>,
    /// `[σ][τ]` → index of `σ ∘ τ`.
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    k: FgAbelian,
    /// Coordinates of the Schreier generator `t_σ x t_{σ L_x}⁻¹`, at `σ·n + x`.
    schreier: Vec<KCoordinates>,
    schreier_trivial: Vec<bool>,
    /// `c(σ, τ)` at `σ·|Inn| + τ`.
    cocycle: Vec<KCoordinates>,
    gen_nf: Vec<NormalForm>,
}

/// The `n²` defining relators `x y x⁻¹ (x▷y)⁻¹`, `x` outer.
pub fn presentation(q: &FiniteQuandle) -> Vec<GroupWord> {
    let n = q.len();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            out.push(GroupWord::new(vec![
                Letter::pos(x),
                Letter::pos(y),
                Letter::neg(x),
                Letter::neg(q.op(x, y)),
            ]));
        }
    }
    out
}

/// `h(w)`: the product of `L_x^{±1}` along `w`.
pub fn inn_projection(q: &FiniteQuandle, w: &GroupWord) -> Result<Permutation> {
    let mut acc = Permutation::identity(q.len());
    for l in w.letters() {
        if l.index >= q.len() {
            return Err(Error::Malformed(format!("letter {} out of range", l.index)));
        }
        let t = q.left_translation(l.index);
        acc = acc.compose(&if l.inverse { t.inverse() } else { t });
    }
    Ok(acc)
}

impl EnvelopeModel {
    pub fn build(q: &FiniteQuandle, caps: &Caps) -> Result<EnvelopeModel> {
        let n = q.len();
        let inn = q.inner_group(caps)?;
        let m = inn.order();
        if m > caps.envelope_inn {
            return Err(Error::Resource { what: "envelope |Inn(Q)|", cap: caps.envelope_inn });
        }
        let transversal: Vec<GroupWord> = (0..m).map(|i| GroupWord::positive(&inn.word_for(i))).collect();
        let elems = inn.elements();
        let lookup = |p: &Permutation| inn.index_of(p).expect("Inn(Q) is closed");
        let gens = inn.generators();
        let gen_inv: Vec<Permutation> = gens.iter().map(Permutation::inverse).collect();
        let right: Vec<Vec<usize>> =
            elems.iter().map(|s| gens.iter().map(|g| lookup(&s.compose(g))).collect()).collect();
        let right_inv: Vec<Vec<usize>> =
            elems.iter().map(|s| gen_inv.iter().map(|g| lookup(&s.compose(g))).collect()).collect();
        let inverse: Vec<usize> = elems.iter().map(|s| lookup(&s.inverse())).collect();

        // Schreier generators that are freely trivial are exactly the tree edges.
        let mut schreier_trivial = vec![false; m * n];
        for (child, edge) in inn.tree().iter().enumerate() {
            if let Some((parent, gen)) = edge {
                debug_assert_eq!(right[*parent][*gen], child);
                schreier_trivial[parent * n + gen] = true;
            }
        }
        let mut column = vec![usize::MAX; m * n];
        let mut width = 0;
        for (slot, trivial) in schreier_trivial.iter().enumerate() {
            if !trivial {
                column[slot] = width;
                width += 1;
            }
        }

        // Relators of K: every defining relator rewritten from every coset.
        let mut rows: HashSet<Vec<(usize, i64)>> = HashSet::new();
        for r in presentation(q) {
            for start in 0..m {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                let mut c = start;
                for l in r.letters() {
                    let (slot, next, s) = if l.inverse {
                        let prev = right_inv[c][l.index];
                        (prev * n + l.index, prev, -1)
                    } else {
                        (c * n + l.index, right[c][l.index], 1)
                    };
                    if column[slot] != usize::MAX {
                        *acc.entry(column[slot]).or_insert(0) += s;
                    }
                    c = next;
                }
                debug_assert_eq!(c, start, "relators lie in ker h");
                let sparse: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
                if !sparse.is_empty() {
                    rows.insert(sparse);
                }
            }
        }
        let mut rows: Vec<Vec<(usize, i64)>> = rows.into_iter().collect();
        rows.sort();
        let dense: Vec<IntRow> = rows
            .iter()
            .map(|sparse| {
                let mut row = vec![BigInt::zero(); width];
                for &(j, v) in sparse {
                    row[j] = BigInt::from(v);
                }
                row
            })
            .collect();
        let (k, column_coords) = FgAbelian::from_smith(&smith_normal_form(&dense, width));
        let schreier: Vec<KCoordinates> = (0..m * n)
            .map(|slot| if column[slot] == usize::MAX { k.zero() } else { column_coords[column[slot]].clone() })
            .collect();

        let mut model = EnvelopeModel {
            quandle: q.clone(),
            inn,
            transversal,
            right,
            right_inv,
            product: Vec::new(),
            inverse,
            k,
            schreier,
            schreier_trivial,
            cocycle: Vec::new(),
            gen_nf: Vec::new(),
        };

        // c(σ, τ) is the K-part of t_σ t_τ; the prefix t_σ rewrites trivially.
        let mut product = vec![vec![0usize; m]; m];
        let mut cocycle = Vec::with_capacity(m * m);
        for (s, row) in product.iter_mut().enumerate() {
            for (t, cell) in row.iter_mut().enumerate() {
                let (end, k) = model.rewrite_from(s, &model.transversal[t]);
                *cell = end;
                cocycle.push(k);
            }
        }
        model.product = product;
        model.cocycle = cocycle;
        model.gen_nf = (0..n).map(|x| model.normal_form(&GroupWord::generator(x))).collect();

        model.check_relators()?;
        model.check_centrality()?;
        Ok(model)
    }

    fn letter_step(&self, coset: usize, l: Letter, acc: &mut KCoordinates) -> usize {
        let n = self.quandle.len();
        if l.inverse {
            let prev = self.right_inv[coset][l.index];
            self.k.sub_assign(acc, &self.schreier[prev * n + l.index]);
            prev
        } else {
            self.k.add_assign(acc, &self.schreier[coset * n + l.index]);
            self.right[coset][l.index]
        }
    }

    /// Reidemeister rewriting of `t_start · w · t_end⁻¹` into `K`.
    fn rewrite_from(&self, start: usize, w: &GroupWord) -> (usize, KCoordinates) {
        let mut acc = self.k.zero();
        let mut c = start;
        for &l in w.letters() {
            c = self.letter_step(c, l, &mut acc);
        }
        (c, acc)
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }

    /// `Inn(Q)`; element indices are the coset indices of the model.
    pub fn inn(&self) -> &PermGroup {
        &self.inn
    }

    pub fn inn_order(&self) -> usize {
        self.inn.order()
    }

    pub fn transversal(&self) -> &[GroupWord] {
        &self.transversal
    }

    /// `K = ker(G(Q) → Inn(Q))`.
    pub fn k_group(&self) -> &FgAbelian {
        &self.k
    }

    /// Number of Schreier generators that are not freely trivial.
    pub fn schreier_generator_count(&self) -> usize {
        self.schreier_trivial.iter().filter(|t| !**t).count()
    }

    pub fn cocycle(&self, sigma: usize, tau: usize) -> &KCoordinates {
        &self.cocycle[sigma * self.inn_order() + tau]
    }

    pub fn inn_product(&self, sigma: usize, tau: usize) -> usize {
        self.product[sigma][tau]
    }

    pub fn inn_inverse(&self, sigma: usize) -> usize {
        self.inverse[sigma]
    }

    /// Normal form of the image `φ(x)` of a quandle element.
    pub fn generator(&self, x: usize) -> &NormalForm {
        &self.gen_nf[x]
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm { sigma: 0, k: self.k.zero() }
    }

    /// `t_σ` as a group element.
    pub fn coset_rep(&self, sigma: usize) -> NormalForm {
        NormalForm { sigma, k: self.k.zero() }
    }

    pub fn central(&self, k: KCoordinates) -> NormalForm {
        NormalForm { sigma: 0, k }
    }

    /// `(h(w), coordinates of t_{h(w)}⁻¹ w)`.
    pub fn normal_form(&self, w: &GroupWord) -> NormalForm {
        let (sigma, k) = self.rewrite_from(0, w);
        NormalForm { sigma, k }
    }

    pub fn try_normal_form(&self, w: &GroupWord) -> Result<NormalForm> {
        match w.max_index() {
            Some(i) if i >= self.quandle.len() => Err(Error::Malformed(format!("letter {i} out of range"))),
            _ => Ok(self.normal_form(w)),
        }
    }

    /// `(σ, k)(τ, k') = (στ, k + k' + c(σ, τ))`.
    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut k = self.k.add(&a.k, &b.k);
        self.k.add_assign(&mut k, self.cocycle(a.sigma, b.sigma));
        NormalForm { sigma: self.product[a.sigma][b.sigma], k }
    }

    pub fn invert(&self, a: &NormalForm) -> NormalForm {
        let inv = self.inverse[a.sigma];
        let mut k = self.k.neg(&a.k);
        self.k.sub_assign(&mut k, self.cocycle(a.sigma, inv));
        NormalForm { sigma: inv, k }
    }

    pub fn power(&self, a: &NormalForm, e: i64) -> NormalForm {
        let base = if e < 0 { self.invert(a) } else { a.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            sq = self.multiply(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// `a b a⁻¹`.
    pub fn conjugate(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        self.multiply(&self.multiply(a, b), &self.invert(a))
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        self.multiply(&self.multiply(a, b), &self.multiply(&self.invert(a), &self.invert(b)))
    }

    pub fn words_equal(&self, v: &GroupWord, w: &GroupWord) -> bool {
        self.normal_form(v) == self.normal_form(w)
    }

    /// `g` has infinite order iff `g^{ord h(g)}` has a nonzero free K-part.
    pub fn nf_has_infinite_order(&self, g: &NormalForm) -> bool {
        let order = self.inn.elements()[g.sigma].order();
        !self.power(g, order as i64).k.free_is_zero()
    }

    pub fn is_infinite_order(&self, w: &GroupWord) -> bool {
        w.degree() != 0 || self.nf_has_infinite_order(&self.normal_form(w))
    }

    /// Every defining relator normalizes to the identity.
    pub fn check_relators(&self) -> Result<()> {
        let id = self.identity();
        for r in presentation(&self.quandle) {
            if self.normal_form(&r) != id {
                return Err(Error::Internal(format!("relator {r} does not normalize to the identity")));
            }
        }
        Ok(())
    }

    /// `x · s · x⁻¹` and `s` agree for every Schreier generator `s` and generator `x`.
    pub fn check_centrality(&self) -> Result<()> {
        let n = self.quandle.len();
        for sigma in 0..self.inn_order() {
            for y in 0..n {
                let slot = sigma * n + y;
                if self.schreier_trivial[slot] {
                    continue;
                }
                let s = self.transversal[sigma]
                    .concat(&GroupWord::generator(y))
                    .concat(&self.transversal[self.right[sigma][y]].inverse());
                let expected = self.central(self.schreier[slot].clone());
                if self.normal_form(&s) != expected {
                    return Err(Error::Internal(format!("Schreier generator {s} has wrong coordinates")));
                }
                for x in 0..n {
                    let conj = GroupWord::generator(x).conjugate(&s);
                    if self.normal_form(&conj) != expected {
                        return Err(Error::Internal(format!("Schreier generator {s} is not centralized by x{x}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `c(σ,τ) + c(στ,υ) = c(τ,υ) + c(σ,τυ)` on all triples.
    pub fn check_cocycle(&self) -> Result<()> {
        let m = self.inn_order();
        for s in 0..m {
            for t in 0..m {
                let st = self.product[s][t];
                let lhs0 = self.cocycle(s, t);
                for u in 0..m {
                    let lhs = self.k.add(lhs0, self.cocycle(st, u));
                    let rhs = self.k.add(self.cocycle(t, u), self.cocycle(s, self.product[t][u]));
                    if lhs != rhs {
                        return Err(Error::Internal(format!("cocycle condition fails at ({s}, {t}, {u})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether all generator normal forms commute, i.e. `G(Q)` is abelian.
    pub fn is_abelian(&self) -> bool {
        let n = self.quandle.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| {
                self.multiply(&self.gen_nf[x], &self.gen_nf[y]) == self.multiply(&self.gen_nf[y], &self.gen_nf[x])
            })
        })
    }

    /// Element of `G(Q)` reached by the exponent vector `k` on the K-basis.
    pub fn k_unit(&self, i: usize) -> NormalForm {
        self.central(self.k.unit(i))
    }

    /// `m·k` for an integer `m`.
    pub fn k_scale(&self, k: &KCoordinates, m: i64) -> KCoordinates {
        self.k.scale(k, &BigInt::from(m))
    }
}

pub fn build_envelope(q: &FiniteQuandle, caps: &Caps) -> Result<EnvelopeModel> {
    EnvelopeModel::build(q, caps)
}

pub fn normal_form(model: &EnvelopeModel, w: &GroupWord) -> Result<NormalForm> {
    model.try_normal_form(w)
}

pub fn words_equal(model: &EnvelopeModel, v: &GroupWord, w: &GroupWord) -> bool {
    model.words_equal(v, w)
}

pub fn is_infinite_order(model: &EnvelopeModel, w: &GroupWord) -> bool {
    model.is_infinite_order(w)
}
