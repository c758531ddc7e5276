//! The image `Q_conj` of `φ : Q → Conj(G(Q))`, the center of `G(Q)`, and the
//! isomorphism `G(Q) ≅ G(Q_conj)`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::abelian::FgAbelian;
use super::model::{EnvelopeModel, NormalForm};
use super::word::GroupWord;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lattice::IntRow;
use crate::quandle::FiniteQuandle;

/// `Q_conj` with the canonical surjection `θ : Q → Q_conj`.
#[derive(Debug, Clone)]
pub struct QConj {
    pub quandle: FiniteQuandle,
    /// `θ(x)`, numbered by first occurrence.
    pub theta: Vec<usize>,
    /// The least preimage of each element of `Q_conj`.
    pub section: Vec<usize>,
}

impl QConj {
    pub fn is_injective(&self) -> bool {
        self.quandle.len() == self.theta.len()
    }
}

pub fn qconj(model: &EnvelopeModel) -> QConj {
    let n = model.quandle().len();
    let mut classes: HashMap<&NormalForm, usize> = HashMap::new();
    let mut theta = Vec::with_capacity(n);
    let mut section = Vec::new();
    for x in 0..n {
        let next = classes.len();
        let c = *classes.entry(model.generator(x)).or_insert(next);
        if c == next {
            section.push(x);
        }
        theta.push(c);
    }
    let q = model.quandle();
    let table = section
        .iter()
        .map(|&a| section.iter().map(|&b| theta[q.op(a, b)]).collect())
        .collect();
    QConj { quandle: FiniteQuandle::from_table_unchecked(table), theta, section }
}

/// First pair `(x, y)` with `x ▷ y = y` but `y ▷ x ≠ x`, returned as
/// `(x, y ▷ x)`: then `φ(x) = φ(y ▷ x)`, so `φ` is not injective.
pub fn non_injectivity_witness(q: &FiniteQuandle) -> Option<(usize, usize)> {
    let n = q.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| q.op(x, y) == y && q.op(y, x) != x)
        .map(|(x, y)| (x, q.op(y, x)))
}

/// `Z(G(Q))` computed from the model of `Q`.
#[derive(Debug, Clone)]
pub struct Center {
    /// `N = h(Z(G(Q)))`: the `σ` fixing every `φ(x)` under conjugation.
    pub image: Vec<usize>,
    pub group: FgAbelian,
}

pub fn center_in_model(model: &EnvelopeModel) -> Center {
    let q = model.quandle();
    let n = q.len();
    let m = model.inn_order();
    let elems = model.inn().elements();
    // Conjugation by t_σ sends φ(x) to φ(σ(x)).
    let image: Vec<usize> =
        (0..m).filter(|&s| (0..n).all(|x| model.generator(elems[s].apply(x)) == model.generator(x))).collect();
    let k = model.k_group();
    let w = k.width();
    let width = w + image.len();
    let pos: HashMap<usize, usize> = image.iter().enumerate().map(|(i, &s)| (s, w + i)).collect();
    let mut rows: BTreeSet<IntRow> = BTreeSet::new();
    for (i, t) in k.torsion().iter().enumerate() {
        let mut row = vec![BigInt::zero(); width];
        row[k.rank() + i] = t.clone();
        rows.insert(row);
    }
    let mut id = vec![BigInt::zero(); width];
    id[pos[&0]] = BigInt::from(1);
    rows.insert(id);
    for &s in &image {
        for &t in &image {
            let st = model.inn_product(s, t);
            let mut row = vec![BigInt::zero(); width];
            for (j, c) in model.cocycle(s, t).flat().into_iter().enumerate() {
                row[j] -= c;
            }
            row[pos[&s]] += 1;
            row[pos[&t]] += 1;
            row[pos[&st]] -= 1;
            if row.iter().any(|e| !e.is_zero()) {
                rows.insert(row);
            }
        }
    }
    let rows: Vec<IntRow> = rows.into_iter().collect();
    Center { image, group: FgAbelian::from_relations(&rows, width) }
}

/// Evidence that `θ` induces `G(Q) ≅ G(Q_conj)`.
#[derive(Debug, Clone)]
pub struct QConjIsomorphism {
    pub qconj: QConj,
    pub conj_model: EnvelopeModel,
    pub center: Center,
    /// `|Inn(Q) / h(Z)|`, which must equal `|Inn(Q_conj)|`.
    pub inner_quotient_order: usize,
}

/// Builds `G(Q_conj)` and checks that `θ` and its section are mutually
/// inverse homomorphisms, and that `Z(G(Q))` matches the kernel for `Q_conj`.
pub fn qconj_isomorphism(model: &EnvelopeModel, caps: &Caps) -> Result<QConjIsomorphism> {
    let qc = qconj(model);
    let conj_model = EnvelopeModel::build(&qc.quandle, caps)?;
    let q = model.quandle();
    let n = q.len();
    let relator = |x: usize, y: usize, z: usize| {
        GroupWord::positive(&[x, y]).concat(&GroupWord::positive(&[z, x]).inverse())
    };
    for x in 0..n {
        for y in 0..n {
            let w = relator(qc.theta[x], qc.theta[y], qc.theta[q.op(x, y)]);
            if conj_model.normal_form(&w) != conj_model.identity() {
                return Err(Error::Internal(format!("θ does not respect the relator at ({x}, {y})")));
            }
        }
    }
    let (s, c) = (&qc.section, qc.quandle.len());
    for a in 0..c {
        for b in 0..c {
            let w = relator(s[a], s[b], s[qc.quandle.op(a, b)]);
            if model.normal_form(&w) != model.identity() {
                return Err(Error::Internal(format!("the section does not respect the relator at ({a}, {b})")));
            }
        }
    }
    for x in 0..n {
        if model.generator(s[qc.theta[x]]) != model.generator(x) {
            return Err(Error::Internal(format!("section ∘ θ moves generator {x}")));
        }
    }
    let z = center_in_model(model);
    if &z.group != conj_model.k_group() {
        return Err(Error::Internal(format!("Z(G(Q)) = {} but K(Q_conj) = {}", z.group, conj_model.k_group())));
    }
    let inner_quotient_order = model.inn_order() / z.image.len();
    if inner_quotient_order != conj_model.inn_order() {
        return Err(Error::Internal(format!(
            "|Inn(Q)/N| = {inner_quotient_order} but |Inn(Q_conj)| = {}",
            conj_model.inn_order()
        )));
    }
    Ok(QConjIsomorphism { qconj: qc, conj_model, center: z, inner_quotient_order })
}
