//! Finitely generated subgroups of `G(Q)` inside an [`EnvelopeModel`].
//!
//! A subgroup `H` is stored as its image `P = h(H) ⊆ Inn(Q)` with one
//! representative per element of `P`, together with the lattice `L` of
//! flat K-coordinates of `H ∩ K` (the torsion moduli are folded into `L`).
//! Since `K` is central, `H = ⟨tree generators⟩ · (H ∩ K)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::abelian::opt_biguint_json;
use super::model::{EnvelopeModel, NormalForm};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, reduce_against_hnf, IntRow};

#[derive(Debug, Clone)]
pub struct Subgroup {
    tree_gens: Vec<NormalForm>,
    reps: Vec<Option<NormalForm>>,
    image_order: usize,
    lattice: Vec<IntRow>,
    rank: usize,
    moduli: Vec<BigInt>,
}

fn image_closure(model: &EnvelopeModel, gens: &[NormalForm]) -> (Vec<Option<NormalForm>>, Vec<usize>) {
    let mut reps: Vec<Option<NormalForm>> = vec![None; model.inn_order()];
    reps[0] = Some(model.identity());
    let mut order = vec![0usize];
    let mut head = 0;
    while head < order.len() {
        let rho = order[head];
        head += 1;
        for s in gens {
            let tau = model.inn_product(rho, s.sigma);
            if reps[tau].is_none() {
                reps[tau] = Some(model.multiply(reps[rho].as_ref().expect("visited"), s));
                order.push(tau);
            }
        }
    }
    (reps, order)
}

impl Subgroup {
    /// `⟨gens⟩` by the Schreier lemma over its image in `Inn(Q)`.
    pub fn generated(model: &EnvelopeModel, gens: &[NormalForm]) -> Subgroup {
        let k = model.k_group();
        let (rank, width) = (k.rank(), k.width());
        let mut tree_gens: Vec<NormalForm> = Vec::new();
        let (mut reps, mut order) = image_closure(model, &tree_gens);
        let mut rows: Vec<IntRow> = Vec::new();
        for s in gens {
            match &reps[s.sigma] {
                Some(u) => {
                    let c = model.multiply(&model.invert(u), s);
                    if !c.k.is_zero() {
                        rows.push(c.k.flat());
                    }
                }
                None => {
                    tree_gens.push(s.clone());
                    (reps, order) = image_closure(model, &tree_gens);
                }
            }
        }
        for &rho in &order {
            let u = reps[rho].as_ref().expect("in image");
            for s in &tree_gens {
                let tau = model.inn_product(rho, s.sigma);
                let v = reps[tau].as_ref().expect("closed");
                let e = model.multiply(&model.multiply(u, s), &model.invert(v));
                debug_assert_eq!(e.sigma, 0);
                if !e.k.is_zero() {
                    rows.push(e.k.flat());
                }
            }
        }
        let moduli = k.torsion().to_vec();
        for (i, m) in moduli.iter().enumerate() {
            let mut row = vec![BigInt::zero(); width];
            row[rank + i] = m.clone();
            rows.push(row);
        }
        Subgroup {
            tree_gens,
            image_order: order.len(),
            reps,
            lattice: hermite_normal_form(&rows, width),
            rank,
            moduli,
        }
    }

    /// The smallest normal subgroup of `G(Q)` containing `gens`.
    pub fn normal_closure(model: &EnvelopeModel, gens: &[NormalForm]) -> Subgroup {
        let mut h = Subgroup::generated(model, gens);
        loop {
            let mut fresh = Vec::new();
            for g in &h.tree_gens {
                for x in 0..model.quandle().len() {
                    let c = model.conjugate(model.generator(x), g);
                    if !h.contains(model, &c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                return h;
            }
            let mut all = h.compact_generators(model);
            all.extend(fresh);
            h = Subgroup::generated(model, &all);
        }
    }

    /// The whole group `G(Q)`.
    pub fn whole(model: &EnvelopeModel) -> Subgroup {
        let gens: Vec<NormalForm> = (0..model.quandle().len()).map(|x| model.generator(x).clone()).collect();
        Subgroup::generated(model, &gens)
    }

    pub fn contains(&self, model: &EnvelopeModel, g: &NormalForm) -> bool {
        let Some(u) = &self.reps[g.sigma] else { return false };
        let c = model.multiply(&model.invert(u), g);
        reduce_against_hnf(&self.lattice, &c.k.flat()).iter().all(Zero::is_zero)
    }

    /// Order of `h(H) ⊆ Inn(Q)`.
    pub fn image_order(&self) -> usize {
        self.image_order
    }

    /// Rank of the free part of `H ∩ K`.
    pub fn k_free_rank(&self) -> usize {
        self.lattice
            .iter()
            .filter(|row| row.iter().position(|e| !e.is_zero()).is_some_and(|p| p < self.rank))
            .count()
    }

    pub fn is_finite(&self) -> bool {
        self.k_free_rank() == 0
    }

    /// `|H ∩ K|` when finite.
    pub fn k_part_order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        // The lattice contains the moduli, so it has full rank on torsion columns.
        let full: BigUint = self.moduli.iter().fold(BigUint::one(), |a, m| a * m.magnitude());
        let sub: BigUint = self.lattice.iter().fold(BigUint::one(), |a, row| {
            let p = row.iter().position(|e| !e.is_zero()).expect("nonzero row");
            a * row[p].magnitude()
        });
        Some(full / sub)
    }

    pub fn order(&self) -> Option<BigUint> {
        self.k_part_order().map(|k| k * BigUint::from(self.image_order))
    }

    pub fn is_trivial(&self) -> bool {
        self.image_order == 1 && self.k_part_order().is_some_and(|o| o.is_one())
    }

    /// A small generating set: tree generators, then central lattice generators.
    pub fn compact_generators(&self, model: &EnvelopeModel) -> Vec<NormalForm> {
        let k = model.k_group();
        let mut out = self.tree_gens.clone();
        for row in &self.lattice {
            let c = k.from_flat(row);
            if !c.is_zero() {
                out.push(model.central(c));
            }
        }
        out
    }

    pub fn summary(&self) -> SubgroupSummary {
        SubgroupSummary {
            finite: self.is_finite(),
            order: self.order(),
            image_order: self.image_order,
            k_part_order: self.k_part_order(),
            k_free_rank: self.k_free_rank(),
        }
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Subgroup) -> bool {
        self.lattice == other.lattice
            && self.reps.iter().zip(&other.reps).all(|(a, b)| a.is_some() == b.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupSummary {
    pub finite: bool,
    #[serde(serialize_with = "opt_biguint_json")]
    pub order: Option<BigUint>,
    pub image_order: usize,
    #[serde(serialize_with = "opt_biguint_json")]
    pub k_part_order: Option<BigUint>,
    pub k_free_rank: usize,
}

/// `Γ₁ = G(Q) ⊇ Γ₂ ⊇ ⋯` with `Γ_{k+1} = [Γ_k, G(Q)]`.
#[derive(Debug, Clone)]
pub struct LowerCentralSeries {
    pub terms: Vec<Subgroup>,
    /// The last term is trivial.
    pub reaches_trivial: bool,
}

impl LowerCentralSeries {
    /// Nilpotency class when the series reaches the trivial group.
    pub fn class(&self) -> Option<usize> {
        self.reaches_trivial.then(|| self.terms.len() - 1)
    }
}

/// `[Γ, G(Q)]` for a normal subgroup `Γ`.
pub fn commutator_with_whole(model: &EnvelopeModel, gamma: &Subgroup) -> Subgroup {
    let mut comms = Vec::new();
    for a in gamma.compact_generators(model) {
        if a.sigma == 0 {
            continue;
        }
        for x in 0..model.quandle().len() {
            let c = model.commutator(&a, model.generator(x));
            if c != model.identity() {
                comms.push(c);
            }
        }
    }
    Subgroup::normal_closure(model, &comms)
}

/// `Γ₂ = [G(Q), G(Q)]`.
pub fn gamma2(model: &EnvelopeModel) -> Subgroup {
    commutator_with_whole(model, &Subgroup::whole(model))
}

/// Runs the lower central series until it becomes trivial or stabilizes.
pub fn lower_central_series(model: &EnvelopeModel, caps: &Caps) -> Result<LowerCentralSeries> {
    let mut terms = vec![Subgroup::whole(model)];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_trivial() {
            return Ok(LowerCentralSeries { terms, reaches_trivial: true });
        }
        if terms.len() > caps.series_steps {
            return Err(Error::Resource { what: "lower central series length", cap: caps.series_steps });
        }
        let next = commutator_with_whole(model, last);
        if &next == last {
            return Ok(LowerCentralSeries { terms, reaches_trivial: false });
        }
        terms.push(next);
    }
}
