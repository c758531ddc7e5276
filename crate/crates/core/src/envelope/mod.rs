//! The enveloping group `G(Q) = ⟨Q | x y x⁻¹ = x ▷ y⟩`.

mod abelian;
mod model;
mod qconj;
mod subgroup;
mod word;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

pub use abelian::{FgAbelian, KCoordinates};
pub(crate) use abelian::{biguint_json, opt_biguint_json};
pub use model::{
    build_envelope, inn_projection, is_infinite_order, normal_form, presentation, words_equal, EnvelopeModel,
    NormalForm,
};
pub use qconj::{center_in_model, non_injectivity_witness, qconj, qconj_isomorphism, Center, QConj, QConjIsomorphism};
pub use subgroup::{
    commutator_with_whole, gamma2, lower_central_series, LowerCentralSeries, Subgroup, SubgroupSummary,
};
pub use word::{degree, GroupWord, Letter};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lattice::IntRow;
use crate::quandle::FiniteQuandle;

/// `G(Q)^ab = ℤ^{#orbits}`, computed from the relations `e_y = e_{x▷y}`.
pub fn abelianization(q: &FiniteQuandle) -> Result<FgAbelian> {
    let n = q.len();
    let mut rows: Vec<IntRow> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let z = q.op(x, y);
            if z != y {
                let mut row = vec![BigInt::zero(); n];
                row[y] = BigInt::one();
                row[z] = -BigInt::one();
                rows.push(row);
            }
        }
    }
    let ab = FgAbelian::from_relations(&rows, n);
    let orbits = q.orbits().len();
    if !ab.is_free() || ab.rank() != orbits {
        return Err(Error::Internal(format!("abelianization {ab} is not free of rank {orbits}")));
    }
    Ok(ab)
}

/// Structural summary of `G(Q)`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub size: usize,
    pub inn_order: usize,
    pub transversal_size: usize,
    pub schreier_generators: usize,
    #[serde(rename = "K")]
    pub k: FgAbelian,
    pub qconj_size: usize,
    pub injective: bool,
    pub abelianization: FgAbelian,
    pub abelian: bool,
    pub gamma2: SubgroupSummary,
}

pub fn envelope_report(model: &EnvelopeModel) -> Result<EnvelopeReport> {
    let q = model.quandle();
    let qc = qconj(model);
    Ok(EnvelopeReport {
        size: q.len(),
        inn_order: model.inn_order(),
        transversal_size: model.transversal().len(),
        schreier_generators: model.schreier_generator_count(),
        k: model.k_group().clone(),
        qconj_size: qc.quandle.len(),
        injective: qc.is_injective(),
        abelianization: abelianization(q)?,
        abelian: model.is_abelian(),
        gamma2: gamma2(model).summary(),
    })
}

/// Builds the model with explicit caps; convenient re-export of [`EnvelopeModel::build`].
pub fn envelope(q: &FiniteQuandle, caps: &Caps) -> Result<EnvelopeModel> {
    EnvelopeModel::build(q, caps)
}

/// `Q_conj` and `θ : Q → Q_conj`.
pub fn q_conj(q: &FiniteQuandle, caps: &Caps) -> Result<QConj> {
    Ok(qconj(&EnvelopeModel::build(q, caps)?))
}

pub fn is_injective(q: &FiniteQuandle, caps: &Caps) -> Result<bool> {
    Ok(q_conj(q, caps)?.is_injective())
}

/// `Z(G(Q))`, computed as the kernel `K` of the model of `Q_conj`, where it
/// is exactly the center.
pub fn center(q: &FiniteQuandle, caps: &Caps) -> Result<FgAbelian> {
    let qc = q_conj(q, caps)?;
    Ok(EnvelopeModel::build(&qc.quandle, caps)?.k_group().clone())
}

/// `Γ₂ = [G(Q), G(Q)]` inside the model.
pub fn derived_subgroup_data(model: &EnvelopeModel) -> Subgroup {
    gamma2(model)
}

/// Whether the lower central series of `G(Q)` reaches the trivial group.
pub fn model_is_nilpotent(model: &EnvelopeModel, caps: &Caps) -> Result<bool> {
    Ok(lower_central_series(model, caps)?.reaches_trivial)
}

/// `|Γ₂ G(Q)|`, which is the torsion subgroup of `G(Q)` for nilpotent `Q`.
pub fn torsion_subgroup_order(model: &EnvelopeModel, caps: &Caps) -> Result<BigUint> {
    if !model.inn().is_nilpotent(caps.closure)? {
        return Err(Error::Domain("torsion subgroup order requires a nilpotent quandle".into()));
    }
    gamma2(model)
        .order()
        .ok_or_else(|| Error::Internal("Γ₂ of a nilpotent quandle is infinite in the model".into()))
}

/// Number of finite-order elements of `G(Q)`, by power iteration.
///
/// `t_σ k` has finite order iff its `ord(σ)`-th power, which lies in `K`,
/// has zero free part. That power is `t_σ^{ord σ} · (ord σ)·k`, so exactly
/// the `σ` whose `t_σ^{ord σ}` has free part divisible by `ord σ` contribute,
/// each with `|T(K)|` elements.
pub fn count_torsion_elements(model: &EnvelopeModel) -> BigUint {
    let divisible = (0..model.inn_order())
        .filter(|&s| {
            let order = model.inn().elements()[s].order();
            let p = model.power(&model.coset_rep(s), order as i64);
            let m = BigInt::from(order);
            p.k.free.iter().all(|c| (c % &m).is_zero())
        })
        .count();
    BigUint::from(divisible) * model.k_group().torsion_order()
}
