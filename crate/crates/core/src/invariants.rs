//! Closed-form invariants of `G(Q)` and property checkers.
//!
//! With `r` the number of orbits: `H*(G(Q); ℚ)` is the exterior algebra on
//! `r` generators (Betti numbers `C(r, k)`), and the Malcev Lie algebra of
//! `G(Q)` is abelian of dimension `r`. Both are reported, not constructed.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::caps::Caps;
use crate::envelope::{
    abelianization, lower_central_series, opt_biguint_json, qconj_isomorphism, EnvelopeModel, FgAbelian,
    SubgroupSummary,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quandle::{conj_quandle, enumerate_morphisms, FiniteQuandle};

/// `C(r, 0), …, C(r, r)`.
pub fn poincare_polynomial(r: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..r {
        let next = &row[k] * BigUint::from(r - k) / BigUint::from(k + 1);
        row.push(next);
    }
    row
}

fn biguint_list<S: Serializer>(values: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    struct One<'a>(&'a BigUint);
    impl Serialize for One<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            crate::envelope::biguint_json(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&One(v))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gamma2Report {
    pub finite: bool,
    #[serde(serialize_with = "opt_biguint_json")]
    pub order: Option<BigUint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub orbit_count: usize,
    pub component_count: usize,
    pub abelianization: FgAbelian,
    pub qconj_size: usize,
    pub injective: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    #[serde(serialize_with = "biguint_list")]
    pub betti: Vec<BigUint>,
    pub malcev_dim: usize,
    pub center: FgAbelian,
    /// Present only for nilpotent quandles.
    pub gamma2_finite: Option<Gamma2Report>,
}

/// Nilpotency of `G(Q)` decided three ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilpotencyVerdicts {
    pub inn: bool,
    pub inn_qconj: bool,
    pub model: bool,
}

impl NilpotencyVerdicts {
    pub fn agree(&self) -> bool {
        self.inn == self.inn_qconj && self.inn == self.model
    }
}

pub fn nilpotency_verdicts(model: &EnvelopeModel, conj_model: &EnvelopeModel, caps: &Caps) -> Result<NilpotencyVerdicts> {
    Ok(NilpotencyVerdicts {
        inn: model.inn().is_nilpotent(caps.closure)?,
        inn_qconj: conj_model.inn().is_nilpotent(caps.closure)?,
        model: lower_central_series(model, caps)?.reaches_trivial,
    })
}

pub fn full_report(q: &FiniteQuandle, caps: &Caps) -> Result<InvariantReport> {
    let model = EnvelopeModel::build(q, caps)?;
    let iso = qconj_isomorphism(&model, caps)?;
    let verdicts = nilpotency_verdicts(&model, &iso.conj_model, caps)?;
    if !verdicts.agree() {
        return Err(Error::Internal(format!("nilpotency verdicts disagree: {verdicts:?}")));
    }
    let orbit_count = q.orbits().len();
    let ab = abelianization(q)?;
    let betti = poincare_polynomial(orbit_count);
    if ab.rank() != orbit_count || betti.get(1) != Some(&BigUint::from(orbit_count)) {
        return Err(Error::Internal("first Betti number differs from the abelianization rank".into()));
    }
    let gamma2_finite = verdicts.inn.then(|| {
        let s: SubgroupSummary = crate::envelope::gamma2(&model).summary();
        Gamma2Report { finite: s.finite, order: s.order }
    });
    Ok(InvariantReport {
        orbit_count,
        component_count: q.indecomposable_components(caps)?.len(),
        abelianization: ab,
        qconj_size: iso.qconj.quandle.len(),
        injective: iso.qconj.is_injective(),
        nilpotent: verdicts.inn,
        solvable: model.inn().is_solvable(caps.closure)?,
        betti,
        malcev_dim: orbit_count,
        center: iso.conj_model.k_group().clone(),
        gamma2_finite,
    })
}

/// Enumerates `Q → Conj(H)` for nilpotent `H` and checks that every morphism
/// is constant on each maximal indecomposable subquandle.
pub fn nilpotent_constancy_check(q: &FiniteQuandle, h: &FiniteGroup, caps: &Caps) -> Result<bool> {
    if !h.is_nilpotent() {
        return Err(Error::Domain("target group is not nilpotent".into()));
    }
    let components = q.indecomposable_components(caps)?;
    let maps = enumerate_morphisms(q, &conj_quandle(h), caps)?;
    Ok(maps.iter().all(|f| components.blocks().iter().all(|b| b.iter().all(|&x| f[x] == f[b[0]]))))
}

pub type RationalMatrix = Vec<Vec<BigRational>>;

fn rat_mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn rat_invertible(a: &RationalMatrix) -> bool {
    let n = a.len();
    let mut m = a.clone();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return false };
        m.swap(c, p);
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                let (top, bottom) = m.split_at_mut(r);
                for (dst, src) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                    *dst -= &f * src;
                }
            }
        }
    }
    true
}

/// For a morphism `f : Q → Conj(GL_n(ℚ))` into a uniquely divisible group,
/// reports whether the image is a trivial quandle (all images commute).
pub fn assert_trivial_image(q: &FiniteQuandle, f: &[RationalMatrix], divisible: bool) -> Result<bool> {
    let n = q.len();
    if f.len() != n {
        return Err(Error::Contract(format!("{} matrices for a quandle of size {n}", f.len())));
    }
    let d = f.first().map_or(0, Vec::len);
    for (x, m) in f.iter().enumerate() {
        if m.len() != d || m.iter().any(|r| r.len() != d) || !rat_invertible(m) {
            return Err(Error::Contract(format!("image of {x} is not an invertible {d}×{d} matrix")));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if rat_mul(&f[x], &f[y]) != rat_mul(&f[q.op(x, y)], &f[x]) {
                return Err(Error::Contract(format!("not a quandle morphism at ({x}, {y})")));
            }
        }
    }
    if !divisible {
        return Err(Error::Domain("the target group must be uniquely divisible".into()));
    }
    Ok((0..n).all(|x| (x + 1..n).all(|y| rat_mul(&f[x], &f[y]) == rat_mul(&f[y], &f[x]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::{dihedral_quandle, q3_example, trivial_quandle};
    use num_bigint::BigInt;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn poincare_examples() {
        assert_eq!(poincare_polynomial(0), big(&[1]));
        assert_eq!(poincare_polynomial(2), big(&[1, 2, 1]));
        assert_eq!(poincare_polynomial(3), big(&[1, 3, 3, 1]));
    }

    #[test]
    fn q3_report() {
        let r = full_report(&q3_example(), &Caps::default()).unwrap();
        assert_eq!(r.orbit_count, 2);
        assert_eq!(r.betti, big(&[1, 2, 1]));
        assert!(!r.injective);
        assert_eq!(r.qconj_size, 2);
        assert!(r.nilpotent);
        assert_eq!(r.center, FgAbelian::free(2));
        assert_eq!(r.malcev_dim, 2);
        assert_eq!(r.component_count, 3);
        assert_eq!(r.gamma2_finite, Some(Gamma2Report { finite: true, order: Some(BigUint::one()) }));
    }

    #[test]
    fn r3_report() {
        let r = full_report(&dihedral_quandle(3).unwrap(), &Caps::default()).unwrap();
        assert_eq!(r.orbit_count, 1);
        assert_eq!(r.betti, big(&[1, 1]));
        assert!(r.injective);
        assert!(!r.nilpotent);
        assert!(r.solvable);
        assert_eq!(r.gamma2_finite, None);
    }

    #[test]
    fn trivial_report() {
        for n in 1..=4 {
            let r = full_report(&trivial_quandle(n).unwrap(), &Caps::default()).unwrap();
            assert_eq!(r.center, FgAbelian::free(n));
            assert_eq!(r.gamma2_finite.unwrap().order, Some(BigUint::one()));
        }
    }

    #[test]
    fn constancy_examples() {
        let caps = Caps::default();
        let r3 = dihedral_quandle(3).unwrap();
        assert!(nilpotent_constancy_check(&r3, &FiniteGroup::cyclic(4), &caps).unwrap());
        assert!(nilpotent_constancy_check(&r3, &FiniteGroup::dihedral(4), &caps).unwrap());
        assert!(nilpotent_constancy_check(&trivial_quandle(2).unwrap(), &FiniteGroup::cyclic(2), &caps).unwrap());
        assert!(matches!(
            nilpotent_constancy_check(&r3, &FiniteGroup::symmetric(3), &caps),
            Err(Error::Domain(_))
        ));
    }

    fn unitriangular(a: i64, b: i64, c: i64) -> RationalMatrix {
        let r = |v: i64| BigRational::from(BigInt::from(v));
        vec![vec![r(1), r(a), r(c)], vec![r(0), r(1), r(b)], vec![r(0), r(0), r(1)]]
    }

    #[test]
    fn trivial_image_checker() {
        let q3 = q3_example();
        let constant = vec![unitriangular(1, 2, 3); 3];
        assert!(assert_trivial_image(&q3, &constant, true).unwrap());
        // x, z ↦ A and y ↦ B with A, B commuting unitriangular matrices
        let f = vec![unitriangular(1, 0, 0), unitriangular(2, 0, 5), unitriangular(1, 0, 0)];
        assert!(assert_trivial_image(&q3, &f, true).unwrap());
        let bad = vec![unitriangular(1, 0, 0), unitriangular(0, 1, 0), unitriangular(0, 0, 1)];
        assert!(matches!(assert_trivial_image(&q3, &bad, true), Err(Error::Contract(_))));
        assert!(matches!(assert_trivial_image(&q3, &constant, false), Err(Error::Domain(_))));
    }
}
