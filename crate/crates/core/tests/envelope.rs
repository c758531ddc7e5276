use num_bigint::{BigInt, BigUint};
use num_traits::One;

use qf_core::envelope::{
    abelianization, center, count_torsion_elements, envelope_report, gamma2, inn_projection, is_injective,
    non_injectivity_witness, presentation, q_conj, torsion_subgroup_order, Letter,
};
use qf_core::perm::Permutation;
use qf_core::{
    conj_quandle, core_quandle, dihedral_quandle, q3_example, small_groups, trivial_quandle, Caps, EnvelopeModel,
    Error, FgAbelian, FiniteGroup, GroupWord,
};

fn caps() -> Caps {
    Caps::default()
}

fn word(letters: &[(usize, bool)]) -> GroupWord {
    GroupWord::new(letters.iter().map(|&(i, inv)| if inv { Letter::neg(i) } else { Letter::pos(i) }).collect())
}

#[test]
fn presentation_shapes() {
    let rel = presentation(&trivial_quandle(1).unwrap());
    assert_eq!(rel.len(), 1);
    assert!(rel[0].freely_reduced().is_empty());
    let q3 = presentation(&q3_example());
    assert_eq!(q3.len(), 9);
    assert!(q3.contains(&word(&[(1, false), (0, false), (1, true), (2, true)])));
    for r in presentation(&trivial_quandle(2).unwrap()) {
        let l = r.letters();
        assert_eq!((l[0].index, l[1].index), (l[2].index, l[3].index));
    }
}

#[test]
fn inn_projection_examples() {
    let q = q3_example();
    assert!(inn_projection(&q, &GroupWord::generator(0)).unwrap().is_identity());
    assert!(inn_projection(&q, &GroupWord::empty()).unwrap().is_identity());
    assert!(inn_projection(&q, &word(&[(1, false), (0, false), (1, true)])).unwrap().is_identity());
    assert_eq!(
        inn_projection(&q, &GroupWord::generator(1)).unwrap(),
        Permutation::from_cycles(3, &[&[0, 2]]).unwrap()
    );
    assert!(matches!(inn_projection(&q, &GroupWord::generator(3)), Err(Error::Malformed(_))));
}

#[test]
fn build_examples() {
    let t2 = EnvelopeModel::build(&trivial_quandle(2).unwrap(), &caps()).unwrap();
    assert_eq!((t2.inn_order(), t2.k_group().clone()), (1, FgAbelian::free(2)));
    let q3 = EnvelopeModel::build(&q3_example(), &caps()).unwrap();
    assert_eq!((q3.inn_order(), q3.k_group().clone()), (2, FgAbelian::free(2)));
    assert!(q3.is_abelian());
    let r3 = EnvelopeModel::build(&dihedral_quandle(3).unwrap(), &caps()).unwrap();
    assert_eq!(r3.inn_order(), 6);
    assert_eq!(r3.k_group().rank(), 1);
    assert!(r3.k_group().is_free());
}

#[test]
fn transversal_is_shortlex() {
    let m = EnvelopeModel::build(&dihedral_quandle(3).unwrap(), &caps()).unwrap();
    assert!(m.transversal()[0].is_empty());
    assert!(m.transversal().windows(2).all(|w| w[0].len() <= w[1].len()));
    for (i, t) in m.transversal().iter().enumerate() {
        assert_eq!(inn_projection(m.quandle(), t).unwrap(), m.inn().elements()[i]);
    }
}

#[test]
fn normal_form_examples() {
    let q3 = EnvelopeModel::build(&q3_example(), &caps()).unwrap();
    assert_eq!(q3.normal_form(&GroupWord::empty()), q3.identity());
    assert_eq!(q3.normal_form(&word(&[(0, false), (2, true)])), q3.identity());
    assert!(q3.words_equal(&GroupWord::generator(0), &GroupWord::generator(2)));
    let t2 = EnvelopeModel::build(&trivial_quandle(2).unwrap(), &caps()).unwrap();
    assert!(!t2.words_equal(&GroupWord::generator(0), &GroupWord::generator(1)));
    assert!(!t2.is_infinite_order(&GroupWord::empty()));
    assert!(matches!(q3.try_normal_form(&GroupWord::generator(7)), Err(Error::Malformed(_))));
}

#[test]
fn torsion_elements_have_finite_order() {
    // K(Core(Z/4)) has torsion, so G has finite-order elements off the identity
    let q = core_quandle(&FiniteGroup::cyclic(4));
    let m = EnvelopeModel::build(&q, &caps()).unwrap();
    assert!(!m.k_group().is_free());
    let t = m.k_unit(m.k_group().rank());
    assert!(!m.nf_has_infinite_order(&t));
    let mut p = t.clone();
    let mut steps = 1;
    while p != m.identity() {
        p = m.multiply(&p, &t);
        steps += 1;
    }
    assert_eq!(BigInt::from(steps), m.k_group().torsion()[0]);
}

#[test]
fn qconj_examples() {
    let q3 = q_conj(&q3_example(), &caps()).unwrap();
    assert_eq!(q3.quandle.len(), 2);
    assert!(q3.quandle.is_trivial());
    assert_eq!(q3.theta, vec![0, 1, 0]);
    for n in 1..=4 {
        let t = q_conj(&trivial_quandle(n).unwrap(), &caps()).unwrap();
        assert_eq!(t.theta, (0..n).collect::<Vec<_>>());
    }
    assert!(is_injective(&dihedral_quandle(3).unwrap(), &caps()).unwrap());
    assert!(!is_injective(&q3_example(), &caps()).unwrap());
    assert!(is_injective(&trivial_quandle(2).unwrap(), &caps()).unwrap());
}

#[test]
fn witness_examples() {
    assert_eq!(non_injectivity_witness(&q3_example()), Some((0, 2)));
    assert_eq!(non_injectivity_witness(&trivial_quandle(4).unwrap()), None);
    for (name, g) in small_groups() {
        assert_eq!(non_injectivity_witness(&conj_quandle(&g)), None, "{name}");
    }
}

#[test]
fn center_and_abelianization_examples() {
    assert_eq!(center(&trivial_quandle(2).unwrap(), &caps()).unwrap(), FgAbelian::free(2));
    assert_eq!(center(&q3_example(), &caps()).unwrap(), FgAbelian::free(2));
    assert_eq!(center(&dihedral_quandle(3).unwrap(), &caps()).unwrap().rank(), 1);
    assert_eq!(abelianization(&trivial_quandle(3).unwrap()).unwrap(), FgAbelian::free(3));
    assert_eq!(abelianization(&q3_example()).unwrap(), FgAbelian::free(2));
    assert_eq!(abelianization(&dihedral_quandle(3).unwrap()).unwrap(), FgAbelian::free(1));
}

#[test]
fn derived_subgroup_examples() {
    let t3 = EnvelopeModel::build(&trivial_quandle(3).unwrap(), &caps()).unwrap();
    assert!(gamma2(&t3).is_trivial());
    let q3 = EnvelopeModel::build(&q3_example(), &caps()).unwrap();
    assert!(gamma2(&q3).is_trivial());
    // Γ₂ is finite for every finite quandle: [G, G] is finite when G/Z is.
    let r3 = EnvelopeModel::build(&dihedral_quandle(3).unwrap(), &caps()).unwrap();
    let g2 = gamma2(&r3);
    assert!(g2.is_finite());
    assert_eq!(g2.order(), Some(BigUint::from(3u32)));
    assert_eq!(count_torsion_elements(&r3), BigUint::from(3u32));
}

#[test]
fn torsion_subgroup_order_examples() {
    let t = EnvelopeModel::build(&trivial_quandle(3).unwrap(), &caps()).unwrap();
    assert!(torsion_subgroup_order(&t, &caps()).unwrap().is_one());
    let q3 = EnvelopeModel::build(&q3_example(), &caps()).unwrap();
    assert!(torsion_subgroup_order(&q3, &caps()).unwrap().is_one());
    let r3 = EnvelopeModel::build(&dihedral_quandle(3).unwrap(), &caps()).unwrap();
    assert!(matches!(torsion_subgroup_order(&r3, &caps()), Err(Error::Domain(_))));
}

#[test]
fn larger_quandles() {
    // the six transpositions of S4 (Inn = S4), and dihedral quandles of orders 5 and 6
    let g = FiniteGroup::symmetric(4);
    let s4 = conj_quandle(&g);
    let transpositions = s4
        .orbits()
        .blocks()
        .iter()
        .find(|b| b.len() == 6 && g.mul(b[0], b[0]) == g.identity())
        .cloned()
        .expect("transposition class");
    let sub = s4.subquandle(&transpositions).unwrap();
    assert!(sub.is_indecomposable());
    for q in [dihedral_quandle(6).unwrap(), dihedral_quandle(5).unwrap(), sub] {
        let m = EnvelopeModel::build(&q, &caps()).unwrap();
        m.check_cocycle().unwrap();
        assert_eq!(m.k_group().rank(), q.orbits().len());
        let report = envelope_report(&m).unwrap();
        assert!(report.gamma2.finite);
    }
}

#[test]
fn inn_cap_is_a_resource_error() {
    let q = dihedral_quandle(5).unwrap();
    let caps = Caps::default().with_overrides("inn=4").unwrap();
    assert!(matches!(EnvelopeModel::build(&q, &caps), Err(Error::Resource { .. })));
}
