//! The thirteen acceptance criteria, run over the shared corpus. Each prints
//! one `[PASS]`/`[FAIL]` line; the test fails if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use qf_core::corpus::{test_corpus, CorpusEntry};
use qf_core::envelope::{
    abelianization, count_torsion_elements, degree, gamma2, qconj, qconj_isomorphism, EnvelopeModel, FgAbelian,
    GroupWord, QConjIsomorphism,
};
use qf_core::invariants::{full_report, nilpotency_verdicts, nilpotent_constancy_check};
use qf_core::quandle::{dihedral_quandle, q3_example};
use qf_core::rep::{abelian_faithful_rep, faithfulness_probe, induced_rep, quandle_rep, separating_finite_quotient, verify_rep};
use qf_core::{small_groups, Caps};

struct Item {
    entry: CorpusEntry,
    model: EnvelopeModel,
    iso: QConjIsomorphism,
}

type Outcome = Result<String, String>;

fn each(items: &[Item], mut check: impl FnMut(&Item) -> Result<(), String>) -> Outcome {
    for it in items {
        check(it).map_err(|e| format!("{}: {e}", it.entry.name))?;
    }
    Ok(format!("{} quandles", items.len()))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c01_q3() -> Outcome {
    let caps = Caps::default();
    let model = EnvelopeModel::build(&q3_example(), &caps).map_err(|e| e.to_string())?;
    ensure(model.words_equal(&GroupWord::generator(0), &GroupWord::generator(2)), "φ(x) ≠ φ(z)")?;
    let qc = qconj(&model);
    ensure(qc.quandle.len() == 2 && qc.quandle.is_trivial(), "Q_conj is not the trivial 2-element quandle")?;
    ensure(qc.theta[0] == qc.theta[2] && qc.theta[0] != qc.theta[1], "θ does not identify exactly x and z")?;
    ensure(model.is_abelian(), "G(Q₃) is not abelian")?;
    let ab = abelianization(&q3_example()).map_err(|e| e.to_string())?;
    ensure(ab == FgAbelian::free(2), format!("abelianization {ab}"))?;
    Ok("φ(x)=φ(z), |Q_conj|=2 trivial, G(Q₃) abelian, G^ab = Z^2".into())
}

fn c02_abelianization(items: &[Item]) -> Outcome {
    each(items, |it| {
        let ab = abelianization(&it.entry.quandle).map_err(|e| e.to_string())?;
        ensure(ab == FgAbelian::free(it.entry.quandle.orbits().len()), format!("abelianization {ab}"))
    })
}

fn c03_soundness(items: &[Item]) -> Outcome {
    each(items, |it| {
        it.model.check_relators().map_err(|e| e.to_string())?;
        it.model.check_cocycle().map_err(|e| e.to_string())?;
        it.model.check_centrality().map_err(|e| e.to_string())
    })
}

fn c04_qconj_isomorphism(items: &[Item]) -> Outcome {
    // qconj_isomorphism already verified θ, its section, Z(G(Q)) ≅ K(Q_conj)
    // and |Inn(Q)/h(Z)| = |Inn(Q_conj)|; re-assert the returned data here.
    let mut inn_differs = 0;
    let mut k_differs = 0;
    let detail = each(items, |it| {
        let conj = &it.iso.conj_model;
        ensure(it.iso.inner_quotient_order == conj.inn_order(), "inner quotient order mismatch")?;
        ensure(&it.iso.center.group == conj.k_group(), "center/K mismatch")?;
        if it.model.inn_order() != conj.inn_order() {
            inn_differs += 1;
        }
        if it.model.k_group() != conj.k_group() {
            k_differs += 1;
        }
        Ok(())
    })?;
    Ok(format!(
        "{detail}; |Inn(Q)| itself differs from |Inn(Q_conj)| on {inn_differs}, K(Q) from K(Q_conj) on {k_differs} \
         (only G/Z and Z are invariants of the group)"
    ))
}

fn c05_qconj_injective(items: &[Item]) -> Outcome {
    each(items, |it| ensure(qconj(&it.iso.conj_model).is_injective(), "Q_conj is not injective"))
}

fn c06_infinite_order(items: &[Item]) -> Outcome {
    each(items, |it| {
        for x in 0..it.entry.quandle.len() {
            let w = GroupWord::generator(x);
            ensure(degree(&w) == 1, format!("degree of x{x}"))?;
            ensure(it.model.is_infinite_order(&w), format!("x{x} has finite order"))?;
            ensure(it.model.nf_has_infinite_order(it.model.generator(x)), format!("nf of x{x} has finite order"))?;
        }
        Ok(())
    })
}

fn c07_torsion_commutation(items: &[Item]) -> Outcome {
    each(items, |it| {
        let q = &it.entry.quandle;
        for x in 0..q.len() {
            let m = q.left_translation(x).order() as i64;
            let xm = GroupWord::generator(x).pow(m);
            for y in 0..q.len() {
                let w = xm.conjugate(&GroupWord::generator(y));
                ensure(it.model.words_equal(&w, &GroupWord::generator(y)), format!("x{x}^{m} y{y} x{x}^-{m} ≠ y{y}"))?;
            }
        }
        Ok(())
    })
}

fn c08_representation(items: &[Item], caps: &Caps) -> Outcome {
    let mut max_dim = 0;
    let detail = each(items, |it| {
        let q = &it.entry.quandle;
        let rep = induced_rep(&it.model, &abelian_faithful_rep(it.model.k_group())).map_err(|e| e.to_string())?;
        max_dim = max_dim.max(rep.dim);
        let bad = verify_rep(q, &rep).map_err(|e| e.to_string())?;
        ensure(bad.is_none(), format!("conjugation relation fails at {bad:?}"))?;
        ensure(
            rep.images.iter().all(|m| m.is_unimodular_block_monomial() && m.determinant().abs_is_one()),
            "image not block-monomial unimodular",
        )?;
        let probe = faithfulness_probe(&it.model, &rep, 4).map_err(|e| e.to_string())?;
        ensure(probe.faithful, format!("probe collision {:?}", probe.witness))?;
        let qr = quandle_rep(q, caps).map_err(|e| e.to_string())?;
        let checks = verify_rep(&qr.qconj.quandle, &qr.rep).map_err(|e| e.to_string())?;
        ensure(checks.is_none(), "Q_conj representation fails a relation")?;
        for a in 0..q.len() {
            for b in 0..q.len() {
                let same_class = qr.qconj.theta[a] == qr.qconj.theta[b];
                ensure(same_class == (qr.images[a] == qr.images[b]), format!("matrices of {a}, {b}"))?;
            }
        }
        Ok(())
    })?;
    Ok(format!("{detail}; probe length 4; largest dimension {max_dim}"))
}

trait AbsOne {
    fn abs_is_one(&self) -> bool;
}

impl AbsOne for num_bigint::BigInt {
    fn abs_is_one(&self) -> bool {
        self.magnitude().is_one()
    }
}

fn c09_separation(items: &[Item], caps: &Caps) -> Outcome {
    let mut primes: BTreeMap<u64, usize> = BTreeMap::new();
    let mut count = 0;
    for it in items.iter().filter(|it| it.iso.qconj.is_injective()) {
        let s = separating_finite_quotient(&it.entry.quandle, caps, 97).map_err(|e| format!("{}: {e}", it.entry.name))?;
        ensure(s.prime <= 97 && !s.used_qconj, format!("{}: prime {}", it.entry.name, s.prime))?;
        *primes.entry(s.prime).or_default() += 1;
        count += 1;
    }
    let found: Vec<String> = primes.iter().map(|(p, c)| format!("p={p}×{c}")).collect();
    Ok(format!("{count} injective quandles; primes found: {}", found.join(", ")))
}

fn c10_nilpotency(items: &[Item], caps: &Caps) -> Outcome {
    let mut nilpotent = 0;
    let detail = each(items, |it| {
        let v = nilpotency_verdicts(&it.model, &it.iso.conj_model, caps).map_err(|e| e.to_string())?;
        ensure(v.agree(), format!("{v:?}"))?;
        nilpotent += usize::from(v.inn);
        Ok(())
    })?;
    Ok(format!("{detail}, {nilpotent} nilpotent"))
}

fn c11_constancy(items: &[Item], caps: &Caps) -> Outcome {
    let targets: Vec<_> = small_groups().into_iter().filter(|(_, g)| g.order() <= 8 && g.is_nilpotent()).collect();
    let mut sources = vec![("R3".to_string(), dihedral_quandle(3).expect("R3"))];
    sources.extend(
        items.iter().filter(|it| it.entry.quandle.is_indecomposable()).map(|it| (it.entry.name.clone(), it.entry.quandle.clone())),
    );
    for (name, q) in &sources {
        for (gname, g) in &targets {
            let ok = nilpotent_constancy_check(q, g, caps).map_err(|e| format!("{name} → {gname}: {e}"))?;
            ensure(ok, format!("{name} → Conj({gname}) has a non-constant morphism on a component"))?;
        }
    }
    Ok(format!("{} sources × {} nilpotent groups", sources.len(), targets.len()))
}

fn c12_report(items: &[Item], caps: &Caps) -> Outcome {
    each(items, |it| {
        let r = full_report(&it.entry.quandle, caps).map_err(|e| e.to_string())?;
        let rank = r.abelianization.rank();
        ensure(r.betti.get(1) == Some(&BigUint::from(rank)) && rank == r.orbit_count, "b₁ ≠ rank ≠ r")?;
        ensure(r.betti.iter().eq(r.betti.iter().rev()), "betti not symmetric")?;
        let total: BigUint = r.betti.iter().sum();
        ensure(total == BigUint::one() << r.orbit_count, "betti sum ≠ 2^r")?;
        ensure(r.malcev_dim == r.orbit_count, "malcev_dim ≠ r")?;
        ensure(r.gamma2_finite.is_some() == r.nilpotent, "gamma2 reported for a non-nilpotent quandle")
    })
}

fn c13_gamma2(items: &[Item], caps: &Caps) -> Outcome {
    let mut nilpotent = 0;
    let mut nontrivial = 0;
    each(items, |it| {
        if !it.model.inn().is_nilpotent(caps.closure).map_err(|e| e.to_string())? {
            return Ok(());
        }
        nilpotent += 1;
        let g2 = gamma2(&it.model);
        let order = g2.order().ok_or("Γ₂ infinite")?;
        let oracle = count_torsion_elements(&it.model);
        ensure(order == oracle, format!("|Γ₂| = {order}, torsion elements = {oracle}"))?;
        ensure(it.model.k_group().rank() == it.entry.quandle.orbits().len(), "K rank ≠ orbit count")?;
        if !order.is_one() {
            nontrivial += 1;
        }
        ensure(!order.is_zero(), "empty")
    })?;
    Ok(format!("{nilpotent} nilpotent quandles, {nontrivial} with nontrivial Γ₂"))
}

/// Runs without the libtest harness so every criterion line reaches the log.
fn main() {
    let caps = Caps::default();
    let start = Instant::now();
    let items: Vec<Item> = test_corpus()
        .into_iter()
        .map(|entry| {
            let model = EnvelopeModel::build(&entry.quandle, &caps).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            let iso = qconj_isomorphism(&model, &caps).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            Item { entry, model, iso }
        })
        .collect();
    println!("corpus: {} quandles, models built in {:.2?}", items.len(), start.elapsed());

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("Q3 reproduction", Box::new(c01_q3)),
        ("abelianization is free of rank |orbits|", Box::new(|| c02_abelianization(&items))),
        ("envelope soundness (relators, cocycle, centrality)", Box::new(|| c03_soundness(&items))),
        ("G(Q) and G(Q_conj) isomorphic", Box::new(|| c04_qconj_isomorphism(&items))),
        ("Q_conj is injective", Box::new(|| c05_qconj_injective(&items))),
        ("generators have infinite order and degree 1", Box::new(|| c06_infinite_order(&items))),
        ("x^m y x^-m = y for m = ord(L_x)", Box::new(|| c07_torsion_commutation(&items))),
        ("faithful block-monomial integral representation", Box::new(|| c08_representation(&items, &caps))),
        ("finite separation modulo a prime <= 97", Box::new(|| c09_separation(&items, &caps))),
        ("nilpotency verdicts coincide", Box::new(|| c10_nilpotency(&items, &caps))),
        ("morphisms into nilpotent groups are component-constant", Box::new(|| c11_constancy(&items, &caps))),
        ("invariant report closed forms", Box::new(|| c12_report(&items, &caps))),
        ("nilpotent Γ2 is finite and equals the torsion", Box::new(|| c13_gamma2(&items, &caps))),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("[PASS] {:02} {name} — {detail} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                println!("[FAIL] {:02} {name} — {why}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    println!("total {:.2?}", start.elapsed());
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
