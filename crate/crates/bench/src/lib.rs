//! Shared inputs for the benchmarks.

use num_bigint::BigInt;
use qf_core::envelope::presentation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use qf_core::lattice::IntRow;
use qf_core::{conj_quandle, dihedral_quandle, FiniteGroup, FiniteQuandle, GroupWord, Letter};

/// Named quandles of increasing `|Inn(Q)|`.
pub fn quandles() -> Vec<(&'static str, FiniteQuandle)> {
    let s4 = FiniteGroup::symmetric(4);
    let conj = conj_quandle(&s4);
    let transpositions = conj
        .orbits()
        .blocks()
        .iter()
        .find(|b| b.len() == 6 && s4.mul(b[0], b[0]) == s4.identity())
        .cloned()
        .expect("S4 has six transpositions");
    vec![
        ("R3", dihedral_quandle(3).unwrap()),
        ("R5", dihedral_quandle(5).unwrap()),
        ("R7", dihedral_quandle(7).unwrap()),
        ("S4-transpositions", conj.subquandle(&transpositions).unwrap()),
    ]
}

/// Exponent-sum matrix of the defining relators, one row per relator.
pub fn relator_matrix(q: &FiniteQuandle) -> Vec<IntRow> {
    presentation(q)
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::from(0); q.len()];
            for l in r.letters() {
                row[l.index] += if l.inverse { -1 } else { 1 };
            }
            row
        })
        .collect()
}

/// A reproducible random word of the given length.
pub fn word(n: usize, len: usize, seed: u64) -> GroupWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GroupWord::new((0..len).map(|_| Letter { index: rng.gen_range(0..n), inverse: rng.gen_bool(0.5) }).collect())
}
