//! A fixed, deterministic corpus of small quandles up to isomorphism.

use std::collections::HashSet;

use itertools::Itertools;

use crate::group::small_groups;
use crate::quandle::{conj_quandle, core_quandle, dihedral_quandle, q3_example, trivial_quandle, FiniteQuandle};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub quandle: FiniteQuandle,
}

/// Lexicographically least relabelled table; equal exactly for isomorphic quandles.
pub fn canonical_table(q: &FiniteQuandle) -> Vec<Vec<usize>> {
    let n = q.len();
    let mut best: Option<Vec<Vec<usize>>> = None;
    for p in (0..n).permutations(n) {
        // p[x] is the new label of x
        let mut inv = vec![0; n];
        for (x, &px) in p.iter().enumerate() {
            inv[px] = x;
        }
        let t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| p[q.op(inv[a], inv[b])]).collect()).collect();
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    }
    best.unwrap_or_default()
}

pub fn isomorphic(a: &FiniteQuandle, b: &FiniteQuandle) -> bool {
    a.len() == b.len() && canonical_table(a) == canonical_table(b)
}

/// Named quandles first (`T1`–`T6`, `Q3`, `R3`), then every new isomorphism
/// class of subquandle of size `≤ max_size` of `Conj(G)` and `Core(G)` for the
/// groups of order `≤ 12`, in order of discovery.
pub fn corpus(max_size: usize) -> Vec<CorpusEntry> {
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |name: String, q: FiniteQuandle, out: &mut Vec<CorpusEntry>| {
        if seen.insert(canonical_table(&q)) {
            out.push(CorpusEntry { name, quandle: q });
        }
    };
    for n in 1..=6 {
        push(format!("T{n}"), trivial_quandle(n).expect("n ≥ 1"), &mut out);
    }
    push("Q3".into(), q3_example(), &mut out);
    push("R3".into(), dihedral_quandle(3).expect("n ≥ 1"), &mut out);
    for (gname, g) in small_groups() {
        for (kind, q) in [("conj", conj_quandle(&g)), ("core", core_quandle(&g))] {
            for size in 1..=max_size.min(q.len()) {
                for subset in (0..q.len()).combinations(size) {
                    if q.is_subquandle(&subset) {
                        let sub = q.subquandle(&subset).expect("closed subset");
                        let label = subset.iter().map(|x| (x + 1).to_string()).join(",");
                        push(format!("{kind}({gname})[{label}]"), sub, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// The standard corpus: subquandles of size `≤ 5`.
pub fn test_corpus() -> Vec<CorpusEntry> {
    corpus(5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let r3 = dihedral_quandle(3).unwrap();
        let relabeled = FiniteQuandle::from_table_unchecked(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert!(isomorphic(&r3, &relabeled));
        assert!(!isomorphic(&r3, &trivial_quandle(3).unwrap()));
    }

    #[test]
    fn corpus_is_deduplicated() {
        let c = corpus(4);
        for (i, a) in c.iter().enumerate() {
            for b in &c[i + 1..] {
                assert!(!isomorphic(&a.quandle, &b.quandle), "{} ≅ {}", a.name, b.name);
            }
        }
        assert!(c.iter().any(|e| e.name == "Q3"));
    }
}
