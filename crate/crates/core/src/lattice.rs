//! Exact integer lattice normal forms over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<BigInt>;

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Replaces `(a, b)` with `(p·a + q·b, −(b_c/g)·a + (a_c/g)·b)` where
/// `g = p·a_c + q·b_c = gcd(a_c, b_c)`; afterwards `b[c] = 0`.
fn gcd_combine(a: &mut IntRow, b: &mut IntRow, c: usize) {
    let ac = a[c].clone();
    let bc = b[c].clone();
    let egcd = ac.extended_gcd(&bc);
    let (g, p, q) = (egcd.gcd, egcd.x, egcd.y);
    let (u, v) = (&bc / &g, &ac / &g);
    for k in 0..a.len() {
        if a[k].is_zero() && b[k].is_zero() {
            continue;
        }
        let na = &p * &a[k] + &q * &b[k];
        let nb = &v * &b[k] - &u * &a[k];
        a[k] = na;
        b[k] = nb;
    }
}

/// Canonical row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are nonzero, pivots strictly increase to the right and are
/// positive, and entries above each pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IntRow], width: usize) -> Vec<IntRow> {
    let mut basis: Vec<(usize, IntRow)> = Vec::new();
    for row in rows {
        debug_assert_eq!(row.len(), width);
        insert_row(&mut basis, row.clone());
    }
    basis.sort_by_key(|(p, _)| *p);
    let mut out: Vec<IntRow> = basis.into_iter().map(|(_, r)| r).collect();
    for i in 0..out.len() {
        let p = pivot(&out[i]).expect("basis rows are nonzero");
        if out[i][p].is_negative() {
            for e in out[i].iter_mut() {
                *e = -&*e;
            }
        }
        let pivot_row = out[i].clone();
        for row in out.iter_mut().take(i) {
            let q = row[p].div_floor(&pivot_row[p]);
            sub_multiple(row, &pivot_row, &q);
        }
    }
    out
}

fn pivot(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|e| !e.is_zero())
}

/// Adds `row` to an echelon basis keyed by pivot column.
fn insert_row(basis: &mut Vec<(usize, IntRow)>, mut row: IntRow) {
    loop {
        let Some(c) = pivot(&row) else { return };
        match basis.iter_mut().find(|(p, _)| *p == c) {
            None => {
                basis.push((c, row));
                return;
            }
            Some((_, b)) => {
                if (&row[c] % &b[c]).is_zero() {
                    let q = &row[c] / &b[c];
                    sub_multiple(&mut row, b, &q);
                } else {
                    gcd_combine(b, &mut row, c);
                }
                // stored pivots stay positive
                if b[c].is_negative() {
                    for e in b.iter_mut() {
                        *e = -&*e;
                    }
                }
            }
        }
    }
}

/// Reduces `v` against a Hermite basis; zero remainder means membership.
pub fn reduce_against_hnf(basis: &[IntRow], v: &[BigInt]) -> IntRow {
    let mut v = v.to_vec();
    for row in basis {
        let p = pivot(row).expect("hnf rows are nonzero");
        if !v[p].is_zero() {
            let q = v[p].div_floor(&row[p]);
            sub_multiple(&mut v, row, &q);
        }
    }
    v
}

/// Smith normal form of the lattice quotient `ℤ^width / span(rows)`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `V` with `U·A·V = D`; row `j` gives the coordinates of `e_j`.
    pub column_transform: Vec<IntRow>,
    pub width: usize,
}

impl SmithForm {
    /// Diagonal entry for coordinate `i`, zero past the rank.
    pub fn factor(&self, i: usize) -> BigInt {
        self.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero)
    }
}

pub fn smith_normal_form(rows: &[IntRow], width: usize) -> SmithForm {
    let mut a = hermite_normal_form(rows, width);
    let m = a.len();
    let mut v: Vec<IntRow> = (0..width)
        .map(|i| (0..width).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let swap_cols = |a: &mut Vec<IntRow>, v: &mut Vec<IntRow>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_sub = |a: &mut Vec<IntRow>, v: &mut Vec<IntRow>, target: usize, source: usize, q: &BigInt| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            if !row[source].is_zero() {
                let d = q * &row[source];
                row[target] -= d;
            }
        }
    };

    let mut diagonal = Vec::new();
    for t in 0..m.min(width) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..width {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(diagonal, v, width);
            };
            a.swap(t, bi);
            if bj != t {
                swap_cols(&mut a, &mut v, t, bj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let pivot_row = a[t].clone();
                    sub_multiple(&mut a[i], &pivot_row, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..width {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_sub(&mut a, &mut v, j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m)
                .find(|&i| (t + 1..width).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let r = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&r) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    finish(diagonal, v, width)
}

fn finish(diagonal: Vec<BigInt>, column_transform: Vec<IntRow>, width: usize) -> SmithForm {
    SmithForm { diagonal, column_transform, width }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[IntRow]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
