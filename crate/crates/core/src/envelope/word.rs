use std::fmt;
use std::ops::Mul;

/// One signed generator `x^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(index: usize) -> Letter {
        Letter { index, inverse: false }
    }

    pub fn neg(index: usize) -> Letter {
        Letter { index, inverse: true }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(self) -> Letter {
        Letter { index: self.index, inverse: !self.inverse }
    }
}

/// A word in the free group on the quandle elements, kept exactly as written.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> GroupWord {
        GroupWord { letters }
    }

    pub fn empty() -> GroupWord {
        GroupWord::default()
    }

    pub fn generator(x: usize) -> GroupWord {
        GroupWord { letters: vec![Letter::pos(x)] }
    }

    /// Positive word `x₁ x₂ ⋯`.
    pub fn positive(indices: &[usize]) -> GroupWord {
        GroupWord { letters: indices.iter().map(|&i| Letter::pos(i)).collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index).max()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }
    }

    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord { letters }
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &GroupWord) -> GroupWord {
        self.concat(other).concat(&self.inverse())
    }

    /// `(a, b) = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent sum: the image under `x ↦ 1`.
    pub fn degree(&self) -> i64 {
        self.letters.iter().map(|l| l.sign()).sum()
    }

    /// Cancels adjacent `x x⁻¹` pairs.
    pub fn freely_reduced(&self) -> GroupWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord { letters: out }
    }
}

impl Mul for &GroupWord {
    type Output = GroupWord;

    fn mul(self, rhs: &GroupWord) -> GroupWord {
        self.concat(rhs)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}", l.index)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Exponent sum of `w`.
pub fn degree(w: &GroupWord) -> i64 {
    w.degree()
}
