use std::fmt;

use thiserror::Error;

/// One of the three quandle axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `x ▷ x = x`.
    Idempotence,
    /// `x ▷ (y ▷ z) = (x ▷ y) ▷ (x ▷ z)`.
    SelfDistributivity,
    /// Every row `y ↦ x ▷ y` is a bijection.
    LeftInvertibility,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Idempotence => "a (idempotence)",
            Axiom::SelfDistributivity => "b (self-distributivity)",
            Axiom::LeftInvertibility => "c (left-invertibility)",
        }
    }
}

/// First violated axiom of a candidate table, with the elements that witness it.
///
/// Witness layout: idempotence `[x]`, self-distributivity `[x, y, z]`,
/// left-invertibility `[x, y1, y2]` with `x ▷ y1 = x ▷ y2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {} violated", self.axiom.label())?;
        let names = ["x", "y", "z"];
        let names: &[&str] = match self.axiom {
            Axiom::LeftInvertibility => &["x", "y1", "y2"],
            _ => &names,
        };
        for (i, w) in self.witness.iter().enumerate() {
            let sep = if i == 0 { " at " } else { ", " };
            write!(f, "{sep}{}={w}", names.get(i).copied().unwrap_or("?"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Unparseable or out-of-range input.
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0}")]
    Axiom(AxiomViolation),
    #[error("resource cap exceeded: {what} (cap {cap}); raise it via QF_CAPS")]
    Resource { what: &'static str, cap: usize },
    /// Input is well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-supplied object breaks the operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A mathematical invariant of a computed object failed.
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
