//! Finite quandles, their enveloping groups, and faithful integral
//! representations.
//!
//! [`EnvelopeModel`] decides the word problem in `G(Q)` through the central
//! extension `1 → K → G(Q) → Inn(Q) → 1`; everything downstream (`Q_conj`,
//! centers, lower central series, induced representations, invariant
//! reports) computes inside that model.
//!
//! ```
//! use qf_core::{q3_example, Caps, EnvelopeModel, GroupWord};
//!
//! let model = EnvelopeModel::build(&q3_example(), &Caps::default()).unwrap();
//! // φ(x) = φ(z) in G(Q₃)
//! assert!(model.words_equal(&GroupWord::generator(0), &GroupWord::generator(2)));
//! assert_eq!(model.k_group().to_string(), "Z^2");
//! ```

pub mod caps;
pub mod corpus;
pub mod envelope;
pub mod error;
pub mod group;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod perm;
pub mod quandle;
pub mod rep;

pub use caps::Caps;
pub use envelope::{
    abelianization, center, count_torsion_elements, envelope_report, gamma2, is_injective, lower_central_series,
    q_conj, qconj_isomorphism, torsion_subgroup_order, EnvelopeModel, EnvelopeReport, FgAbelian, GroupWord,
    KCoordinates, Letter, NormalForm, QConj, Subgroup,
};
pub use error::{Axiom, AxiomViolation, Error, Result};
pub use group::{small_groups, FiniteGroup};
pub use invariants::{full_report, nilpotent_constancy_check, poincare_polynomial, InvariantReport};
pub use io::{format_quandle, parse_group, parse_quandle};
pub use perm::{GroupSeries, PermGroup, Permutation};
pub use quandle::{
    conj_quandle, core_quandle, dihedral_quandle, enumerate_morphisms, is_morphism, q3_example, trivial_quandle,
    validate_quandle, FiniteQuandle, Partition,
};
pub use rep::{
    abelian_faithful_rep, faithfulness_probe, induced_rep, quandle_rep, separating_finite_quotient, verify_rep,
    BlockMatrix, GroupRep, IntMatrix,
};
