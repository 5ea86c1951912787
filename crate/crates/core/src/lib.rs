//! Probability over finite many-valued logics.
//!
//! Define a logic as a finite truth-value algebra with cognitive loads,
//! consequence rules and an equivalence scheme; this crate then
//!
//! - computes the finite quotient algebra of formulas over a letter set
//!   ([`semantics`]),
//! - synthesizes the complete finite probability axiom system as the
//!   facets of the cognitive-evaluation polytope ([`coherence`]),
//! - decides coherence of belief assignments and extracts verified Dutch
//!   books from incoherent ones ([`coherence`]),
//! - mechanically verifies soundness and completeness of candidate axiom
//!   templates against the synthesized system ([`templates`]).
//!
//! All arithmetic is exact rational; identical inputs produce identical
//! outputs, down to the byte.

pub mod coherence;
pub mod expression;
pub mod formula;
pub mod io;
pub mod logic;
pub mod semantics;
pub mod templates;

pub use coherence::{
    check_coherence, extract_dutch_book, generate_axioms, verify_dutch_book, AxiomSet,
    BeliefAssignment, CoherenceOutcome, CoherenceVerdict, DutchBook,
};
pub use coherentia_geometry::rat::Rat;
pub use formula::{parse_formula, render_formula, Formula};
pub use logic::{builtin_logic, validate_logic, LogicSpec};
pub use semantics::{
    cognitive_matrix, enumerate_valuations, entails, eval_formula, logically_equivalent,
    quotient_algebra, QuotientAlgebra,
};
pub use templates::{
    builtin_templates, resolve_templates, verify_axiom_completeness, AxiomTemplate,
};
