//! Coherence of belief assignments, Dutch book extraction, and the
//! facet-derived finite axiom system.
//!
//! A belief assignment on formulas `theta_1..theta_k` is coherent exactly
//! when its value vector lies in the convex hull of the cognitive
//! evaluations restricted to those formulas. Membership is decided by
//! exact LP; the non-membership separator converts directly into Dutch
//! book stakes with a guaranteed sure loss. Running facet enumeration on
//! the full cognitive matrix instead yields the finite axiom system for
//! the logic at a given letter set.

use coherentia_geometry::membership::Separator;
use coherentia_geometry::rat::{dot, format_rat, rat, Rat};
use coherentia_geometry::{facet_enumeration, hull_membership, HRepresentation, MembershipResult};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::expression::{FormalExpression, FormalInequality, Relation};
use crate::formula::{render_formula, Formula};
use crate::logic::LogicSpec;
use crate::semantics::{
    cognitive_matrix, enumerate_valuations, eval_formula, quotient_algebra, CognitiveMatrix,
    QuotientAlgebra, SemanticsError, Valuation,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoherenceError {
    #[error("belief assignment is empty")]
    EmptyAssignment,
    #[error("duplicate formula in belief assignment: {0}")]
    DuplicateFormula(String),
    #[error("belief value {value} for {formula} is outside [0,1]")]
    ValueOutOfRange { formula: String, value: String },
    #[error("dutch book extraction requires an incoherent verdict")]
    NotIncoherent,
    #[error("book bets on {0}, which the assignment does not cover")]
    UnknownBookFormula(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A belief assignment: finitely many formulas with exact values in
/// [0,1]. Order is preserved; formulas must be structurally distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeliefAssignment {
    entries: Vec<(Formula, Rat)>,
}

impl BeliefAssignment {
    pub fn new(entries: Vec<(Formula, Rat)>) -> Result<Self, CoherenceError> {
        if entries.is_empty() {
            return Err(CoherenceError::EmptyAssignment);
        }
        for (i, (f, value)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(g, _)| g == f) {
                return Err(CoherenceError::DuplicateFormula(format!("{f}")));
            }
            if value.is_negative() || *value > rat(1) {
                return Err(CoherenceError::ValueOutOfRange {
                    formula: format!("{f}"),
                    value: format_rat(value),
                });
            }
        }
        Ok(BeliefAssignment { entries })
    }

    pub fn entries(&self) -> &[(Formula, Rat)] {
        &self.entries
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|(f, _)| f)
    }

    pub fn value(&self, f: &Formula) -> Option<&Rat> {
        self.entries.iter().find(|(g, _)| g == f).map(|(_, v)| v)
    }

    /// Union of the letters of all formulas, sorted.
    pub fn letters(&self) -> Vec<String> {
        let mut set = std::collections::BTreeSet::new();
        for (f, _) in &self.entries {
            set.extend(f.letters());
        }
        set.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    /// Coherent, with a convex mixture over the valuations (in valuation
    /// order) reproducing the assignment exactly.
    Coherent { lambda: Vec<Rat> },
    /// Incoherent, with a separating hyperplane over the assignment's
    /// formula columns: every cognitive row satisfies
    /// `normal·row >= offset` while the assignment falls strictly below.
    Incoherent { separator: Separator },
}

/// Verdict plus the data needed to interpret it: the letter set, the
/// valuation order behind `lambda`, and the formula column order behind
/// the separator.
#[derive(Clone, Debug)]
pub struct CoherenceOutcome {
    pub verdict: CoherenceVerdict,
    pub letters: Vec<String>,
    pub valuations: Vec<Valuation>,
    pub formulas: Vec<Formula>,
    pub values: Vec<Rat>,
}

impl CoherenceOutcome {
    pub fn is_coherent(&self) -> bool {
        matches!(self.verdict, CoherenceVerdict::Coherent { .. })
    }
}

/// Decides coherence of a belief assignment by restricted-column hull
/// membership over the valuations of the assignment's letters.
pub fn check_coherence(
    spec: &LogicSpec,
    assignment: &BeliefAssignment,
) -> Result<CoherenceOutcome, CoherenceError> {
    let letters = assignment.letters();
    let valuations = enumerate_valuations(spec, &letters)?;
    let formulas: Vec<Formula> = assignment.formulas().cloned().collect();
    let mut points = Vec::with_capacity(valuations.len());
    for w in &valuations {
        let mut row = Vec::with_capacity(formulas.len());
        for f in &formulas {
            let tv = eval_formula(w, f, spec)?;
            row.push(spec.load.get(tv).clone());
        }
        points.push(row);
    }
    let values: Vec<Rat> = assignment.entries.iter().map(|(_, v)| v.clone()).collect();
    let verdict = match hull_membership(&points, &values) {
        MembershipResult::Member { coefficients } => CoherenceVerdict::Coherent {
            lambda: coefficients,
        },
        MembershipResult::NotMember { separator } => CoherenceVerdict::Incoherent { separator },
    };
    Ok(CoherenceOutcome {
        verdict,
        letters,
        valuations,
        formulas,
        values,
    })
}

/// A finite system of stakes guaranteeing the bettor a sure loss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DutchBook {
    pub bets: Vec<(Formula, Rat)>,
    /// Positive lower bound on the bettor's loss at every valuation.
    pub guaranteed_loss_bound: Rat,
}

/// Converts an incoherence separator into a Dutch book: stake `-x_i` on
/// each assignment formula. Since every cognitive row satisfies
/// `row·x >= c` and the assignment has `b·x < c`, the bettor's net at any
/// valuation is `-(row·x - b·x) <= -(c - b·x) < 0`.
pub fn extract_dutch_book(
    assignment: &BeliefAssignment,
    outcome: &CoherenceOutcome,
) -> Result<DutchBook, CoherenceError> {
    let CoherenceVerdict::Incoherent { separator } = &outcome.verdict else {
        return Err(CoherenceError::NotIncoherent);
    };
    let values: Vec<Rat> = assignment.entries.iter().map(|(_, v)| v.clone()).collect();
    let bets: Vec<(Formula, Rat)> = outcome
        .formulas
        .iter()
        .zip(&separator.normal)
        .filter(|(_, x)| !x.is_zero())
        .map(|(f, x)| (f.clone(), -x.clone()))
        .collect();
    let guaranteed_loss_bound = separator.margin(&values);
    debug_assert!(guaranteed_loss_bound.is_positive());
    Ok(DutchBook {
        bets,
        guaranteed_loss_bound,
    })
}

/// Exhaustively computes the bettor's worst-case payoff
/// `max over valuations of sum_i s_i (e(w(theta_i)) - B(theta_i))`.
/// A valid book yields a strictly negative result. Betting the same
/// formula twice is allowed; duplicate stakes add.
pub fn verify_dutch_book(
    spec: &LogicSpec,
    assignment: &BeliefAssignment,
    book: &DutchBook,
) -> Result<Rat, CoherenceError> {
    let mut merged: Vec<(&Formula, Rat)> = Vec::new();
    for (f, stake) in &book.bets {
        if assignment.value(f).is_none() {
            return Err(CoherenceError::UnknownBookFormula(format!("{f}")));
        }
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some((_, s)) => *s += stake,
            None => merged.push((f, stake.clone())),
        }
    }
    let letters = assignment.letters();
    let mut worst: Option<Rat> = None;
    for w in enumerate_valuations(spec, &letters)? {
        let mut payoff = Rat::zero();
        for (f, stake) in &merged {
            let tv = eval_formula(&w, f, spec)?;
            let settle = spec.load.get(tv);
            let b = assignment.value(f).expect("checked above");
            payoff += stake * &(settle - b);
        }
        worst = Some(match worst {
            None => payoff,
            Some(old) => old.max(payoff),
        });
    }
    Ok(worst.expect("at least one valuation"))
}

/// Whether an axiom row came out of the equality system or the facet
/// list of the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomKind {
    Equality,
    Facet,
}

/// One synthesized axiom: the linear row `normal·x (= or >=) offset` over
/// quotient-class belief variables, with its provenance in the
/// H-representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub kind: AxiomKind,
    pub normal: Vec<Rat>,
    pub offset: Rat,
    /// Row index within the H-representation's equality or inequality
    /// block, matching `kind`.
    pub provenance_row: usize,
}

impl Axiom {
    /// The axiom as a formal (in)equality over the class representatives:
    /// `offset <= sum_i normal_i·rep_i`, marked as an equality when the
    /// row is one.
    pub fn formal_inequality(&self, quotient: &QuotientAlgebra) -> FormalInequality {
        let terms: Vec<(Rat, Formula)> = self
            .normal
            .iter()
            .zip(quotient.classes())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, class)| (c.clone(), class.representative.clone()))
            .collect();
        let sum = FormalExpression::linear_combination(&terms, &Rat::zero());
        let constant = FormalExpression::constant(self.offset.clone());
        match self.kind {
            AxiomKind::Equality => FormalInequality::eq(sum, constant),
            AxiomKind::Facet => FormalInequality {
                lhs: constant,
                relation: Relation::Le,
                rhs: sum,
            },
        }
    }

    /// One-line rendering like `1·B(p) + 1·B(~p) = 1`.
    pub fn render(&self, quotient: &QuotientAlgebra, spec: &LogicSpec) -> String {
        let mut out = String::new();
        for (coeff, class) in self.normal.iter().zip(quotient.classes()) {
            if coeff.is_zero() {
                continue;
            }
            if out.is_empty() {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&format!(
                "{}·B({})",
                format_rat(&coeff.abs()),
                render_formula(&class.representative, spec)
            ));
        }
        if out.is_empty() {
            out.push('0');
        }
        let rel = match self.kind {
            AxiomKind::Equality => "=",
            AxiomKind::Facet => ">=",
        };
        format!("{out} {rel} {}", format_rat(&self.offset))
    }
}

/// The finite axiom system synthesized for a logic at a letter set: the
/// equality system and facet inequalities of the cognitive-evaluation
/// polytope, plus the logical axiom carried as metadata.
#[derive(Clone, Debug)]
pub struct AxiomSet {
    pub letters: Vec<String>,
    pub quotient: QuotientAlgebra,
    pub matrix: CognitiveMatrix,
    pub hrep: HRepresentation,
    pub equalities: Vec<Axiom>,
    pub inequalities: Vec<Axiom>,
    /// The logical axiom, generalized through the spec's equivalence
    /// scheme: belief is constant on scheme-equivalence classes.
    pub logical_axiom: String,
}

impl AxiomSet {
    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.equalities.iter().chain(&self.inequalities)
    }
}

/// Synthesizes the finite axiom system: quotient, cognitive matrix,
/// facet enumeration, then one formal inequality per H-row. On
/// construction every cognitive row is re-verified against every axiom
/// through the formal-expression route.
pub fn generate_axioms(
    spec: &LogicSpec,
    letters: &[String],
    cap: usize,
) -> Result<AxiomSet, CoherenceError> {
    let quotient = quotient_algebra(spec, letters, cap)?;
    let matrix = cognitive_matrix(spec, &quotient);
    let hrep = facet_enumeration(&matrix.rows);
    let equalities: Vec<Axiom> = hrep
        .equalities
        .iter()
        .enumerate()
        .map(|(i, (normal, offset))| Axiom {
            kind: AxiomKind::Equality,
            normal: normal.clone(),
            offset: offset.clone(),
            provenance_row: i,
        })
        .collect();
    let inequalities: Vec<Axiom> = hrep
        .inequalities
        .iter()
        .enumerate()
        .map(|(i, (normal, offset))| Axiom {
            kind: AxiomKind::Facet,
            normal: normal.clone(),
            offset: offset.clone(),
            provenance_row: i,
        })
        .collect();
    let logical_axiom = render_logical_axiom(spec);
    let set = AxiomSet {
        letters: letters.to_vec(),
        quotient,
        matrix,
        hrep,
        equalities,
        inequalities,
        logical_axiom,
    };
    verify_axiom_set(spec, &set)?;
    Ok(set)
}

/// Every cognitive evaluation row must satisfy every synthesized axiom;
/// the check walks the formal-expression evaluation route, independent of
/// the geometry that produced the rows.
fn verify_axiom_set(spec: &LogicSpec, set: &AxiomSet) -> Result<(), CoherenceError> {
    for axiom in set.axioms() {
        let ineq = axiom.formal_inequality(&set.quotient);
        for w in &set.quotient.valuations {
            let lookup = |f: &Formula| -> Option<Rat> {
                eval_formula(w, f, spec)
                    .ok()
                    .map(|tv| spec.load.get(tv).clone())
            };
            let ok = ineq
                .satisfied_by(&lookup)
                .expect("representatives evaluate under their own quotient");
            assert!(
                ok,
                "internal error: cognitive evaluation violates generated axiom {}",
                axiom.render(&set.quotient, spec)
            );
        }
    }
    Ok(())
}

fn render_logical_axiom(spec: &LogicSpec) -> String {
    let contexts: Vec<String> = spec
        .equivalence
        .contexts
        .iter()
        .map(|c| c.render(spec))
        .collect();
    if contexts == ["_"] {
        "if phi |= psi and psi |= phi then B(phi) = B(psi)".to_owned()
    } else {
        format!(
            "if C[phi] |= C[psi] and C[psi] |= C[phi] for every context C in {{{}}} then B(phi) = B(psi)",
            contexts.join(", ")
        )
    }
}

/// Renders the separator of an incoherent outcome as the violated member
/// of the formal-inequality pool: `sum_i x_i·B(theta_i) >= c`, which every
/// cognitive evaluation satisfies and the assignment does not.
pub fn render_violated_inequality(spec: &LogicSpec, outcome: &CoherenceOutcome) -> Option<String> {
    let CoherenceVerdict::Incoherent { separator } = &outcome.verdict else {
        return None;
    };
    let mut out = String::new();
    for (coeff, f) in separator.normal.iter().zip(&outcome.formulas) {
        if coeff.is_zero() {
            continue;
        }
        if out.is_empty() {
            if coeff.is_negative() {
                out.push('-');
            }
        } else if coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format!(
            "{}·B({})",
            format_rat(&coeff.abs()),
            render_formula(f, spec)
        ));
    }
    if out.is_empty() {
        out.push('0');
    }
    let b_value = dot(&separator.normal, &outcome.values);
    Some(format!(
        "{out} >= {} (the assignment gives {})",
        format_rat(&separator.offset),
        format_rat(&b_value),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::logic::builtin_logic;
    use crate::semantics::DEFAULT_CAP;
    use coherentia_geometry::rat::ratio;

    fn assignment(spec: &LogicSpec, entries: &[(&str, Rat)]) -> BeliefAssignment {
        BeliefAssignment::new(
            entries
                .iter()
                .map(|(text, v)| (parse_formula(text, spec).unwrap(), v.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn coherent_classical_pair() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(3, 10)), ("~p", ratio(7, 10))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        match &outcome.verdict {
            CoherenceVerdict::Coherent { lambda } => {
                assert_eq!(lambda, &vec![ratio(7, 10), ratio(3, 10)]);
            }
            other => panic!("expected coherent, got {other:?}"),
        }
    }

    #[test]
    fn incoherent_classical_pair_yields_book() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(3, 10)), ("~p", ratio(4, 5))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        assert!(!outcome.is_coherent());
        let book = extract_dutch_book(&a, &outcome).unwrap();
        let stakes: Vec<Rat> = book.bets.iter().map(|(_, s)| s.clone()).collect();
        assert_eq!(stakes, vec![rat(1), rat(1)]);
        assert_eq!(book.guaranteed_loss_bound, ratio(1, 10));
        let worst = verify_dutch_book(&spec, &a, &book).unwrap();
        assert_eq!(worst, ratio(-1, 10));
    }

    #[test]
    fn extraction_requires_incoherence() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(1, 2)), ("~p", ratio(1, 2))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        assert!(matches!(
            extract_dutch_book(&a, &outcome),
            Err(CoherenceError::NotIncoherent)
        ));
    }

    #[test]
    fn single_cognitive_row_is_coherent() {
        let spec = builtin_logic("kleene").unwrap();
        // The row of the valuation p = 1/2 over columns p, ~p.
        let a = assignment(&spec, &[("p", ratio(1, 2)), ("~p", ratio(1, 2))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        match &outcome.verdict {
            CoherenceVerdict::Coherent { lambda } => {
                assert_eq!(lambda.iter().filter(|l| !l.is_zero()).count(), 1);
            }
            other => panic!("expected coherent, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_overcommitted_negation_has_book() {
        let spec = builtin_logic("symmetric").unwrap();
        let a = assignment(&spec, &[("p", rat(1)), ("~p", rat(1))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        assert!(!outcome.is_coherent());
        let book = extract_dutch_book(&a, &outcome).unwrap();
        let worst = verify_dutch_book(&spec, &a, &book).unwrap();
        assert!(worst.is_negative());
        // Exhaustive over all three valuations by construction.
    }

    #[test]
    fn stake_scaling_scales_loss() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(3, 10)), ("~p", ratio(4, 5))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        let book = extract_dutch_book(&a, &outcome).unwrap();
        let scaled = DutchBook {
            bets: book
                .bets
                .iter()
                .map(|(f, s)| (f.clone(), s * rat(3)))
                .collect(),
            guaranteed_loss_bound: &book.guaranteed_loss_bound * rat(3),
        };
        let worst = verify_dutch_book(&spec, &a, &scaled).unwrap();
        assert_eq!(worst, verify_dutch_book(&spec, &a, &book).unwrap() * rat(3));
    }

    #[test]
    fn zero_stakes_are_not_a_book() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(1, 2))]);
        let book = DutchBook {
            bets: vec![(parse_formula("p", &spec).unwrap(), rat(0))],
            guaranteed_loss_bound: rat(0),
        };
        assert_eq!(verify_dutch_book(&spec, &a, &book).unwrap(), rat(0));
    }

    #[test]
    fn duplicate_bets_merge_by_stake_addition() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(3, 10)), ("~p", ratio(4, 5))]);
        let p = parse_formula("p", &spec).unwrap();
        let np = parse_formula("~p", &spec).unwrap();
        let split = DutchBook {
            bets: vec![
                (p.clone(), ratio(1, 2)),
                (np, rat(1)),
                (p, ratio(1, 2)),
            ],
            guaranteed_loss_bound: ratio(1, 10),
        };
        assert_eq!(verify_dutch_book(&spec, &a, &split).unwrap(), ratio(-1, 10));
    }

    #[test]
    fn same_class_conflicting_values_are_incoherent() {
        let spec = builtin_logic("classical").unwrap();
        // p | ~p and q -> q are both tautologies: one column geometrically,
        // so conflicting values are infeasible.
        let a = assignment(&spec, &[("p | ~p", rat(1)), ("q -> q", ratio(9, 10))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        assert!(!outcome.is_coherent());
        let book = extract_dutch_book(&a, &outcome).unwrap();
        assert!(verify_dutch_book(&spec, &a, &book).unwrap().is_negative());
    }

    #[test]
    fn classical_axioms_on_one_letter() {
        let spec = builtin_logic("classical").unwrap();
        let set = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let rendered: Vec<String> = set
            .axioms()
            .map(|a| a.render(&set.quotient, &spec))
            .collect();
        // Classes are ordered [p, ~p, p -> p, p & ~p].
        assert_eq!(
            rendered,
            vec![
                "1·B(p & ~p) = 0",
                "1·B(p -> p) = 1",
                "1·B(p) + 1·B(~p) = 1",
                "-1·B(p) >= -1",
                "1·B(p) >= 0",
            ]
        );
    }

    #[test]
    fn symmetric_axioms_contain_negation_equality() {
        let spec = builtin_logic("symmetric").unwrap();
        let set = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let rendered: Vec<String> = set
            .equalities
            .iter()
            .map(|a| a.render(&set.quotient, &spec))
            .collect();
        assert!(
            rendered.iter().any(|r| r == "1·B(p) + 1·B(~p) = 1"),
            "missing SL2 instance in {rendered:?}"
        );
    }

    #[test]
    fn axiom_generation_is_deterministic() {
        let spec = builtin_logic("lukasiewicz-2").unwrap();
        let a = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        let b = generate_axioms(&spec, &["p".to_owned()], DEFAULT_CAP).unwrap();
        assert_eq!(a.hrep, b.hrep);
    }

    #[test]
    fn value_range_is_rejected_before_geometry() {
        let spec = builtin_logic("classical").unwrap();
        let bad = BeliefAssignment::new(vec![(
            parse_formula("p", &spec).unwrap(),
            ratio(3, 2),
        )]);
        assert!(matches!(
            bad,
            Err(CoherenceError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn duplicate_formulas_rejected() {
        let spec = builtin_logic("classical").unwrap();
        let p = parse_formula("p", &spec).unwrap();
        let dup = BeliefAssignment::new(vec![(p.clone(), rat(1)), (p, rat(0))]);
        assert!(matches!(dup, Err(CoherenceError::DuplicateFormula(_))));
    }

    #[test]
    fn violated_inequality_rendering() {
        let spec = builtin_logic("classical").unwrap();
        let a = assignment(&spec, &[("p", ratio(3, 10)), ("~p", ratio(4, 5))]);
        let outcome = check_coherence(&spec, &a).unwrap();
        let line = render_violated_inequality(&spec, &outcome).unwrap();
        assert_eq!(line, "-1·B(p) - 1·B(~p) >= -1 (the assignment gives -11/10)");
    }
}
