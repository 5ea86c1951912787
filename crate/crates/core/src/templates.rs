//! Candidate axiom templates and their mechanical verification.
//!
//! A template is a formal (in)equality pattern over metavariables with an
//! optional logical side condition. Soundness instantiates the
//! metavariables over all tuples of quotient representatives and checks
//! every cognitive evaluation; by the congruence property, representative
//! instances cover all instances. Completeness compares the template
//! system (plus unit-interval bounds) against the synthesized facet
//! system by exact LP implication in both directions.

use coherentia_geometry::rat::Rat;
use coherentia_geometry::simplex::{maximize_free, maximize_nonneg, LpOutcome};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::coherence::{generate_axioms, AxiomSet, CoherenceError};
use crate::expression::{linearize, ExpressionError, FormalExpression, Relation};
use crate::formula::{render_formula, Formula};
use crate::logic::LogicSpec;
use crate::semantics::{
    entails, eval_formula, is_explosive, is_tautology, QuotientAlgebra, SemanticsError,
};

/// An atomic logical side condition over template patterns.
/// `Tautology` and `Explosive` are the empty-premise and empty-conclusion
/// consequence statements `|= f` and `f |=`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideAtom {
    Entails(Formula, Formula),
    Tautology(Formula),
    Explosive(Formula),
}

/// An axiom template: metavariables, a conjunction of side conditions,
/// and a formal (in)equality pattern. Patterns are formulas and formal
/// expressions whose letters are the metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomTemplate {
    pub name: String,
    pub metavars: Vec<String>,
    pub side: Vec<SideAtom>,
    pub lhs: FormalExpression,
    pub relation: Relation,
    pub rhs: FormalExpression,
}

impl AxiomTemplate {
    /// Human-readable form, e.g. `B(~Phi) = 1 + -1·B(Phi)`.
    pub fn render(&self, spec: &LogicSpec) -> String {
        let side = if self.side.is_empty() {
            String::new()
        } else {
            let atoms: Vec<String> = self
                .side
                .iter()
                .map(|atom| match atom {
                    SideAtom::Entails(a, b) => {
                        format!("{} |= {}", render_formula(a, spec), render_formula(b, spec))
                    }
                    SideAtom::Tautology(a) => format!("|= {}", render_formula(a, spec)),
                    SideAtom::Explosive(a) => format!("{} |=", render_formula(a, spec)),
                })
                .collect();
            format!("if {} then ", atoms.join(" and "))
        };
        format!(
            "{side}{} {} {}",
            self.lhs.render(spec),
            self.relation.symbol(),
            self.rhs.render(spec)
        )
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error("template {template:?}: {source}")]
    Linearize {
        template: String,
        source: ExpressionError,
    },
}

fn phi() -> Formula {
    Formula::letter("Phi")
}

fn psi() -> Formula {
    Formula::letter("Psi")
}

fn neg(f: Formula) -> Formula {
    Formula::unary("~", f)
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::binary("&", a, b)
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::binary("|", a, b)
}

fn b(f: Formula) -> FormalExpression {
    FormalExpression::formula(f)
}

fn konst(n: i64) -> FormalExpression {
    FormalExpression::constant(coherentia_geometry::rat::rat(n))
}

fn minus(a: FormalExpression, b: FormalExpression) -> FormalExpression {
    FormalExpression::sum(a, FormalExpression::product(konst(-1), b))
}

fn template(
    name: &str,
    metavars: &[&str],
    side: Vec<SideAtom>,
    lhs: FormalExpression,
    relation: Relation,
    rhs: FormalExpression,
) -> AxiomTemplate {
    AxiomTemplate {
        name: name.to_owned(),
        metavars: metavars.iter().map(|s| (*s).to_owned()).collect(),
        side,
        lhs,
        relation,
        rhs,
    }
}

/// The named axiom templates from the classical, two-valued, Lukasiewicz
/// and Kleene-family axiomatizations, over the built-in tokens `~ & | ->`.
pub fn builtin_templates() -> Vec<AxiomTemplate> {
    vec![
        // Classical P1: tautologies are fully believed, contradictions not at all.
        template(
            "P1a",
            &["Phi"],
            vec![SideAtom::Tautology(phi())],
            b(phi()),
            Relation::Eq,
            konst(1),
        ),
        template(
            "P1b",
            &["Phi"],
            vec![SideAtom::Tautology(neg(phi()))],
            b(phi()),
            Relation::Eq,
            konst(0),
        ),
        // P2 / L2: monotone along consequence.
        template(
            "P2",
            &["Phi", "Psi"],
            vec![SideAtom::Entails(phi(), psi())],
            b(phi()),
            Relation::Le,
            b(psi()),
        ),
        // P3: inclusion-exclusion for join and meet.
        template(
            "P3",
            &["Phi", "Psi"],
            vec![],
            b(or(phi(), psi())),
            Relation::Eq,
            minus(
                FormalExpression::sum(b(phi()), b(psi())),
                b(and(phi(), psi())),
            ),
        ),
        // L1: tautologies and explosive formulas pin the belief.
        template(
            "L1a",
            &["Phi"],
            vec![SideAtom::Tautology(phi())],
            b(phi()),
            Relation::Eq,
            konst(1),
        ),
        template(
            "L1b",
            &["Phi"],
            vec![SideAtom::Explosive(phi())],
            b(phi()),
            Relation::Eq,
            konst(0),
        ),
        // L3: modularity, the rearranged inclusion-exclusion.
        template(
            "L3",
            &["Phi", "Psi"],
            vec![],
            FormalExpression::sum(b(or(phi(), psi())), b(and(phi(), psi()))),
            Relation::Eq,
            FormalExpression::sum(b(phi()), b(psi())),
        ),
        // SL1: monotone along symmetric consequence.
        template(
            "SL1",
            &["Phi", "Psi"],
            vec![SideAtom::Entails(phi(), psi())],
            b(phi()),
            Relation::Le,
            b(psi()),
        ),
        // SL2: negation complements belief.
        template(
            "SL2",
            &["Phi"],
            vec![],
            b(neg(phi())),
            Relation::Eq,
            minus(konst(1), b(phi())),
        ),
        // SL3: inclusion-exclusion.
        template(
            "SL3",
            &["Phi", "Psi"],
            vec![],
            b(or(phi(), psi())),
            Relation::Eq,
            minus(
                FormalExpression::sum(b(phi()), b(psi())),
                b(and(phi(), psi())),
            ),
        ),
        // SL4: the four-term partition identity.
        template(
            "SL4",
            &["Phi", "Psi"],
            vec![],
            b(phi()),
            Relation::Eq,
            minus(
                FormalExpression::sum(b(and(phi(), psi())), b(and(phi(), neg(psi())))),
                b(and(and(phi(), neg(phi())), and(psi(), neg(psi())))),
            ),
        ),
        // KLP1: monotone along consequence plus contraposed consequence.
        template(
            "KLP1",
            &["Phi", "Psi"],
            vec![
                SideAtom::Entails(phi(), psi()),
                SideAtom::Entails(neg(psi()), neg(phi())),
            ],
            b(phi()),
            Relation::Le,
            b(psi()),
        ),
    ]
}

/// Resolves user-facing names to templates. Group names expand: `P1`
/// covers `P1a` and `P1b`, `L1` covers `L1a` and `L1b`. Case-insensitive.
pub fn resolve_templates(names: &[String]) -> Result<Vec<AxiomTemplate>, TemplateError> {
    let all = builtin_templates();
    let mut out = Vec::new();
    for name in names {
        let lower = name.to_lowercase();
        let expanded: Vec<&str> = match lower.as_str() {
            "p1" => vec!["P1a", "P1b"],
            "l1" => vec!["L1a", "L1b"],
            _ => vec![],
        };
        if expanded.is_empty() {
            let found = all
                .iter()
                .find(|t| t.name.to_lowercase() == lower)
                .ok_or_else(|| TemplateError::UnknownTemplate(name.clone()))?;
            out.push(found.clone());
        } else {
            for n in expanded {
                out.push(all.iter().find(|t| t.name == n).expect("builtin").clone());
            }
        }
    }
    Ok(out)
}

/// A template instance that some cognitive evaluation falsifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessViolation {
    pub template: String,
    pub substitution: Vec<(String, String)>,
    pub valuation: String,
    pub lhs_value: Rat,
    pub rhs_value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub template: String,
    pub instances_checked: usize,
    pub instances_skipped: usize,
    pub violations: Vec<SoundnessViolation>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// SL4 binds Psi inside the pattern even though the metavariable list of
/// the paper statement names both; normalize so iteration covers every
/// letter the patterns actually use.
fn pattern_metavars(t: &AxiomTemplate) -> Vec<String> {
    let mut vars = t.metavars.clone();
    let mut seen: std::collections::BTreeSet<String> = vars.iter().cloned().collect();
    let mut visit = |f: &Formula| {
        for letter in f.letters() {
            if seen.insert(letter.clone()) {
                vars.push(letter);
            }
        }
    };
    for atom in &t.side {
        match atom {
            SideAtom::Entails(a, b) => {
                visit(a);
                visit(b);
            }
            SideAtom::Tautology(a) | SideAtom::Explosive(a) => visit(a),
        }
    }
    for expr in [&t.lhs, &t.rhs] {
        for f in expr.formulas() {
            visit(f);
        }
    }
    vars
}

fn side_holds(
    spec: &LogicSpec,
    letters: &[String],
    side: &[SideAtom],
    bindings: &[(String, Formula)],
) -> Result<bool, SemanticsError> {
    for atom in side {
        let ok = match atom {
            SideAtom::Entails(a, b) => entails(
                spec,
                letters,
                &a.substitute(bindings),
                &b.substitute(bindings),
            )?,
            SideAtom::Tautology(a) => is_tautology(spec, letters, &a.substitute(bindings))?,
            SideAtom::Explosive(a) => is_explosive(spec, letters, &a.substitute(bindings))?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a template over all tuples of class representatives: for each
/// instance whose side condition holds, every cognitive evaluation must
/// satisfy the instantiated (in)equality.
pub fn verify_axiom_soundness(
    spec: &LogicSpec,
    quotient: &QuotientAlgebra,
    template: &AxiomTemplate,
) -> Result<SoundnessReport, TemplateError> {
    let reps: Vec<&Formula> = quotient.classes().iter().map(|c| &c.representative).collect();
    let metavars = pattern_metavars(template);
    let n = reps.len();
    let mut tuple = vec![0usize; metavars.len()];
    let mut checked = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    loop {
        let bindings: Vec<(String, Formula)> = metavars
            .iter()
            .zip(&tuple)
            .map(|(mv, &c)| (mv.clone(), reps[c].clone()))
            .collect();
        if side_holds(spec, &quotient.letters, &template.side, &bindings)? {
            checked += 1;
            let lhs = template.lhs.substitute(&bindings);
            let rhs = template.rhs.substitute(&bindings);
            for w in &quotient.valuations {
                let lookup = |f: &Formula| -> Option<Rat> {
                    eval_formula(w, f, spec)
                        .ok()
                        .map(|tv| spec.load.get(tv).clone())
                };
                let lv = crate::expression::evaluate_expression(&lhs, &lookup)
                    .expect("instances evaluate under cognitive rows");
                let rv = crate::expression::evaluate_expression(&rhs, &lookup)
                    .expect("instances evaluate under cognitive rows");
                let ok = match template.relation {
                    Relation::Le => lv <= rv,
                    Relation::Eq => lv == rv,
                };
                if !ok {
                    violations.push(SoundnessViolation {
                        template: template.name.clone(),
                        substitution: bindings
                            .iter()
                            .map(|(mv, f)| (mv.clone(), render_formula(f, spec)))
                            .collect(),
                        valuation: w.render(spec),
                        lhs_value: lv,
                        rhs_value: rv,
                    });
                }
            }
        } else {
            skipped += 1;
        }
        // Advance the tuple odometer.
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return Ok(SoundnessReport {
                    template: template.name.clone(),
                    instances_checked: checked,
                    instances_skipped: skipped,
                    violations,
                });
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Convenience wrapper computing the quotient first.
pub fn verify_soundness_fresh(
    spec: &LogicSpec,
    letters: &[String],
    template: &AxiomTemplate,
    cap: usize,
) -> Result<SoundnessReport, TemplateError> {
    let quotient = crate::semantics::quotient_algebra(spec, letters, cap)?;
    verify_axiom_soundness(spec, &quotient, template)
}

/// Outcome of the completeness comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletenessVerdict {
    /// The template system cuts out exactly the coherence polytope.
    Complete,
    /// A template failed the soundness precheck.
    Unsound { report: SoundnessReport },
    /// A facet of the polytope is not implied by the template system;
    /// `witness` satisfies every template instance yet is incoherent.
    MissingAxiom {
        axiom: String,
        witness: Vec<Rat>,
    },
    /// A template instance is not implied by the facet system. With sound
    /// templates this indicates an internal inconsistency between the
    /// soundness route and the geometry route, so it is surfaced rather
    /// than swallowed.
    NotImpliedByFacets { instance: String },
}

#[derive(Clone, Debug)]
pub struct CompletenessReport {
    pub verdict: CompletenessVerdict,
    pub template_rows: usize,
    pub facet_rows: usize,
}

/// In >=-form: `normal . x >= offset`.
type Row = (Vec<Rat>, Rat);

fn instance_rows(
    spec: &LogicSpec,
    quotient: &QuotientAlgebra,
    templates: &[AxiomTemplate],
) -> Result<Vec<(String, Row)>, TemplateError> {
    let n = quotient.class_count();
    let class_of = |f: &Formula| quotient.class_of(f, spec);
    let mut rows: Vec<(String, Row)> = Vec::new();
    for t in templates {
        let metavars = pattern_metavars(t);
        let reps: Vec<&Formula> = quotient.classes().iter().map(|c| &c.representative).collect();
        let mut tuple = vec![0usize; metavars.len()];
        loop {
            let bindings: Vec<(String, Formula)> = metavars
                .iter()
                .zip(&tuple)
                .map(|(mv, &c)| (mv.clone(), reps[c].clone()))
                .collect();
            if side_holds(spec, &quotient.letters, &t.side, &bindings)? {
                let lhs = linearize(&t.lhs.substitute(&bindings), n, &class_of).map_err(|e| {
                    TemplateError::Linearize {
                        template: t.name.clone(),
                        source: e,
                    }
                })?;
                let rhs = linearize(&t.rhs.substitute(&bindings), n, &class_of).map_err(|e| {
                    TemplateError::Linearize {
                        template: t.name.clone(),
                        source: e,
                    }
                })?;
                // lhs <= rhs  ==>  (rhs - lhs) . x >= lhs.const - rhs.const
                let diff: Vec<Rat> = rhs
                    .coeffs
                    .iter()
                    .zip(&lhs.coeffs)
                    .map(|(r, l)| r - l)
                    .collect();
                let bound = &lhs.constant - &rhs.constant;
                let label = format!("{}[{}]", t.name, render_bindings(spec, &bindings));
                rows.push((label.clone(), (diff.clone(), bound.clone())));
                if t.relation == Relation::Eq {
                    let neg: Vec<Rat> = diff.iter().map(|v| -v.clone()).collect();
                    rows.push((label, (neg, -bound)));
                }
            }
            let mut i = tuple.len();
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < reps.len() {
                    break;
                }
                tuple[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    // Unit-interval bounds on every class variable.
    for j in 0..n {
        let mut up = vec![Rat::zero(); n];
        up[j] = -Rat::one();
        rows.push((format!("bound[x{j} <= 1]"), (up, -Rat::one())));
        let mut low = vec![Rat::zero(); n];
        low[j] = Rat::one();
        rows.push((format!("bound[x{j} >= 0]"), (low, Rat::zero())));
    }
    Ok(rows)
}

fn render_bindings(spec: &LogicSpec, bindings: &[(String, Formula)]) -> String {
    bindings
        .iter()
        .map(|(mv, f)| format!("{mv}:={}", render_formula(f, spec)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Minimum of `objective . x` over `rows` (in >=-form), decided through
/// the LP dual `max y.b  s.t.  y >= 0, y^T A = objective`, which keeps the
/// tableau small when there are many rows over few variables.
fn implied_minimum(rows: &[Row], objective: &[Rat]) -> Option<Rat> {
    let n = objective.len();
    let matrix: Vec<Vec<Rat>> = (0..n)
        .map(|var| rows.iter().map(|(a, _)| a[var].clone()).collect())
        .collect();
    let offsets: Vec<Rat> = rows.iter().map(|(_, c)| c.clone()).collect();
    match maximize_nonneg(&offsets, &matrix, objective) {
        LpOutcome::Optimal { value, .. } => Some(value),
        // Dual infeasible or unbounded: the primal minimum is unbounded
        // below or the primal is empty; both mean "not implied" here.
        LpOutcome::Infeasible | LpOutcome::Unbounded => None,
    }
}

/// Decides whether the template system and the synthesized axiom system
/// cut out the same solution set, by exact LP in both directions.
pub fn verify_axiom_completeness(
    spec: &LogicSpec,
    letters: &[String],
    templates: &[AxiomTemplate],
    cap: usize,
) -> Result<(CompletenessReport, AxiomSet), TemplateError> {
    let axiom_set = generate_axioms(spec, letters, cap)?;
    let quotient = &axiom_set.quotient;
    for t in templates {
        let report = verify_axiom_soundness(spec, quotient, t)?;
        if !report.passed() {
            let rows = 0;
            return Ok((
                CompletenessReport {
                    verdict: CompletenessVerdict::Unsound { report },
                    template_rows: rows,
                    facet_rows: axiom_set.hrep.equalities.len() * 2
                        + axiom_set.hrep.inequalities.len(),
                },
                axiom_set,
            ));
        }
    }

    let labelled = instance_rows(spec, quotient, templates)?;
    let mut template_rows: Vec<Row> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (label, row) in labelled {
        if !template_rows.contains(&row) {
            template_rows.push(row);
            labels.push(label);
        }
    }

    // Facet rows in >=-form: equalities split into two inequalities.
    let mut facet_rows: Vec<(String, Row)> = Vec::new();
    for axiom in axiom_set.axioms() {
        let rendered = axiom.render(quotient, spec);
        facet_rows.push((
            rendered.clone(),
            (axiom.normal.clone(), axiom.offset.clone()),
        ));
        if axiom.kind == crate::coherence::AxiomKind::Equality {
            facet_rows.push((
                rendered,
                (
                    axiom.normal.iter().map(|v| -v.clone()).collect(),
                    -axiom.offset.clone(),
                ),
            ));
        }
    }

    // Direction 1: every facet row must be implied by the template rows.
    for (rendered, (normal, offset)) in &facet_rows {
        let implied = implied_minimum(&template_rows, normal)
            .map(|min| min >= *offset)
            .unwrap_or(false);
        if !implied {
            let witness = completeness_witness(&template_rows, normal);
            return Ok((
                CompletenessReport {
                    verdict: CompletenessVerdict::MissingAxiom {
                        axiom: rendered.clone(),
                        witness,
                    },
                    template_rows: template_rows.len(),
                    facet_rows: facet_rows.len(),
                },
                axiom_set,
            ));
        }
    }

    // Direction 2: every template row must be implied by the facet system.
    let eqs: Vec<Row> = axiom_set
        .hrep
        .equalities
        .iter()
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect();
    let ineqs: Vec<Row> = axiom_set
        .hrep
        .inequalities
        .iter()
        .map(|(a, c)| (a.clone(), c.clone()))
        .collect();
    for (row, label) in template_rows.iter().zip(&labels) {
        let neg_obj: Vec<Rat> = row.0.iter().map(|v| -v.clone()).collect();
        let implied = match maximize_free(&neg_obj, &eqs, &ineqs) {
            LpOutcome::Optimal { value, .. } => -value >= row.1,
            LpOutcome::Infeasible | LpOutcome::Unbounded => false,
        };
        if !implied {
            return Ok((
                CompletenessReport {
                    verdict: CompletenessVerdict::NotImpliedByFacets {
                        instance: label.clone(),
                    },
                    template_rows: template_rows.len(),
                    facet_rows: facet_rows.len(),
                },
                axiom_set,
            ));
        }
    }

    Ok((
        CompletenessReport {
            verdict: CompletenessVerdict::Complete,
            template_rows: template_rows.len(),
            facet_rows: facet_rows.len(),
        },
        axiom_set,
    ))
}

/// A point satisfying every template row while minimizing the facet
/// normal: with the minimum below the facet offset it witnesses the gap.
fn completeness_witness(template_rows: &[Row], facet_normal: &[Rat]) -> Vec<Rat> {
    let neg: Vec<Rat> = facet_normal.iter().map(|v| -v.clone()).collect();
    match maximize_free(&neg, &[], template_rows) {
        LpOutcome::Optimal { solution, .. } => solution,
        // The template system always contains the cognitive rows, so this
        // LP is feasible and box-bounded.
        _ => panic!("template system unexpectedly empty or unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::builtin_logic;
    use crate::semantics::{quotient_algebra, DEFAULT_CAP};
    use coherentia_geometry::rat::rat;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| (*s).to_owned()).collect()
    }

    fn letters(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| (*s).to_owned()).collect()
    }

    #[test]
    fn template_resolution_expands_groups() {
        let ts = resolve_templates(&names(&["P1", "p3"])).unwrap();
        let got: Vec<&str> = ts.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(got, vec!["P1a", "P1b", "P3"]);
        assert!(matches!(
            resolve_templates(&names(&["nosuch"])),
            Err(TemplateError::UnknownTemplate(_))
        ));
    }

    #[test]
    fn sl4_sound_on_symmetric_two_letters() {
        let spec = builtin_logic("symmetric").unwrap();
        let quotient = quotient_algebra(&spec, &letters(&["p", "q"]), DEFAULT_CAP).unwrap();
        let sl4 = resolve_templates(&names(&["SL4"])).unwrap().remove(0);
        let report = verify_axiom_soundness(&spec, &quotient, &sl4).unwrap();
        assert!(report.passed(), "{:?}", report.violations.first());
        assert!(report.instances_checked > 0);
    }

    #[test]
    fn p3_sound_on_classical_and_kleene() {
        let p3 = resolve_templates(&names(&["P3"])).unwrap().remove(0);
        for name in ["classical", "kleene"] {
            let spec = builtin_logic(name).unwrap();
            let quotient = quotient_algebra(&spec, &letters(&["p", "q"]), DEFAULT_CAP).unwrap();
            let report = verify_axiom_soundness(&spec, &quotient, &p3).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.violations.first());
        }
    }

    #[test]
    fn wrong_additivity_template_fails_with_witness() {
        // B(Phi | Psi) = B(Phi) + B(Psi) is falsified at Phi = Psi = p, p = 1.
        let bad = template(
            "BadAdd",
            &["Phi", "Psi"],
            vec![],
            b(or(phi(), psi())),
            Relation::Eq,
            FormalExpression::sum(b(phi()), b(psi())),
        );
        let spec = builtin_logic("kleene").unwrap();
        let quotient = quotient_algebra(&spec, &letters(&["p"]), DEFAULT_CAP).unwrap();
        let report = verify_axiom_soundness(&spec, &quotient, &bad).unwrap();
        assert!(!report.passed());
        let witness = &report.violations[0];
        assert_eq!(witness.template, "BadAdd");
        assert!(report.violations.iter().any(|v| {
            v.substitution.iter().all(|(_, f)| f == "p") && v.valuation == "p=1"
        }));
    }

    #[test]
    fn symmetric_sl_templates_complete_on_one_letter() {
        let spec = builtin_logic("symmetric").unwrap();
        let ts = resolve_templates(&names(&["SL1", "SL2", "SL3", "SL4"])).unwrap();
        let (report, _) =
            verify_axiom_completeness(&spec, &letters(&["p"]), &ts, DEFAULT_CAP).unwrap();
        assert_eq!(report.verdict, CompletenessVerdict::Complete);
    }

    #[test]
    fn classical_p_templates_complete_on_one_letter() {
        let spec = builtin_logic("classical").unwrap();
        let ts = resolve_templates(&names(&["P1", "P2", "P3"])).unwrap();
        let (report, _) =
            verify_axiom_completeness(&spec, &letters(&["p"]), &ts, DEFAULT_CAP).unwrap();
        assert_eq!(report.verdict, CompletenessVerdict::Complete);
    }

    #[test]
    fn p1_alone_is_incomplete_with_witness() {
        let spec = builtin_logic("classical").unwrap();
        let ts = resolve_templates(&names(&["P1"])).unwrap();
        let (report, set) =
            verify_axiom_completeness(&spec, &letters(&["p"]), &ts, DEFAULT_CAP).unwrap();
        match report.verdict {
            CompletenessVerdict::MissingAxiom { axiom, witness } => {
                // The witness satisfies every P1 instance and the box, yet
                // must violate the reported facet of the polytope.
                let violated = set
                    .axioms()
                    .map(|a| a.render(&set.quotient, &spec))
                    .any(|r| r == axiom);
                assert!(violated, "reported axiom {axiom:?} not in the set");
                assert!(!set.hrep.satisfies(&witness));
                for v in &witness {
                    assert!(*v >= rat(0) && *v <= rat(1));
                }
            }
            other => panic!("expected missing axiom, got {other:?}"),
        }
    }

    #[test]
    fn unsound_template_reported_before_completeness() {
        let bad = template(
            "BadAdd",
            &["Phi", "Psi"],
            vec![],
            b(or(phi(), psi())),
            Relation::Eq,
            FormalExpression::sum(b(phi()), b(psi())),
        );
        let spec = builtin_logic("classical").unwrap();
        let (report, _) =
            verify_axiom_completeness(&spec, &letters(&["p"]), &[bad], DEFAULT_CAP).unwrap();
        assert!(matches!(
            report.verdict,
            CompletenessVerdict::Unsound { .. }
        ));
    }

    #[test]
    fn kleene_lp_templates_complete_on_one_letter() {
        let ts = resolve_templates(&names(&["SL2", "SL3", "SL4", "KLP1"])).unwrap();
        for name in ["kleene", "lp"] {
            let spec = builtin_logic(name).unwrap();
            let (report, _) =
                verify_axiom_completeness(&spec, &letters(&["p"]), &ts, DEFAULT_CAP).unwrap();
            assert_eq!(report.verdict, CompletenessVerdict::Complete, "{name}");
        }
    }

    #[test]
    fn lukasiewicz_l_templates_on_one_letter() {
        let spec = builtin_logic("lukasiewicz-2").unwrap();
        let ts = resolve_templates(&names(&["L1", "L3"])).unwrap();
        let quotient = quotient_algebra(&spec, &letters(&["p"]), DEFAULT_CAP).unwrap();
        for t in &ts {
            let report = verify_axiom_soundness(&spec, &quotient, t).unwrap();
            assert!(report.passed(), "{}: {:?}", t.name, report.violations.first());
        }
        let (report, _) =
            verify_axiom_completeness(&spec, &letters(&["p"]), &ts, DEFAULT_CAP).unwrap();
        assert_eq!(report.verdict, CompletenessVerdict::Complete);
    }

    #[test]
    fn sl2_requires_half_load_on_middle() {
        // With the load of 1/2 overridden to 1, SL2 fails: ~(1/2) = 1/2
        // but 1 - e(1/2) = 0 != 1 = e(~...). The spec stays valid, the
        // template just stops being sound.
        let mut spec = builtin_logic("symmetric").unwrap();
        spec.load.values[1] = rat(1);
        assert!(spec.validate().passed());
        let quotient = quotient_algebra(&spec, &letters(&["p"]), DEFAULT_CAP).unwrap();
        let sl2 = resolve_templates(&names(&["SL2"])).unwrap().remove(0);
        let report = verify_axiom_soundness(&spec, &quotient, &sl2).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn soundness_counts_side_condition_skips() {
        let spec = builtin_logic("classical").unwrap();
        let quotient = quotient_algebra(&spec, &letters(&["p"]), DEFAULT_CAP).unwrap();
        let p2 = resolve_templates(&names(&["P2"])).unwrap().remove(0);
        let report = verify_axiom_soundness(&spec, &quotient, &p2).unwrap();
        assert!(report.passed());
        // 4 classes: bottom <= everything, everything <= top, reflexive
        // pairs, p <= p, etc. Checked + skipped covers all 16 pairs.
        assert_eq!(report.instances_checked + report.instances_skipped, 16);
        assert_eq!(report.instances_checked, 9);
    }
}
