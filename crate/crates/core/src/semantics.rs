//! Valuations, the finite quotient algebra, consequence and logical
//! equivalence, and cognitive evaluation matrices.
//!
//! Valuations over a finite letter set are enumerated lexicographically.
//! The quotient identifies formulas with equal truth vectors over all
//! valuations; it is computed as a fixed-point closure seeded with the
//! letter projections, layered by formula size so every class gets a
//! minimal representative. Classes are ordered by (representative node
//! count, rendering), and every downstream artifact inherits that order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use coherentia_geometry::rat::Rat;
use thiserror::Error;

use crate::formula::{render_formula, Formula};
use crate::logic::{LogicSpec, TvIndex};

/// Default ceiling on the number of quotient classes. The free-algebra
/// closure can explode for some algebras; a hard cap with a clear error
/// beats silent blow-up.
pub const DEFAULT_CAP: usize = 100_000;

/// Practical guard on the valuation count, far above desk scale.
const MAX_VALUATIONS: usize = 1_000_000;

/// A total assignment of truth values to a finite letter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub assignment: BTreeMap<String, TvIndex>,
}

impl Valuation {
    pub fn get(&self, letter: &str) -> Option<TvIndex> {
        self.assignment.get(letter).copied()
    }

    /// Display form like `p=1/2, q=0`.
    pub fn render(&self, spec: &LogicSpec) -> String {
        self.assignment
            .iter()
            .map(|(l, &tv)| format!("{l}={}", spec.label(tv)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("letter set is empty: the free algebra over no letters has no elements")]
    EmptyLetters,
    #[error("duplicate letter {0:?} in letter set")]
    DuplicateLetter(String),
    #[error("letter {0:?} is not bound by the valuation")]
    UnboundLetter(String),
    #[error("unknown connective {0:?}")]
    UnknownConnective(String),
    #[error("connective {name:?} applied to {got} arguments, expected {expected}")]
    WrongArity {
        name: String,
        expected: u8,
        got: usize,
    },
    #[error("table lookup failed for connective {0:?} (spec not validated?)")]
    BadTableEntry(String),
    #[error("{0} valuations exceed the supported maximum {MAX_VALUATIONS}")]
    TooManyValuations(usize),
    #[error("quotient closure exceeded cap {cap}: {size} classes and still growing")]
    CapExceeded { cap: usize, size: usize },
}

/// Enumerates all |A|^|letters| valuations in lexicographic order of the
/// assigned indices (the last letter varies fastest).
pub fn enumerate_valuations(
    spec: &LogicSpec,
    letters: &[String],
) -> Result<Vec<Valuation>, SemanticsError> {
    if letters.is_empty() {
        return Err(SemanticsError::EmptyLetters);
    }
    let mut seen = BTreeSet::new();
    for l in letters {
        if !seen.insert(l.as_str()) {
            return Err(SemanticsError::DuplicateLetter(l.clone()));
        }
    }
    let n = spec.tv_count();
    let mut count: usize = 1;
    for _ in letters {
        count = count
            .checked_mul(n)
            .filter(|&c| c <= MAX_VALUATIONS)
            .ok_or(SemanticsError::TooManyValuations(usize::MAX))?;
    }
    let mut out = Vec::with_capacity(count);
    let mut odometer = vec![0usize; letters.len()];
    loop {
        out.push(Valuation {
            assignment: letters
                .iter()
                .cloned()
                .zip(odometer.iter().copied())
                .collect(),
        });
        let mut i = letters.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < n {
                break;
            }
            odometer[i] = 0;
        }
    }
}

/// Bottom-up table evaluation of a formula under a valuation.
pub fn eval_formula(
    valuation: &Valuation,
    f: &Formula,
    spec: &LogicSpec,
) -> Result<TvIndex, SemanticsError> {
    match f {
        Formula::Letter(name) => valuation
            .get(name)
            .ok_or_else(|| SemanticsError::UnboundLetter(name.clone())),
        Formula::Apply(conn, args) => {
            let c = spec
                .connective(conn)
                .ok_or_else(|| SemanticsError::UnknownConnective(conn.clone()))?;
            if usize::from(c.arity) != args.len() {
                return Err(SemanticsError::WrongArity {
                    name: conn.clone(),
                    expected: c.arity,
                    got: args.len(),
                });
            }
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_formula(valuation, a, spec)?);
            }
            c.apply(&vals)
                .ok_or_else(|| SemanticsError::BadTableEntry(conn.clone()))
        }
    }
}

/// One congruence class: its truth vector over the valuation order and
/// the minimal representative formula that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    pub vector: Vec<TvIndex>,
    pub representative: Formula,
    pub rendered: String,
    pub size: usize,
}

/// The finite quotient algebra of formulas over a letter set, as truth
/// vectors indexed by valuations.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub letters: Vec<String>,
    pub valuations: Vec<Valuation>,
    classes: Vec<QuotientClass>,
    index: HashMap<Vec<TvIndex>, usize>,
}

impl QuotientAlgebra {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[QuotientClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &QuotientClass {
        &self.classes[i]
    }

    pub fn representative(&self, i: usize) -> &Formula {
        &self.classes[i].representative
    }

    pub fn class_of_vector(&self, vector: &[TvIndex]) -> Option<usize> {
        self.index.get(vector).copied()
    }

    /// Truth vector of an arbitrary formula over this quotient's
    /// valuations, computed on demand.
    pub fn vector_of(&self, f: &Formula, spec: &LogicSpec) -> Result<Vec<TvIndex>, SemanticsError> {
        self.valuations
            .iter()
            .map(|w| eval_formula(w, f, spec))
            .collect()
    }

    /// Class index of an arbitrary formula over this quotient's letters.
    /// The closure contains every formula vector, so a lookup miss means
    /// the formula uses letters outside the quotient (reported by the
    /// evaluation) or the spec changed underneath us.
    pub fn class_of(&self, f: &Formula, spec: &LogicSpec) -> Result<usize, SemanticsError> {
        let vector = self.vector_of(f, spec)?;
        self.class_of_vector(&vector)
            .ok_or_else(|| SemanticsError::BadTableEntry(format!("{f}")))
    }
}

/// Computes the quotient algebra by fixed-point closure.
///
/// Seeds with the letter projection vectors and applies every connective
/// pointwise to all tuples of known class vectors, layered by candidate
/// formula size, until no new vector appears. Per class the first
/// (minimal node count, then lexicographically smallest rendering)
/// candidate becomes the representative.
pub fn quotient_algebra(
    spec: &LogicSpec,
    letters: &[String],
    cap: usize,
) -> Result<QuotientAlgebra, SemanticsError> {
    let valuations = enumerate_valuations(spec, letters)?;
    let mut classes: Vec<QuotientClass> = Vec::new();
    let mut index: HashMap<Vec<TvIndex>, usize> = HashMap::new();
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();

    let push_class = |classes: &mut Vec<QuotientClass>,
                          index: &mut HashMap<Vec<TvIndex>, usize>,
                          by_size: &mut BTreeMap<usize, Vec<usize>>,
                          class: QuotientClass|
     -> Result<(), SemanticsError> {
        let id = classes.len();
        if id + 1 > cap {
            return Err(SemanticsError::CapExceeded { cap, size: id + 1 });
        }
        index.insert(class.vector.clone(), id);
        by_size.entry(class.size).or_default().push(id);
        classes.push(class);
        Ok(())
    };

    // Seed: letter projections, in sorted-name order so the class order
    // is canonical even when the letter order is not.
    let mut sorted_letters = letters.to_vec();
    sorted_letters.sort();
    for letter in &sorted_letters {
        let f = Formula::Letter(letter.clone());
        let vector: Vec<TvIndex> = valuations
            .iter()
            .map(|w| w.get(letter).expect("letter enumerated"))
            .collect();
        if index.contains_key(&vector) {
            continue; // possible only for a one-valued algebra
        }
        let rendered = render_formula(&f, spec);
        push_class(
            &mut classes,
            &mut index,
            &mut by_size,
            QuotientClass {
                vector,
                representative: f,
                rendered,
                size: 1,
            },
        )?;
    }

    let mut max_size = 1;
    let mut size = 2;
    while size <= 1 + 2 * max_size {
        // Minimal-rendering candidate per new vector at this size.
        let mut fresh: BTreeMap<Vec<TvIndex>, (String, Formula)> = BTreeMap::new();
        for conn in &spec.connectives {
            match conn.arity {
                1 => {
                    let Some(args) = by_size.get(&(size - 1)) else {
                        continue;
                    };
                    for &ci in args {
                        let vector: Option<Vec<TvIndex>> = classes[ci]
                            .vector
                            .iter()
                            .map(|&a| conn.apply(&[a]))
                            .collect();
                        let Some(vector) = vector else {
                            return Err(SemanticsError::BadTableEntry(conn.name.clone()));
                        };
                        if index.contains_key(&vector) {
                            continue;
                        }
                        let f = Formula::Apply(
                            conn.name.clone(),
                            vec![classes[ci].representative.clone()],
                        );
                        consider(&mut fresh, vector, f, spec);
                    }
                }
                2 => {
                    for s1 in 1..size.saturating_sub(1) {
                        let s2 = size - 1 - s1;
                        let (Some(left), Some(right)) = (by_size.get(&s1), by_size.get(&s2))
                        else {
                            continue;
                        };
                        for &ci in left {
                            for &cj in right {
                                let vector: Option<Vec<TvIndex>> = classes[ci]
                                    .vector
                                    .iter()
                                    .zip(&classes[cj].vector)
                                    .map(|(&a, &b)| conn.apply(&[a, b]))
                                    .collect();
                                let Some(vector) = vector else {
                                    return Err(SemanticsError::BadTableEntry(conn.name.clone()));
                                };
                                if index.contains_key(&vector) {
                                    continue;
                                }
                                let f = Formula::Apply(
                                    conn.name.clone(),
                                    vec![
                                        classes[ci].representative.clone(),
                                        classes[cj].representative.clone(),
                                    ],
                                );
                                consider(&mut fresh, vector, f, spec);
                            }
                        }
                    }
                }
                _ => return Err(SemanticsError::UnknownConnective(conn.name.clone())),
            }
        }
        // Append the new classes in rendering order; together with the
        // ascending size sweep this makes the class list canonically
        // ordered by (size, rendering) without a final sort.
        let mut new_classes: Vec<(String, Formula, Vec<TvIndex>)> = fresh
            .into_iter()
            .map(|(vector, (rendered, f))| (rendered, f, vector))
            .collect();
        new_classes.sort_by(|a, b| a.0.cmp(&b.0));
        for (rendered, representative, vector) in new_classes {
            push_class(
                &mut classes,
                &mut index,
                &mut by_size,
                QuotientClass {
                    vector,
                    representative,
                    rendered,
                    size,
                },
            )?;
            max_size = max_size.max(size);
        }
        size += 1;
    }

    Ok(QuotientAlgebra {
        letters: letters.to_vec(),
        valuations,
        classes,
        index,
    })
}

fn consider(
    fresh: &mut BTreeMap<Vec<TvIndex>, (String, Formula)>,
    vector: Vec<TvIndex>,
    f: Formula,
    spec: &LogicSpec,
) {
    let rendered = render_formula(&f, spec);
    match fresh.get_mut(&vector) {
        Some(existing) => {
            if rendered < existing.0 {
                *existing = (rendered, f);
            }
        }
        None => {
            fresh.insert(vector, (rendered, f));
        }
    }
}

/// Semantic consequence over an explicit letter set: every valuation must
/// satisfy every preservation rule for the pair.
pub fn entails(
    spec: &LogicSpec,
    letters: &[String],
    lhs: &Formula,
    rhs: &Formula,
) -> Result<bool, SemanticsError> {
    for w in enumerate_valuations(spec, letters)? {
        let a = eval_formula(&w, lhs, spec)?;
        let b = eval_formula(&w, rhs, spec)?;
        for rule in &spec.consequence {
            if rule.from_set.contains(&a) && !rule.to_set.contains(&b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Like [`entails`] with the letter set defaulted to the union of the two
/// formulas' letters. Adding dummy letters never changes rule-based
/// consequence, so the union is sufficient.
pub fn entails_default(
    spec: &LogicSpec,
    lhs: &Formula,
    rhs: &Formula,
) -> Result<bool, SemanticsError> {
    let letters = union_letters(&[lhs, rhs]);
    entails(spec, &letters, lhs, rhs)
}

/// A countervaluation witnessing that `lhs` does not entail `rhs`.
pub fn countervaluation(
    spec: &LogicSpec,
    letters: &[String],
    lhs: &Formula,
    rhs: &Formula,
) -> Result<Option<Valuation>, SemanticsError> {
    for w in enumerate_valuations(spec, letters)? {
        let a = eval_formula(&w, lhs, spec)?;
        let b = eval_formula(&w, rhs, spec)?;
        for rule in &spec.consequence {
            if rule.from_set.contains(&a) && !rule.to_set.contains(&b) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

pub fn union_letters(formulas: &[&Formula]) -> Vec<String> {
    let mut set = BTreeSet::new();
    for f in formulas {
        set.extend(f.letters());
    }
    set.into_iter().collect()
}

/// Empty-premise consequence: `|= f` holds when every valuation lands the
/// formula in the conclusion set of every rule.
pub fn is_tautology(
    spec: &LogicSpec,
    letters: &[String],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    for w in enumerate_valuations(spec, letters)? {
        let v = eval_formula(&w, f, spec)?;
        for rule in &spec.consequence {
            if !rule.to_set.contains(&v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Empty-conclusion consequence: `f |=` holds when no valuation lands the
/// formula in the premise set of any rule.
pub fn is_explosive(
    spec: &LogicSpec,
    letters: &[String],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    for w in enumerate_valuations(spec, letters)? {
        let v = eval_formula(&w, f, spec)?;
        for rule in &spec.consequence {
            if rule.from_set.contains(&v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Logical equivalence through the spec's equivalence scheme: mutual
/// entailment inside every context. Letters contributed by a context are
/// added to the valuation space.
pub fn logically_equivalent(
    spec: &LogicSpec,
    letters: &[String],
    lhs: &Formula,
    rhs: &Formula,
) -> Result<bool, SemanticsError> {
    for ctx in &spec.equivalence.contexts {
        let mut all: BTreeSet<String> = letters.iter().cloned().collect();
        all.extend(ctx.letters());
        let all: Vec<String> = all.into_iter().collect();
        let left = ctx.fill(lhs);
        let right = ctx.fill(rhs);
        if !entails(spec, &all, &left, &right)? || !entails(spec, &all, &right, &left)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One failed pair: scheme-equivalent yet semantically distinct, or a
/// representative that is not scheme-equivalent to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressibilityViolation {
    pub left_class: usize,
    pub right_class: usize,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressibilityReport {
    pub class_count: usize,
    pub violations: Vec<ExpressibilityViolation>,
}

impl ExpressibilityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies over all pairs of quotient representatives that scheme
/// equivalence coincides with the congruence: representatives of distinct
/// classes must not be scheme-equivalent, and each representative must be
/// scheme-equivalent to itself (which can fail for non-reflexive rule
/// sets).
pub fn check_equivalence_expressibility(
    spec: &LogicSpec,
    quotient: &QuotientAlgebra,
) -> Result<ExpressibilityReport, SemanticsError> {
    let mut violations = Vec::new();
    let n = quotient.class_count();
    for i in 0..n {
        for j in i..n {
            let same_class = i == j;
            let equivalent = logically_equivalent(
                spec,
                &quotient.letters,
                quotient.representative(i),
                quotient.representative(j),
            )?;
            if equivalent != same_class {
                violations.push(ExpressibilityViolation {
                    left_class: i,
                    right_class: j,
                    left: quotient.class(i).rendered.clone(),
                    right: quotient.class(j).rendered.clone(),
                });
            }
        }
    }
    Ok(ExpressibilityReport {
        class_count: n,
        violations,
    })
}

/// The cognitive evaluation matrix: one row per valuation, one column per
/// quotient class; the entry is the load of the class value at that
/// valuation. Its rows are the vertices generating the coherence polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CognitiveMatrix {
    pub rows: Vec<Vec<Rat>>,
}

pub fn cognitive_matrix(spec: &LogicSpec, quotient: &QuotientAlgebra) -> CognitiveMatrix {
    let rows = (0..quotient.valuations.len())
        .map(|w| {
            quotient
                .classes()
                .iter()
                .map(|class| spec.load.get(class.vector[w]).clone())
                .collect()
        })
        .collect();
    CognitiveMatrix { rows }
}
