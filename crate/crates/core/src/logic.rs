//! Logic definitions: finite truth-value algebras with connective truth
//! tables, cognitive loads, consequence rules and an equivalence scheme.
//!
//! A [`LogicSpec`] is immutable once validated and safe to share across
//! threads. The built-in logics carry exactly the textbook tables; custom
//! logics come in through the JSON format in [`crate::io`].

use std::collections::BTreeSet;

use coherentia_geometry::rat::{format_rat, rat, ratio, Rat};
use num_traits::Signed;
use thiserror::Error;

use crate::formula::Context;

/// Index of a truth value inside its algebra (`0..spec.tv_count()`).
pub type TvIndex = usize;

/// One element of the truth-value algebra. Its index is its position in
/// `LogicSpec::truth_values`. `numeric` is a display aid only: labels do
/// not have to denote numbers, and nothing downstream depends on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthValue {
    pub label: String,
    pub numeric: Option<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixity {
    Prefix,
    Infix,
}

/// Truth table of a connective; `Binary` rows are indexed by the first
/// argument. Rows may be ragged when a spec is under construction; the
/// validator flags that as a partial table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Table {
    Unary(Vec<TvIndex>),
    Binary(Vec<Vec<TvIndex>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub arity: u8,
    pub fixity: Fixity,
    pub precedence: u32,
    pub table: Table,
}

impl Connective {
    /// Table lookup; `None` on a partial table or out-of-range indices.
    pub fn apply(&self, args: &[TvIndex]) -> Option<TvIndex> {
        match (&self.table, args) {
            (Table::Unary(t), [a]) => t.get(*a).copied(),
            (Table::Binary(t), [a, b]) => t.get(*a)?.get(*b).copied(),
            _ => None,
        }
    }
}

/// Cognitive load: the ideal degree of belief for each truth value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CognitiveLoad {
    pub values: Vec<Rat>,
}

impl CognitiveLoad {
    pub fn get(&self, tv: TvIndex) -> &Rat {
        &self.values[tv]
    }
}

/// A preservation rule: every valuation sending the premise into
/// `from_set` must send the conclusion into `to_set`. A consequence
/// relation is the conjunction of its rules over all valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceRule {
    pub from_set: BTreeSet<TvIndex>,
    pub to_set: BTreeSet<TvIndex>,
}

/// The unary contexts through which mutual entailment must hold for two
/// formulas to count as logically equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceScheme {
    pub contexts: Vec<Context>,
}

/// A logic: truth-value algebra, connective tables, cognitive load,
/// consequence rules and equivalence scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicSpec {
    pub name: String,
    pub truth_values: Vec<TruthValue>,
    pub connectives: Vec<Connective>,
    pub load: CognitiveLoad,
    pub consequence: Vec<ConsequenceRule>,
    pub equivalence: EquivalenceScheme,
}

impl LogicSpec {
    pub fn tv_count(&self) -> usize {
        self.truth_values.len()
    }

    pub fn label(&self, tv: TvIndex) -> &str {
        &self.truth_values[tv].label
    }

    pub fn find_label(&self, label: &str) -> Option<TvIndex> {
        self.truth_values.iter().position(|t| t.label == label)
    }

    pub fn connective(&self, name: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| c.name == name)
    }

    /// Runs every structural check; the report carries all failures
    /// rather than stopping at the first.
    pub fn validate(&self) -> ValidationReport {
        validate_logic(self)
    }
}

/// A single validation failure, with enough context to fix the spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyTruthValues,
    DuplicateLabel { label: String },
    NumericOutOfRange { label: String, value: String },
    LoadCountMismatch { expected: usize, got: usize },
    LoadOutOfRange { label: String, value: String },
    Degenerate,
    DuplicateConnective { name: String },
    BadConnectiveToken { name: String, reason: &'static str },
    BadArity { name: String, arity: u8 },
    ArityFixityMismatch { name: String },
    PartialTable { name: String, detail: String },
    BadTableIndex { name: String, index: usize },
    EmptyConsequenceSet { rule: usize },
    BadConsequenceIndex { rule: usize, index: usize },
    NoContexts,
    ContextWithoutHole { context: String },
    ContextUnknownConnective { context: String, name: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptyTruthValues => write!(f, "no truth values"),
            Violation::DuplicateLabel { label } => write!(f, "duplicate label {label:?}"),
            Violation::NumericOutOfRange { label, value } => {
                write!(f, "numeric value {value} of {label:?} out of [0,1]")
            }
            Violation::LoadCountMismatch { expected, got } => {
                write!(f, "load defined on {got} values, expected {expected}")
            }
            Violation::LoadOutOfRange { label, value } => {
                write!(f, "load {value} of {label:?} out of [0,1]")
            }
            Violation::Degenerate => write!(f, "degenerate: no connectives"),
            Violation::DuplicateConnective { name } => {
                write!(f, "duplicate connective {name:?}")
            }
            Violation::BadConnectiveToken { name, reason } => {
                write!(f, "bad connective token {name:?}: {reason}")
            }
            Violation::BadArity { name, arity } => {
                write!(f, "connective {name:?} has unsupported arity {arity}")
            }
            Violation::ArityFixityMismatch { name } => {
                write!(f, "connective {name:?}: fixity does not match arity")
            }
            Violation::PartialTable { name, detail } => {
                write!(f, "partial table for {name:?}: {detail}")
            }
            Violation::BadTableIndex { name, index } => {
                write!(f, "table for {name:?} names invalid truth value index {index}")
            }
            Violation::EmptyConsequenceSet { rule } => {
                write!(f, "consequence rule {rule} has an empty side")
            }
            Violation::BadConsequenceIndex { rule, index } => {
                write!(f, "consequence rule {rule} names invalid index {index}")
            }
            Violation::NoContexts => write!(f, "equivalence scheme has no contexts"),
            Violation::ContextWithoutHole { context } => {
                write!(f, "context {context:?} has no hole")
            }
            Violation::ContextUnknownConnective { context, name } => {
                write!(f, "context {context:?} uses unknown connective {name:?}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= rat(1)
}

fn is_identifier(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks every invariant of a [`LogicSpec`]; returns all violations.
pub fn validate_logic(spec: &LogicSpec) -> ValidationReport {
    let mut v = Vec::new();
    let n = spec.tv_count();
    if n == 0 {
        v.push(Violation::EmptyTruthValues);
    }
    let mut seen = BTreeSet::new();
    for tv in &spec.truth_values {
        if !seen.insert(tv.label.as_str()) {
            v.push(Violation::DuplicateLabel {
                label: tv.label.clone(),
            });
        }
        if let Some(numeric) = &tv.numeric {
            if !in_unit_interval(numeric) {
                v.push(Violation::NumericOutOfRange {
                    label: tv.label.clone(),
                    value: format_rat(numeric),
                });
            }
        }
    }
    if spec.load.values.len() != n {
        v.push(Violation::LoadCountMismatch {
            expected: n,
            got: spec.load.values.len(),
        });
    }
    for (i, load) in spec.load.values.iter().enumerate() {
        if !in_unit_interval(load) {
            v.push(Violation::LoadOutOfRange {
                label: spec
                    .truth_values
                    .get(i)
                    .map_or_else(|| format!("#{i}"), |t| t.label.clone()),
                value: format_rat(load),
            });
        }
    }
    if spec.connectives.is_empty() {
        v.push(Violation::Degenerate);
    }
    let mut conn_names = BTreeSet::new();
    for conn in &spec.connectives {
        if !conn_names.insert(conn.name.as_str()) {
            v.push(Violation::DuplicateConnective {
                name: conn.name.clone(),
            });
        }
        if conn.name.is_empty() {
            v.push(Violation::BadConnectiveToken {
                name: conn.name.clone(),
                reason: "empty token",
            });
        } else if is_identifier(&conn.name) {
            v.push(Violation::BadConnectiveToken {
                name: conn.name.clone(),
                reason: "identifier-shaped tokens are reserved for letters",
            });
        } else if conn
            .name
            .chars()
            .any(|c| c.is_whitespace() || c == '(' || c == ')' || c == '_')
        {
            v.push(Violation::BadConnectiveToken {
                name: conn.name.clone(),
                reason: "token may not contain whitespace, parentheses or '_'",
            });
        }
        match conn.arity {
            1 => {
                if conn.fixity != Fixity::Prefix {
                    v.push(Violation::ArityFixityMismatch {
                        name: conn.name.clone(),
                    });
                }
                match &conn.table {
                    Table::Unary(t) => {
                        if t.len() != n {
                            v.push(Violation::PartialTable {
                                name: conn.name.clone(),
                                detail: format!("{} entries, expected {n}", t.len()),
                            });
                        }
                        for &out in t {
                            if out >= n {
                                v.push(Violation::BadTableIndex {
                                    name: conn.name.clone(),
                                    index: out,
                                });
                            }
                        }
                    }
                    Table::Binary(_) => v.push(Violation::PartialTable {
                        name: conn.name.clone(),
                        detail: "binary table on a unary connective".into(),
                    }),
                }
            }
            2 => {
                if conn.fixity != Fixity::Infix {
                    v.push(Violation::ArityFixityMismatch {
                        name: conn.name.clone(),
                    });
                }
                match &conn.table {
                    Table::Binary(rows) => {
                        if rows.len() != n {
                            v.push(Violation::PartialTable {
                                name: conn.name.clone(),
                                detail: format!("{} rows, expected {n}", rows.len()),
                            });
                        }
                        for (i, row) in rows.iter().enumerate() {
                            if row.len() != n {
                                v.push(Violation::PartialTable {
                                    name: conn.name.clone(),
                                    detail: format!(
                                        "row {i} has {} entries, expected {n}",
                                        row.len()
                                    ),
                                });
                            }
                            for &out in row {
                                if out >= n {
                                    v.push(Violation::BadTableIndex {
                                        name: conn.name.clone(),
                                        index: out,
                                    });
                                }
                            }
                        }
                    }
                    Table::Unary(_) => v.push(Violation::PartialTable {
                        name: conn.name.clone(),
                        detail: "unary table on a binary connective".into(),
                    }),
                }
            }
            other => v.push(Violation::BadArity {
                name: conn.name.clone(),
                arity: other,
            }),
        }
    }
    for (i, rule) in spec.consequence.iter().enumerate() {
        if rule.from_set.is_empty() || rule.to_set.is_empty() {
            v.push(Violation::EmptyConsequenceSet { rule: i });
        }
        for &idx in rule.from_set.iter().chain(&rule.to_set) {
            if idx >= n {
                v.push(Violation::BadConsequenceIndex { rule: i, index: idx });
            }
        }
    }
    if spec.equivalence.contexts.is_empty() {
        v.push(Violation::NoContexts);
    }
    for ctx in &spec.equivalence.contexts {
        let rendered = ctx.render(spec);
        if !ctx.has_hole() {
            v.push(Violation::ContextWithoutHole {
                context: rendered.clone(),
            });
        }
        for name in ctx.connective_names() {
            if spec.connective(&name).is_none() {
                v.push(Violation::ContextUnknownConnective {
                    context: rendered.clone(),
                    name,
                });
            }
        }
    }
    ValidationReport { violations: v }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown built-in logic {0:?} (try `logics-list`)")]
    UnknownName(String),
    #[error("lukasiewicz parameter must be an integer k >= 1, got {0:?}")]
    BadParameter(String),
}

/// Names of the built-in logics, for listings.
pub fn builtin_names() -> Vec<&'static str> {
    vec!["classical", "kleene", "lp", "symmetric", "lukasiewicz-<k>"]
}

/// Returns the built-in logic with the given name. `lukasiewicz-k`
/// takes the subdivision parameter inline, e.g. `lukasiewicz-2` for the
/// three-valued logic with values 0, 1/2, 1.
pub fn builtin_logic(name: &str) -> Result<LogicSpec, BuiltinError> {
    match name {
        "classical" => Ok(classical()),
        "kleene" => Ok(three_valued("kleene", vec![rule(&[2], &[2])], true)),
        "lp" => Ok(three_valued("lp", vec![rule(&[1, 2], &[1, 2])], true)),
        "symmetric" => Ok(three_valued(
            "symmetric",
            vec![rule(&[2], &[2]), rule(&[1], &[1, 2])],
            false,
        )),
        other => {
            if let Some(param) = other.strip_prefix("lukasiewicz-") {
                let k: u32 = param
                    .parse()
                    .map_err(|_| BuiltinError::BadParameter(param.to_owned()))?;
                if k < 1 {
                    return Err(BuiltinError::BadParameter(param.to_owned()));
                }
                Ok(lukasiewicz(k))
            } else {
                Err(BuiltinError::UnknownName(other.to_owned()))
            }
        }
    }
}

fn rule(from: &[TvIndex], to: &[TvIndex]) -> ConsequenceRule {
    ConsequenceRule {
        from_set: from.iter().copied().collect(),
        to_set: to.iter().copied().collect(),
    }
}

fn prefix(name: &str, precedence: u32, table: Vec<TvIndex>) -> Connective {
    Connective {
        name: name.into(),
        arity: 1,
        fixity: Fixity::Prefix,
        precedence,
        table: Table::Unary(table),
    }
}

fn infix(name: &str, precedence: u32, table: Vec<Vec<TvIndex>>) -> Connective {
    Connective {
        name: name.into(),
        arity: 2,
        fixity: Fixity::Infix,
        precedence,
        table: Table::Binary(table),
    }
}

fn hole_context() -> Context {
    Context::Hole
}

fn negated_hole_context() -> Context {
    Context::Apply("~".into(), vec![Context::Hole])
}

fn classical() -> LogicSpec {
    let tv = |label: &str, numeric: i64| TruthValue {
        label: label.into(),
        numeric: Some(rat(numeric)),
    };
    LogicSpec {
        name: "classical".into(),
        truth_values: vec![tv("0", 0), tv("1", 1)],
        connectives: vec![
            prefix("~", 4, vec![1, 0]),
            infix("&", 3, vec![vec![0, 0], vec![0, 1]]),
            infix("|", 2, vec![vec![0, 1], vec![1, 1]]),
            infix("->", 1, vec![vec![1, 1], vec![0, 1]]),
        ],
        load: CognitiveLoad {
            values: vec![rat(0), rat(1)],
        },
        consequence: vec![rule(&[1], &[1])],
        equivalence: EquivalenceScheme {
            contexts: vec![hole_context()],
        },
    }
}

/// The three Kleene-table logics share their algebra and loads and
/// differ only in consequence rules and equivalence contexts.
fn three_valued(name: &str, consequence: Vec<ConsequenceRule>, negated_context: bool) -> LogicSpec {
    let labels = ["0", "1/2", "1"];
    let truth_values = labels
        .iter()
        .enumerate()
        .map(|(i, label)| TruthValue {
            label: (*label).into(),
            numeric: Some(ratio(i as i64, 2)),
        })
        .collect();
    let min = |a: usize, b: usize| a.min(b);
    let max = |a: usize, b: usize| a.max(b);
    let table2 = |f: &dyn Fn(usize, usize) -> usize| {
        (0..3).map(|a| (0..3).map(|b| f(a, b)).collect()).collect()
    };
    let mut contexts = vec![hole_context()];
    if negated_context {
        contexts.push(negated_hole_context());
    }
    LogicSpec {
        name: name.into(),
        truth_values,
        connectives: vec![
            prefix("~", 4, vec![2, 1, 0]),
            infix("&", 3, table2(&min)),
            infix("|", 2, table2(&max)),
        ],
        load: CognitiveLoad {
            values: vec![rat(0), ratio(1, 2), rat(1)],
        },
        consequence,
        equivalence: EquivalenceScheme { contexts },
    }
}

/// Lukasiewicz logic with k+1 truth values 0, 1/k, ..., 1 and the
/// connectives 1-a, min(1, a+b), max(0, a+b-1), min(1, 1-a+b).
///
/// Consequence preserves degree: w(lhs) <= w(rhs) at every valuation,
/// written as one preservation rule per positive value. This is the
/// reading under which mutual entailment through the bare context
/// coincides with semantic equality, and under which a formula entails
/// the empty side exactly when it is constantly 0.
fn lukasiewicz(k: u32) -> LogicSpec {
    let k = k as usize;
    let n = k + 1;
    let truth_values = (0..n)
        .map(|i| TruthValue {
            label: format_rat(&ratio(i as i64, k as i64)),
            numeric: Some(ratio(i as i64, k as i64)),
        })
        .collect();
    let table2 = |f: &dyn Fn(usize, usize) -> usize| {
        (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
    };
    let or = |a: usize, b: usize| (a + b).min(k);
    let and = |a: usize, b: usize| (a + b).saturating_sub(k);
    let imp = |a: usize, b: usize| (k - a + b).min(k);
    LogicSpec {
        name: format!("lukasiewicz-{k}"),
        truth_values,
        connectives: vec![
            prefix("~", 4, (0..n).map(|a| k - a).collect()),
            infix("&", 3, table2(&and)),
            infix("|", 2, table2(&or)),
            infix("->", 1, table2(&imp)),
        ],
        load: CognitiveLoad {
            values: (0..n).map(|i| ratio(i as i64, k as i64)).collect(),
        },
        consequence: (1..=k)
            .map(|a| {
                let to: Vec<TvIndex> = (a..=k).collect();
                rule(&[a], &to)
            })
            .collect(),
        equivalence: EquivalenceScheme {
            contexts: vec![hole_context()],
        },
    }
}
