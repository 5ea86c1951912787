//! File formats: logic definitions and belief assignments.
//!
//! Both are JSON. Rationals travel as strings (`"3/10"`, `"0.3"`, `"1"`)
//! or integer literals; non-integer JSON numbers are rejected so that no
//! value ever passes through floating point. Truth values are referenced
//! by label everywhere.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use coherentia_geometry::rat::{format_rat, parse_rat, Rat};

use crate::coherence::{BeliefAssignment, CoherenceError};
use crate::formula::{parse_context, parse_formula, ParseError};
use crate::logic::{
    CognitiveLoad, Connective, ConsequenceRule, EquivalenceScheme, Fixity, LogicSpec, Table,
    TruthValue, ValidationReport,
};

#[derive(Clone, Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{context}: {message}")]
    Resolve { context: String, message: String },
    #[error("{context}: {source}")]
    Formula {
        context: String,
        source: ParseError,
    },
    #[error("logic file failed validation: {}", render_violations(.0))]
    Validation(ValidationReport),
    #[error(transparent)]
    Belief(#[from] CoherenceError),
}

fn render_violations(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn resolve_err<T>(context: impl Into<String>, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError::Resolve {
        context: context.into(),
        message: message.into(),
    })
}

/// A rational in transit: a string in any exact form, or an integer.
#[derive(Clone, Debug)]
pub struct RatText(pub Rat);

impl Serialize for RatText {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
            Float(#[allow(dead_code)] f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => parse_rat(&s).map(RatText).map_err(D::Error::custom),
            Raw::Int(n) => Ok(RatText(Rat::from_integer(n.into()))),
            Raw::Float(_) => Err(D::Error::custom(
                "write rationals as strings like \"3/10\" or \"0.3\" to keep them exact",
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruthValueFile {
    pub label: String,
    pub load: RatText,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableFile {
    Unary(Vec<String>),
    Binary(Vec<Vec<String>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectiveFile {
    pub name: String,
    pub arity: u8,
    pub fixity: String,
    pub precedence: u32,
    pub table: TableFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsequenceFile {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

/// The on-disk logic definition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogicFile {
    pub name: String,
    pub truth_values: Vec<TruthValueFile>,
    pub connectives: Vec<ConnectiveFile>,
    pub consequence: Vec<ConsequenceFile>,
    pub equivalence_contexts: Vec<String>,
}

/// Parses and validates a logic definition. Label resolution errors come
/// with the offending location; the assembled spec must then also pass
/// [`crate::logic::validate_logic`].
pub fn logic_from_json(text: &str) -> Result<LogicSpec, FileError> {
    let file: LogicFile = serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
    let labels: Vec<String> = file.truth_values.iter().map(|t| t.label.clone()).collect();
    let find = |label: &str, context: &str| -> Result<usize, FileError> {
        match labels.iter().position(|l| l == label) {
            Some(i) => Ok(i),
            None => resolve_err(context, format!("unknown truth value label {label:?}")),
        }
    };

    let truth_values: Vec<TruthValue> = file
        .truth_values
        .iter()
        .map(|t| TruthValue {
            label: t.label.clone(),
            numeric: parse_rat(&t.label).ok(),
        })
        .collect();
    let load = CognitiveLoad {
        values: file.truth_values.iter().map(|t| t.load.0.clone()).collect(),
    };

    let mut connectives = Vec::with_capacity(file.connectives.len());
    for c in &file.connectives {
        let fixity = match c.fixity.as_str() {
            "prefix" => Fixity::Prefix,
            "infix" => Fixity::Infix,
            other => {
                return resolve_err(
                    format!("connective {:?}", c.name),
                    format!("fixity must be \"prefix\" or \"infix\", got {other:?}"),
                )
            }
        };
        let table = match &c.table {
            TableFile::Unary(row) => {
                let mut out = Vec::with_capacity(row.len());
                for (i, label) in row.iter().enumerate() {
                    out.push(find(label, &format!("connective {:?} table entry {i}", c.name))?);
                }
                Table::Unary(out)
            }
            TableFile::Binary(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for (i, row) in rows.iter().enumerate() {
                    let mut r = Vec::with_capacity(row.len());
                    for (j, label) in row.iter().enumerate() {
                        r.push(find(
                            label,
                            &format!("connective {:?} table row {i} column {j}", c.name),
                        )?);
                    }
                    out.push(r);
                }
                Table::Binary(out)
            }
        };
        connectives.push(Connective {
            name: c.name.clone(),
            arity: c.arity,
            fixity,
            precedence: c.precedence,
            table,
        });
    }

    let mut consequence = Vec::with_capacity(file.consequence.len());
    for (i, rule) in file.consequence.iter().enumerate() {
        let context = format!("consequence rule {i}");
        let from = rule
            .from
            .iter()
            .map(|l| find(l, &context))
            .collect::<Result<_, _>>()?;
        let to = rule
            .to
            .iter()
            .map(|l| find(l, &context))
            .collect::<Result<_, _>>()?;
        consequence.push(ConsequenceRule {
            from_set: from,
            to_set: to,
        });
    }

    // Contexts parse against the connectives declared above; a fresh spec
    // shell is enough for the parser.
    let mut spec = LogicSpec {
        name: file.name,
        truth_values,
        connectives,
        load,
        consequence,
        equivalence: EquivalenceScheme { contexts: vec![] },
    };
    let mut contexts = Vec::with_capacity(file.equivalence_contexts.len());
    for (i, text) in file.equivalence_contexts.iter().enumerate() {
        let ctx = parse_context(text, &spec).map_err(|source| FileError::Formula {
            context: format!("equivalence context {i} ({text:?})"),
            source,
        })?;
        contexts.push(ctx);
    }
    spec.equivalence = EquivalenceScheme { contexts };

    let report = spec.validate();
    if !report.passed() {
        return Err(FileError::Validation(report));
    }
    Ok(spec)
}

/// Serializes a validated spec back into the file format.
pub fn logic_to_json(spec: &LogicSpec) -> String {
    let file = LogicFile {
        name: spec.name.clone(),
        truth_values: spec
            .truth_values
            .iter()
            .zip(&spec.load.values)
            .map(|(t, load)| TruthValueFile {
                label: t.label.clone(),
                load: RatText(load.clone()),
            })
            .collect(),
        connectives: spec
            .connectives
            .iter()
            .map(|c| ConnectiveFile {
                name: c.name.clone(),
                arity: c.arity,
                fixity: match c.fixity {
                    Fixity::Prefix => "prefix".into(),
                    Fixity::Infix => "infix".into(),
                },
                precedence: c.precedence,
                table: match &c.table {
                    Table::Unary(row) => {
                        TableFile::Unary(row.iter().map(|&i| spec.label(i).to_owned()).collect())
                    }
                    Table::Binary(rows) => TableFile::Binary(
                        rows.iter()
                            .map(|row| row.iter().map(|&i| spec.label(i).to_owned()).collect())
                            .collect(),
                    ),
                },
            })
            .collect(),
        consequence: spec
            .consequence
            .iter()
            .map(|r| ConsequenceFile {
                from: r.from_set.iter().map(|&i| spec.label(i).to_owned()).collect(),
                to: r.to_set.iter().map(|&i| spec.label(i).to_owned()).collect(),
            })
            .collect(),
        equivalence_contexts: spec
            .equivalence
            .contexts
            .iter()
            .map(|c| c.render(spec))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("logic files serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BeliefEntryFile {
    pub formula: String,
    pub value: RatText,
}

/// The on-disk belief assignment. `logic` names a built-in or a logic
/// file path; the CLI resolves it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BeliefFile {
    pub logic: Option<String>,
    pub beliefs: Vec<BeliefEntryFile>,
}

pub fn belief_file_from_json(text: &str) -> Result<BeliefFile, FileError> {
    serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))
}

/// Parses the formulas of a belief file under a resolved logic.
pub fn belief_assignment(file: &BeliefFile, spec: &LogicSpec) -> Result<BeliefAssignment, FileError> {
    let mut entries = Vec::with_capacity(file.beliefs.len());
    for (i, entry) in file.beliefs.iter().enumerate() {
        let f = parse_formula(&entry.formula, spec).map_err(|source| FileError::Formula {
            context: format!("belief {i} ({:?})", entry.formula),
            source,
        })?;
        entries.push((f, entry.value.0.clone()));
    }
    Ok(BeliefAssignment::new(entries)?)
}
