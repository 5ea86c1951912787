//! `coherentia`: synthesize probability axioms for finite many-valued
//! logics, check coherence of belief assignments, extract Dutch books,
//! and verify candidate axiom templates.
//!
//! Exit codes: 0 on success, 1 on negative domain verdicts (incoherent,
//! does-not-entail, unsound, incomplete) so scripts can branch, 2 on
//! usage, parse or validation errors.

use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::json;

use coherentia_core::coherence::{
    check_coherence, extract_dutch_book, generate_axioms, render_violated_inequality,
    verify_dutch_book, CoherenceVerdict,
};
use coherentia_core::formula::{parse_formula, render_formula};
use coherentia_core::io::{belief_assignment, belief_file_from_json, logic_from_json};
use coherentia_core::logic::{builtin_logic, builtin_names, LogicSpec};
use coherentia_core::semantics::{
    check_equivalence_expressibility, countervaluation, entails_default, quotient_algebra,
    union_letters, DEFAULT_CAP,
};
use coherentia_core::templates::{
    resolve_templates, verify_axiom_completeness, verify_axiom_soundness, CompletenessVerdict,
};
use coherentia_geometry::rat::format_rat;

#[derive(Parser)]
#[command(
    name = "coherentia",
    version,
    about = "Probability axioms, coherence verdicts and Dutch books for finite many-valued logics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CapArg {
    /// Ceiling on the quotient closure size.
    #[arg(long, env = "COHERENTIA_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in logics.
    #[command(name = "logics-list")]
    LogicsList {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the quotient algebra: one class per line with its minimal
    /// representative and truth vector over the valuation order.
    Quotient {
        /// Built-in logic name or path to a logic file.
        #[arg(long)]
        logic: String,
        /// Comma-separated propositional letters, e.g. `p,q`.
        #[arg(long)]
        letters: String,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Synthesize the finite axiom system at a letter set.
    Axioms {
        #[arg(long)]
        logic: String,
        #[arg(long)]
        letters: String,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also dump the raw V- and H-representations of the polytope.
        #[arg(long)]
        dump_geometry: bool,
    },
    /// Decide coherence of a belief file; incoherent assignments get a
    /// Dutch book and the violated inequality.
    Check {
        /// Built-in logic name or logic file path; defaults to the
        /// belief file's own `logic` field.
        #[arg(long)]
        logic: Option<String>,
        /// Path to a belief file.
        #[arg(long)]
        beliefs: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether one formula entails another; prints a
    /// countervaluation when it does not.
    Consequence {
        #[arg(long)]
        logic: String,
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify axiom templates against the synthesized system.
    Verify {
        #[arg(long)]
        logic: String,
        #[arg(long)]
        letters: String,
        /// Comma-separated template names, e.g. `SL1,SL2,SL3,SL4`.
        #[arg(long)]
        templates: String,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check that scheme equivalence matches semantic equality over the
    /// quotient representatives.
    Expressibility {
        #[arg(long)]
        logic: String,
        #[arg(long)]
        letters: String,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Soundness,
    Completeness,
}

/// Resolves a logic by explicit file path first (paths shadow built-in
/// names), then by built-in name.
fn load_logic(name_or_path: &str) -> Result<LogicSpec> {
    if Path::new(name_or_path).is_file() {
        let text = std::fs::read_to_string(name_or_path)
            .with_context(|| format!("reading logic file {name_or_path:?}"))?;
        let spec =
            logic_from_json(&text).map_err(|e| anyhow!("logic file {name_or_path:?}: {e}"))?;
        return Ok(spec);
    }
    let spec = builtin_logic(name_or_path)?;
    debug_assert!(spec.validate().passed());
    Ok(spec)
}

fn split_list(arg: &str, what: &str) -> Result<Vec<String>> {
    let out: Vec<String> = arg
        .split(',')
        .map(|s| s.trim().to_owned())
        .filter(|s| !s.is_empty())
        .collect();
    if out.is_empty() {
        return Err(anyhow!("no {what} given"));
    }
    Ok(out)
}

fn cmd_logics_list(format: Format) -> Result<u8> {
    let names = builtin_names();
    match format {
        Format::Text => {
            for n in names {
                println!("{n}");
            }
        }
        Format::Json => println!("{}", json!({ "logics": names })),
    }
    Ok(0)
}

fn cmd_quotient(logic: &str, letters: &str, cap: usize, format: Format) -> Result<u8> {
    let spec = load_logic(logic)?;
    let letters = split_list(letters, "letters (use e.g. --letters p,q)")?;
    let q = quotient_algebra(&spec, &letters, cap)?;
    match format {
        Format::Text => {
            println!("logic: {}", spec.name);
            println!("letters: {}", q.letters.join(", "));
            println!("valuations: {}", q.valuations.len());
            println!("classes: {}", q.class_count());
            let width = q
                .classes()
                .iter()
                .map(|c| c.rendered.len())
                .max()
                .unwrap_or(0);
            for (i, class) in q.classes().iter().enumerate() {
                let vector: Vec<&str> = class.vector.iter().map(|&tv| spec.label(tv)).collect();
                println!("  {i}: {:width$}  [{}]", class.rendered, vector.join(", "));
            }
        }
        Format::Json => {
            let classes: Vec<_> = q
                .classes()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "index": i,
                        "representative": c.rendered,
                        "vector": c.vector.iter().map(|&tv| spec.label(tv)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let valuations: Vec<String> = q.valuations.iter().map(|w| w.render(&spec)).collect();
            println!(
                "{}",
                json!({
                    "logic": spec.name,
                    "letters": q.letters,
                    "valuations": valuations,
                    "classes": classes,
                })
            );
        }
    }
    Ok(0)
}

fn cmd_axioms(
    logic: &str,
    letters: &str,
    cap: usize,
    format: Format,
    dump_geometry: bool,
) -> Result<u8> {
    let spec = load_logic(logic)?;
    let letters = split_list(letters, "letters (use e.g. --letters p,q)")?;
    let set = generate_axioms(&spec, &letters, cap)?;
    match format {
        Format::Text => {
            println!("logic: {}", spec.name);
            println!("letters: {}", set.letters.join(", "));
            println!("classes: {}", set.quotient.class_count());
            let reps: Vec<&str> = set
                .quotient
                .classes()
                .iter()
                .map(|c| c.rendered.as_str())
                .collect();
            println!("representatives: {}", reps.join(", "));
            println!("equalities:");
            for a in &set.equalities {
                println!("  {}", a.render(&set.quotient, &spec));
            }
            println!("inequalities:");
            for a in &set.inequalities {
                println!("  {}", a.render(&set.quotient, &spec));
            }
            println!("logical axiom: {}", set.logical_axiom);
            if dump_geometry {
                let row_text = |row: &[coherentia_core::Rat]| {
                    row.iter().map(format_rat).collect::<Vec<_>>().join(", ")
                };
                println!("V-representation (one cognitive evaluation per valuation):");
                for row in &set.matrix.rows {
                    println!("  [{}]", row_text(row));
                }
                println!("H-representation:");
                for (a, c) in &set.hrep.equalities {
                    println!("  eq:   [{}] = {}", row_text(a), format_rat(c));
                }
                for (a, c) in &set.hrep.inequalities {
                    println!("  ineq: [{}] >= {}", row_text(a), format_rat(c));
                }
            }
        }
        Format::Json => {
            let axiom_json = |a: &coherentia_core::coherence::Axiom| {
                json!({
                    "coeffs": a.normal.iter().map(format_rat).collect::<Vec<_>>(),
                    "offset": format_rat(&a.offset),
                    "rendered": a.render(&set.quotient, &spec),
                    "provenance_row": a.provenance_row,
                })
            };
            let mut doc = json!({
                "logic": spec.name,
                "letters": set.letters,
                "representatives": set.quotient.classes().iter()
                    .map(|c| c.rendered.clone()).collect::<Vec<_>>(),
                "equalities": set.equalities.iter().map(axiom_json).collect::<Vec<_>>(),
                "inequalities": set.inequalities.iter().map(axiom_json).collect::<Vec<_>>(),
                "logical_axiom": set.logical_axiom,
            });
            if dump_geometry {
                let rows: Vec<Vec<String>> = set
                    .matrix
                    .rows
                    .iter()
                    .map(|row| row.iter().map(format_rat).collect())
                    .collect();
                doc["v_representation"] = json!(rows);
            }
            println!("{doc}");
        }
    }
    Ok(0)
}

fn cmd_check(logic: Option<&str>, beliefs: &str, format: Format) -> Result<u8> {
    let text = std::fs::read_to_string(beliefs)
        .with_context(|| format!("reading belief file {beliefs:?}"))?;
    let file = belief_file_from_json(&text)?;
    let logic_name = match (logic, &file.logic) {
        (Some(flag), _) => flag.to_owned(),
        (None, Some(from_file)) => from_file.clone(),
        (None, None) => {
            return Err(anyhow!(
                "no logic given: pass --logic or add a \"logic\" key to the belief file"
            ))
        }
    };
    let spec = load_logic(&logic_name)?;
    let assignment = belief_assignment(&file, &spec)?;
    let outcome = check_coherence(&spec, &assignment)?;
    match &outcome.verdict {
        CoherenceVerdict::Coherent { lambda } => {
            match format {
                Format::Text => {
                    println!("coherent");
                    println!("mixture over valuations:");
                    for (l, w) in lambda.iter().zip(&outcome.valuations) {
                        if !l.is_zero() {
                            println!("  {} · ({})", format_rat(l), w.render(&spec));
                        }
                    }
                }
                Format::Json => {
                    let mixture: Vec<_> = lambda
                        .iter()
                        .zip(&outcome.valuations)
                        .filter(|(l, _)| !l.is_zero())
                        .map(|(l, w)| {
                            json!({ "weight": format_rat(l), "valuation": w.render(&spec) })
                        })
                        .collect();
                    println!("{}", json!({ "verdict": "coherent", "mixture": mixture }));
                }
            }
            Ok(0)
        }
        CoherenceVerdict::Incoherent { separator } => {
            let book = extract_dutch_book(&assignment, &outcome)?;
            let worst = verify_dutch_book(&spec, &assignment, &book)?;
            debug_assert!(worst.is_negative());
            let violated = render_violated_inequality(&spec, &outcome).expect("incoherent");
            match format {
                Format::Text => {
                    println!("incoherent");
                    println!("dutch book (stakes against the bettor):");
                    for (f, stake) in &book.bets {
                        println!("  {} on {}", format_rat(stake), render_formula(f, &spec));
                    }
                    println!(
                        "guaranteed bettor loss: at least {}",
                        format_rat(&book.guaranteed_loss_bound)
                    );
                    println!("violated: {violated}");
                }
                Format::Json => {
                    let bets: Vec<_> = book
                        .bets
                        .iter()
                        .map(|(f, stake)| {
                            json!({
                                "formula": render_formula(f, &spec),
                                "stake": format_rat(stake),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "verdict": "incoherent",
                            "dutch_book": {
                                "bets": bets,
                                "guaranteed_loss": format_rat(&book.guaranteed_loss_bound),
                            },
                            "separator": {
                                "normal": separator.normal.iter().map(format_rat).collect::<Vec<_>>(),
                                "offset": format_rat(&separator.offset),
                            },
                            "violated": violated,
                        })
                    );
                }
            }
            Ok(1)
        }
    }
}

fn cmd_consequence(logic: &str, lhs: &str, rhs: &str, format: Format) -> Result<u8> {
    let spec = load_logic(logic)?;
    let lhs = parse_formula(lhs, &spec).map_err(|e| anyhow!("left formula: {e}"))?;
    let rhs = parse_formula(rhs, &spec).map_err(|e| anyhow!("right formula: {e}"))?;
    if entails_default(&spec, &lhs, &rhs)? {
        match format {
            Format::Text => println!("entails"),
            Format::Json => println!("{}", json!({ "entails": true })),
        }
        Ok(0)
    } else {
        let letters = union_letters(&[&lhs, &rhs]);
        let witness = countervaluation(&spec, &letters, &lhs, &rhs)?
            .expect("failed entailment has a countervaluation");
        match format {
            Format::Text => {
                println!("does not entail");
                println!("countervaluation: {}", witness.render(&spec));
            }
            Format::Json => println!(
                "{}",
                json!({ "entails": false, "countervaluation": witness.render(&spec) })
            ),
        }
        Ok(1)
    }
}

fn cmd_verify(
    logic: &str,
    letters: &str,
    templates: &str,
    mode: VerifyMode,
    cap: usize,
    format: Format,
) -> Result<u8> {
    let spec = load_logic(logic)?;
    let letters = split_list(letters, "letters (use e.g. --letters p,q)")?;
    let names = split_list(templates, "templates (use e.g. --templates SL1,SL2)")?;
    let templates = resolve_templates(&names)?;
    match mode {
        VerifyMode::Soundness => {
            let quotient = quotient_algebra(&spec, &letters, cap)?;
            let mut all_sound = true;
            let mut reports = Vec::new();
            for t in &templates {
                let report = verify_axiom_soundness(&spec, &quotient, t)?;
                all_sound &= report.passed();
                reports.push(report);
            }
            match format {
                Format::Text => {
                    println!("mode: soundness");
                    for r in &reports {
                        if r.passed() {
                            println!(
                                "template {}: sound ({} instances checked, {} skipped by side condition)",
                                r.template, r.instances_checked, r.instances_skipped
                            );
                        } else {
                            println!(
                                "template {}: UNSOUND ({} violations)",
                                r.template,
                                r.violations.len()
                            );
                            for v in r.violations.iter().take(5) {
                                let subst: Vec<String> = v
                                    .substitution
                                    .iter()
                                    .map(|(mv, f)| format!("{mv}:={f}"))
                                    .collect();
                                println!(
                                    "  at [{}] under ({}): lhs = {}, rhs = {}",
                                    subst.join(", "),
                                    v.valuation,
                                    format_rat(&v.lhs_value),
                                    format_rat(&v.rhs_value)
                                );
                            }
                        }
                    }
                    println!("verdict: {}", if all_sound { "sound" } else { "unsound" });
                }
                Format::Json => {
                    let reports_json: Vec<_> = reports
                        .iter()
                        .map(|r| {
                            json!({
                                "template": r.template,
                                "sound": r.passed(),
                                "instances_checked": r.instances_checked,
                                "instances_skipped": r.instances_skipped,
                                "violations": r.violations.iter().map(|v| json!({
                                    "substitution": v.substitution,
                                    "valuation": v.valuation,
                                    "lhs": format_rat(&v.lhs_value),
                                    "rhs": format_rat(&v.rhs_value),
                                })).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({ "mode": "soundness", "sound": all_sound, "templates": reports_json })
                    );
                }
            }
            Ok(if all_sound { 0 } else { 1 })
        }
        VerifyMode::Completeness => {
            let (report, set) = verify_axiom_completeness(&spec, &letters, &templates, cap)?;
            let (verdict_text, detail, code) = match &report.verdict {
                CompletenessVerdict::Complete => ("complete", None, 0),
                CompletenessVerdict::Unsound { report } => (
                    "unsound",
                    Some(format!(
                        "template {} has {} violating instances",
                        report.template,
                        report.violations.len()
                    )),
                    1,
                ),
                CompletenessVerdict::MissingAxiom { axiom, witness } => (
                    "incomplete",
                    Some(format!(
                        "missing axiom: {axiom}; witness B = ({}) over representatives ({})",
                        witness.iter().map(format_rat).collect::<Vec<_>>().join(", "),
                        set.quotient
                            .classes()
                            .iter()
                            .map(|c| c.rendered.clone())
                            .collect::<Vec<_>>()
                            .join(", "),
                    )),
                    1,
                ),
                CompletenessVerdict::NotImpliedByFacets { instance } => (
                    "inconsistent",
                    Some(format!(
                        "template instance not implied by facets: {instance}"
                    )),
                    1,
                ),
            };
            match format {
                Format::Text => {
                    println!("mode: completeness");
                    println!("templates: {}", names.join(", "));
                    println!(
                        "system sizes: {} template rows, {} facet rows",
                        report.template_rows, report.facet_rows
                    );
                    println!("verdict: {verdict_text}");
                    if let Some(d) = &detail {
                        println!("{d}");
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        json!({
                            "mode": "completeness",
                            "templates": names,
                            "template_rows": report.template_rows,
                            "facet_rows": report.facet_rows,
                            "verdict": verdict_text,
                            "detail": detail,
                        })
                    );
                }
            }
            Ok(code)
        }
    }
}

fn cmd_expressibility(logic: &str, letters: &str, cap: usize, format: Format) -> Result<u8> {
    let spec = load_logic(logic)?;
    let letters = split_list(letters, "letters (use e.g. --letters p,q)")?;
    let q = quotient_algebra(&spec, &letters, cap)?;
    let report = check_equivalence_expressibility(&spec, &q)?;
    match format {
        Format::Text => {
            println!("classes: {}", report.class_count);
            if report.holds() {
                println!("expressible: the scheme separates all classes");
            } else {
                println!("NOT expressible; witness pairs:");
                for v in report.violations.iter().take(10) {
                    println!("  ({}, {})", v.left, v.right);
                }
            }
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "classes": report.class_count,
                    "expressible": report.holds(),
                    "violations": report.violations.iter().map(|v| json!({
                        "left": v.left, "right": v.right,
                    })).collect::<Vec<_>>(),
                })
            );
        }
    }
    Ok(if report.holds() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::LogicsList { format } => cmd_logics_list(format),
        Command::Quotient {
            logic,
            letters,
            cap,
            format,
        } => cmd_quotient(&logic, &letters, cap.cap, format),
        Command::Axioms {
            logic,
            letters,
            cap,
            format,
            dump_geometry,
        } => cmd_axioms(&logic, &letters, cap.cap, format, dump_geometry),
        Command::Check {
            logic,
            beliefs,
            format,
        } => cmd_check(logic.as_deref(), &beliefs, format),
        Command::Consequence {
            logic,
            lhs,
            rhs,
            format,
        } => cmd_consequence(&logic, &lhs, &rhs, format),
        Command::Verify {
            logic,
            letters,
            templates,
            mode,
            cap,
            format,
        } => cmd_verify(&logic, &letters, &templates, mode, cap.cap, format),
        Command::Expressibility {
            logic,
            letters,
            cap,
            format,
        } => cmd_expressibility(&logic, &letters, cap.cap, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
