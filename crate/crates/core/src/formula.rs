//! Propositional formulas over a logic's declared connectives.
//!
//! The grammar is fixed by the logic: prefix unary connectives bind
//! tighter than every infix one, infix connectives carry a declared
//! numeric precedence and associate left, and parentheses group.
//! Rendering emits minimal parentheses and round-trips through the
//! parser.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{Fixity, LogicSpec};

/// Abstract syntax tree of a formula. Connectives are referenced by
/// token; arity and fixity live in the governing [`LogicSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Letter(String),
    Apply(String, Vec<Formula>),
}

impl Formula {
    pub fn letter(name: &str) -> Self {
        Formula::Letter(name.into())
    }

    pub fn apply(conn: &str, args: Vec<Formula>) -> Self {
        Formula::Apply(conn.into(), args)
    }

    pub fn unary(conn: &str, arg: Formula) -> Self {
        Formula::Apply(conn.into(), vec![arg])
    }

    pub fn binary(conn: &str, lhs: Formula, rhs: Formula) -> Self {
        Formula::Apply(conn.into(), vec![lhs, rhs])
    }

    /// Letters occurring in the formula, sorted.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Letter(name) => {
                out.insert(name.clone());
            }
            Formula::Apply(_, args) => {
                for a in args {
                    a.collect_letters(out);
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Letter(_) => 1,
            Formula::Apply(_, args) => 1 + args.iter().map(Formula::node_count).sum::<usize>(),
        }
    }

    /// Replaces letters by formulas; letters without a binding stay put.
    pub fn substitute(&self, bindings: &[(String, Formula)]) -> Formula {
        match self {
            Formula::Letter(name) => bindings
                .iter()
                .find(|(mv, _)| mv == name)
                .map(|(_, f)| f.clone())
                .unwrap_or_else(|| self.clone()),
            Formula::Apply(conn, args) => Formula::Apply(
                conn.clone(),
                args.iter().map(|a| a.substitute(bindings)).collect(),
            ),
        }
    }
}

/// A formula with holes: the shape used by equivalence schemes. Filling
/// every hole with the same formula yields a [`Formula`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Context {
    Hole,
    Letter(String),
    Apply(String, Vec<Context>),
}

impl Context {
    pub fn has_hole(&self) -> bool {
        match self {
            Context::Hole => true,
            Context::Letter(_) => false,
            Context::Apply(_, args) => args.iter().any(Context::has_hole),
        }
    }

    pub fn fill(&self, f: &Formula) -> Formula {
        match self {
            Context::Hole => f.clone(),
            Context::Letter(name) => Formula::Letter(name.clone()),
            Context::Apply(conn, args) => {
                Formula::Apply(conn.clone(), args.iter().map(|a| a.fill(f)).collect())
            }
        }
    }

    pub fn connective_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_connectives(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_connectives(&self, out: &mut Vec<String>) {
        if let Context::Apply(conn, args) = self {
            out.push(conn.clone());
            for a in args {
                a.collect_connectives(out);
            }
        }
    }

    pub fn letters(&self) -> BTreeSet<String> {
        match self {
            Context::Hole => BTreeSet::new(),
            Context::Letter(name) => std::iter::once(name.clone()).collect(),
            Context::Apply(_, args) => args.iter().flat_map(Context::letters).collect(),
        }
    }

    /// Renders with `_` as the hole; inverse of [`parse_context`].
    pub fn render(&self, spec: &LogicSpec) -> String {
        render_node(&self.to_node(), spec, None)
    }

    fn to_node(&self) -> Node {
        match self {
            Context::Hole => Node::Hole,
            Context::Letter(name) => Node::Letter(name.clone()),
            Context::Apply(conn, args) => {
                Node::Apply(conn.clone(), args.iter().map(Context::to_node).collect())
            }
        }
    }
}

/// Parse error with the byte offset of the offending token.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

fn err<T>(message: impl Into<String>, position: usize) -> Result<T, ParseError> {
    Err(ParseError {
        message: message.into(),
        position,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    Conn(String),
    LParen,
    RParen,
    Hole,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(text: &str, spec: &LogicSpec, allow_hole: bool) -> Result<Vec<Token>, ParseError> {
    // Longest match first; ties broken lexicographically for determinism.
    let mut conn_tokens: Vec<&str> = spec.connectives.iter().map(|c| c.name.as_str()).collect();
    conn_tokens.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if c == '(' {
            tokens.push(Token {
                kind: TokenKind::LParen,
                pos,
            });
            pos += 1;
            continue;
        }
        if c == ')' {
            tokens.push(Token {
                kind: TokenKind::RParen,
                pos,
            });
            pos += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = pos;
            while pos < bytes.len()
                && ((bytes[pos] as char).is_ascii_alphanumeric() || bytes[pos] == b'_')
            {
                pos += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident(text[start..pos].to_owned()),
                pos: start,
            });
            continue;
        }
        if c == '_' && allow_hole {
            tokens.push(Token {
                kind: TokenKind::Hole,
                pos,
            });
            pos += 1;
            continue;
        }
        if let Some(name) = conn_tokens.iter().find(|t| text[pos..].starts_with(**t)) {
            tokens.push(Token {
                kind: TokenKind::Conn((*name).to_owned()),
                pos,
            });
            pos += name.len();
            continue;
        }
        return err(format!("unknown token starting at {c:?}"), pos);
    }
    Ok(tokens)
}

/// Shared parse tree for formulas and contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Hole,
    Letter(String),
    Apply(String, Vec<Node>),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    spec: &'a LogicSpec,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn parse_primary(&mut self) -> Result<Node, ParseError> {
        let Some(token) = self.peek().cloned() else {
            return err("unexpected end of input, expected an operand", self.end);
        };
        match token.kind {
            TokenKind::Ident(name) => {
                self.pos += 1;
                Ok(Node::Letter(name))
            }
            TokenKind::Hole => {
                self.pos += 1;
                Ok(Node::Hole)
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.parse_expr(0)?;
                match self.peek() {
                    Some(t) if t.kind == TokenKind::RParen => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(t) => err("expected ')'", t.pos),
                    None => err("unbalanced parentheses: missing ')'", self.end),
                }
            }
            TokenKind::RParen => err("unbalanced parentheses: unexpected ')'", token.pos),
            TokenKind::Conn(name) => {
                let conn = self.spec.connective(&name).expect("lexed connective");
                if conn.fixity != Fixity::Prefix {
                    return err(
                        format!("arity/fixity misuse: infix operator {name:?} has no left operand"),
                        token.pos,
                    );
                }
                self.pos += 1;
                let arg = self.parse_primary()?;
                Ok(Node::Apply(name, vec![arg]))
            }
        }
    }

    fn parse_expr(&mut self, min_prec: u32) -> Result<Node, ParseError> {
        let mut left = self.parse_primary()?;
        loop {
            let Some(token) = self.peek().cloned() else {
                return Ok(left);
            };
            let TokenKind::Conn(name) = token.kind else {
                return Ok(left);
            };
            let conn = self.spec.connective(&name).expect("lexed connective");
            if conn.fixity != Fixity::Infix {
                return err(
                    format!("arity/fixity misuse: prefix operator {name:?} in infix position"),
                    token.pos,
                );
            }
            if conn.precedence < min_prec {
                return Ok(left);
            }
            let prec = conn.precedence;
            self.pos += 1;
            // Left associativity: the right operand must bind strictly tighter.
            let right = self.parse_expr(prec + 1)?;
            left = Node::Apply(name, vec![left, right]);
        }
    }
}

fn parse_node(text: &str, spec: &LogicSpec, allow_hole: bool) -> Result<Node, ParseError> {
    let tokens = lex(text, spec, allow_hole)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        spec,
        end: text.len(),
    };
    let node = parser.parse_expr(0)?;
    if let Some(extra) = parser.peek() {
        if extra.kind == TokenKind::RParen {
            return err("unbalanced parentheses: unexpected ')'", extra.pos);
        }
        return err("unexpected trailing token", extra.pos);
    }
    Ok(node)
}

fn node_to_formula(node: Node, text_pos: usize) -> Result<Formula, ParseError> {
    match node {
        Node::Hole => err("'_' is only allowed in equivalence contexts", text_pos),
        Node::Letter(name) => Ok(Formula::Letter(name)),
        Node::Apply(conn, args) => {
            let args = args
                .into_iter()
                .map(|a| node_to_formula(a, text_pos))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::Apply(conn, args))
        }
    }
}

fn node_to_context(node: Node) -> Context {
    match node {
        Node::Hole => Context::Hole,
        Node::Letter(name) => Context::Letter(name),
        Node::Apply(conn, args) => {
            Context::Apply(conn, args.into_iter().map(node_to_context).collect())
        }
    }
}

/// Parses a formula under the spec's connectives and precedences.
pub fn parse_formula(text: &str, spec: &LogicSpec) -> Result<Formula, ParseError> {
    let node = parse_node(text, spec, false)?;
    node_to_formula(node, 0)
}

/// Parses an equivalence context; `_` marks the hole.
pub fn parse_context(text: &str, spec: &LogicSpec) -> Result<Context, ParseError> {
    let node = parse_node(text, spec, true)?;
    Ok(node_to_context(node))
}

/// Renders a formula with minimal parentheses. The result parses back to
/// a structurally equal formula.
///
/// Panics if the formula uses a connective the spec does not declare;
/// that is a caller bug, not an input condition.
pub fn render_formula(f: &Formula, spec: &LogicSpec) -> String {
    let node = formula_to_node(f);
    render_node(&node, spec, None)
}

fn formula_to_node(f: &Formula) -> Node {
    match f {
        Formula::Letter(name) => Node::Letter(name.clone()),
        Formula::Apply(conn, args) => {
            Node::Apply(conn.clone(), args.iter().map(formula_to_node).collect())
        }
    }
}

/// `parent` carries the precedence bound a child must meet to avoid
/// parentheses: `(bound, strict)`.
fn render_node(node: &Node, spec: &LogicSpec, parent: Option<(u32, bool)>) -> String {
    let (text, own_prec) = match node {
        Node::Hole => ("_".to_owned(), None),
        Node::Letter(name) => (name.clone(), None),
        Node::Apply(conn, args) => {
            let c = spec
                .connective(conn)
                .unwrap_or_else(|| panic!("connective {conn:?} not declared by logic {:?}", spec.name));
            match (c.fixity, args.as_slice()) {
                (Fixity::Prefix, [arg]) => {
                    let inner = render_node(arg, spec, Some((u32::MAX, false)));
                    let space = if needs_space(&c.name, &inner, spec) {
                        " "
                    } else {
                        ""
                    };
                    (format!("{}{}{}", c.name, space, inner), None)
                }
                (Fixity::Infix, [lhs, rhs]) => {
                    let l = render_node(lhs, spec, Some((c.precedence, false)));
                    let r = render_node(rhs, spec, Some((c.precedence, true)));
                    (format!("{} {} {}", l, c.name, r), Some(c.precedence))
                }
                _ => panic!("connective {conn:?} applied with wrong arity"),
            }
        }
    };
    match (own_prec, parent) {
        (Some(prec), Some((bound, strict))) if prec < bound || (strict && prec == bound) => {
            format!("({text})")
        }
        _ => text,
    }
}

/// A space is required after a prefix token only when some longer
/// declared token extends it into the start of the rendered argument.
fn needs_space(prefix_token: &str, rendered_arg: &str, spec: &LogicSpec) -> bool {
    spec.connectives.iter().any(|c| {
        c.name.len() > prefix_token.len()
            && c.name.starts_with(prefix_token)
            && rendered_arg.starts_with(&c.name[prefix_token.len()..])
    })
}

impl fmt::Display for Formula {
    /// Debug-oriented display without a spec: fully parenthesized prefix
    /// form. Use [`render_formula`] for user-facing output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Letter(name) => write!(f, "{name}"),
            Formula::Apply(conn, args) => {
                write!(f, "{conn}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
