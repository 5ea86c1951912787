//! Formal expressions: formulas closed under formal sums and products
//! with rational constants, and the inequalities between them.
//!
//! A belief function extends to formal expressions by structural
//! recursion: constants evaluate to themselves, sums to sums, products to
//! products. Linear formal expressions also admit a symbolic reading as
//! linear forms over quotient-class variables, which is what axiom
//! generation and completeness checking consume.

use std::fmt;

use coherentia_geometry::rat::{format_rat, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{render_formula, Formula};
use crate::logic::LogicSpec;

/// A formal expression over formulas: leaves are formulas or rational
/// constants, internal nodes are binary sums and products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormalExpression {
    Formula(Formula),
    Constant(Rat),
    Sum(Box<FormalExpression>, Box<FormalExpression>),
    Product(Box<FormalExpression>, Box<FormalExpression>),
}

impl FormalExpression {
    pub fn formula(f: Formula) -> Self {
        FormalExpression::Formula(f)
    }

    pub fn constant(r: Rat) -> Self {
        FormalExpression::Constant(r)
    }

    pub fn sum(a: Self, b: Self) -> Self {
        FormalExpression::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Self, b: Self) -> Self {
        FormalExpression::Product(Box::new(a), Box::new(b))
    }

    /// Builds `sum_i coeff_i * formula_i + constant`, skipping zero
    /// coefficients. An empty sum is the bare constant.
    pub fn linear_combination(terms: &[(Rat, Formula)], constant: &Rat) -> Self {
        let mut expr: Option<FormalExpression> = None;
        for (coeff, f) in terms {
            if coeff.is_zero() {
                continue;
            }
            let term = if coeff.is_one() {
                FormalExpression::formula(f.clone())
            } else {
                FormalExpression::product(
                    FormalExpression::constant(coeff.clone()),
                    FormalExpression::formula(f.clone()),
                )
            };
            expr = Some(match expr {
                None => term,
                Some(acc) => FormalExpression::sum(acc, term),
            });
        }
        match expr {
            None => FormalExpression::constant(constant.clone()),
            Some(acc) if constant.is_zero() => acc,
            Some(acc) => FormalExpression::sum(acc, FormalExpression::constant(constant.clone())),
        }
    }

    /// All formula leaves, left to right.
    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_formulas(&mut out);
        out
    }

    fn collect_formulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            FormalExpression::Formula(f) => out.push(f),
            FormalExpression::Constant(_) => {}
            FormalExpression::Sum(a, b) | FormalExpression::Product(a, b) => {
                a.collect_formulas(out);
                b.collect_formulas(out);
            }
        }
    }

    /// Substitutes formulas for letters in every formula leaf; used to
    /// instantiate axiom templates.
    pub fn substitute(&self, bindings: &[(String, Formula)]) -> Self {
        match self {
            FormalExpression::Formula(f) => FormalExpression::Formula(f.substitute(bindings)),
            FormalExpression::Constant(r) => FormalExpression::Constant(r.clone()),
            FormalExpression::Sum(a, b) => {
                FormalExpression::sum(a.substitute(bindings), b.substitute(bindings))
            }
            FormalExpression::Product(a, b) => {
                FormalExpression::product(a.substitute(bindings), b.substitute(bindings))
            }
        }
    }

    /// Renders with `B(...)` around formula leaves, e.g. `1/2·B(p) + 1`.
    pub fn render(&self, spec: &LogicSpec) -> String {
        match self {
            FormalExpression::Formula(f) => format!("B({})", render_formula(f, spec)),
            FormalExpression::Constant(r) => format_rat(r),
            FormalExpression::Sum(a, b) => format!("{} + {}", a.render(spec), b.render(spec)),
            FormalExpression::Product(a, b) => {
                let wrap = |e: &FormalExpression| match e {
                    FormalExpression::Sum(..) => format!("({})", e.render(spec)),
                    _ => e.render(spec),
                };
                format!("{}·{}", wrap(a), wrap(b))
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExpressionError {
    #[error("no belief value for formula {0:?}")]
    MissingValue(String),
    #[error("expression is nonlinear: product of two formula-bearing sides")]
    Nonlinear,
    #[error("formula outside the quotient: {0}")]
    OutsideQuotient(String),
}

/// Evaluates an expression through a belief lookup, per the structural
/// recursion: `B(r) = r`, `B(s + t) = B(s) + B(t)`, `B(s·t) = B(s)·B(t)`.
pub fn evaluate_expression<F>(expr: &FormalExpression, lookup: &F) -> Result<Rat, ExpressionError>
where
    F: Fn(&Formula) -> Option<Rat>,
{
    match expr {
        FormalExpression::Formula(f) => {
            lookup(f).ok_or_else(|| ExpressionError::MissingValue(format!("{f}")))
        }
        FormalExpression::Constant(r) => Ok(r.clone()),
        FormalExpression::Sum(a, b) => {
            Ok(evaluate_expression(a, lookup)? + evaluate_expression(b, lookup)?)
        }
        FormalExpression::Product(a, b) => {
            Ok(evaluate_expression(a, lookup)? * evaluate_expression(b, lookup)?)
        }
    }
}

/// Relation of a formal (in)equality; `Le` is the primitive of the
/// theory, `Eq` abbreviates the two opposite inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// `lhs <= rhs` (or `lhs = rhs` when marked as an equality).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalInequality {
    pub lhs: FormalExpression,
    pub relation: Relation,
    pub rhs: FormalExpression,
}

impl FormalInequality {
    pub fn le(lhs: FormalExpression, rhs: FormalExpression) -> Self {
        FormalInequality {
            lhs,
            relation: Relation::Le,
            rhs,
        }
    }

    pub fn eq(lhs: FormalExpression, rhs: FormalExpression) -> Self {
        FormalInequality {
            lhs,
            relation: Relation::Eq,
            rhs,
        }
    }

    pub fn satisfied_by<F>(&self, lookup: &F) -> Result<bool, ExpressionError>
    where
        F: Fn(&Formula) -> Option<Rat>,
    {
        let l = evaluate_expression(&self.lhs, lookup)?;
        let r = evaluate_expression(&self.rhs, lookup)?;
        Ok(match self.relation {
            Relation::Le => l <= r,
            Relation::Eq => l == r,
        })
    }

    pub fn render(&self, spec: &LogicSpec) -> String {
        format!(
            "{} {} {}",
            self.lhs.render(spec),
            self.relation.symbol(),
            self.rhs.render(spec)
        )
    }
}

/// A linear form `coeffs · x + constant` over quotient-class variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl LinearForm {
    fn zero(n: usize) -> Self {
        LinearForm {
            coeffs: vec![Rat::zero(); n],
            constant: Rat::zero(),
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    fn add(mut self, other: &LinearForm) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.constant += &other.constant;
        self
    }

    fn scale(mut self, factor: &Rat) -> Self {
        for a in self.coeffs.iter_mut() {
            *a *= factor;
        }
        self.constant *= factor;
        self
    }
}

/// Reads a formal expression as a linear form over class variables via
/// `class_of`. Products are admitted only when one side evaluates to a
/// constant; facets and all built-in axiom shapes are linear.
pub fn linearize<E, F>(
    expr: &FormalExpression,
    n_classes: usize,
    class_of: &F,
) -> Result<LinearForm, ExpressionError>
where
    F: Fn(&Formula) -> Result<usize, E>,
    E: fmt::Display,
{
    match expr {
        FormalExpression::Formula(f) => {
            let class = class_of(f).map_err(|e| ExpressionError::OutsideQuotient(e.to_string()))?;
            let mut form = LinearForm::zero(n_classes);
            form.coeffs[class] = Rat::one();
            Ok(form)
        }
        FormalExpression::Constant(r) => {
            let mut form = LinearForm::zero(n_classes);
            form.constant = r.clone();
            Ok(form)
        }
        FormalExpression::Sum(a, b) => {
            let fa = linearize(a, n_classes, class_of)?;
            let fb = linearize(b, n_classes, class_of)?;
            Ok(fa.add(&fb))
        }
        FormalExpression::Product(a, b) => {
            let fa = linearize(a, n_classes, class_of)?;
            let fb = linearize(b, n_classes, class_of)?;
            if fa.is_constant() {
                Ok(fb.scale(&fa.constant))
            } else if fb.is_constant() {
                Ok(fa.scale(&fb.constant))
            } else {
                Err(ExpressionError::Nonlinear)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::builtin_logic;
    use coherentia_geometry::rat::{rat, ratio};

    fn b_of_p(f: &Formula) -> Option<Rat> {
        match f {
            Formula::Letter(name) if name == "p" => Some(ratio(1, 2)),
            _ => None,
        }
    }

    #[test]
    fn linearity_of_evaluation() {
        // 2·p + 1/3 evaluates to 4/3 when B(p) = 1/2.
        let expr = FormalExpression::linear_combination(
            &[(rat(2), Formula::letter("p"))],
            &ratio(1, 3),
        );
        assert_eq!(evaluate_expression(&expr, &b_of_p).unwrap(), ratio(4, 3));
    }

    #[test]
    fn constants_evaluate_to_themselves() {
        let expr = FormalExpression::constant(rat(5));
        assert_eq!(evaluate_expression(&expr, &b_of_p).unwrap(), rat(5));
    }

    #[test]
    fn general_linear_combination() {
        // 1/2·p + 3·p + 7 = (1/2 + 3)·B(p) + 7 at B(p) = 1/2.
        let expr = FormalExpression::sum(
            FormalExpression::linear_combination(&[(ratio(1, 2), Formula::letter("p"))], &rat(0)),
            FormalExpression::linear_combination(&[(rat(3), Formula::letter("p"))], &rat(7)),
        );
        assert_eq!(
            evaluate_expression(&expr, &b_of_p).unwrap(),
            ratio(7, 4) + rat(7)
        );
    }

    #[test]
    fn products_multiply() {
        let expr = FormalExpression::product(
            FormalExpression::formula(Formula::letter("p")),
            FormalExpression::formula(Formula::letter("p")),
        );
        assert_eq!(evaluate_expression(&expr, &b_of_p).unwrap(), ratio(1, 4));
    }

    #[test]
    fn missing_value_reported() {
        let expr = FormalExpression::formula(Formula::letter("q"));
        assert!(matches!(
            evaluate_expression(&expr, &b_of_p),
            Err(ExpressionError::MissingValue(_))
        ));
    }

    #[test]
    fn linearization_and_nonlinearity() {
        let class_of = |f: &Formula| -> Result<usize, SemErr> {
            match f {
                Formula::Letter(name) if name == "p" => Ok(0),
                Formula::Letter(name) if name == "q" => Ok(1),
                _ => Err(SemErr),
            }
        };
        let lin = FormalExpression::linear_combination(
            &[
                (rat(2), Formula::letter("p")),
                (rat(-1), Formula::letter("q")),
            ],
            &ratio(1, 2),
        );
        let form = linearize(&lin, 2, &class_of).unwrap();
        assert_eq!(form.coeffs, vec![rat(2), rat(-1)]);
        assert_eq!(form.constant, ratio(1, 2));

        let nonlin = FormalExpression::product(
            FormalExpression::formula(Formula::letter("p")),
            FormalExpression::formula(Formula::letter("q")),
        );
        assert!(matches!(
            linearize(&nonlin, 2, &class_of),
            Err(ExpressionError::Nonlinear)
        ));
    }

    #[derive(Debug)]
    struct SemErr;
    impl fmt::Display for SemErr {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "unknown formula")
        }
    }

    #[test]
    fn rendering() {
        let spec = builtin_logic("classical").unwrap();
        let expr = FormalExpression::linear_combination(
            &[
                (rat(1), Formula::letter("p")),
                (rat(-2), Formula::unary("~", Formula::letter("p"))),
            ],
            &rat(1),
        );
        assert_eq!(expr.render(&spec), "B(p) + -2·B(~p) + 1");
        let ineq = FormalInequality::eq(expr, FormalExpression::constant(rat(0)));
        assert!(ineq.render(&spec).ends_with("= 0"));
    }
}
