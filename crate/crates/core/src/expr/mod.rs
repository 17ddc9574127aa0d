//! Arithmetic expressions and boolean predicates over `x1..xn` and `t`.
//!
//! These are the building blocks of scenario files: vector-field components,
//! the membership predicate of the open set `M`, morphism maps and closed-form
//! oracle flows are all written in this small language. The grammar lives in
//! `docs/expression-grammar.md`.

mod parser;

use std::fmt;

pub use parser::{parse_expression, parse_predicate, ParseError, ParseErrorKind};

/// Binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Built-in functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Atan2,
    Min,
    Max,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "atan2" => Func::Atan2,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Atan2 => "atan2",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Atan2 | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

/// Comparison operators allowed in predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relop {
    Lt,
    Le,
    Gt,
    Ge,
    Ne,
    /// Parsed so that it can be rejected with a precise message; a positive
    /// equality test never describes an open set.
    Eq,
}

impl Relop {
    fn symbol(self) -> &'static str {
        match self {
            Relop::Lt => "<",
            Relop::Le => "<=",
            Relop::Gt => ">",
            Relop::Ge => ">=",
            Relop::Ne => "!=",
            Relop::Eq => "==",
        }
    }

    /// Strict comparisons of continuous functions cut out open sets.
    fn is_strict(self) -> bool {
        matches!(self, Relop::Lt | Relop::Gt | Relop::Ne)
    }

    fn apply(self, a: f64, b: f64) -> bool {
        match self {
            Relop::Lt => a < b,
            Relop::Le => a <= b,
            Relop::Gt => a > b,
            Relop::Ge => a >= b,
            Relop::Ne => a != b,
            Relop::Eq => a == b,
        }
    }
}

/// Arithmetic expression tree. Variables are stored zero-based: `x1` is
/// `Var(0)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Num(f64),
    Var(usize),
    Time,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Vec<Expression>),
}

/// Errors raised while evaluating an expression or predicate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable x{index} is not defined for a point of dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
}

fn checked(value: f64, what: impl FnOnce() -> String) -> Result<f64, EvalError> {
    if value.is_nan() {
        Err(EvalError::Domain(what()))
    } else {
        Ok(value)
    }
}

impl Expression {
    /// Evaluates the expression at `point` and time `t`.
    ///
    /// Singularities are reported as errors; a NaN never escapes.
    pub fn evaluate(&self, point: &[f64], t: f64) -> Result<f64, EvalError> {
        match self {
            Expression::Num(v) => Ok(*v),
            Expression::Var(i) => point.get(*i).copied().ok_or(EvalError::VariableOutOfRange {
                index: i + 1,
                dim: point.len(),
            }),
            Expression::Time => Ok(t),
            Expression::Neg(e) => Ok(-e.evaluate(point, t)?),
            Expression::Binary(op, a, b) => {
                let a = a.evaluate(point, t)?;
                let b = b.evaluate(point, t)?;
                match op {
                    BinOp::Add => checked(a + b, || "inf - inf".into()),
                    BinOp::Sub => checked(a - b, || "inf - inf".into()),
                    BinOp::Mul => checked(a * b, || "0 * inf".into()),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            checked(a / b, || "inf / inf".into())
                        }
                    }
                    BinOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        checked(a.powf(b), || format!("{a}^{b} is not real"))
                    }
                }
            }
            Expression::Call(f, args) => {
                let a = args[0].evaluate(point, t)?;
                let b = match f.arity() {
                    2 => args[1].evaluate(point, t)?,
                    _ => 0.0,
                };
                match f {
                    Func::Sin => checked(a.sin(), || "sin(inf)".into()),
                    Func::Cos => checked(a.cos(), || "cos(inf)".into()),
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if a <= 0.0 {
                            Err(EvalError::Domain(format!("log of non-positive value {a}")))
                        } else {
                            Ok(a.ln())
                        }
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            Err(EvalError::Domain(format!("sqrt of negative value {a}")))
                        } else {
                            Ok(a.sqrt())
                        }
                    }
                    Func::Abs => Ok(a.abs()),
                    Func::Atan2 => checked(a.atan2(b), || "atan2 of infinities".into()),
                    Func::Min => Ok(a.min(b)),
                    Func::Max => Ok(a.max(b)),
                }
            }
        }
    }

    /// Largest variable index used, one-based (`x3` gives 3); 0 if none.
    pub fn max_variable(&self) -> usize {
        match self {
            Expression::Var(i) => i + 1,
            Expression::Num(_) | Expression::Time => 0,
            Expression::Neg(e) => e.max_variable(),
            Expression::Binary(_, a, b) => a.max_variable().max(b.max_variable()),
            Expression::Call(_, args) => args.iter().map(Expression::max_variable).max().unwrap_or(0),
        }
    }

    pub fn uses_time(&self) -> bool {
        match self {
            Expression::Time => true,
            Expression::Num(_) | Expression::Var(_) => false,
            Expression::Neg(e) => e.uses_time(),
            Expression::Binary(_, a, b) => a.uses_time() || b.uses_time(),
            Expression::Call(_, args) => args.iter().any(Expression::uses_time),
        }
    }

    /// Replaces every `x{i+1}` by `replacements[i]`. Used to compose maps.
    pub fn substitute(&self, replacements: &[Expression]) -> Expression {
        match self {
            Expression::Var(i) => replacements
                .get(*i)
                .cloned()
                .unwrap_or(Expression::Var(*i)),
            Expression::Num(_) | Expression::Time => self.clone(),
            Expression::Neg(e) => Expression::Neg(Box::new(e.substitute(replacements))),
            Expression::Binary(op, a, b) => Expression::Binary(
                *op,
                Box::new(a.substitute(replacements)),
                Box::new(b.substitute(replacements)),
            ),
            Expression::Call(f, args) => {
                Expression::Call(*f, args.iter().map(|a| a.substitute(replacements)).collect())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(op, ..) => op.precedence(),
            Expression::Neg(_) => 3,
            Expression::Num(v) if v.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{:?}` is the shortest representation that parses back to the same bits.
    if v.is_sign_negative() {
        write!(f, "-{:?}", -v)
    } else {
        write!(f, "{v:?}")
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expression, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Num(v) => write_number(f, *v),
            Expression::Var(i) => write!(f, "x{}", i + 1),
            Expression::Time => f.write_str("t"),
            Expression::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expression::Binary(op, a, b) => {
                let p = op.precedence();
                if *op == BinOp::Pow {
                    write_child(f, a, a.precedence() <= p)?;
                    f.write_str("^")?;
                    write_child(f, b, b.precedence() < p && !matches!(**b, Expression::Neg(_)))
                } else {
                    write_child(f, a, a.precedence() < p)?;
                    write!(f, " {} ", op.symbol())?;
                    write_child(f, b, b.precedence() <= p)
                }
            }
            Expression::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Boolean combination of comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Const(bool),
    Compare(Relop, Expression, Expression),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    /// Evaluates with strict semantics: both sides of `and`/`or` are always
    /// evaluated, so an error anywhere propagates.
    pub fn evaluate(&self, point: &[f64]) -> Result<bool, EvalError> {
        match self {
            Predicate::Const(b) => Ok(*b),
            Predicate::Compare(op, a, b) => {
                Ok(op.apply(a.evaluate(point, 0.0)?, b.evaluate(point, 0.0)?))
            }
            Predicate::Not(p) => Ok(!p.evaluate(point)?),
            Predicate::And(a, b) => {
                let a = a.evaluate(point)?;
                let b = b.evaluate(point)?;
                Ok(a && b)
            }
            Predicate::Or(a, b) => {
                let a = a.evaluate(point)?;
                let b = b.evaluate(point)?;
                Ok(a || b)
            }
        }
    }

    /// Returns the first comparison that may produce a non-open set.
    ///
    /// A comparison under an even number of negations must be strict
    /// (`<`, `>`, `!=`); under an odd number it must be non-strict
    /// (`<=`, `>=`, `==`), since its negation is then strict. Continuous
    /// operands make every accepted predicate describe an open set.
    pub fn openness_violation(&self) -> Option<String> {
        self.openness_violation_at(true)
    }

    fn openness_violation_at(&self, positive: bool) -> Option<String> {
        match self {
            Predicate::Const(_) => None,
            Predicate::Compare(op, a, b) => {
                if op.is_strict() == positive {
                    None
                } else {
                    let shown = Predicate::Compare(*op, a.clone(), b.clone());
                    Some(if positive {
                        format!("`{shown}` is not a strict comparison")
                    } else {
                        format!("`{shown}` is negated but strict, which describes a closed set")
                    })
                }
            }
            Predicate::Not(p) => p.openness_violation_at(!positive),
            Predicate::And(a, b) | Predicate::Or(a, b) => a
                .openness_violation_at(positive)
                .or_else(|| b.openness_violation_at(positive)),
        }
    }

    pub fn max_variable(&self) -> usize {
        match self {
            Predicate::Const(_) => 0,
            Predicate::Compare(_, a, b) => a.max_variable().max(b.max_variable()),
            Predicate::Not(p) => p.max_variable(),
            Predicate::And(a, b) | Predicate::Or(a, b) => a.max_variable().max(b.max_variable()),
        }
    }

    pub fn uses_time(&self) -> bool {
        match self {
            Predicate::Const(_) => false,
            Predicate::Compare(_, a, b) => a.uses_time() || b.uses_time(),
            Predicate::Not(p) => p.uses_time(),
            Predicate::And(a, b) | Predicate::Or(a, b) => a.uses_time() || b.uses_time(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Predicate::Or(..) => 1,
            Predicate::And(..) => 2,
            Predicate::Not(_) => 3,
            _ => 4,
        }
    }
}

fn write_pred_child(f: &mut fmt::Formatter<'_>, child: &Predicate, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Const(b) => write!(f, "{b}"),
            Predicate::Compare(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            Predicate::Not(p) => {
                f.write_str("not ")?;
                write_pred_child(f, p, p.precedence() < 3)
            }
            Predicate::And(a, b) => {
                write_pred_child(f, a, a.precedence() < 2)?;
                f.write_str(" and ")?;
                write_pred_child(f, b, b.precedence() <= 2)
            }
            Predicate::Or(a, b) => {
                write_pred_child(f, a, a.precedence() < 1)?;
                f.write_str(" or ")?;
                write_pred_child(f, b, b.precedence() <= 1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, point: &[f64], t: f64) -> Result<f64, EvalError> {
        parse_expression(src).unwrap().evaluate(point, t)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(eval("x1 + 2*x2", &[1.0, 3.0], 0.0).unwrap(), 7.0);
        assert_eq!(eval("x1^2", &[-2.0], 0.0).unwrap(), 4.0);
        // closed-form flow of x' = x^2 from x = 1 at t = 0.5
        assert_eq!(eval("x1/(1 - t*x1)", &[1.0], 0.5).unwrap(), 2.0);
    }

    #[test]
    fn function_examples() {
        assert_eq!(eval("sin(x1)", &[0.0], 0.0).unwrap(), 0.0);
        assert!((eval("exp(x1)", &[1.0], 0.0).unwrap() - std::f64::consts::E).abs() < 1e-12);
        assert_eq!(eval("atan2(x2, x1)", &[0.0, 1.0], 0.0).unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(eval("min(x1, 3) + max(x1, 3)", &[5.0], 0.0).unwrap(), 8.0);
    }

    #[test]
    fn singularities_are_errors() {
        assert_eq!(eval("1/x1", &[0.0], 0.0), Err(EvalError::DivisionByZero));
        assert!(matches!(eval("sqrt(x1)", &[-1.0], 0.0), Err(EvalError::Domain(_))));
        assert!(matches!(eval("log(x1)", &[0.0], 0.0), Err(EvalError::Domain(_))));
        assert!(matches!(eval("x1^0.5", &[-4.0], 0.0), Err(EvalError::Domain(_))));
        assert_eq!(eval("x1^-1", &[0.0], 0.0), Err(EvalError::DivisionByZero));
        assert!(matches!(
            eval("x3", &[1.0, 2.0], 0.0),
            Err(EvalError::VariableOutOfRange { index: 3, dim: 2 })
        ));
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("-x1^2", &[3.0], 0.0).unwrap(), -9.0);
        assert_eq!(eval("2^3^2", &[], 0.0).unwrap(), 512.0);
        assert_eq!(eval("2^-1", &[], 0.0).unwrap(), 0.5);
        assert_eq!(eval("1 - 2 - 3", &[], 0.0).unwrap(), -4.0);
        assert_eq!(eval("8 / 4 / 2", &[], 0.0).unwrap(), 1.0);
        assert_eq!(eval("-2 * 3 + 1", &[], 0.0).unwrap(), -5.0);
    }

    #[test]
    fn predicate_examples() {
        let m2 = parse_predicate("x1^2 + x2^2 > 0").unwrap();
        assert!(!m2.evaluate(&[0.0, 0.0]).unwrap());
        assert!(m2.evaluate(&[1.0, 0.0]).unwrap());

        let m3 = parse_predicate("not (x1 == 0 and abs(x2) <= 1)").unwrap();
        assert!(!m3.evaluate(&[0.0, 0.5]).unwrap());
        assert!(m3.evaluate(&[0.0, 1.5]).unwrap());
        assert!(m3.evaluate(&[0.1, 0.5]).unwrap());
    }

    #[test]
    fn predicate_errors_are_strict() {
        let p = parse_predicate("x1 > 0 or log(x1) > 0").unwrap();
        assert!(p.evaluate(&[-1.0]).is_err());
    }

    #[test]
    fn openness_by_polarity() {
        let open = ["x1 > 0", "x1 != 0 or abs(x2) > 1", "not (x1 == 0 and abs(x2) <= 1)", "true"];
        for src in open {
            assert_eq!(parse_predicate(src).unwrap().openness_violation(), None, "{src}");
        }
        let closed = ["x1 == 0", "x1 >= 0", "not (x1 > 0)", "x1 > 0 and not (x2 != 1)"];
        for src in closed {
            assert!(parse_predicate(src).unwrap().openness_violation().is_some(), "{src}");
        }
    }

    #[test]
    fn display_round_trip_examples() {
        let sources = [
            "x1 + 2*x2",
            "-x1^2",
            "(-x1)^2",
            "2^-x1",
            "(2^3)^2",
            "x1 - (x2 - t)",
            "x1/(1 - t*x1)",
            "atan2(x2, -x1) * --x1",
            "sqrt(x1^2 + max(abs(x2) - 1, 0)^2)",
            "1e-10 + 2.5e300",
        ];
        for src in sources {
            let e = parse_expression(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expression(&printed).unwrap(), e, "{src} -> {printed}");
        }
        let p = parse_predicate("(x1 > 0 or x2 < 1) and not (x1 == 0 or x2 <= 2)").unwrap();
        assert_eq!(parse_predicate(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn substitute_composes() {
        let g = parse_expression("x1 * x2").unwrap();
        let f = [parse_expression("x1 + 1").unwrap(), parse_expression("2").unwrap()];
        assert_eq!(g.substitute(&f).evaluate(&[3.0], 0.0).unwrap(), 8.0);
    }
}
