//! Text syntax for constants, rational functions, exponential polynomials and
//! right-hand sides, plus the command runner behind the CLI.
//!
//! A script is a list of definitions `name := expr` (or `name(z) := expr`)
//! separated by newlines or `;`. Built-in names are `z`, `w`, `i`, `pi` and
//! `e`; `exp(..)` takes a constant or an argument linear in `z`. A definition
//! named `w` holds a candidate solution, while `w` inside an expression is
//! always the unknown of a right-hand side.

mod parse;
pub mod report;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::constfield::ConstExpr;
use crate::ddeq::{normalize_rhs, DelayEquation, WPoly, WRational};
use crate::error::{Error, Result};
use crate::expoly::ExpoPoly;
use crate::ratfun::{Poly, RatFun};
pub use parse::Span;
use parse::{Expr, Node};
pub use report::{run, Command, Options, Outcome, Report, SCHEMA};

/// Names that cannot be defined. `w` may be defined (as the candidate
/// solution) but inside expressions always denotes the formal variable.
const RESERVED: [&str; 5] = ["z", "i", "pi", "e", "exp"];

/// A parsed value, in the smallest class that holds it.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Const(ConstExpr),
    Rat(RatFun),
    Expo(ExpoPoly),
    /// Rational in `w` with coefficients in `C(z)`.
    WRat(WRational),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Const(_) => "constant",
            Value::Rat(_) => "rational function",
            Value::Expo(_) => "exponential polynomial",
            Value::WRat(_) => "rational function of w",
        }
    }

    pub fn as_const(&self) -> Option<ConstExpr> {
        match self {
            Value::Const(c) => Some(c.clone()),
            Value::Rat(r) => r.as_constant(),
            Value::Expo(p) => p.as_ratfun()?.as_constant(),
            Value::WRat(_) => None,
        }
    }

    pub fn as_ratfun(&self) -> Option<RatFun> {
        match self {
            Value::Const(c) => Some(RatFun::constant(c.clone())),
            Value::Rat(r) => Some(r.clone()),
            Value::Expo(p) => p.as_ratfun(),
            Value::WRat(_) => None,
        }
    }

    pub fn as_expopoly(&self) -> Option<ExpoPoly> {
        match self {
            Value::Expo(p) => Some(p.clone()),
            Value::WRat(_) => None,
            other => Some(ExpoPoly::from_ratfun(other.as_ratfun()?)),
        }
    }

    pub fn as_wrational(&self) -> Option<WRational> {
        match self {
            Value::WRat(r) => Some(r.clone()),
            other => WRational::polynomial(WPoly::constant(other.as_ratfun()?)).ok(),
        }
    }

    /// Canonical text that parses back to an equal value.
    pub fn canonical(&self) -> String {
        match self {
            Value::Const(c) => c.to_string(),
            Value::Rat(r) => r.to_string(),
            Value::Expo(p) => p.to_string(),
            Value::WRat(r) => r.to_string(),
        }
    }

    /// Demotes to the smallest class.
    pub fn settle(self) -> Value {
        match self {
            Value::Expo(p) => match p.as_ratfun() {
                Some(r) => Value::Rat(r).settle(),
                None => Value::Expo(p),
            },
            Value::Rat(r) => match r.as_constant() {
                Some(c) => Value::Const(c),
                None => Value::Rat(r),
            },
            v => v,
        }
    }

    /// Semantic equality via the exact zero tests.
    pub fn equals(&self, o: &Value) -> Result<bool> {
        if let (Some(a), Some(b)) = (self.as_ratfun(), o.as_ratfun()) {
            return a.equals(&b);
        }
        if let (Some(a), Some(b)) = (self.as_expopoly(), o.as_expopoly()) {
            return a.sub(&b)?.is_zero().decide(format!("({a}) - ({b})"));
        }
        match (self.as_wrational(), o.as_wrational()) {
            (Some(a), Some(b)) => {
                // compare P1 Q2 - P2 Q1 coefficientwise
                let d = a.p().mul(b.q())?.sub(&b.p().mul(a.q())?)?;
                d.decide_zero()
            }
            _ => Ok(false),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Parses a standalone expression.
pub fn parse_value(src: &str) -> Result<Value> {
    let node = parse::parse_expression(src)?;
    eval(&node, &BTreeMap::new())
}

/// Definitions in source order, each with the span of its name.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Script {
    defs: Vec<(String, Span, Value)>,
}

impl Script {
    pub fn parse(src: &str) -> Result<Script> {
        let mut env = BTreeMap::new();
        let mut defs = Vec::new();
        for st in parse::parse_statements(src)? {
            if RESERVED.contains(&st.name.as_str()) {
                return Err(st
                    .span
                    .error(format!("`{}` is built in and cannot be redefined", st.name)));
            }
            if env.contains_key(&st.name) {
                return Err(st.span.error(format!("`{}` is defined twice", st.name)));
            }
            let v = eval(&st.body, &env)?;
            env.insert(st.name.clone(), v.clone());
            defs.push((st.name, st.span, v));
        }
        Ok(Script { defs })
    }

    /// Adds or replaces a definition.
    pub fn define(&mut self, name: &str, v: Value) {
        match self.defs.iter_mut().find(|(n, _, _)| n == name) {
            Some(slot) => slot.2 = v,
            None => self
                .defs
                .push((name.to_string(), Span { line: 0, col: 0 }, v)),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.iter().map(|(n, _, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.defs
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, v)| v)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    fn lookup<T>(&self, name: &str, want: &str, f: impl Fn(&Value) -> Option<T>) -> Result<T> {
        let (_, span, v) = self
            .defs
            .iter()
            .find(|(n, _, _)| n == name)
            .ok_or_else(|| Error::Missing(name.to_string()))?;
        f(v).ok_or_else(|| span.error(format!("`{name}` must be a {want}, found a {}", v.kind())))
    }

    pub fn constant(&self, name: &str) -> Result<ConstExpr> {
        self.lookup(name, "constant", Value::as_const)
    }

    pub fn ratfun(&self, name: &str) -> Result<RatFun> {
        self.lookup(name, "rational function of z", Value::as_ratfun)
    }

    pub fn polynomial(&self, name: &str) -> Result<Poly> {
        self.lookup(name, "polynomial in z", |v| v.as_ratfun()?.as_poly())
    }

    pub fn expopoly(&self, name: &str) -> Result<ExpoPoly> {
        self.lookup(name, "exponential polynomial", Value::as_expopoly)
    }

    pub fn wrational(&self, name: &str) -> Result<WRational> {
        self.lookup(name, "rational function of w", Value::as_wrational)
    }

    /// The equation given by the definitions `a` and `rhs`.
    pub fn equation(&self) -> Result<DelayEquation> {
        DelayEquation::new(self.ratfun("a")?, self.wrational("rhs")?)
    }

    /// One `name := value` line per definition, in canonical syntax.
    pub fn canonical(&self) -> String {
        self.defs
            .iter()
            .map(|(n, _, v)| format!("{n} := {v}\n"))
            .collect()
    }
}

fn eval(node: &Node, env: &BTreeMap<String, Value>) -> Result<Value> {
    let span = node.span;
    let v = match &node.expr {
        Expr::Int(n) => Value::Const(ConstExpr::from_big_rational(BigRational::from_integer(
            n.clone(),
        ))),
        Expr::Name(name) => match name.as_str() {
            "z" => Value::Rat(RatFun::z()),
            "w" => Value::WRat(WRational::polynomial(WPoly::x())?),
            "i" => Value::Const(ConstExpr::i()),
            "pi" => Value::Const(ConstExpr::pi()),
            "e" => Value::Const(ConstExpr::one().exp()?),
            _ => env.get(name).cloned().ok_or_else(|| Error::Unresolved {
                name: name.clone(),
                line: span.line,
                col: span.col,
            })?,
        },
        Expr::Neg(x) => negate(eval(x, env)?)?,
        Expr::Bin(op, l, r) => {
            let (a, b) = (eval(l, env)?, eval(r, env)?);
            match op {
                '+' => add(a, b, span)?,
                '-' => add(a, negate(b)?, span)?,
                '*' => mul(a, b, span)?,
                '/' => div(a, b, span)?,
                '^' => power(a, &b, span)?,
                _ => unreachable!("parser only emits arithmetic operators"),
            }
        }
        Expr::Call(f, args) => {
            if f != "exp" {
                return Err(span.error(format!("unknown function `{f}`")));
            }
            if args.len() != 1 {
                return Err(span.error("`exp` takes one argument"));
            }
            exp(eval(&args[0], env)?, span)?
        }
    };
    Ok(v.settle())
}

fn negate(v: Value) -> Result<Value> {
    Ok(match v {
        Value::Const(c) => Value::Const(-c),
        Value::Rat(r) => Value::Rat(r.neg()),
        Value::Expo(p) => Value::Expo(p.neg()),
        Value::WRat(r) => Value::WRat(normalize_rhs(&r.p().neg(), r.q())?),
    })
}

fn mix_error(span: Span) -> Error {
    span.error("cannot combine `w` with exponential terms")
}

fn add(a: Value, b: Value, span: Span) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Const(x), Value::Const(y)) => Value::Const(&x + &y),
        (a @ Value::WRat(_), b) | (b, a @ Value::WRat(_)) => {
            let (x, y) = (
                a.as_wrational().ok_or_else(|| mix_error(span))?,
                b.as_wrational().ok_or_else(|| mix_error(span))?,
            );
            let p = x.p().mul(y.q())?.add(&y.p().mul(x.q())?)?;
            Value::WRat(normalize_rhs(&p, &x.q().mul(y.q())?)?)
        }
        (a @ Value::Expo(_), b) | (b, a @ Value::Expo(_)) => Value::Expo(
            a.as_expopoly()
                .expect("expo")
                .add(&b.as_expopoly().expect("not w"))?,
        ),
        (a, b) => Value::Rat(
            a.as_ratfun()
                .expect("rational")
                .add(&b.as_ratfun().expect("rational"))?,
        ),
    })
}

fn mul(a: Value, b: Value, span: Span) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Const(x), Value::Const(y)) => Value::Const(&x * &y),
        (a @ Value::WRat(_), b) | (b, a @ Value::WRat(_)) => {
            let (x, y) = (
                a.as_wrational().ok_or_else(|| mix_error(span))?,
                b.as_wrational().ok_or_else(|| mix_error(span))?,
            );
            Value::WRat(normalize_rhs(&x.p().mul(y.p())?, &x.q().mul(y.q())?)?)
        }
        (a @ Value::Expo(_), b) | (b, a @ Value::Expo(_)) => Value::Expo(
            a.as_expopoly()
                .expect("expo")
                .mul(&b.as_expopoly().expect("not w"))?,
        ),
        (a, b) => Value::Rat(
            a.as_ratfun()
                .expect("rational")
                .mul(&b.as_ratfun().expect("rational"))?,
        ),
    })
}

fn div(a: Value, b: Value, span: Span) -> Result<Value> {
    let zero = || span.error("zero denominator");
    Ok(match (a, b) {
        (Value::Const(x), Value::Const(y)) => {
            if y.is_zero().decide(&y)? {
                return Err(zero());
            }
            Value::Const(x.checked_div(&y)?)
        }
        (a, b @ Value::WRat(_)) | (a @ Value::WRat(_), b) => {
            let (x, y) = (
                a.as_wrational().ok_or_else(|| mix_error(span))?,
                b.as_wrational().ok_or_else(|| mix_error(span))?,
            );
            if y.p().is_zero() {
                return Err(zero());
            }
            Value::WRat(normalize_rhs(&x.p().mul(y.q())?, &x.q().mul(y.p())?)?)
        }
        (a, Value::Expo(p)) => {
            // only a single exponential term can be inverted
            let mut terms = p.terms();
            let (Some((d, h)), None) = (terms.next(), terms.next()) else {
                return Err(span.error("cannot divide by a sum of exponential terms"));
            };
            let inv = ExpoPoly::term(-d.clone(), RatFun::one().div(h)?)?;
            Value::Expo(a.as_expopoly().expect("not w").mul(&inv)?)
        }
        (a, b) => {
            let d = b.as_ratfun().expect("rational");
            if d.is_zero() {
                return Err(zero());
            }
            match a {
                Value::Expo(p) => Value::Expo(p.scale(&RatFun::one().div(&d)?)?),
                a => Value::Rat(a.as_ratfun().expect("rational").div(&d)?),
            }
        }
    })
}

fn small_int(v: &Value, span: Span) -> Result<i64> {
    let c = v
        .as_const()
        .ok_or_else(|| span.error("exponent must be an integer"))?;
    let n: BigInt = c
        .as_integer()
        .ok_or_else(|| span.error("exponent must be an integer"))?;
    match n.to_i64() {
        Some(k) if k.abs() <= 10_000 => Ok(k),
        _ => Err(span.error("exponent is too large")),
    }
}

fn power(a: Value, b: &Value, span: Span) -> Result<Value> {
    let k = small_int(b, span)?;
    Ok(match a {
        Value::Const(c) => {
            if k < 0 && c.is_zero().decide(&c)? {
                return Err(span.error("zero denominator"));
            }
            Value::Const(c.powi(k)?)
        }
        Value::Rat(r) => {
            if k < 0 && r.is_zero() {
                return Err(span.error("zero denominator"));
            }
            Value::Rat(r.pow(k)?)
        }
        Value::Expo(p) if k >= 0 => Value::Expo(p.pow(k as u32)?),
        Value::Expo(p) => div(
            Value::Const(ConstExpr::one()),
            Value::Expo(p.pow(k.unsigned_abs() as u32)?),
            span,
        )?,
        Value::WRat(r) => {
            let (p, q) = if k >= 0 {
                (r.p().clone(), r.q().clone())
            } else {
                (r.q().clone(), r.p().clone())
            };
            if p.is_zero() && k < 0 {
                return Err(span.error("zero denominator"));
            }
            let e = k.unsigned_abs() as u32;
            Value::WRat(normalize_rhs(&p.pow(e)?, &q.pow(e)?)?)
        }
    })
}

fn exp(arg: Value, span: Span) -> Result<Value> {
    if let Some(c) = arg.as_const() {
        return Ok(Value::Const(c.exp()?));
    }
    let linear = arg
        .as_ratfun()
        .and_then(|r| r.as_poly())
        .filter(|p| p.degree() == Some(1))
        .ok_or_else(|| span.error("`exp` needs a constant or an argument linear in z"))?;
    let (c0, d) = (linear.coeff(0), linear.coeff(1));
    Ok(Value::Expo(ExpoPoly::term(d, RatFun::constant(c0.exp()?))?))
}
