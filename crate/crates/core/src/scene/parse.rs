//! Lexer and recursive-descent parser for the scene format.

use std::fmt;

use thiserror::Error;

use super::expr::{ConstraintExpr, Poly};
use super::Scene;
use crate::geom::{Point, DEFAULT_RESOLUTION};
use crate::order::ConeOrder;
use crate::window::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    Dimension,
    NonPolynomial,
    InvalidValue,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub message: String,
    /// Tokens that would have been accepted at the error position.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &[
    "<=", ">=", "..", "{", "}", "(", ")", "[", "]", ";", ",", "+", "-", "*", "/", "^", "<", ">",
    "=",
];

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax,
        message,
        expected: Vec::new(),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let next_is_digit = chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || (c == '.' && next_is_digit) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len()
                && chars[i] == '.'
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
            {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let v: f64 = s
                .parse()
                .map_err(|_| err(start_line, start_col, format!("malformed number `{s}`")))?;
            if !v.is_finite() {
                return Err(err(start_line, start_col, format!("number `{s}` is not finite")));
            }
            out.push(Spanned {
                tok: Tok::Num(v),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        let sym = SYMBOLS.iter().find(|s| {
            let sc: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&sc)
        });
        match sym {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Spanned {
                    tok: Tok::Sym(s),
                    line: start_line,
                    col: start_col,
                });
            }
            None => return Err(err(start_line, start_col, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Either side of a comparison, or a finished boolean formula.
enum Value {
    Arith(Poly),
    Bool(ConstraintExpr),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    dim: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, idx: usize, kind: ParseErrorKind, message: String, expected: &[&str]) -> ParseError {
        let t = &self.toks[idx];
        ParseError {
            line: t.line,
            col: t.col,
            kind,
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_at(
            self.pos,
            ParseErrorKind::Syntax,
            format!("unexpected {}", self.peek()),
            expected,
        )
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == kw)
    }

    fn expect_sym(&mut self, s: &'static str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[s]))
        }
    }

    fn expect_kw(&mut self, kw: &'static str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[kw]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn signed_number(&mut self) -> PResult<f64> {
        let neg = if self.is_sym("-") {
            self.bump();
            true
        } else {
            if self.is_sym("+") {
                self.bump();
            }
            false
        };
        match *self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn tuple(&mut self) -> PResult<(Vec<f64>, usize)> {
        let start = self.pos;
        self.expect_sym("(")?;
        let mut v = vec![self.signed_number()?];
        while self.is_sym(",") {
            self.bump();
            v.push(self.signed_number()?);
        }
        self.expect_sym(")")?;
        Ok((v, start))
    }

    fn tuple_of_dim(&mut self, what: &str) -> PResult<Vec<f64>> {
        let (v, start) = self.tuple()?;
        if v.len() != self.dim {
            return Err(self.error_at(
                start,
                ParseErrorKind::Dimension,
                format!("{what} has {} coordinates but the region has dim {}", v.len(), self.dim),
                &[],
            ));
        }
        Ok(v)
    }

    fn scene(&mut self) -> PResult<Scene> {
        self.expect_kw("region")?;
        let name = self.ident()?;
        self.expect_kw("dim")?;
        let dim_pos = self.pos;
        let dim = match *self.peek() {
            Tok::Num(v) if v.fract() == 0.0 && (1.0..=64.0).contains(&v) => {
                self.bump();
                v as usize
            }
            Tok::Num(_) => {
                return Err(self.error_at(
                    dim_pos,
                    ParseErrorKind::Dimension,
                    "dimension must be an integer between 1 and 64".into(),
                    &[],
                ))
            }
            _ => return Err(self.unexpected(&["integer"])),
        };
        self.dim = dim;
        self.expect_sym("{")?;
        let body_pos = self.pos;
        let body = match self.or_expr()? {
            Value::Bool(e) => e,
            Value::Arith(_) => {
                return Err(self.error_at(
                    body_pos,
                    ParseErrorKind::Syntax,
                    "region body must be a condition, not an arithmetic expression".into(),
                    &["<", "<=", "=", ">=", ">"],
                ))
            }
        };
        self.expect_sym("}")?;
        self.expect_kw("order")?;
        let order = if self.is_kw("coordinatewise") {
            self.bump();
            ConeOrder::Coordinatewise
        } else if self.is_kw("halfspaces") {
            let start = self.pos;
            self.bump();
            self.expect_sym("[")?;
            let mut normals = vec![self.tuple_of_dim("normal")?];
            while self.is_sym(";") {
                self.bump();
                if self.is_sym("]") {
                    break;
                }
                normals.push(self.tuple_of_dim("normal")?);
            }
            self.expect_sym("]")?;
            let order = ConeOrder::Halfspaces { normals };
            let enough = matches!(&order, ConeOrder::Halfspaces { normals } if normals.len() >= dim);
            if !enough || order.interior_direction(dim).is_err() {
                return Err(self.error_at(
                    start,
                    ParseErrorKind::InvalidValue,
                    "halfspace normals must define a pointed cone with nonempty interior".into(),
                    &[],
                ));
            }
            order
        } else {
            return Err(self.unexpected(&["coordinatewise", "halfspaces"]));
        };
        let window = if self.is_kw("window") {
            let start = self.pos;
            self.bump();
            let lo = self.tuple_of_dim("window corner")?;
            self.expect_sym("..")?;
            let hi = self.tuple_of_dim("window corner")?;
            Window::new(lo, hi, DEFAULT_RESOLUTION).map_err(|e| {
                self.error_at(start, ParseErrorKind::InvalidValue, e.to_string(), &[])
            })?
        } else {
            Window::cube(dim, -1.0, 1.0)
        };
        let mut points = Vec::new();
        while self.is_kw("point") {
            self.bump();
            points.push(Point(self.tuple_of_dim("point")?));
        }
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected(&["window", "point", "end of input"]));
        }
        let membership = if points.is_empty() {
            body
        } else {
            ConstraintExpr::Or(vec![body, ConstraintExpr::Points(points)])
        };
        Ok(Scene::new(name, dim, membership, order, window))
    }

    fn or_expr(&mut self) -> PResult<Value> {
        let start = self.pos;
        let first = self.and_expr()?;
        if !self.is_kw("or") {
            return Ok(first);
        }
        let mut items = vec![self.as_bool(first, start)?];
        while self.is_kw("or") {
            self.bump();
            let at = self.pos;
            let v = self.and_expr()?;
            items.push(self.as_bool(v, at)?);
        }
        Ok(Value::Bool(ConstraintExpr::Or(items)))
    }

    fn and_expr(&mut self) -> PResult<Value> {
        let start = self.pos;
        let first = self.not_expr()?;
        if !self.is_kw("and") {
            return Ok(first);
        }
        let mut items = vec![self.as_bool(first, start)?];
        while self.is_kw("and") {
            self.bump();
            let at = self.pos;
            let v = self.not_expr()?;
            items.push(self.as_bool(v, at)?);
        }
        Ok(Value::Bool(ConstraintExpr::And(items)))
    }

    fn not_expr(&mut self) -> PResult<Value> {
        if self.is_kw("not") {
            self.bump();
            let at = self.pos;
            let v = self.not_expr()?;
            let inner = self.as_bool(v, at)?;
            return Ok(Value::Bool(ConstraintExpr::Not(Box::new(inner))));
        }
        self.comparison()
    }

    fn as_bool(&self, v: Value, at: usize) -> PResult<ConstraintExpr> {
        match v {
            Value::Bool(e) => Ok(e),
            Value::Arith(_) => Err(self.error_at(
                at,
                ParseErrorKind::Syntax,
                "expected a condition, found an arithmetic expression".into(),
                &["<", "<=", "=", ">=", ">"],
            )),
        }
    }

    fn as_poly(&self, v: Value, at: usize) -> PResult<Poly> {
        match v {
            Value::Arith(p) => Ok(p),
            Value::Bool(_) => Err(self.error_at(
                at,
                ParseErrorKind::Syntax,
                "expected an arithmetic expression, found a condition".into(),
                &[],
            )),
        }
    }

    fn comparison_op(&self) -> Option<&'static str> {
        match self.peek() {
            Tok::Sym(s) if matches!(*s, "<" | "<=" | "=" | ">=" | ">") => Some(s),
            _ => None,
        }
    }

    fn comparison(&mut self) -> PResult<Value> {
        let start = self.pos;
        let first = self.additive()?;
        if self.comparison_op().is_none() {
            return Ok(first);
        }
        let mut lhs = self.as_poly(first, start)?;
        let mut atoms = Vec::new();
        while let Some(op) = self.comparison_op() {
            self.bump();
            let at = self.pos;
            let v = self.additive()?;
            let rhs = self.as_poly(v, at)?;
            atoms.push(match op {
                "<" => ConstraintExpr::lt(lhs.clone(), rhs.clone()),
                "<=" => ConstraintExpr::le(lhs.clone(), rhs.clone()),
                "=" => ConstraintExpr::eq(lhs.clone(), rhs.clone()),
                ">=" => ConstraintExpr::le(rhs.clone(), lhs.clone()),
                _ => ConstraintExpr::lt(rhs.clone(), lhs.clone()),
            });
            lhs = rhs;
        }
        Ok(Value::Bool(if atoms.len() == 1 {
            atoms.pop().unwrap()
        } else {
            ConstraintExpr::And(atoms)
        }))
    }

    fn additive(&mut self) -> PResult<Value> {
        let start = self.pos;
        let first = self.multiplicative()?;
        if !(self.is_sym("+") || self.is_sym("-")) {
            return Ok(first);
        }
        let mut acc = self.as_poly(first, start)?;
        while self.is_sym("+") || self.is_sym("-") {
            let minus = self.is_sym("-");
            self.bump();
            let at = self.pos;
            let v = self.multiplicative()?;
            let rhs = self.as_poly(v, at)?;
            acc = if minus { acc.sub(&rhs) } else { acc.add(&rhs) };
        }
        Ok(Value::Arith(acc))
    }

    fn multiplicative(&mut self) -> PResult<Value> {
        let start = self.pos;
        let first = self.unary()?;
        if !(self.is_sym("*") || self.is_sym("/")) {
            return Ok(first);
        }
        let mut acc = self.as_poly(first, start)?;
        while self.is_sym("*") || self.is_sym("/") {
            if self.is_sym("/") {
                return Err(self.error_at(
                    self.pos,
                    ParseErrorKind::NonPolynomial,
                    "division is not allowed; multiply through to get a polynomial".into(),
                    &[],
                ));
            }
            self.bump();
            let at = self.pos;
            let v = self.unary()?;
            acc = acc.mul(&self.as_poly(v, at)?);
        }
        Ok(Value::Arith(acc))
    }

    fn unary(&mut self) -> PResult<Value> {
        if self.is_sym("-") || self.is_sym("+") {
            let minus = self.is_sym("-");
            self.bump();
            let at = self.pos;
            let v = self.unary()?;
            let p = self.as_poly(v, at)?;
            return Ok(Value::Arith(if minus { p.neg() } else { p }));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Value> {
        let start = self.pos;
        let base = self.primary()?;
        if !self.is_sym("^") {
            return Ok(base);
        }
        let base = self.as_poly(base, start)?;
        self.bump();
        let exp_pos = self.pos;
        let neg = self.is_sym("-");
        if neg {
            self.bump();
        }
        match *self.peek() {
            Tok::Num(e) if !neg && e.fract() == 0.0 && e <= 64.0 => {
                self.bump();
                Ok(Value::Arith(base.pow(e as u32)))
            }
            Tok::Num(_) => Err(self.error_at(
                exp_pos,
                ParseErrorKind::NonPolynomial,
                "exponents must be non-negative integers up to 64".into(),
                &[],
            )),
            _ => Err(self.unexpected(&["integer exponent"])),
        }
    }

    fn primary(&mut self) -> PResult<Value> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Value::Arith(Poly::constant(self.dim, v)))
            }
            Tok::Ident(name) => {
                let at = self.pos;
                if matches!(name.as_str(), "and" | "or" | "not") {
                    return Err(self.unexpected(&["number", "variable", "("]));
                }
                self.bump();
                if self.is_sym("(") {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::NonPolynomial,
                        format!("function `{name}` is not allowed in a polynomial"),
                        &[],
                    ));
                }
                match variable_index(&name) {
                    Some(i) if i < self.dim => Ok(Value::Arith(Poly::var(self.dim, i))),
                    _ => Err(self.error_at(
                        at,
                        ParseErrorKind::UnknownVariable,
                        format!(
                            "unknown variable `{name}`; variables are x1..x{}",
                            self.dim
                        ),
                        &[],
                    )),
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let v = self.or_expr()?;
                self.expect_sym(")")?;
                Ok(v)
            }
            _ => Err(self.unexpected(&["number", "variable", "(", "-", "not"])),
        }
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

/// Parses a scene from its text form.
pub fn parse_scene(text: &str) -> Result<Scene, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        dim: 0,
    };
    p.scene()
}
