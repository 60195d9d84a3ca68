//! Polynomial constraint expressions.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::geom::{Point, Tolerance};

/// A sparse real polynomial in `x1..xn`, keyed by exponent vectors.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their maps are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Poly::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The variable `x{index+1}`.
    pub fn var(dim: usize, index: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[index] = 1;
        let mut p = Poly::zero(dim);
        p.add_term(exps, 1.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, k: f64) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(-1.0)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.dim, 1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Terms in print order: higher total degree first, then by exponent
    /// vector descending.
    fn ordered_terms(&self) -> Vec<(&Vec<u32>, f64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e, *c)).collect();
        v.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (idx, &k) in exps.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", idx + 1)),
                    _ => factors.push(format!("x{}^{}", idx + 1, k)),
                }
            }
            if factors.is_empty() || mag != 1.0 {
                factors.insert(0, format!("{mag}"));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Relation of an atom's polynomial to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// `p <= 0`
    Le,
    /// `p < 0`
    Lt,
    /// `p = 0`
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub poly: Poly,
    pub rel: Rel,
}

impl Atom {
    fn holds(&self, x: &[f64], tol: Tolerance) -> bool {
        let v = self.poly.eval(x);
        match self.rel {
            Rel::Le => v <= tol.nonstrict,
            Rel::Lt => v < tol.strict,
            Rel::Eq => v.abs() <= tol.nonstrict,
        }
    }
}

/// Boolean combination of polynomial atoms and explicit point lists.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintExpr {
    Atom(Atom),
    And(Vec<ConstraintExpr>),
    Or(Vec<ConstraintExpr>),
    Not(Box<ConstraintExpr>),
    /// Membership in a finite list of points.
    Points(Vec<Point>),
}

impl ConstraintExpr {
    pub fn atom(poly: Poly, rel: Rel) -> Self {
        ConstraintExpr::Atom(Atom { poly, rel })
    }

    /// `lhs <= rhs`
    pub fn le(lhs: Poly, rhs: Poly) -> Self {
        Self::atom(lhs.sub(&rhs), Rel::Le)
    }

    /// `lhs < rhs`
    pub fn lt(lhs: Poly, rhs: Poly) -> Self {
        Self::atom(lhs.sub(&rhs), Rel::Lt)
    }

    pub fn eq(lhs: Poly, rhs: Poly) -> Self {
        Self::atom(lhs.sub(&rhs), Rel::Eq)
    }

    pub fn eval(&self, x: &[f64], tol: Tolerance) -> bool {
        match self {
            ConstraintExpr::Atom(a) => a.holds(x, tol),
            ConstraintExpr::And(items) => items.iter().all(|e| e.eval(x, tol)),
            ConstraintExpr::Or(items) => items.iter().any(|e| e.eval(x, tol)),
            ConstraintExpr::Not(inner) => !inner.eval(x, tol),
            ConstraintExpr::Points(pts) => pts.iter().any(|p| {
                p.coords()
                    .iter()
                    .zip(x)
                    .all(|(a, b)| (a - b).abs() <= tol.nonstrict)
            }),
        }
    }

    /// Evaluates with every inequality made non-strict and relaxed by `eps`.
    ///
    /// For the polynomial regions used here this over-approximates the
    /// topological closure, which is what closure-escape detection needs.
    pub fn eval_relaxed(&self, x: &[f64], eps: f64) -> bool {
        match self {
            ConstraintExpr::Atom(a) => {
                let v = a.poly.eval(x);
                match a.rel {
                    Rel::Le | Rel::Lt => v <= eps,
                    Rel::Eq => v.abs() <= eps,
                }
            }
            ConstraintExpr::And(items) => items.iter().all(|e| e.eval_relaxed(x, eps)),
            ConstraintExpr::Or(items) => items.iter().any(|e| e.eval_relaxed(x, eps)),
            ConstraintExpr::Not(inner) => !inner.eval(x, Tolerance::uniform(-eps)),
            ConstraintExpr::Points(_) => self.eval(x, Tolerance::uniform(eps)),
        }
    }

    /// Syntactic closedness: true when the expression only uses closed atoms
    /// (after pushing negations inward) and finite point lists.
    pub fn is_syntactically_closed(&self) -> bool {
        fn walk(e: &ConstraintExpr, positive: bool) -> bool {
            match e {
                ConstraintExpr::Atom(a) => match a.rel {
                    Rel::Le | Rel::Eq => positive,
                    Rel::Lt => !positive,
                },
                ConstraintExpr::And(items) | ConstraintExpr::Or(items) => {
                    items.iter().all(|i| walk(i, positive))
                }
                ConstraintExpr::Not(inner) => walk(inner, !positive),
                ConstraintExpr::Points(_) => positive,
            }
        }
        walk(self, true)
    }

    pub fn max_degree(&self) -> u32 {
        match self {
            ConstraintExpr::Atom(a) => a.poly.degree(),
            ConstraintExpr::And(items) | ConstraintExpr::Or(items) => {
                items.iter().map(|i| i.max_degree()).max().unwrap_or(0)
            }
            ConstraintExpr::Not(inner) => inner.max_degree(),
            ConstraintExpr::Points(_) => 0,
        }
    }

    fn write_child(&self, out: &mut String) {
        match self {
            ConstraintExpr::And(_) | ConstraintExpr::Or(_) | ConstraintExpr::Not(_) => {
                out.push('(');
                self.write_to(out);
                out.push(')');
            }
            _ => self.write_to(out),
        }
    }

    pub(crate) fn write_to(&self, out: &mut String) {
        match self {
            ConstraintExpr::Atom(a) => {
                let _ = write!(out, "{} {} 0", a.poly, a.rel.symbol());
            }
            ConstraintExpr::And(items) | ConstraintExpr::Or(items) => {
                let sep = if matches!(self, ConstraintExpr::And(_)) {
                    " and "
                } else {
                    " or "
                };
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    item.write_child(out);
                }
            }
            ConstraintExpr::Not(inner) => {
                out.push_str("not ");
                inner.write_child(out);
            }
            ConstraintExpr::Points(pts) => {
                // Point lists only appear at scene level in the text format;
                // an inline one has no syntax, so print it as a comment-free
                // disjunction of equalities.
                let dim = pts.first().map(|p| p.dim()).unwrap_or(0);
                let mut alts = Vec::new();
                for p in pts {
                    let conj: Vec<ConstraintExpr> = p
                        .coords()
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| {
                            ConstraintExpr::eq(Poly::var(dim, i), Poly::constant(dim, c))
                        })
                        .collect();
                    alts.push(ConstraintExpr::And(conj));
                }
                ConstraintExpr::Or(alts).write_to(out);
            }
        }
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_to(&mut s);
        f.write_str(&s)
    }
}
