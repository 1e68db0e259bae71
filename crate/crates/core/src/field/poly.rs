//! Multivector-valued polynomial fields parsed from text.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := [+|-] term { (+|-) term }
//! term   := factor { * factor }
//! factor := atom [ ^ integer ]
//! atom   := number | x<i> | e<indices> | ( expr )
//! ```
//!
//! Parentheses may not nest. Factors multiply with the geometric product in
//! the order written, so `e1*e2` and `e2*e1` differ in sign.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::FieldFn;
use crate::algebra::text::{parse_error, resolve_blade, tokenize, Token};
use crate::algebra::{Multivector, Signature};
use crate::error::Result;

/// `sum_m c_m x^m` with multivector coefficients `c_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MvPolynomial {
    sig: Signature,
    terms: BTreeMap<Vec<u32>, Multivector>,
}

impl MvPolynomial {
    pub fn zero(sig: Signature) -> Self {
        MvPolynomial {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(value: Multivector) -> Self {
        let mut p = Self::zero(value.sig());
        p.add_term(vec![0; value.sig().dim()], value);
        p
    }

    fn variable(sig: Signature, index: usize) -> Self {
        let mut exps = vec![0; sig.dim()];
        exps[index] = 1;
        let mut p = Self::zero(sig);
        p.add_term(exps, Multivector::one(sig));
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, coef: Multivector) {
        let slot = self
            .terms
            .entry(exps)
            .or_insert_with(|| Multivector::zero(coef.sig()));
        *slot += &coef;
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    fn add(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.scale(sign));
        }
        out.prune()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.sig);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out.prune()
    }

    fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Multivector::one(self.sig));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `dP/dx_j` for a 0-based variable index.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut d = e.clone();
                d[j] -= 1;
                out.add_term(d, c.scale(e[j] as f64));
            }
        }
        out.prune()
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let mut out = Multivector::zero(self.sig);
        for (e, c) in &self.terms {
            let m: f64 = e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product();
            out.add_scaled(c, m);
        }
        out
    }

    /// Wraps the polynomial as a field with its exact derivative.
    pub fn into_field(self, name: impl Into<String>) -> FieldFn {
        let sig = self.sig;
        let grads: Arc<Vec<MvPolynomial>> =
            Arc::new((0..sig.dim()).map(|j| self.partial(j)).collect());
        let constant = self.is_constant();
        let p = Arc::new(self);
        let field = FieldFn::new(sig, name, move |x| p.eval(x)).with_directional(move |x, v| {
            let mut out = Multivector::zero(sig);
            for (g, &vj) in grads.iter().zip(v) {
                if vj != 0.0 && !g.terms.is_empty() {
                    out.add_scaled(&g.eval(x), vj);
                }
            }
            out
        });
        if constant {
            FieldFn { constant: true, ..field }
        } else {
            field
        }
    }
}

struct Parser<'a> {
    sig: Signature,
    tokens: &'a [(usize, Token)],
    pos: usize,
    depth: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expr(&mut self) -> Result<MvPolynomial> {
        let mut sign = 1.0;
        match self.peek() {
            Some(Token::Plus) => self.pos += 1,
            Some(Token::Minus) => {
                sign = -1.0;
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = MvPolynomial::zero(self.sig).add(&self.term()?, sign);
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => 1.0,
                Some(Token::Minus) => -1.0,
                _ => return Ok(acc),
            };
            self.pos += 1;
            acc = acc.add(&self.term()?, sign);
        }
    }

    fn term(&mut self) -> Result<MvPolynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MvPolynomial> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.at();
        match self.peek() {
            Some(&Token::Number(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                self.pos += 1;
                Ok(base.pow(v as u32))
            }
            _ => Err(parse_error(at, "exponent must be a non-negative integer up to 64")),
        }
    }

    fn atom(&mut self) -> Result<MvPolynomial> {
        let at = self.at();
        let sig = self.sig;
        let token = self.peek().cloned();
        match token {
            Some(Token::Number(v)) => {
                self.pos += 1;
                Ok(MvPolynomial::constant(Multivector::scalar(sig, v)))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                if i > sig.dim() {
                    return Err(parse_error(
                        at,
                        format!("variable x{i} exceeds dimension {}", sig.dim()),
                    ));
                }
                Ok(MvPolynomial::variable(sig, i - 1))
            }
            Some(Token::Blade(idx)) => {
                self.pos += 1;
                let blade = resolve_blade(sig, &idx, at)?;
                Ok(MvPolynomial::constant(Multivector::from_blade(sig, blade, 1.0)))
            }
            Some(Token::LParen) => {
                if self.depth > 0 {
                    return Err(parse_error(at, "parentheses may not nest"));
                }
                self.pos += 1;
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                if self.peek() != Some(&Token::RParen) {
                    return Err(parse_error(self.at(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(parse_error(at, "expected a number, variable, blade or `(`")),
        }
    }
}

/// Parses a polynomial in `x1..xn` with blade-valued coefficients.
pub fn parse_polynomial(expr: &str, n: usize) -> Result<MvPolynomial> {
    let sig = Signature::euclidean(n)?;
    let tokens = tokenize(expr)?;
    if tokens.is_empty() {
        return Err(parse_error(0, "empty expression"));
    }
    let mut parser = Parser {
        sig,
        tokens: &tokens,
        pos: 0,
        depth: 0,
        end: expr.len(),
    };
    let poly = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(parse_error(parser.at(), "unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses a polynomial field on `R^n`, with exact derivatives.
pub fn parse_poly_field(expr: &str, n: usize) -> Result<FieldFn> {
    Ok(parse_polynomial(expr, n)?.into_field(expr.trim()))
}
