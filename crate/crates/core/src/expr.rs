//! A small expression language for integrands: numbers, x, eps, pFq nodes,
//! elementary functions and [eps^k] extraction, with a recognizer that turns
//! products of these into [`IntegrandSpec`]s.

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::display::as_rational;
use crate::error::Error;
use crate::hypseries::{self, PFQSpec};
use crate::integrate::{Body, IntegrandSpec};
use crate::jets::{Jet, MAX_ORDER};

/// Inputs longer than this are rejected.
pub const MAX_INPUT: usize = 64 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Ln,
    Exp,
    Sin,
    Cos,
    Arctan,
    Arcsin,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Arctan => "arctan",
            Func::Arcsin => "arcsin",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "ln" | "log" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "arctan" | "atan" => Func::Arctan,
            "arcsin" | "asin" => Func::Arcsin,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Rational(Rational64),
    Decimal(f64),
    Imag(f64),
    Pi,
    X,
    Eps,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Pfq { upper: Vec<Expr>, lower: Vec<Expr>, arg: Box<Expr> },
    Extract(usize, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Dec(f64),
    Imag(f64),
    Ident(String),
    Pfq(usize, usize),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { pos, msg: msg.into() }
    }

    fn digits(&mut self) -> usize {
        let s = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - s
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() || (c == b'.' && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)) {
            self.digits();
            // nFm is INTEGER 'F' INTEGER.
            if self.src.get(self.pos) == Some(&b'F') && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
                let p = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                self.pos += 1;
                let qs = self.pos;
                self.digits();
                let q = std::str::from_utf8(&self.src[qs..self.pos]).expect("ascii digits");
                let p = p.parse().map_err(|_| self.err(start, "pFq order too large"))?;
                let q = q.parse().map_err(|_| self.err(start, "pFq order too large"))?;
                return Ok((start, Tok::Pfq(p, q)));
            }
            let mut decimal = false;
            if self.src.get(self.pos) == Some(&b'.') {
                decimal = true;
                self.pos += 1;
                self.digits();
            }
            if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E'))
                && (self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
                    || (matches!(self.src.get(self.pos + 1), Some(b'+') | Some(b'-'))
                        && self.src.get(self.pos + 2).is_some_and(u8::is_ascii_digit)))
            {
                decimal = true;
                self.pos += 2;
                self.digits();
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
            let imag = self.src.get(self.pos) == Some(&b'i')
                && !self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_alphanumeric());
            if imag {
                self.pos += 1;
                let v: f64 = text.parse().map_err(|_| self.err(start, "bad number"))?;
                return Ok((start, Tok::Imag(v)));
            }
            if decimal {
                let v: f64 = text.parse().map_err(|_| self.err(start, "bad number"))?;
                return Ok((start, Tok::Dec(v)));
            }
            let v: i64 = text.parse().map_err(|_| self.err(start, "integer literal too large"))?;
            return Ok((start, Tok::Int(v)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
            return Ok((start, Tok::Ident(s.to_string())));
        }
        if "+-*/^(),;[]".contains(c as char) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c as char)));
        }
        // Accept the unicode ε and π used in printed formulas.
        let rest = std::str::from_utf8(&self.src[start..]).map_err(|_| self.err(start, "invalid UTF-8"))?;
        let ch = rest.chars().next().expect("non-empty");
        self.pos += ch.len_utf8();
        match ch {
            'ε' => Ok((start, Tok::Ident("eps".into()))),
            'π' => Ok((start, Tok::Ident("pi".into()))),
            _ => Err(self.err(start, format!("unexpected character '{ch}'"))),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos(), msg: msg.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    lhs = match (lhs, rhs) {
                        (Expr::Rational(a), Expr::Rational(b)) => {
                            if b.is_zero() {
                                return Err(ParseError { pos, msg: "division by zero".into() });
                            }
                            Expr::Rational(a / b)
                        }
                        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(match self.unary()? {
                    Expr::Rational(r) => Expr::Rational(-r),
                    e => Expr::Neg(Box::new(e)),
                })
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            Tok::Sym('[') => {
                self.bump();
                match self.bump() {
                    Tok::Ident(s) if s == "eps" => {}
                    _ => return Err(self.err("expected 'eps' in extraction")),
                }
                let k = if *self.peek() == Tok::Sym('^') {
                    self.bump();
                    match self.bump() {
                        Tok::Int(k) if (0..=MAX_ORDER as i64).contains(&k) => k as usize,
                        _ => return Err(self.err(format!("extraction order must be an integer 0..={MAX_ORDER}"))),
                    }
                } else {
                    1
                };
                self.expect(']')?;
                Ok(Expr::Extract(k, Box::new(self.term()?)))
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let e = self.unary_no_extract()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn unary_no_extract(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('[') {
            return Err(self.err("extraction is not allowed in an exponent"));
        }
        self.unary()
    }

    fn list(&mut self, end: char) -> Result<Vec<Expr>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == Tok::Sym(end) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if *self.peek() == Tok::Sym(',') {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(v) => Ok(Expr::Rational(Rational64::from_integer(v))),
            Tok::Dec(v) => Ok(Expr::Decimal(v)),
            Tok::Imag(v) => Ok(Expr::Imag(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Pfq(p, q) => {
                self.expect('(')?;
                let upper = self.list(';')?;
                self.expect(';')?;
                let lower = self.list(';')?;
                self.expect(';')?;
                let arg = self.expr()?;
                self.expect(')')?;
                if upper.len() != p || lower.len() != q {
                    return Err(ParseError {
                        pos,
                        msg: format!("{p}F{q} given {} upper and {} lower parameters", upper.len(), lower.len()),
                    });
                }
                Ok(Expr::Pfq { upper, lower, arg: Box::new(arg) })
            }
            Tok::Ident(s) => match s.as_str() {
                "x" => Ok(Expr::X),
                "eps" => Ok(Expr::Eps),
                "pi" => Ok(Expr::Pi),
                "i" => Ok(Expr::Imag(1.0)),
                _ => match Func::from_name(&s) {
                    Some(f) => {
                        self.expect('(')?;
                        let a = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Call(f, Box::new(a)))
                    }
                    None => Err(ParseError { pos, msg: format!("unknown identifier '{s}'") }),
                },
            },
            Tok::End => Err(ParseError { pos, msg: "unexpected end of input".into() }),
            t => Err(ParseError { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    if text.len() > MAX_INPUT {
        return Err(ParseError { pos: MAX_INPUT, msg: format!("input exceeds {MAX_INPUT} bytes") });
    }
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut toks = Vec::new();
    loop {
        let t = lx.next()?;
        let end = t.1 == Tok::End;
        toks.push(t);
        if end {
            break;
        }
    }
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

// Precedence levels for printing: sum 1, product 2, unary 3, power 4, atom 5.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) | Expr::Extract(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Rational(r) if !r.is_integer() => 2,
        Expr::Rational(r) if r.is_negative() => 3,
        Expr::Decimal(v) | Expr::Imag(v) if *v < 0.0 => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

impl Expr {
    fn wrap(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if prec(self) < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Decimal(v) => write!(f, "{}", fmt_num(*v)),
            Expr::Imag(v) => {
                if *v < 0.0 {
                    write!(f, "-{}i", fmt_num(-v))
                } else {
                    write!(f, "{}i", fmt_num(*v))
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::X => write!(f, "x"),
            Expr::Eps => write!(f, "eps"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.wrap(f, 4)
            }
            Expr::Add(a, b) => {
                a.wrap(f, 1)?;
                write!(f, " + ")?;
                b.wrap(f, 2)
            }
            Expr::Sub(a, b) => {
                a.wrap(f, 1)?;
                write!(f, " - ")?;
                b.wrap(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                // A non-integer rational or an extraction on the left would
                // absorb the operator on reparse.
                if matches!(**a, Expr::Extract(..)) || matches!(**a, Expr::Rational(r) if !r.is_integer()) {
                    write!(f, "({a})")?;
                } else {
                    a.wrap(f, 2)?;
                }
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { " * " } else { " / " })?;
                if matches!(**b, Expr::Extract(..)) && matches!(self, Expr::Mul(..)) {
                    write!(f, "{b}")
                } else {
                    b.wrap(f, 3)
                }
            }
            Expr::Pow(a, b) => {
                a.wrap(f, 5)?;
                write!(f, "^")?;
                b.wrap(f, 5)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Pfq { upper, lower, arg } => {
                let j = |v: &[Expr]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "{}F{}({};{};{arg})", upper.len(), lower.len(), j(upper), j(lower))
            }
            Expr::Extract(k, a) => {
                write!(f, "[eps^{k}] ")?;
                a.wrap(f, 2)
            }
        }
    }
}

impl Expr {
    fn any(&self, p: &dyn Fn(&Expr) -> bool) -> bool {
        if p(self) {
            return true;
        }
        match self {
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Extract(_, a) => a.any(p),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => a.any(p) || b.any(p),
            Expr::Pfq { upper, lower, arg } => upper.iter().chain(lower).any(|e| e.any(p)) || arg.any(p),
            _ => false,
        }
    }

    pub fn contains_x(&self) -> bool {
        self.any(&|e| matches!(e, Expr::X))
    }

    pub fn contains_eps(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Eps))
    }

    /// Jet order needed by the extractions, at least 1 when eps appears.
    pub fn required_order(&self) -> usize {
        let mut best = usize::from(self.contains_eps());
        self.visit(&mut |e| {
            if let Expr::Extract(k, _) = e {
                best = best.max(*k);
            }
        });
        best
    }

    fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Extract(_, a) => a.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Pfq { upper, lower, arg } => {
                for e in upper.iter().chain(lower) {
                    e.visit(f);
                }
                arg.visit(f);
            }
            _ => {}
        }
    }

    /// Value at x as a jet of the given order (raised to the extraction
    /// orders when needed).
    pub fn eval(&self, x: Complex64, order: usize, tol: f64) -> Result<Jet, Error> {
        let order = order.max(self.required_order());
        self.eval_at(x, order, tol)
    }

    fn eval_at(&self, x: Complex64, o: usize, tol: f64) -> Result<Jet, Error> {
        Ok(match self {
            Expr::Rational(r) => Jet::real(o, r.to_f64().unwrap_or(f64::NAN)),
            Expr::Decimal(v) => Jet::real(o, *v),
            Expr::Imag(v) => Jet::constant(o, Complex64::new(0.0, *v)),
            Expr::Pi => Jet::real(o, std::f64::consts::PI),
            Expr::X => Jet::constant(o, x),
            Expr::Eps => Jet::eps(o),
            Expr::Neg(a) => -a.eval_at(x, o, tol)?,
            Expr::Add(a, b) => a.eval_at(x, o, tol)? + b.eval_at(x, o, tol)?,
            Expr::Sub(a, b) => a.eval_at(x, o, tol)? - b.eval_at(x, o, tol)?,
            Expr::Mul(a, b) => a.eval_at(x, o, tol)? * b.eval_at(x, o, tol)?,
            Expr::Div(a, b) => a.eval_at(x, o, tol)?.checked_div(&b.eval_at(x, o, tol)?)?,
            Expr::Pow(a, b) => {
                let base = a.eval_at(x, o, tol)?;
                match **b {
                    Expr::Rational(r) if r.is_integer() => base.powi(r.to_integer() as i32)?,
                    _ => {
                        let e = b.eval_at(x, o, tol)?;
                        if e.is_scalar() {
                            base.powc(e.value())?
                        } else {
                            base.powj(&e)?
                        }
                    }
                }
            }
            Expr::Call(func, a) => {
                let v = a.eval_at(x, o, tol)?;
                match func {
                    Func::Sqrt => v.sqrt()?,
                    Func::Ln => v.log()?,
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Arctan => v.atan()?,
                    Func::Arcsin => v.asin()?,
                }
            }
            Expr::Pfq { upper, lower, arg } => {
                let up = upper.iter().map(|e| e.eval_at(x, o, tol)).collect::<Result<Vec<_>, _>>()?;
                let lo = lower.iter().map(|e| e.eval_at(x, o, tol)).collect::<Result<Vec<_>, _>>()?;
                let z = arg.eval_at(x, o, tol)?;
                if !z.is_scalar() {
                    return Err(Error::InvalidSpec("a pFq argument must not depend on eps".into()));
                }
                let spec = PFQSpec::new(o, up, lo, Complex64::new(1.0, 0.0), Rational64::one())?;
                hypseries::eval_z(&spec, z.value(), tol)?
            }
            Expr::Extract(k, a) => Jet::constant(o, a.eval_at(x, o, tol)?.extract(*k)?),
        })
    }

    /// Value after applying the outermost extraction convention: a plain
    /// evaluation returns the jet's value coefficient.
    pub fn eval_scalar(&self, x: Complex64, tol: f64) -> Result<Complex64, Error> {
        Ok(self.eval(x, 0, tol)?.value())
    }
}

fn rational_of(e: &Expr) -> Option<Rational64> {
    match e {
        Expr::Rational(r) => Some(*r),
        Expr::Decimal(v) => as_rational(*v, 10_000, 1e-14),
        Expr::Neg(a) => rational_of(a).map(|r| -r),
        _ => None,
    }
}

/// coeff·x^power with coeff free of x.
#[derive(Clone, Debug)]
struct Monomial {
    coeff: Jet,
    power: Rational64,
}

fn monomial(e: &Expr, o: usize, tol: f64) -> Result<Option<Monomial>, Error> {
    if !e.contains_x() {
        return Ok(Some(Monomial { coeff: e.eval_at(Complex64::new(0.0, 0.0), o, tol)?, power: Rational64::zero() }));
    }
    Ok(match e {
        Expr::X => Some(Monomial { coeff: Jet::one(o), power: Rational64::one() }),
        Expr::Pow(b, p) if matches!(**b, Expr::X) => rational_of(p).map(|r| Monomial { coeff: Jet::one(o), power: r }),
        Expr::Neg(a) => monomial(a, o, tol)?.map(|m| Monomial { coeff: -m.coeff, power: m.power }),
        Expr::Mul(a, b) => match (monomial(a, o, tol)?, monomial(b, o, tol)?) {
            (Some(m), Some(n)) => Some(Monomial { coeff: m.coeff * n.coeff, power: m.power + n.power }),
            _ => None,
        },
        Expr::Div(a, b) => match (monomial(a, o, tol)?, monomial(b, o, tol)?) {
            (Some(m), Some(n)) => Some(Monomial { coeff: m.coeff.checked_div(&n.coeff)?, power: m.power - n.power }),
            _ => None,
        },
        Expr::Pow(b, p) => match (monomial(b, o, tol)?, rational_of(p)) {
            (Some(m), Some(r)) if r.is_integer() => {
                Some(Monomial { coeff: m.coeff.powi(r.to_integer() as i32)?, power: m.power * r })
            }
            _ => None,
        },
        _ => None,
    })
}

/// a + m with a constant and m a monomial with nonzero power.
fn affine(e: &Expr, o: usize, tol: f64) -> Result<Option<(Jet, Monomial)>, Error> {
    let (a, b, sign) = match e {
        Expr::Add(a, b) => (a, b, 1.0),
        Expr::Sub(a, b) => (a, b, -1.0),
        _ => return Ok(None),
    };
    let (ma, mb) = match (monomial(a, o, tol)?, monomial(b, o, tol)?) {
        (Some(ma), Some(mb)) => (ma, mb),
        _ => return Ok(None),
    };
    let mb = Monomial { coeff: mb.coeff * sign, power: mb.power };
    Ok(if ma.power.is_zero() && !mb.power.is_zero() {
        Some((ma.coeff, mb))
    } else if mb.power.is_zero() && !ma.power.is_zero() {
        Some((mb.coeff, ma))
    } else {
        None
    })
}

struct Factors {
    coeff: Jet,
    alpha: Rational64,
    bodies: Vec<(Expr, Rational64)>,
    extract: Option<usize>,
}

fn collect(e: &Expr, sign: i64, f: &mut Factors, o: usize, tol: f64, inside_extract: bool) -> Result<(), Error> {
    let s = Rational64::from_integer(sign);
    if !e.contains_x() && !matches!(e, Expr::Extract(..)) {
        let v = e.eval_at(Complex64::new(0.0, 0.0), o, tol)?;
        if !inside_extract && f.extract.is_some() && !v.is_scalar() {
            return Err(Error::InvalidSpec("eps outside the extraction would change its meaning".into()));
        }
        f.coeff = if sign > 0 { f.coeff * v } else { f.coeff.checked_div(&v)? };
        return Ok(());
    }
    match e {
        Expr::X => f.alpha += s,
        Expr::Pow(b, p) if matches!(**b, Expr::X) => {
            let r = rational_of(p).ok_or_else(|| Error::InvalidSpec(format!("exponent of x must be rational: {p}")))?;
            f.alpha += s * r;
        }
        Expr::Neg(a) => {
            f.coeff = -f.coeff;
            collect(a, sign, f, o, tol, inside_extract)?;
        }
        Expr::Mul(a, b) => {
            collect(a, sign, f, o, tol, inside_extract)?;
            collect(b, sign, f, o, tol, inside_extract)?;
        }
        Expr::Div(a, b) => {
            collect(a, sign, f, o, tol, inside_extract)?;
            collect(b, -sign, f, o, tol, inside_extract)?;
        }
        Expr::Extract(k, a) => {
            if f.extract.is_some() || sign < 0 || inside_extract {
                return Err(Error::InvalidSpec("only one extraction, applied to a factor of the whole integrand".into()));
            }
            if !f.coeff.is_scalar() {
                return Err(Error::InvalidSpec("eps outside the extraction would change its meaning".into()));
            }
            f.extract = Some(*k);
            collect(a, sign, f, o, tol, true)?;
        }
        Expr::Pow(b, p) => {
            let r = rational_of(p).ok_or_else(|| Error::InvalidSpec(format!("exponent must be rational: {p}")))?;
            f.bodies.push(((**b).clone(), s * r));
        }
        Expr::Call(Func::Sqrt, a) => f.bodies.push(((**a).clone(), s * Rational64::new(1, 2))),
        other => f.bodies.push((other.clone(), s)),
    }
    Ok(())
}

fn one_c() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn spec_from(o: usize, up: Vec<Jet>, lo: Vec<Jet>, scale: Jet, power: Rational64) -> Result<PFQSpec, Error> {
    if !scale.is_scalar() {
        return Err(Error::InvalidSpec("the argument scale must not depend on eps".into()));
    }
    PFQSpec::new(o, up, lo, scale.value(), power)
}

/// Recognizes coeff·x^α·f(γx^β) with f a pFq or an elementary function that
/// has a hypergeometric form.
pub fn to_integrand(e: &Expr) -> Result<IntegrandSpec, Error> {
    let o = e.required_order();
    let tol = hypseries::DEFAULT_TOL;
    let mut f = Factors { coeff: Jet::one(o), alpha: Rational64::zero(), bodies: Vec::new(), extract: None };
    collect(e, 1, &mut f, o, tol, false)?;
    if f.bodies.len() > 1 {
        return Err(Error::InvalidSpec(format!(
            "integrand has {} non-monomial factors; a single pFq-type factor is required",
            f.bodies.len()
        )));
    }
    let r = |v: f64| Jet::real(o, v);
    let body = match f.bodies.pop() {
        None => PFQSpec::new(o, vec![r(0.0)], vec![], one_c(), Rational64::one())?,
        Some((base, p)) => {
            let unit = p.is_one();
            let mono_arg = |a: &Expr| -> Result<Monomial, Error> {
                monomial(a, o, tol)?
                    .filter(|m| !m.power.is_zero())
                    .ok_or_else(|| Error::InvalidSpec(format!("argument {a} is not of the form c*x^b")))
            };
            match (&base, unit) {
                (Expr::Pfq { upper, lower, arg }, true) => {
                    let up = upper.iter().map(|e| e.eval_at(Complex64::new(0.0, 0.0), o, tol)).collect::<Result<Vec<_>, _>>()?;
                    let lo = lower.iter().map(|e| e.eval_at(Complex64::new(0.0, 0.0), o, tol)).collect::<Result<Vec<_>, _>>()?;
                    if upper.iter().chain(lower).any(Expr::contains_x) {
                        return Err(Error::InvalidSpec("pFq parameters must not depend on x".into()));
                    }
                    let m = mono_arg(arg)?;
                    spec_from(o, up, lo, m.coeff, m.power)?
                }
                (Expr::Call(Func::Arctan, a), true) => {
                    let m = mono_arg(a)?;
                    f.coeff *= m.coeff;
                    f.alpha += m.power;
                    spec_from(o, vec![r(1.0), r(0.5)], vec![r(1.5)], -(m.coeff * m.coeff), m.power * 2)?
                }
                (Expr::Call(Func::Arcsin, a), true) => {
                    let m = mono_arg(a)?;
                    f.coeff *= m.coeff;
                    f.alpha += m.power;
                    spec_from(o, vec![r(0.5), r(0.5)], vec![r(1.5)], m.coeff * m.coeff, m.power * 2)?
                }
                (Expr::Call(Func::Sin, a), true) => {
                    let m = mono_arg(a)?;
                    f.coeff *= m.coeff;
                    f.alpha += m.power;
                    spec_from(o, vec![], vec![r(1.5)], -(m.coeff * m.coeff) * 0.25, m.power * 2)?
                }
                (Expr::Call(Func::Cos, a), true) => {
                    let m = mono_arg(a)?;
                    spec_from(o, vec![], vec![r(0.5)], -(m.coeff * m.coeff) * 0.25, m.power * 2)?
                }
                (Expr::Call(Func::Exp, a), _) => {
                    let m = mono_arg(a)?;
                    spec_from(o, vec![], vec![], m.coeff * p.to_f64().unwrap_or(f64::NAN), m.power)?
                }
                (Expr::Call(Func::Ln, a), true) => {
                    let (c0, m) = affine(a, o, tol)?
                        .ok_or_else(|| Error::InvalidSpec(format!("ln argument {a} is not of the form a + c*x^b")))?;
                    if !(c0.is_scalar() && c0.value() == one_c()) {
                        return Err(Error::InvalidSpec("ln argument must be 1 + c*x^b".into()));
                    }
                    f.coeff *= m.coeff;
                    f.alpha += m.power;
                    spec_from(o, vec![r(1.0), r(1.0)], vec![r(2.0)], -m.coeff, m.power)?
                }
                _ => {
                    let (c0, m) = affine(&base, o, tol)?.ok_or_else(|| {
                        Error::InvalidSpec(format!("cannot represent {base} as a hypergeometric factor"))
                    })?;
                    let pf = p.to_f64().unwrap_or(f64::NAN);
                    // (a + b x^β)^p = a^p (1 + (b/a) x^β)^p.
                    f.coeff *= c0.powc(Complex64::new(pf, 0.0))?;
                    let scale = -(m.coeff.checked_div(&c0)?);
                    spec_from(o, vec![r(-pf)], vec![], scale, m.power)?
                }
            }
        }
    };
    Ok(IntegrandSpec { alpha: f.alpha, coeff: f.coeff, extract: f.extract, body: Body::Series(body) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let e = parse("2F1(1,1/2;3/2;-x^2)").unwrap();
        assert!(matches!(&e, Expr::Pfq { upper, lower, .. } if upper.len() == 2 && lower.len() == 1));
        assert!(matches!(parse("x^(-7/8) * 2F1(1/4,3/4;3/2;-x)").unwrap(), Expr::Mul(..)));
        let e = parse("[eps^2] 2F1(1/2-eps,1/2+eps;3/2;x^2)").unwrap();
        assert!(matches!(e, Expr::Extract(2, _)));
        assert_eq!(e.required_order(), 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("x + foo(2)").unwrap_err();
        assert_eq!(e.pos, 4);
        assert_eq!(parse("2F1(1;2;x)").unwrap_err().pos, 0);
        assert!(parse("(x").is_err());
        assert!(parse("x x").is_err());
        assert!(parse(&"1+".repeat(40_000)).is_err());
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "2F1(1,1/2;3/2;-x^2)",
            "x^(-7/8) * 2F1(1/4,3/4;3/2;-x)",
            "-3/2 * [eps^2] x^(-2) * 2F1(1/2 - eps,1/2 + eps;3/2;x^2)",
            "1/(1 + x^3)",
            "([eps] x) * 2 - 0.25 + 3i",
            "x * (1/2) - -x",
            "sqrt(1 - x)^3 / (x - 2)^(1/3)",
            "1F0(1;;-x^2) + 0F1(;1/2;-1/4*x^2)",
        ] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }

    #[test]
    fn evaluation() {
        let e = parse("arctan(x)/x - 2F1(1,1/2;3/2;-x^2)").unwrap();
        assert!(e.eval_scalar(Complex64::new(0.4, 0.0), 1e-14).unwrap().norm() < 1e-14);
        let e = parse("[eps^2] 2F1(eps,-eps;1;1/2)").unwrap();
        let v = e.eval_scalar(Complex64::new(0.0, 0.0), 1e-14).unwrap();
        // −Li2(1/2) as the ε² coefficient.
        let li2_half = std::f64::consts::PI.powi(2) / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((v.re + li2_half).abs() < 1e-12);
    }

    #[test]
    fn recognizer() {
        let s = to_integrand(&parse("1/(1+x^3)").unwrap()).unwrap();
        assert_eq!(s.to_string(), "1F0(1;;-x^3)");
        let s = to_integrand(&parse("x^(-7/8) * 2F1(1/4,3/4;3/2;-x)").unwrap()).unwrap();
        assert_eq!(s.alpha, Rational64::new(-7, 8));
        let s = to_integrand(&parse("arctan(x)/x").unwrap()).unwrap();
        assert_eq!(s.alpha, Rational64::zero());
        assert_eq!(s.body.to_string(), "2F1(1,1/2;3/2;-x^2)");
        let s = to_integrand(&parse("-3/2 * [eps^2] x^(-2) * 2F1(1/2-eps,1/2+eps;3/2;x^2)").unwrap()).unwrap();
        assert_eq!(s.extract, Some(2));
        let x = 0.6f64;
        assert!((s.eval(x, 1e-15).unwrap().re - (x.asin() / x).powi(3)).abs() < 1e-13);
        let s = to_integrand(&parse("sqrt(4 - x^2)").unwrap()).unwrap();
        assert!((s.eval(1.0, 1e-15).unwrap().re - 3f64.sqrt()).abs() < 1e-14);
        let s = to_integrand(&parse("x*ln(1+x^2)").unwrap()).unwrap();
        assert!((s.eval(0.5, 1e-15).unwrap().re - 0.5 * 1.25f64.ln()).abs() < 1e-15);
        let s = to_integrand(&parse("3*x^2").unwrap()).unwrap();
        assert!((s.eval(0.5, 1e-15).unwrap().re - 0.75).abs() < 1e-15);
        assert!(to_integrand(&parse("arctan(x)*exp(x)").unwrap()).is_err());
        assert!(to_integrand(&parse("sqrt(sqrt(1+x)-1)").unwrap()).is_err());
    }
}
