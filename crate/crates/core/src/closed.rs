//! Symbolic products of Γ values at rational points, primes and π, used to
//! print the closed forms produced by the limit at −∞.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::display::as_rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Symbol {
    Prime(i64),
    Pi,
    Gamma(Rational64),
    SinPi(Rational64),
}

/// ±Π symbol^exponent with rational exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaProduct {
    negative: bool,
    factors: BTreeMap<Symbol, Rational64>,
    zero: bool,
}

fn prime_factors(mut n: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Default for GammaProduct {
    fn default() -> Self {
        GammaProduct::one()
    }
}

impl GammaProduct {
    pub fn one() -> Self {
        GammaProduct { negative: false, factors: BTreeMap::new(), zero: false }
    }

    fn bump(&mut self, s: Symbol, e: Rational64) {
        let v = self.factors.entry(s.clone()).or_insert_with(Rational64::zero);
        *v += e;
        if v.is_zero() {
            self.factors.remove(&s);
        }
    }

    /// Multiplies by r^e for a rational r and rational e; negative r only
    /// with integer e.
    pub fn mul_rational_pow(&mut self, r: Rational64, e: Rational64) {
        if r.is_zero() {
            self.zero = true;
            return;
        }
        if r.is_negative() {
            debug_assert!(e.is_integer());
            if e.to_integer() % 2 != 0 {
                self.negative = !self.negative;
            }
        }
        let r = r.abs();
        for (p, k) in prime_factors(*r.numer()) {
            self.bump(Symbol::Prime(p), e * k);
        }
        for (p, k) in prime_factors(*r.denom()) {
            self.bump(Symbol::Prime(p), -e * k);
        }
    }

    pub fn mul_rational(&mut self, r: Rational64) {
        self.mul_rational_pow(r, Rational64::one());
    }

    pub fn mul_pi_pow(&mut self, e: Rational64) {
        self.bump(Symbol::Pi, e);
    }

    /// Multiplies by Γ(x)^e, e an integer, moving x into (0, 1].
    pub fn mul_gamma(&mut self, x: Rational64, e: i64) {
        let one = Rational64::one();
        let e_r = Rational64::from_integer(e);
        if x <= Rational64::zero() && x.is_integer() {
            // Reciprocal Γ at a pole vanishes; a Γ pole itself is infinite
            // and callers must not request it.
            assert!(e < 0, "Γ pole requested in a closed form");
            self.zero = true;
            return;
        }
        let mut f = x;
        while f > one {
            f -= one;
            self.mul_rational_pow(f, e_r);
        }
        while f <= Rational64::zero() {
            self.mul_rational_pow(f, -e_r);
            f += one;
        }
        if f == one {
            return;
        }
        if f == Rational64::new(1, 2) {
            self.mul_pi_pow(e_r / 2);
            return;
        }
        self.bump(Symbol::Gamma(f), e_r);
    }

    fn mul_sin_pi(&mut self, f: Rational64, e: Rational64) {
        // sin(πf) for f in (0, 1), folded to (0, 1/2].
        let f = if f > Rational64::new(1, 2) { Rational64::one() - f } else { f };
        let known = [
            (Rational64::new(1, 2), Rational64::one(), Rational64::zero()),
            (Rational64::new(1, 6), Rational64::new(1, 2), Rational64::zero()),
            (Rational64::new(1, 4), Rational64::one(), Rational64::new(-1, 2)),
            (Rational64::new(1, 3), Rational64::new(1, 2), Rational64::new(1, 2)),
        ];
        for (arg, rat, three_or_two) in known {
            if f == arg {
                self.mul_rational_pow(rat, e);
                if f == Rational64::new(1, 4) {
                    self.mul_rational_pow(Rational64::from_integer(2), three_or_two * e);
                } else if f == Rational64::new(1, 3) {
                    self.mul_rational_pow(Rational64::from_integer(3), three_or_two * e);
                }
                return;
            }
        }
        self.bump(Symbol::SinPi(f), e);
    }

    /// Applies Γ(f)Γ(1−f) = π/sin(πf) to pairs on the same side.
    pub fn reflect(&mut self) {
        loop {
            let pair = self.factors.iter().find_map(|(s, e)| match s {
                Symbol::Gamma(f) => {
                    let g = Rational64::one() - *f;
                    let eg = self.factors.get(&Symbol::Gamma(g)).copied()?;
                    if g != *f && e.signum() == eg.signum() {
                        let m = if e.abs() < eg.abs() { *e } else { eg };
                        Some((*f, g, m))
                    } else {
                        None
                    }
                }
                _ => None,
            });
            let Some((f, g, m)) = pair else { break };
            self.bump(Symbol::Gamma(f), -m);
            self.bump(Symbol::Gamma(g), -m);
            self.mul_pi_pow(m);
            self.mul_sin_pi(f, -m);
        }
    }

    /// Multiplies by a real number when it is a rational or the square
    /// root of one; returns false otherwise.
    pub fn mul_real(&mut self, x: f64) -> bool {
        if let Some(r) = as_rational(x, 10_000, 1e-13 * x.abs().max(1.0)) {
            self.mul_rational(r);
            return true;
        }
        let sq = x * x;
        if let Some(r) = as_rational(sq, 10_000, 1e-12 * sq.max(1.0)) {
            if x < 0.0 {
                self.negative = !self.negative;
            }
            self.mul_rational_pow(r, Rational64::new(1, 2));
            return true;
        }
        false
    }

    pub fn value(&self) -> f64 {
        if self.zero {
            return 0.0;
        }
        let mut v: f64 = if self.negative { -1.0 } else { 1.0 };
        for (s, e) in &self.factors {
            let e = e.to_f64().unwrap_or(f64::NAN);
            let base = match s {
                Symbol::Prime(p) => *p as f64,
                Symbol::Pi => std::f64::consts::PI,
                Symbol::Gamma(f) => crate::numkernel::gamma(num_complex::Complex64::new(f.to_f64().unwrap_or(f64::NAN), 0.0))
                    .map(|g| g.re)
                    .unwrap_or(f64::NAN),
                Symbol::SinPi(f) => (std::f64::consts::PI * f.to_f64().unwrap_or(f64::NAN)).sin(),
            };
            v *= base.powf(e);
        }
        v
    }
}

fn sup(e: i64) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        let mut num_int: i64 = 1;
        let mut den_int: i64 = 1;
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        for (s, e) in &self.factors {
            let (side, ints, e_abs) = if e.is_positive() {
                (&mut num, &mut num_int, *e)
            } else {
                (&mut den, &mut den_int, -*e)
            };
            match s {
                Symbol::Prime(p) => {
                    let whole = e_abs.to_integer();
                    let frac = e_abs - Rational64::from_integer(whole);
                    for _ in 0..whole {
                        *ints = ints.saturating_mul(*p);
                    }
                    if frac == Rational64::new(1, 2) {
                        side.push(format!("√{p}"));
                    } else if !frac.is_zero() {
                        side.push(format!("{p}^({frac})"));
                    }
                }
                Symbol::Pi => {
                    if e_abs == Rational64::new(1, 2) {
                        side.push("√π".into());
                    } else if e_abs.is_integer() {
                        side.push(format!("π{}", sup(e_abs.to_integer())));
                    } else {
                        side.push(format!("π^({e_abs})"));
                    }
                }
                Symbol::Gamma(x) => side.push(format!("Γ({x}){}", sup(e_abs.to_integer()))),
                Symbol::SinPi(x) => {
                    let arg = if *x.numer() == 1 { format!("π/{}", x.denom()) } else { format!("{}π/{}", x.numer(), x.denom()) };
                    if e_abs.is_one() {
                        side.push(format!("sin({arg})"));
                    } else {
                        side.push(format!("sin({arg})^({e_abs})"));
                    }
                }
            }
        }
        let sign = if self.negative { "-" } else { "" };
        let mut top = String::new();
        if num_int != 1 || num.is_empty() {
            top.push_str(&num_int.to_string());
        }
        top.push_str(&num.join(""));
        let mut bottom = String::new();
        if den_int != 1 {
            bottom.push_str(&den_int.to_string());
        }
        bottom.push_str(&den.join(""));
        let parts = den.len() + usize::from(den_int != 1);
        match parts {
            0 => write!(f, "{sign}{top}"),
            1 => write!(f, "{sign}{top}/{bottom}"),
            _ => write!(f, "{sign}{top}/({bottom})"),
        }
    }
}
