//! Truncated Taylor polynomials in a formal parameter ε.
//!
//! A [`Jet`] of order K stores c₀…c_K and represents c₀ + c₁ε + … + c_Kε^K
//! modulo ε^{K+1}. `[ε^k]` extraction is [`Jet::extract`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 8;
/// Order used when callers do not ask for anything else.
pub const DEFAULT_ORDER: usize = 3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    order: usize,
    c: [Complex64; MAX_ORDER + 1],
}

impl Jet {
    /// Builds a jet from explicit coefficients; missing ones are zero.
    pub fn new(order: usize, coeffs: &[Complex64]) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                requested: order,
                max: MAX_ORDER,
            });
        }
        if coeffs.len() > order + 1 {
            return Err(Error::IndexBeyondOrder {
                index: coeffs.len() - 1,
                order,
            });
        }
        let mut c = [ZERO; MAX_ORDER + 1];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Jet { order, c })
    }

    pub fn from_reals(order: usize, coeffs: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Jet::new(order, &v)
    }

    /// Scalar embedding (v, 0, …, 0).
    pub fn constant(order: usize, v: Complex64) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [ZERO; MAX_ORDER + 1];
        c[0] = v;
        Jet { order, c }
    }

    pub fn real(order: usize, v: f64) -> Self {
        Jet::constant(order, Complex64::new(v, 0.0))
    }

    pub fn one(order: usize) -> Self {
        Jet::real(order, 1.0)
    }

    pub fn zero(order: usize) -> Self {
        Jet::real(order, 0.0)
    }

    /// The formal parameter ε itself.
    pub fn eps(order: usize) -> Self {
        let mut j = Jet::zero(order);
        if order >= 1 {
            j.c[1] = ONE;
        }
        j
    }

    /// v + s·ε.
    pub fn linear(order: usize, v: Complex64, s: Complex64) -> Self {
        let mut j = Jet::constant(order, v);
        if order >= 1 {
            j.c[1] = s;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c[..=self.order]
    }

    /// Base value c₀.
    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// `[ε^k]` of the jet.
    pub fn extract(&self, k: usize) -> Result<Complex64> {
        if k > self.order {
            return Err(Error::IndexBeyondOrder {
                index: k,
                order: self.order,
            });
        }
        Ok(self.c[k])
    }

    /// True when every coefficient past c₀ is exactly zero.
    pub fn is_scalar(&self) -> bool {
        self.c[1..=self.order].iter().all(|z| *z == ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Same coefficients truncated or zero-padded to another order.
    pub fn with_order(&self, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [ZERO; MAX_ORDER + 1];
        let n = order.min(self.order);
        c[..=n].copy_from_slice(&self.c[..=n]);
        Jet { order, c }
    }

    pub fn map_scalar(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = *self;
        for z in out.c[..=self.order].iter_mut() {
            *z = f(*z);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        let n = self.order.max(other.order);
        (0..=n)
            .map(|k| (self.c[k] - other.c[k]).norm())
            .fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Jet) -> Result<()> {
        if self.order != other.order {
            Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet> {
        self.check_same(other)?;
        let mut out = *self;
        for k in 0..=self.order {
            out.c[k] += other.c[k];
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet> {
        self.checked_add(&-*other)
    }

    pub fn checked_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_same(other)?;
        let k = self.order;
        let mut out = Jet::zero(k);
        for m in 0..=k {
            let mut s = ZERO;
            for i in 0..=m {
                s += self.c[i] * other.c[m - i];
            }
            out.c[m] = s;
        }
        Ok(out)
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        self.check_same(other)?;
        let b0 = other.c[0];
        if b0 == ZERO {
            return Err(Error::pole(ZERO, "jet division by a jet with zero base value"));
        }
        let k = self.order;
        let mut q = Jet::zero(k);
        for m in 0..=k {
            let mut s = self.c[m];
            for j in 1..=m {
                s -= other.c[j] * q.c[m - j];
            }
            q.c[m] = s / b0;
        }
        Ok(q)
    }

    /// Division that cancels a common factor ε^m when both operands start
    /// with m exact zeros. The top m coefficients of the result are unknown
    /// and set to NaN.
    pub fn div_removable(&self, other: &Jet) -> Result<Jet> {
        self.check_same(other)?;
        let k = self.order;
        let m = match (0..=k).find(|&i| other.c[i] != ZERO) {
            Some(m) => m,
            None => return Err(Error::pole(ZERO, "division by the zero jet")),
        };
        if m == 0 {
            return self.checked_div(other);
        }
        if self.c[..m].iter().any(|z| *z != ZERO) {
            return Err(Error::pole(ZERO, "non-removable 1/ε^m singularity"));
        }
        let mut a = Jet::zero(k);
        let mut b = Jet::zero(k);
        for i in m..=k {
            a.c[i - m] = self.c[i];
            b.c[i - m] = other.c[i];
        }
        let mut q = a.checked_div(&b)?;
        let nan = Complex64::new(f64::NAN, f64::NAN);
        for i in (k + 1 - m)..=k {
            q.c[i] = nan;
        }
        Ok(q)
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::one(self.order).checked_div(self)
    }

    pub fn exp(&self) -> Jet {
        let k = self.order;
        let mut b = Jet::zero(k);
        b.c[0] = self.c[0].exp();
        for m in 1..=k {
            let mut s = ZERO;
            for j in 1..=m {
                s += self.c[j] * b.c[m - j] * j as f64;
            }
            b.c[m] = s / m as f64;
        }
        b
    }

    /// Principal logarithm; the base value must avoid the cut (−∞, 0].
    pub fn log(&self) -> Result<Jet> {
        let a0 = self.c[0];
        if a0.im == 0.0 && a0.re <= 0.0 {
            return Err(Error::BranchCut(format!(
                "log of a jet with base value {a0} on (-inf, 0]"
            )));
        }
        Ok(self.log_unchecked())
    }

    /// Principal logarithm without the branch-cut guard; only needs a₀ ≠ 0.
    pub fn log_unchecked(&self) -> Jet {
        let k = self.order;
        let a0 = self.c[0];
        let mut b = Jet::zero(k);
        b.c[0] = a0.ln();
        for m in 1..=k {
            let mut s = ZERO;
            for j in 1..m {
                s += b.c[j] * self.c[m - j] * j as f64;
            }
            b.c[m] = (self.c[m] - s / m as f64) / a0;
        }
        b
    }

    /// a^p for a complex exponent, principal branch of a₀^p.
    pub fn powc(&self, p: Complex64) -> Result<Jet> {
        let a0 = self.c[0];
        if a0 == ZERO {
            if p == ZERO {
                return Ok(Jet::one(self.order));
            }
            return Err(Error::pole(ZERO, "power of a jet with zero base value"));
        }
        let k = self.order;
        let mut b = Jet::zero(k);
        b.c[0] = a0.powc(p);
        for m in 1..=k {
            let mut s = ZERO;
            for j in 1..=m {
                s += self.c[j] * b.c[m - j] * ((p + 1.0) * j as f64 - m as f64);
            }
            b.c[m] = s / (a0 * m as f64);
        }
        Ok(b)
    }

    pub fn powf(&self, p: f64) -> Result<Jet> {
        self.powc(Complex64::new(p, 0.0))
    }

    pub fn powi(&self, n: i32) -> Result<Jet> {
        if n >= 0 {
            let mut r = Jet::one(self.order);
            for _ in 0..n {
                r *= *self;
            }
            Ok(r)
        } else {
            self.powi(-n)?.recip()
        }
    }

    /// a^p with a jet exponent, exp(p·log a) on the principal branch.
    pub fn powj(&self, p: &Jet) -> Result<Jet> {
        self.check_same(p)?;
        if self.c[0] == ZERO {
            return Err(Error::pole(ZERO, "jet power with zero base value"));
        }
        Ok((*p * self.log_unchecked()).exp())
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let k = self.order;
        let mut s = Jet::zero(k);
        let mut c = Jet::zero(k);
        s.c[0] = self.c[0].sin();
        c.c[0] = self.c[0].cos();
        for m in 1..=k {
            let mut ss = ZERO;
            let mut cc = ZERO;
            for j in 1..=m {
                let w = self.c[j] * j as f64;
                ss += w * c.c[m - j];
                cc -= w * s.c[m - j];
            }
            s.c[m] = ss / m as f64;
            c.c[m] = cc / m as f64;
        }
        (s, c)
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Formal derivative d/dε; the top coefficient becomes zero.
    pub fn derivative(&self) -> Jet {
        let k = self.order;
        let mut d = Jet::zero(k);
        for m in 1..=k {
            d.c[m - 1] = self.c[m] * m as f64;
        }
        d
    }

    /// Formal antiderivative with constant term `c0`; the top input
    /// coefficient is dropped.
    pub fn integral(&self, c0: Complex64) -> Jet {
        let k = self.order;
        let mut r = Jet::zero(k);
        r.c[0] = c0;
        for m in 1..=k {
            r.c[m] = self.c[m - 1] / m as f64;
        }
        r
    }

    /// f(a) given f(a₀) and the jet of f′ along a, via r′ = f′(a)·a′.
    pub fn compose_with_derivative(&self, f0: Complex64, fprime_at_self: &Jet) -> Jet {
        (*fprime_at_self * self.derivative()).integral(f0)
    }

    pub fn atan(&self) -> Result<Jet> {
        let one = Jet::one(self.order);
        let d = (one + *self * *self).recip()?;
        Ok(self.compose_with_derivative(self.c[0].atan(), &d))
    }

    pub fn asin(&self) -> Result<Jet> {
        let one = Jet::one(self.order);
        let d = (one - *self * *self).powf(-0.5)?;
        Ok(self.compose_with_derivative(self.c[0].asin(), &d))
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.coeffs())
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, z) in self.coeffs().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({z})")?;
            match k {
                0 => {}
                1 => write!(f, "ε")?,
                _ => write!(f, "ε^{k}")?,
            }
        }
        Ok(())
    }
}

macro_rules! jet_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                match self.$checked(&rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

jet_binop!(Add, add, checked_add);
jet_binop!(Sub, sub, checked_sub);
jet_binop!(Mul, mul, checked_mul);
jet_binop!(Div, div, checked_div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_scalar(|z| -z)
    }
}

impl Add<Complex64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Complex64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<Complex64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Complex64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.map_scalar(|z| z * rhs)
    }
}

impl Div<Complex64> for Jet {
    type Output = Jet;
    fn div(self, rhs: Complex64) -> Jet {
        self.map_scalar(|z| z / rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self + Complex64::new(rhs, 0.0)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self - Complex64::new(rhs, 0.0)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.map_scalar(|z| z * rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.map_scalar(|z| z / rhs)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, rhs: Jet) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &Jet, b: &[f64], tol: f64) -> bool {
        a.coeffs()
            .iter()
            .zip(b.iter().chain(std::iter::repeat(&0.0)))
            .all(|(x, y)| (x - c(*y)).norm() <= tol)
    }

    #[test]
    fn mul_examples() {
        let e = Jet::eps(3);
        let one = Jet::one(3);
        assert!(close(&((one + e) * (one - e)), &[1.0, 0.0, -1.0], 0.0));
        assert!(close(&((e + 3.0) * 2.0), &[6.0, 2.0], 0.0));
        let a = Jet::from_reals(2, &[1.0, 1.0, 1.0]).unwrap();
        let b = Jet::from_reals(2, &[1.0, 1.0]).unwrap();
        assert!(close(&(a * b), &[1.0, 2.0, 2.0], 0.0));
    }

    #[test]
    fn pow_examples() {
        let a = Jet::eps(3) + 1.0;
        assert!(close(&a.powf(0.5).unwrap(), &[1.0, 0.5, -0.125, 0.0625], 1e-15));
        assert!(close(&Jet::real(3, 4.0).powf(0.5).unwrap(), &[2.0], 1e-15));
        let l2 = std::f64::consts::LN_2;
        let p = Jet::eps(3) * -2.0;
        let r = Jet::real(3, 0.5).powj(&p).unwrap();
        assert!(close(&r, &[1.0, 2.0 * l2, 2.0 * l2 * l2, 4.0 / 3.0 * l2.powi(3)], 1e-14));
    }

    #[test]
    fn pow_zero_base_rejected() {
        assert!(Jet::eps(3).powf(0.5).is_err());
        assert!(Jet::eps(3).recip().is_err());
    }

    #[test]
    fn log_exp_examples() {
        let a = Jet::eps(3) + 1.0;
        assert!(close(&a.log().unwrap(), &[0.0, 1.0, -0.5, 1.0 / 3.0], 1e-15));
        assert!(close(&Jet::zero(3).exp(), &[1.0], 0.0));
        let b = Jet::eps(3) + 2.0;
        assert!(b.log().unwrap().exp().max_abs_diff(&b) <= 1e-14);
        assert!(matches!(Jet::real(3, -1.0).log(), Err(Error::BranchCut(_))));
    }

    #[test]
    fn extract_examples() {
        let p = Jet::eps(3) * -2.0;
        let r = Jet::real(3, 2.0).powj(&p).unwrap();
        let v = r.extract(1).unwrap();
        assert!((v - c(-2.0 * std::f64::consts::LN_2)).norm() < 1e-15);
        assert_eq!(r.extract(0).unwrap(), c(1.0));
        assert!(matches!(r.extract(4), Err(Error::IndexBeyondOrder { .. })));
    }

    #[test]
    fn mismatched_orders_error() {
        let a = Jet::one(2);
        let b = Jet::one(3);
        assert!(matches!(a.checked_mul(&b), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn mismatched_orders_panic_in_operators() {
        let _ = Jet::one(2) + Jet::one(3);
    }

    #[test]
    fn removable_division() {
        let e = Jet::eps(2);
        let q = (e * 0.5).div_removable(&e).unwrap();
        assert_eq!(q.value(), c(0.5));
        assert!(q.extract(2).unwrap().re.is_nan());
        assert!((Jet::one(2)).div_removable(&e).is_err());
    }

    #[test]
    fn trig_and_inverse_trig() {
        let x = Jet::eps(3) + 0.3;
        let (s, co) = x.sin_cos();
        let id = s * s + co * co;
        assert!(close(&id, &[1.0], 1e-15));
        let t = x.atan().unwrap();
        assert!(close(
            &t,
            &[0.3f64.atan(), 1.0 / 1.09, -0.3 / (1.09 * 1.09), (0.09 - 1.0 / 3.0) / 1.09f64.powi(3)],
            1e-14
        ));
        let a = x.asin().unwrap();
        let back = a.sin();
        assert!(back.max_abs_diff(&x) < 1e-14);
    }
}
