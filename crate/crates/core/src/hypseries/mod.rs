//! pFq series with jet-valued parameters: specification, classification,
//! evaluation, the value at 1, and the leading coefficient at −∞.

pub mod accel;

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::display::{fmt_complex, fmt_jet};
use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::numkernel::{gamma_jet, is_nonpositive_integer, pochhammer, rgamma_jet};

use accel::{asymptotic_tail, jet_norm, JetAccumulator};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const TERM_CAP: usize = 1_000_000;

const PARAM_EQ_TOL: f64 = 1e-14;
const TAIL_TERMS: usize = 10;
const TAIL_MAX_N: usize = 1 << 17;

/// x ↦ pFq(upper; lower; scale·x^power) with jet parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct PFQSpec {
    upper: Vec<Jet>,
    lower: Vec<Jet>,
    scale: Complex64,
    power: Rational64,
    order: usize,
    sigma: Jet,
}

impl PFQSpec {
    pub fn new(
        order: usize,
        upper: Vec<Jet>,
        lower: Vec<Jet>,
        scale: Complex64,
        power: Rational64,
    ) -> Result<Self> {
        for j in upper.iter().chain(lower.iter()) {
            if j.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: j.order(),
                });
            }
        }
        if upper.len() > lower.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "p = {} exceeds q + 1 = {}",
                upper.len(),
                lower.len() + 1
            )));
        }
        if let Some(c) = lower.iter().find(|c| is_nonpositive_integer(c.value())) {
            return Err(Error::pole(
                c.value(),
                "lower parameter is a non-positive integer",
            ));
        }
        if power.is_zero() {
            return Err(Error::InvalidSpec("argument power must be nonzero".into()));
        }
        let mut sigma = Jet::zero(order);
        for c in &lower {
            sigma += *c;
        }
        for a in &upper {
            sigma -= *a;
        }
        Ok(PFQSpec {
            upper,
            lower,
            scale,
            power,
            order,
            sigma,
        })
    }

    /// Scalar real parameters, argument x itself.
    pub fn real(order: usize, upper: &[f64], lower: &[f64]) -> Result<Self> {
        let up = upper.iter().map(|&a| Jet::real(order, a)).collect();
        let lo = lower.iter().map(|&c| Jet::real(order, c)).collect();
        PFQSpec::new(order, up, lo, Complex64::new(1.0, 0.0), Rational64::from_integer(1))
    }

    /// Scalar complex parameters, argument x itself.
    pub fn complex(order: usize, upper: &[Complex64], lower: &[Complex64]) -> Result<Self> {
        let up = upper.iter().map(|&a| Jet::constant(order, a)).collect();
        let lo = lower.iter().map(|&c| Jet::constant(order, c)).collect();
        PFQSpec::new(order, up, lo, Complex64::new(1.0, 0.0), Rational64::from_integer(1))
    }

    /// Jet parameters, argument x itself.
    pub fn jets(upper: Vec<Jet>, lower: Vec<Jet>) -> Result<Self> {
        let order = upper
            .first()
            .or(lower.first())
            .map(|j| j.order())
            .unwrap_or(crate::jets::DEFAULT_ORDER);
        PFQSpec::new(order, upper, lower, Complex64::new(1.0, 0.0), Rational64::from_integer(1))
    }

    pub fn with_argument(self, scale: Complex64, power: Rational64) -> Result<Self> {
        PFQSpec::new(self.order, self.upper, self.lower, scale, power)
    }

    pub fn upper(&self) -> &[Jet] {
        &self.upper
    }

    pub fn lower(&self) -> &[Jet] {
        &self.lower
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn power(&self) -> Rational64 {
        self.power
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// Parameter excess Σc − Σa.
    pub fn sigma(&self) -> Jet {
        self.sigma
    }

    /// Removes upper/lower pairs with identical jets.
    pub fn cancel(&self) -> PFQSpec {
        let mut upper = self.upper.clone();
        let mut lower = Vec::with_capacity(self.lower.len());
        for c in &self.lower {
            if let Some(i) = upper.iter().position(|a| a.max_abs_diff(c) <= PARAM_EQ_TOL) {
                upper.remove(i);
            } else {
                lower.push(*c);
            }
        }
        PFQSpec::new(self.order, upper, lower, self.scale, self.power)
            .expect("cancelling pairs preserves validity")
    }

    /// Degree when an upper parameter is an exact non-positive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter(|a| a.is_scalar() && is_nonpositive_integer(a.value()))
            .map(|a| (-a.value().re) as usize)
            .min()
    }

    /// The series argument γ·x^β.
    pub fn argument(&self, x: Complex64) -> Complex64 {
        if self.power.is_integer() {
            let n = self.power.to_integer();
            self.scale * x.powi(n as i32)
        } else if x == Complex64::new(0.0, 0.0) {
            if self.power > Rational64::zero() {
                x
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            }
        } else {
            let b = self.power.to_f64().unwrap_or(f64::NAN);
            self.scale * x.powf(b)
        }
    }

    /// Same parameters and argument map at another jet order.
    pub fn with_order(&self, order: usize) -> PFQSpec {
        let up = self.upper.iter().map(|j| j.with_order(order)).collect();
        let lo = self.lower.iter().map(|j| j.with_order(order)).collect();
        PFQSpec::new(order, up, lo, self.scale, self.power).expect("order change keeps validity")
    }

    fn max_param_abs(&self) -> f64 {
        self.upper
            .iter()
            .chain(self.lower.iter())
            .map(|j| j.value().norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PFQSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let up: Vec<String> = self.upper.iter().map(fmt_jet).collect();
        let lo: Vec<String> = self.lower.iter().map(fmt_jet).collect();
        let mut arg = String::new();
        let one = Complex64::new(1.0, 0.0);
        if self.scale == -one {
            arg.push('-');
        } else if self.scale != one {
            let s = fmt_complex(self.scale);
            if s[1..].contains(['+', '-']) {
                arg.push_str(&format!("({s})*"));
            } else {
                arg.push_str(&format!("{s}*"));
            }
        }
        arg.push('x');
        if self.power != Rational64::from_integer(1) {
            if self.power.is_integer() && self.power > Rational64::zero() {
                arg.push_str(&format!("^{}", self.power));
            } else {
                arg.push_str(&format!("^({})", self.power));
            }
        }
        write!(
            f,
            "{}F{}({};{};{})",
            self.p(),
            self.q(),
            up.join(","),
            lo.join(","),
            arg
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceKind {
    Entire,
    UnitDisk,
    Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceClass {
    pub kind: ConvergenceKind,
    pub sigma: Complex64,
}

pub fn classify(spec: &PFQSpec) -> Result<ConvergenceClass> {
    if spec.p() > spec.q() + 1 {
        return Err(Error::InvalidSpec("p > q + 1".into()));
    }
    let kind = if spec.terminating_degree().is_some() {
        ConvergenceKind::Polynomial
    } else if spec.p() == spec.q() + 1 {
        ConvergenceKind::UnitDisk
    } else {
        ConvergenceKind::Entire
    };
    Ok(ConvergenceClass {
        kind,
        sigma: spec.sigma.value(),
    })
}

/// pFq at x = 0, always the unit jet.
pub fn value_at_zero(spec: &PFQSpec) -> Jet {
    Jet::one(spec.order)
}

/// Term t_{k+1}/t_k multiplier, jet-valued.
fn term_ratio(upper: &[Jet], lower: &[Jet], z: Complex64, k: usize, order: usize) -> Jet {
    let kf = k as f64;
    let mut num = Jet::constant(order, z / (kf + 1.0));
    for a in upper {
        num *= *a + kf;
    }
    let mut den = Jet::one(order);
    for c in lower {
        den *= *c + kf;
    }
    num / den
}

/// Scalar modulus of the base-value ratio at step k.
fn base_ratio(upper: &[Jet], lower: &[Jet], z: Complex64, k: usize) -> f64 {
    let kf = k as f64;
    let mut r = z.norm() / (kf + 1.0);
    for a in upper {
        r *= (a.value() + kf).norm();
    }
    for c in lower {
        r /= (c.value() + kf).norm();
    }
    r
}

/// Direct summation with a ratio-based tail bound.
fn sum_direct(
    upper: &[Jet],
    lower: &[Jet],
    z: Complex64,
    order: usize,
    tol: f64,
    cap: usize,
) -> Result<Jet> {
    let p = upper.len();
    let q = lower.len();
    let max_param = upper
        .iter()
        .chain(lower.iter())
        .map(|j| j.value().norm())
        .fold(0.0, f64::max);
    let limit_ratio = if p == q + 1 { z.norm() } else { 0.0 };
    let k_safe = if p <= q {
        let root = z.norm().powf(1.0 / (q + 1 - p) as f64);
        (2.0 * max_param + 2.0 * root + 2.0).ceil() as usize
    } else {
        (2.0 * max_param + 2.0).ceil() as usize
    };
    let mut acc = JetAccumulator::new(order);
    let mut t = Jet::one(order);
    let mut passes = 0;
    for k in 0..cap {
        acc.add(&t);
        let ratio = term_ratio(upper, lower, z, k, order);
        let next = t * ratio;
        let rho = base_ratio(upper, lower, z, k + 1).max(limit_ratio);
        let tn = jet_norm(&next);
        if tn == 0.0 && next.is_scalar() && ratio.value() == Complex64::new(0.0, 0.0) && ratio.is_scalar() {
            // exact termination
            return Ok(acc.value());
        }
        let bound = if rho < 1.0 { tn / (1.0 - rho) } else { f64::INFINITY };
        let snorm = jet_norm(&acc.value());
        if k >= k_safe && (bound <= tol * snorm || bound < 1e-300) {
            passes += 1;
            if passes >= 2 {
                acc.add(&next);
                return Ok(acc.value());
            }
        } else {
            passes = 0;
        }
        t = next;
        if !t.is_finite() {
            return Err(Error::Divergent("series terms overflowed".into()));
        }
    }
    Err(Error::NonConvergence {
        terms: cap,
        context: format!("direct summation at z = {z}"),
    })
}

fn sum_polynomial(upper: &[Jet], lower: &[Jet], z: Complex64, order: usize, n: usize) -> Jet {
    let mut acc = JetAccumulator::new(order);
    let mut t = Jet::one(order);
    for k in 0..=n {
        acc.add(&t);
        t *= term_ratio(upper, lower, z, k, order);
    }
    acc.value()
}

/// Partial sum to N plus the asymptotic tail, doubling N until stable.
fn sum_with_tail(
    upper: &[Jet],
    lower: &[Jet],
    z: Complex64,
    order: usize,
    tol: f64,
    n_min: usize,
) -> Result<Jet> {
    let mut acc = JetAccumulator::new(order);
    let mut t = Jet::one(order);
    let mut k = 0usize;
    let mut n = n_min.max(64);
    let mut prev: Option<Jet> = None;
    // Cancelling sums are judged against their largest partial sum.
    let mut scale = 0.0f64;
    while n <= TAIL_MAX_N {
        while k < n {
            acc.add(&t);
            scale = scale.max(jet_norm(&acc.value()));
            t *= term_ratio(upper, lower, z, k, order);
            k += 1;
        }
        let est = acc.value() + asymptotic_tail(upper, lower, z, n, &t, TAIL_TERMS);
        if !est.is_finite() {
            return Err(Error::Divergent(format!("tail estimate overflowed at z = {z}")));
        }
        if let Some(p) = prev {
            let d = jet_norm(&(est - p));
            if d <= tol * jet_norm(&est).max(scale).max(1e-300) {
                return Ok(est);
            }
        }
        prev = Some(est);
        n *= 2;
    }
    Err(Error::NonConvergence {
        terms: TAIL_MAX_N,
        context: format!("tail-accelerated summation at z = {z}"),
    })
}

/// pFq(a; c; z) for a raw series argument z.
pub fn eval_z(spec: &PFQSpec, z: Complex64, tol: f64) -> Result<Jet> {
    let order = spec.order;
    let (up, lo) = (&spec.upper, &spec.lower);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(value_at_zero(spec));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Divergent(format!("non-finite argument {z}")));
    }
    if let Some(n) = spec.terminating_degree() {
        return Ok(sum_polynomial(up, lo, z, order, n));
    }
    if spec.p() == 1 && spec.q() == 1 && z.re < -1.0 {
        // Kummer: 1F1(a;b;z) = e^z 1F1(b−a;b;−z) avoids alternating cancellation.
        let (a, b) = (up[0], lo[0]);
        let k = PFQSpec::jets(vec![b - a], vec![b])?;
        let inner = if k.terminating_degree().is_some() {
            eval_z(&k, -z, tol)?
        } else {
            sum_direct(&k.upper, &k.lower, -z, order, tol, TERM_CAP)?
        };
        return Ok(inner * z.exp());
    }
    if spec.p() <= spec.q() {
        return sum_direct(up, lo, z, order, tol, TERM_CAP);
    }
    // p = q + 1
    if spec.p() == 2 && z.im == 0.0 && z.re <= -0.9 {
        let (pspec, w, pref) = crate::transforms::pfaff_parts(spec, z)?;
        // 1 − w = 1/(1 − z) exactly, while w itself rounds to 1 for huge |z|.
        let one = Complex64::new(1.0, 0.0);
        if let Some(v) = eval_2f1_connection(&pspec, w, crate::numkernel::recip_scaled(one - z), tol)? {
            return Ok(v * pref);
        }
        return Ok(eval_z(&pspec, w, tol)? * pref);
    }
    if spec.p() == 2 {
        if let Some(v) = eval_2f1_near_one(spec, z, tol)? {
            return Ok(v);
        }
    }
    let r = z.norm();
    if r > 1.0 + 1e-15 {
        return Err(Error::Divergent(format!(
            "{}F{} series outside the unit disk at |z| = {r}",
            spec.p(),
            spec.q()
        )));
    }
    if z == Complex64::new(1.0, 0.0) {
        return eval_at_one(spec, tol);
    }
    let dist = (Complex64::new(1.0, 0.0) - z).norm();
    let n_min = (4.0 * spec.max_param_abs() + 64.0).max(40.0 / dist).ceil() as usize;
    if r <= 0.9 {
        return sum_direct(up, lo, z, order, tol, TERM_CAP);
    }
    let s = spec.sigma.value().re;
    if (r - 1.0).abs() <= 1e-15 && s <= -1.0 {
        return Err(Error::Divergent(format!(
            "terms do not decay on |z| = 1 with parameter excess {s}"
        )));
    }
    if n_min <= TAIL_MAX_N / 4 {
        sum_with_tail(up, lo, z, order, tol, n_min)
    } else {
        sum_direct(up, lo, z, order, tol, TERM_CAP)
    }
}

/// 2F1 for |1 − z| small through the connection to argument 1 − z.
/// Declines (returns `None`) when c − a − b is within 0.05 of an integer,
/// where the two Γ-weighted terms cancel catastrophically.
fn eval_2f1_near_one(spec: &PFQSpec, z: Complex64, tol: f64) -> Result<Option<Jet>> {
    eval_2f1_connection(spec, z, Complex64::new(1.0, 0.0) - z, tol)
}

/// The connection formula with the complement w = 1 − z supplied by the
/// caller, which may know it more accurately than 1 − z.
fn eval_2f1_connection(spec: &PFQSpec, z: Complex64, w: Complex64, tol: f64) -> Result<Option<Jet>> {
    if w == Complex64::new(0.0, 0.0) || w.norm() > 0.25 || z.norm() > 1.0 + 1e-15 {
        return Ok(None);
    }
    let (a, b, c) = (spec.upper[0], spec.upper[1], spec.lower[0]);
    let s = c - a - b;
    let s0 = s.value();
    if s0.im.abs() < 0.05 && (s0.re - s0.re.round()).abs() < 0.05 {
        return Ok(None);
    }
    let order = spec.order;
    let f1 = PFQSpec::jets(vec![a, b], vec![-s + 1.0])?;
    let f2 = PFQSpec::jets(vec![c - a, c - b], vec![s + 1.0])?;
    let t1 = gamma_jet(&c)? * gamma_jet(&s)? * rgamma_jet(&(c - a)) * rgamma_jet(&(c - b));
    let t2 = gamma_jet(&c)? * gamma_jet(&(-s))? * rgamma_jet(&a) * rgamma_jet(&b);
    let pw = Jet::constant(order, w).powj(&s)?;
    let v = t1 * eval_z(&f1, w, tol)? + t2 * pw * eval_z(&f2, w, tol)?;
    Ok(Some(v))
}

/// The function value pFq(a; c; γx^β).
pub fn eval(spec: &PFQSpec, x: Complex64, tol: f64) -> Result<Jet> {
    eval_z(spec, spec.argument(x), tol)
}

/// Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)) with jet parameters.
pub fn gauss_sum(a: &Jet, b: &Jet, c: &Jet) -> Result<Jet> {
    let s = *c - *a - *b;
    if s.value().re <= 0.0 {
        return Err(Error::Divergent(format!(
            "Gauss sum needs Re(c − a − b) > 0, got {}",
            s.value()
        )));
    }
    Ok(gamma_jet(c)? * gamma_jet(&s)? * rgamma_jet(&(*c - *a)) * rgamma_jet(&(*c - *b)))
}

/// pFq at argument 1 for p = q + 1.
pub fn eval_at_one(spec: &PFQSpec, tol: f64) -> Result<Jet> {
    if spec.p() != spec.q() + 1 {
        return Err(Error::precondition(format!(
            "value at 1 needs p = q + 1, got {}F{}",
            spec.p(),
            spec.q()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    if let Some(n) = spec.terminating_degree() {
        return Ok(sum_polynomial(&spec.upper, &spec.lower, one, spec.order, n));
    }
    let s = spec.sigma.value();
    if s.re <= 0.0 {
        return Err(Error::Divergent(format!(
            "divergent at 1: Re(parameter excess) = {} ≤ 0",
            s.re
        )));
    }
    if spec.p() == 2 {
        return gauss_sum(&spec.upper[0], &spec.upper[1], &spec.lower[0]);
    }
    let n_min = (4.0 * spec.max_param_abs() + 64.0).ceil() as usize;
    sum_with_tail(&spec.upper, &spec.lower, one, spec.order, tol, n_min)
}

/// Leading behaviour (−z)^α·pFq(z) → C as z → −∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticTerm {
    pub exponent: Jet,
    pub coefficient: Jet,
}

fn congruent_mod_z(a: Complex64, b: Complex64) -> bool {
    let d = a - b;
    d.im.abs() <= 1e-12 && (d.re - d.re.round()).abs() <= 1e-12
}

pub fn limit_at_minus_infinity(spec: &PFQSpec) -> Result<AsymptoticTerm> {
    let (p, q) = (spec.p(), spec.q());
    if p + 1 < q {
        return Err(Error::precondition(format!(
            "limit at -inf needs p >= q - 1, got {p}F{q}"
        )));
    }
    let order = spec.order;
    if let Some(n) = spec.terminating_degree() {
        let idx = spec
            .upper
            .iter()
            .position(|a| a.is_scalar() && a.value().re == -(n as f64))
            .expect("terminating parameter exists");
        let mut c = Jet::one(order);
        for (i, a) in spec.upper.iter().enumerate() {
            if i != idx {
                c *= pochhammer(a, n);
            }
        }
        for cj in &spec.lower {
            c = c / pochhammer(cj, n);
        }
        return Ok(AsymptoticTerm {
            exponent: Jet::real(order, -(n as f64)),
            coefficient: c,
        });
    }
    if p == 0 {
        return Err(Error::precondition(
            "limit at -inf needs at least one upper parameter",
        ));
    }
    for i in 0..p {
        for j in (i + 1)..p {
            if congruent_mod_z(spec.upper[i].value(), spec.upper[j].value()) {
                return Err(Error::precondition(format!(
                    "upper parameters {} and {} differ by an integer",
                    fmt_jet(&spec.upper[i]),
                    fmt_jet(&spec.upper[j])
                )));
            }
        }
    }
    let (imin, alpha) = spec
        .upper
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.value().re.total_cmp(&y.1.value().re))
        .map(|(i, a)| (i, *a))
        .expect("p > 0");
    for (i, a) in spec.upper.iter().enumerate() {
        if i != imin && (a.value().re - alpha.value().re).abs() <= 1e-12 {
            return Err(Error::precondition(format!(
                "minimal upper parameter is not unique: {} and {}",
                fmt_jet(&alpha),
                fmt_jet(a)
            )));
        }
    }
    if p + 1 == q {
        let s = spec.sigma.value().re;
        if alpha.value().re >= s - 0.5 {
            return Err(Error::precondition(format!(
                "p = q - 1 needs min upper {} < sigma - 1/2 = {}",
                alpha.value().re,
                s - 0.5
            )));
        }
    }
    let mut c = Jet::one(order);
    for (i, a) in spec.upper.iter().enumerate() {
        if i != imin {
            c = c * gamma_jet(&(*a - alpha))? * rgamma_jet(a);
        }
    }
    for cj in &spec.lower {
        c = c * gamma_jet(cj)? * rgamma_jet(&(*cj - alpha));
    }
    Ok(AsymptoticTerm {
        exponent: alpha,
        coefficient: c,
    })
}
