//! Antiderivatives by parameter augmentation, the logarithmic case, and
//! definite integrals over [0, 1] and [0, ∞).
//!
//! An integrand is coeff·x^α·f(γx^β). Its antiderivative is
//! coeff·x^{α+1}/(α+1)·f([r; 1+r] γx^β) with r = (α+1)/β, and at ∞ the
//! limit lemma turns the boundary term into a product of Γ values.

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closed::GammaProduct;
use crate::display::{as_rational, fmt_jet};
use crate::error::{Error, Result};
use crate::hyperize::{hypize, CoeffStream};
use crate::hypseries::{self, PFQSpec};
use crate::jets::Jet;
use crate::numkernel::pochhammer;

pub const DEFAULT_TOL: f64 = 1e-10;

/// The f(γx^β) factor of an integrand.
#[derive(Clone, Debug)]
pub enum Body {
    Series(PFQSpec),
    Stream { stream: CoeffStream, scale: Complex64, power: Rational64 },
}

impl Body {
    pub fn order(&self) -> usize {
        match self {
            Body::Series(s) => s.order(),
            Body::Stream { stream, .. } => stream.order(),
        }
    }

    pub fn power(&self) -> Rational64 {
        match self {
            Body::Series(s) => s.power(),
            Body::Stream { power, .. } => *power,
        }
    }

    pub fn scale(&self) -> Complex64 {
        match self {
            Body::Series(s) => s.scale(),
            Body::Stream { scale, .. } => *scale,
        }
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<Jet> {
        let xc = Complex64::new(x, 0.0);
        match self {
            Body::Series(s) => hypseries::eval(s, xc, tol),
            Body::Stream { stream, scale, power } => {
                let u = *scale * xc.powf(power.to_f64().unwrap_or(f64::NAN));
                stream.eval(u, tol.min(1e-14))
            }
        }
    }

    /// Coefficient of u^k in f(u), as a jet.
    fn series_coeff(&self, k: usize) -> Jet {
        match self {
            Body::Series(s) => {
                let mut t = Jet::one(s.order());
                for a in s.upper() {
                    t *= pochhammer(a, k);
                }
                for c in s.lower() {
                    t = t / pochhammer(c, k);
                }
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                t / fact
            }
            Body::Stream { stream, .. } => stream.coeff(k),
        }
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Series(s) => write!(f, "{s}"),
            Body::Stream { stream, scale, power } => {
                write!(f, "{}@({}*x^({}))", stream.label(), crate::display::fmt_complex(*scale), power)
            }
        }
    }
}

/// coeff·x^α·f(γx^β), optionally with [ε^k] applied to the whole.
#[derive(Clone, Debug)]
pub struct IntegrandSpec {
    pub alpha: Rational64,
    pub coeff: Jet,
    pub extract: Option<usize>,
    pub body: Body,
}

impl IntegrandSpec {
    pub fn series(alpha: Rational64, coeff: f64, body: PFQSpec) -> Self {
        IntegrandSpec { alpha, coeff: Jet::real(body.order(), coeff), extract: None, body: Body::Series(body) }
    }

    pub fn with_extract(mut self, k: usize) -> Self {
        self.extract = Some(k);
        self
    }

    pub fn with_coeff(mut self, coeff: Jet) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn eval_jet(&self, x: f64, tol: f64) -> Result<Jet> {
        let xa = x.powf(self.alpha.to_f64().unwrap_or(f64::NAN));
        Ok(self.coeff * self.body.eval(x, tol)? * xa)
    }

    /// Value after extraction.
    pub fn eval(&self, x: f64, tol: f64) -> Result<Complex64> {
        extract(&self.eval_jet(x, tol)?, self.extract)
    }

    /// Smallest k with a nonzero extracted coefficient of u^k, looking at
    /// the first `kmax` terms.
    fn leading_index(&self, kmax: usize) -> Option<usize> {
        (0..kmax).find(|&k| {
            let c = self.coeff * self.body.series_coeff(k);
            extract(&c, self.extract).map(|v| v.norm() > 1e-13).unwrap_or(false)
        })
    }
}

impl fmt::Display for IntegrandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.extract {
            write!(f, "[eps^{k}] ")?;
        }
        if !(self.coeff.is_scalar() && self.coeff.value() == Complex64::new(1.0, 0.0)) {
            write!(f, "{} * ", fmt_jet(&self.coeff))?;
        }
        if !self.alpha.is_zero() {
            if self.alpha.is_integer() && self.alpha.is_positive() {
                write!(f, "x^{} * ", self.alpha)?;
            } else {
                write!(f, "x^({}) * ", self.alpha)?;
            }
        }
        write!(f, "{}", self.body)
    }
}

fn extract(j: &Jet, k: Option<usize>) -> Result<Complex64> {
    match k {
        Some(k) => j.extract(k),
        None => Ok(j.value()),
    }
}

/// coeff·prefactor_coeff·x^{prefactor_exponent}·body(x).
#[derive(Clone, Debug)]
pub struct AntiderivativeForm {
    pub integrand: IntegrandSpec,
    pub prefactor_exponent: Rational64,
    pub prefactor_coeff: Rational64,
    /// r = (α+1)/β, the added upper parameter; 1 + r is the added lower one.
    pub added: Rational64,
    /// Body after augmentation, before cancellation (series bodies only).
    pub augmented: Option<PFQSpec>,
    pub body: Body,
}

impl AntiderivativeForm {
    pub fn eval_jet(&self, x: f64, tol: f64) -> Result<Jet> {
        let pre = self.prefactor_coeff.to_f64().unwrap_or(f64::NAN)
            * x.powf(self.prefactor_exponent.to_f64().unwrap_or(f64::NAN));
        Ok(self.integrand.coeff * self.body.eval(x, tol)? * pre)
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<Complex64> {
        extract(&self.eval_jet(x, tol)?, self.integrand.extract)
    }
}

impl fmt::Display for AntiderivativeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.integrand.extract {
            write!(f, "[eps^{k}] ")?;
        }
        let c = &self.integrand.coeff;
        if !(c.is_scalar() && c.value() == Complex64::new(1.0, 0.0)) {
            write!(f, "{} * ", fmt_jet(c))?;
        }
        if !self.prefactor_coeff.is_one() {
            write!(f, "{} * ", self.prefactor_coeff)?;
        }
        write!(f, "x^({}) * {}", self.prefactor_exponent, self.body)
    }
}

pub fn antiderivative(spec: &IntegrandSpec) -> Result<AntiderivativeForm> {
    let a1 = spec.alpha + Rational64::one();
    if a1.is_zero() {
        return Err(Error::precondition("alpha = -1 has a logarithmic antiderivative; use antiderivative_log"));
    }
    let beta = spec.body.power();
    let r = a1 / beta;
    if r.is_integer() && r.is_negative() {
        return Err(Error::pole(
            Complex64::new(1.0 + r.to_f64().unwrap_or(f64::NAN), 0.0),
            "added lower parameter 1 + (alpha+1)/beta is a non-positive integer",
        ));
    }
    let order = spec.body.order();
    let rf = r.to_f64().unwrap_or(f64::NAN);
    let (augmented, body) = match &spec.body {
        Body::Series(s) => {
            let mut up = s.upper().to_vec();
            let mut lo = s.lower().to_vec();
            up.push(Jet::real(order, rf));
            lo.push(Jet::real(order, 1.0 + rf));
            let aug = PFQSpec::new(order, up, lo, s.scale(), s.power())?;
            let cancelled = aug.cancel();
            (Some(aug), Body::Series(cancelled))
        }
        Body::Stream { stream, scale, power } => {
            let h = hypize(stream, Jet::real(order, rf), Jet::real(order, 1.0 + rf))?;
            (None, Body::Stream { stream: h, scale: *scale, power: *power })
        }
    };
    Ok(AntiderivativeForm {
        integrand: spec.clone(),
        prefactor_exponent: a1,
        prefactor_coeff: a1.recip(),
        added: r,
        augmented,
        body,
    })
}

/// ∫ f(x^α)/x dx = f(0)·ln x + (f(x^α) − f(0))/α − (x^α/α)[ε] f′([1+ε; 2+ε] x^α).
#[derive(Clone, Debug)]
pub struct LogAntiderivative {
    pub alpha: Rational64,
    pub f: CoeffStream,
    /// f′ hypergeometrized by [1+ε; 2+ε], first-order jets.
    pub fprime_aug: CoeffStream,
}

pub fn antiderivative_log(alpha: Rational64, f: &CoeffStream) -> Result<LogAntiderivative> {
    if alpha.is_zero() {
        return Err(Error::precondition("logarithmic rule needs alpha != 0"));
    }
    let inner = f.clone();
    let fprime = CoeffStream::new(format!("{}'", f.label()), 1, f.radius(), move |k| {
        Jet::constant(1, inner.coeff(k + 1).value() * (k + 1) as f64)
    });
    let aug = hypize(
        &fprime,
        Jet::linear(1, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        Jet::linear(1, Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)),
    )?;
    Ok(LogAntiderivative { alpha, f: f.clone(), fprime_aug: aug })
}

impl LogAntiderivative {
    /// The three terms at x > 0.
    pub fn terms(&self, x: f64) -> Result<[f64; 3]> {
        let a = self.alpha.to_f64().unwrap_or(f64::NAN);
        let u = x.powf(a);
        let f0 = self.f.coeff(0).value().re;
        let fu = self.f.eval(Complex64::new(u, 0.0), 1e-15)?.value().re;
        let d = self.fprime_aug.eval(Complex64::new(u, 0.0), 1e-15)?.extract(1)?.re;
        Ok([f0 * x.ln(), (fu - f0) / a, -(u / a) * d])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.terms(x)?.iter().sum())
    }
}

/// A definite integral with its derivation trace and optional oracle check.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: Jet,
    /// The value after [ε^k] extraction.
    pub scalar: Complex64,
    pub method: Vec<String>,
    pub closed_form: Option<String>,
    pub oracle_value: Option<f64>,
    pub discrepancy: Option<f64>,
}

impl IntegralResult {
    pub fn with_oracle(mut self, oracle: f64) -> Self {
        self.oracle_value = Some(oracle);
        self.discrepancy = Some((self.scalar - oracle).norm());
        self
    }
}

/// Vanishing of the antiderivative at 0⁺: needs α + β·k₀ > −1 where u^{k₀}
/// is the first term surviving extraction.
fn check_lower_endpoint(spec: &IntegrandSpec, trace: &mut Vec<String>) -> Result<()> {
    let beta = spec.body.power();
    if !beta.is_positive() {
        return Err(Error::precondition(format!("argument power beta = {beta} must be positive on [0, b]")));
    }
    if spec.alpha > -Rational64::one() {
        return Ok(());
    }
    let k0 = spec
        .leading_index(64)
        .ok_or_else(|| Error::precondition("integrand vanishes to high order; nothing to integrate"))?;
    let lead = spec.alpha + beta * Rational64::from_integer(k0 as i64);
    if lead <= -Rational64::one() {
        return Err(Error::Divergent(format!(
            "integrand behaves like x^({lead}) at 0, not integrable"
        )));
    }
    trace.push(format!("leading term x^({lead}) after extraction, so F(0+) = 0"));
    Ok(())
}

/// ∫₀¹ as F(1) − F(0⁺).
pub fn definite_0_to_1(spec: &IntegrandSpec, tol: f64) -> Result<IntegralResult> {
    let mut trace = vec![format!("integrand {spec}")];
    check_lower_endpoint(spec, &mut trace)?;
    let form = antiderivative(spec)?;
    trace.push(format!("antiderivative {form}"));
    let value = form.eval_jet(1.0, tol)?;
    trace.push("evaluated at x = 1".into());
    let scalar = extract(&value, spec.extract)?;
    Ok(IntegralResult { value, scalar, method: trace, closed_form: None, oracle_value: None, discrepancy: None })
}

/// ∫₀^∞ via the limit of the antiderivative at ∞.
pub fn definite_0_to_inf(spec: &IntegrandSpec, tol: f64) -> Result<IntegralResult> {
    let _ = tol;
    let mut trace = vec![format!("integrand {spec}")];
    check_lower_endpoint(spec, &mut trace)?;
    let g = spec.body.scale();
    if g.im != 0.0 || g.re >= 0.0 {
        return Err(Error::precondition(format!(
            "the argument scale must be real negative so that it tends to -inf, got {}",
            crate::display::fmt_complex(g)
        )));
    }
    let form = antiderivative(spec)?;
    trace.push(format!("antiderivative {form}"));
    let Body::Series(body) = &form.body else {
        return Err(Error::precondition("the limit at infinity needs a pFq body"));
    };
    let lim = hypseries::limit_at_minus_infinity(body)?;
    let r = form.added.to_f64().unwrap_or(f64::NAN);
    let e = lim.exponent.value();
    if !(lim.exponent.is_scalar() && (e.re - r).abs() <= 1e-12 && e.im == 0.0) {
        return Err(Error::precondition(format!(
            "added parameter (alpha+1)/beta = {} must be the smallest upper parameter; the limit is governed by {}",
            form.added,
            fmt_jet(&lim.exponent)
        )));
    }
    trace.push(format!("limit at -inf: (-z)^({}) * F -> {}", form.added, fmt_jet(&lim.coefficient)));
    let gabs = g.re.abs();
    let value = spec.coeff * lim.coefficient * (form.prefactor_coeff.to_f64().unwrap_or(f64::NAN) * gabs.powf(-r));
    let scalar = extract(&value, spec.extract)?;
    let closed_form = if spec.extract.is_none() { gamma_closed_form(spec, body, &form, gabs) } else { None };
    Ok(IntegralResult { value, scalar, method: trace, closed_form, oracle_value: None, discrepancy: None })
}

/// The Γ product behind the limit, when every ingredient is rational.
fn gamma_closed_form(spec: &IntegrandSpec, body: &PFQSpec, form: &AntiderivativeForm, gabs: f64) -> Option<String> {
    let rat = |j: &Jet| -> Option<Rational64> {
        if !j.is_scalar() || j.value().im != 0.0 {
            return None;
        }
        as_rational(j.value().re, 1000, 1e-13)
    };
    let r = form.added;
    let mut g = GammaProduct::one();
    if spec.coeff.value().im != 0.0 || !spec.coeff.is_scalar() || !g.mul_real(spec.coeff.value().re) {
        return None;
    }
    g.mul_rational(form.prefactor_coeff);
    let gr = as_rational(gabs, 100_000, 1e-13)?;
    g.mul_rational_pow(gr, -r);
    let mut skipped = false;
    for a in body.upper() {
        let a = rat(a)?;
        if a == r && !skipped {
            skipped = true;
            continue;
        }
        g.mul_gamma(a - r, 1);
        g.mul_gamma(a, -1);
    }
    for c in body.lower() {
        let c = rat(c)?;
        g.mul_gamma(c, 1);
        g.mul_gamma(c - r, -1);
    }
    g.reflect();
    Some(g.to_string())
}

/// Max over the points of |F′(x) − integrand(x)| with F′ by central
/// differences at h = 1e−5.
pub fn verify_ftc(form: &AntiderivativeForm, points: &[f64]) -> Result<f64> {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for &x in points {
        let d = (form.eval(x + h, 1e-15)? - form.eval(x - h, 1e-15)?) / (2.0 * h);
        let want = form.integrand.eval(x, 1e-15)?;
        worst = worst.max((d - want).norm());
    }
    Ok(worst)
}

/// A named integrand with points suitable for derivative checks.
#[derive(Clone, Debug)]
pub struct CatalogIntegrand {
    pub name: &'static str,
    pub spec: IntegrandSpec,
    pub points: Vec<f64>,
}

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn eps_shift(order: usize, v: f64, s: f64) -> Jet {
    Jet::linear(order, Complex64::new(v, 0.0), Complex64::new(s, 0.0))
}

/// x^{α−1}(√(1+x)−1)^β = 2^{−β}x^{α+β−1}·2F1(β/2, (β+1)/2; β+1; −x).
pub fn sqrt_law_integrand(alpha: f64, beta: f64) -> Result<IntegrandSpec> {
    let e = as_rational(alpha + beta - 1.0, 1000, 1e-12)
        .ok_or_else(|| Error::precondition("exponent alpha + beta - 1 must be rational"))?;
    let body = PFQSpec::real(3, &[beta / 2.0, (beta + 1.0) / 2.0], &[beta + 1.0])?
        .with_argument(Complex64::new(-1.0, 0.0), Rational64::one())?;
    Ok(IntegrandSpec::series(e, 2f64.powf(-beta), body))
}

/// The Γ formula for ∫₀^∞ x^{α−1}(√(1+x)−1)^β dx, −β < α < −β/2.
pub fn sqrt_law_closed(alpha: f64, beta: f64) -> Result<f64> {
    use crate::numkernel::gamma;
    let c = |x: f64| gamma(Complex64::new(x, 0.0)).map(|g| g.re);
    Ok(beta * c(-beta - 2.0 * alpha)? * c(alpha + beta)? * 2f64.powf(2.0 * alpha + beta) / c(1.0 - alpha)?)
}

/// x^β·y with y the trinomial root x·4F3(…; −a·5⁵/4⁴·x⁴) of y⁵ + a·y⁴… ;
/// at β = −7/5 the integrand is x^{−2/5}·4F3.
pub fn trinomial_integrand(beta: Rational64, a: f64) -> Result<IntegrandSpec> {
    let spec = crate::transforms::trinomial_spec(5, Complex64::new(a, 0.0))?;
    Ok(IntegrandSpec::series(beta + Rational64::one(), 1.0, spec))
}

/// α^{−(β+2)/4}Γ((β+2)/4)Γ(−5β/4−3/2)/(4Γ(−β)).
pub fn trinomial_closed(beta: f64, a: f64) -> Result<f64> {
    use crate::numkernel::gamma;
    let c = |x: f64| gamma(Complex64::new(x, 0.0)).map(|g| g.re);
    Ok(a.powf(-(beta + 2.0) / 4.0) * c((beta + 2.0) / 4.0)? * c(-1.25 * beta - 1.5)? / (4.0 * c(-beta)?))
}

/// x^{−2α}·[ε]2F1(1+ε, 1/2+ε; 3/2; −x²) = arctan(x)·ln(1/(1+x²))/x^{2α+1}.
pub fn arctan_log_integrand(alpha: f64) -> Result<IntegrandSpec> {
    let e = as_rational(-2.0 * alpha, 1000, 1e-12)
        .ok_or_else(|| Error::precondition("alpha must be rational"))?;
    let body = PFQSpec::new(
        1,
        vec![eps_shift(1, 1.0, 1.0), eps_shift(1, 0.5, 1.0)],
        vec![Jet::real(1, 1.5)],
        Complex64::new(-1.0, 0.0),
        Rational64::from_integer(2),
    )?;
    Ok(IntegrandSpec::series(e, 1.0, body).with_extract(1))
}

/// (π/(4α cos πα))(ψ(1/2+α)+ψ(α)−ψ(1)−ψ(1/2)), 0 < α < 1/2.
pub fn arctan_log_closed(alpha: f64) -> Result<f64> {
    use crate::numkernel::digamma;
    use std::f64::consts::PI;
    let d = |x: f64| digamma(Complex64::new(x, 0.0)).map(|g| g.re);
    Ok(PI / (4.0 * alpha * (PI * alpha).cos()) * (d(0.5 + alpha)? + d(alpha)? - d(1.0)? - d(0.5)?))
}

/// x·ln(1/(1∓x²))·K(x) or K(ix): (π/2)·x·[ε]2F1(1/2+ε, 1/2+ε; 1; ±x²).
pub fn log_k_integrand(imaginary: bool) -> Result<IntegrandSpec> {
    let s = if imaginary { -1.0 } else { 1.0 };
    let body = PFQSpec::new(
        1,
        vec![eps_shift(1, 0.5, 1.0), eps_shift(1, 0.5, 1.0)],
        vec![Jet::real(1, 1.0)],
        Complex64::new(s, 0.0),
        Rational64::from_integer(2),
    )?;
    Ok(IntegrandSpec::series(Rational64::one(), std::f64::consts::FRAC_PI_2, body).with_extract(1))
}

/// (arcsin x/x)³ = −(3/2)[ε²] x^{−2}·2F1(1/2−ε, 1/2+ε; 3/2; x²).
pub fn arcsin_cubed_integrand() -> Result<IntegrandSpec> {
    let body = PFQSpec::new(
        2,
        vec![eps_shift(2, 0.5, -1.0), eps_shift(2, 0.5, 1.0)],
        vec![Jet::real(2, 1.5)],
        Complex64::new(1.0, 0.0),
        Rational64::from_integer(2),
    )?;
    Ok(IntegrandSpec::series(Rational64::from_integer(-2), -1.5, body).with_extract(2))
}

/// Integrands used by the derivative checks and the reference suite.
pub fn integrand_catalog() -> Result<Vec<CatalogIntegrand>> {
    let neg = Complex64::new(-1.0, 0.0);
    let two = Rational64::from_integer(2);
    let three = Rational64::from_integer(3);
    let pts = vec![0.1, 0.5, 0.9];
    let one_over = |n: Rational64| -> Result<PFQSpec> {
        PFQSpec::real(3, &[1.0], &[])?.with_argument(neg, n)
    };
    let mut out = vec![
        CatalogIntegrand { name: "one", spec: IntegrandSpec::series(Rational64::zero(), 1.0, PFQSpec::real(3, &[0.0], &[])?), points: pts.clone() },
        CatalogIntegrand {
            name: "arctan_over_x",
            spec: IntegrandSpec::series(Rational64::zero(), 1.0, PFQSpec::real(3, &[1.0, 0.5], &[1.5])?.with_argument(neg, two)?),
            points: pts.clone(),
        },
        CatalogIntegrand { name: "inv_1_plus_x2", spec: IntegrandSpec::series(Rational64::zero(), 1.0, one_over(two)?), points: pts.clone() },
        CatalogIntegrand { name: "inv_1_plus_x3", spec: IntegrandSpec::series(Rational64::zero(), 1.0, one_over(three)?), points: pts.clone() },
        CatalogIntegrand {
            name: "cos",
            spec: IntegrandSpec::series(Rational64::zero(), 1.0, PFQSpec::real(3, &[], &[0.5])?.with_argument(Complex64::new(-0.25, 0.0), two)?),
            points: pts.clone(),
        },
        CatalogIntegrand {
            name: "nested_radical",
            spec: IntegrandSpec::series(q(-7, 8), std::f64::consts::FRAC_1_SQRT_2, PFQSpec::real(3, &[0.25, 0.75], &[1.5])?.with_argument(neg, Rational64::one())?),
            points: pts.clone(),
        },
        CatalogIntegrand { name: "arcsin_cubed", spec: arcsin_cubed_integrand()?, points: pts.clone() },
        CatalogIntegrand { name: "log_k", spec: log_k_integrand(false)?, points: pts.clone() },
        CatalogIntegrand { name: "log_k_imag", spec: log_k_integrand(true)?, points: pts.clone() },
        CatalogIntegrand { name: "arctan_log", spec: arctan_log_integrand(0.25)?, points: pts.clone() },
        CatalogIntegrand { name: "sqrt_law_a", spec: sqrt_law_integrand(-0.6, 1.0)?, points: pts.clone() },
        CatalogIntegrand { name: "sqrt_law_b", spec: sqrt_law_integrand(-0.35, 0.5)?, points: pts.clone() },
        CatalogIntegrand { name: "trinomial", spec: trinomial_integrand(q(-7, 5), 2.0)?, points: vec![0.1, 0.2, 0.3] },
    ];
    out.push(CatalogIntegrand {
        name: "exp_stream",
        spec: IntegrandSpec {
            alpha: q(1, 2),
            coeff: Jet::one(3),
            extract: None,
            body: Body::Stream { stream: CoeffStream::exp(3), scale: neg, power: Rational64::one() },
        },
        points: pts,
    });
    Ok(out)
}
