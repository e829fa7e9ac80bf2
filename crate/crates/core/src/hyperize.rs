//! Hypergeometrization of coefficient streams: multiplying the k-th Taylor
//! coefficient by (a)_k/(c)_k, with its undo, power splitting, Taylor
//! remainder, differentiation rules and Euler-type integral checks.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::hypseries::PFQSpec;
use crate::jets::Jet;
use crate::numkernel::{gamma, is_nonpositive_integer, pochhammer_c};
use crate::oracle;

type Generator = Arc<dyn Fn(usize) -> Jet + Send + Sync>;
type ClosedForm = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Terms summed by [`CoeffStream::eval`] before giving up.
pub const EVAL_TERM_CAP: usize = 200_000;

/// A function holomorphic at 0 given by its Taylor coefficients k ↦ f_k.
///
/// Coefficients are generated in index order and memoized; clones share
/// the memo.
#[derive(Clone)]
pub struct CoeffStream {
    generator: Generator,
    memo: Arc<Mutex<Vec<Jet>>>,
    order: usize,
    radius: f64,
    label: String,
    closed: Option<ClosedForm>,
}

impl fmt::Debug for CoeffStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffStream")
            .field("label", &self.label)
            .field("radius", &self.radius)
            .field("order", &self.order)
            .finish()
    }
}

impl CoeffStream {
    /// The generator is called with k = 0, 1, 2, … in order, once each.
    pub fn new(
        label: impl Into<String>,
        order: usize,
        radius: f64,
        generator: impl Fn(usize) -> Jet + Send + Sync + 'static,
    ) -> Self {
        CoeffStream {
            generator: Arc::new(generator),
            memo: Arc::new(Mutex::new(Vec::new())),
            order,
            radius,
            label: label.into(),
            closed: None,
        }
    }

    /// Attaches an elementary evaluator on real arguments for cross-checks.
    pub fn with_closed_form(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed = Some(Arc::new(f));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn closed_form(&self, x: f64) -> Option<f64> {
        self.closed.as_ref().map(|f| f(x))
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed.is_some()
    }

    pub fn coeff(&self, k: usize) -> Jet {
        let mut memo = self.memo.lock().expect("coefficient memo poisoned");
        while memo.len() <= k {
            let n = memo.len();
            memo.push((self.generator)(n));
        }
        memo[k]
    }

    pub fn coeffs(&self, n: usize) -> Vec<Jet> {
        if n == 0 {
            return Vec::new();
        }
        self.coeff(n - 1);
        self.memo.lock().expect("coefficient memo poisoned")[..n].to_vec()
    }

    /// e^x.
    pub fn exp(order: usize) -> Self {
        let fact = Mutex::new(1.0f64);
        CoeffStream::new("exp(x)", order, f64::INFINITY, move |k| {
            let mut f = fact.lock().expect("factorial state poisoned");
            if k > 0 {
                *f /= k as f64;
            }
            Jet::real(order, *f)
        })
        .with_closed_form(f64::exp)
    }

    /// (1 − x)^{−b}, coefficients (b)_k/k!.
    pub fn binomial(b: Jet) -> Self {
        let order = b.order();
        let state = Mutex::new(Jet::one(order));
        let label = format!("(1-x)^(-({}))", crate::display::fmt_jet(&b));
        let s = CoeffStream::new(label, order, 1.0, move |k| {
            let mut t = state.lock().expect("binomial state poisoned");
            if k > 0 {
                *t = *t * (b + (k - 1) as f64) / k as f64;
            }
            *t
        });
        if b.is_scalar() && b.value().im == 0.0 {
            let br = b.value().re;
            s.with_closed_form(move |x| (1.0 - x).powf(-br))
        } else {
            s
        }
    }

    /// arctan(x).
    pub fn arctan(order: usize) -> Self {
        CoeffStream::new("arctan(x)", order, 1.0, move |k| {
            if k % 2 == 0 {
                Jet::zero(order)
            } else {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                Jet::real(order, sign / k as f64)
            }
        })
        .with_closed_form(f64::atan)
    }

    /// cos(2√x) = Σ (−4x)^k/(2k)!.
    pub fn cos_sqrt(order: usize) -> Self {
        let state = Mutex::new(1.0f64);
        CoeffStream::new("cos(2*sqrt(x))", order, f64::INFINITY, move |k| {
            let mut t = state.lock().expect("cos state poisoned");
            if k > 0 {
                *t *= -4.0 / ((2 * k - 1) * (2 * k)) as f64;
            }
            Jet::real(order, *t)
        })
        .with_closed_form(|x| {
            if x >= 0.0 {
                (2.0 * x.sqrt()).cos()
            } else {
                (2.0 * (-x).sqrt()).cosh()
            }
        })
    }

    /// The constant function v.
    pub fn constant(v: Jet) -> Self {
        let order = v.order();
        let s = CoeffStream::new("const", order, f64::INFINITY, move |k| {
            if k == 0 {
                v
            } else {
                Jet::zero(order)
            }
        });
        if v.is_scalar() && v.value().im == 0.0 {
            let r = v.value().re;
            s.with_closed_form(move |_| r)
        } else {
            s
        }
    }

    /// Finitely many coefficients, zero beyond.
    pub fn polynomial(label: impl Into<String>, coeffs: Vec<Jet>) -> Result<Self> {
        let order = coeffs.first().map(|j| j.order()).ok_or_else(|| {
            Error::precondition("polynomial stream needs at least one coefficient")
        })?;
        Ok(CoeffStream::new(label, order, f64::INFINITY, move |k| {
            coeffs.get(k).copied().unwrap_or_else(|| Jet::zero(order))
        }))
    }

    /// The series of a pFq spec with integer power n ≥ 1, as a function of x.
    pub fn from_spec(spec: &PFQSpec) -> Result<Self> {
        let p = spec.power();
        if !p.is_integer() || *p.numer() < 1 {
            return Err(Error::precondition(format!(
                "only positive integer powers give a Taylor series at 0, got {p}"
            )));
        }
        let n = *p.numer() as usize;
        let order = spec.order();
        let (up, lo, g) = (spec.upper().to_vec(), spec.lower().to_vec(), spec.scale());
        let state = Mutex::new(Jet::one(order));
        let radius = match spec.p().cmp(&(spec.q() + 1)) {
            std::cmp::Ordering::Less => f64::INFINITY,
            _ if spec.terminating_degree().is_some() => f64::INFINITY,
            _ => g.norm().powf(-1.0 / n as f64),
        };
        Ok(CoeffStream::new(spec.to_string(), order, radius, move |k| {
            if k % n != 0 {
                return Jet::zero(order);
            }
            let m = k / n;
            let mut t = state.lock().expect("series state poisoned");
            if m > 0 {
                let j = (m - 1) as f64;
                let mut r = Jet::constant(order, g) / m as f64;
                for a in &up {
                    r *= *a + j;
                }
                for c in &lo {
                    r = r / (*c + j);
                }
                *t *= r;
            }
            *t
        }))
    }

    /// f(x^n) as a stream in x.
    pub fn compose_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("power must be at least 1"));
        }
        let inner = self.clone();
        let order = self.order;
        let label = format!("{}∘x^{n}", self.label);
        let s = CoeffStream::new(label, order, self.radius.powf(1.0 / n as f64), move |k| {
            if k % n == 0 {
                inner.coeff(k / n)
            } else {
                Jet::zero(order)
            }
        });
        Ok(match &self.closed {
            Some(f) => {
                let f = f.clone();
                s.with_closed_form(move |x| f(x.powi(n as i32)))
            }
            None => s,
        })
    }

    /// Σ f_k x^k, summed until the terms stay below `tol` relative to the
    /// sum over a window wide enough to skip sparse gaps.
    pub fn eval(&self, x: Complex64, tol: f64) -> Result<Jet> {
        if x.norm() >= self.radius {
            return Err(Error::Divergent(format!(
                "{} evaluated at |x| = {} outside radius {}",
                self.label,
                x.norm(),
                self.radius
            )));
        }
        let mut acc = Jet::zero(self.order);
        let mut xp = Complex64::new(1.0, 0.0);
        let mut quiet = 0usize;
        let mut k = 0usize;
        while k < EVAL_TERM_CAP {
            let t = self.coeff(k) * xp;
            acc += t;
            let size = t.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let scale = acc.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
            if size <= tol * scale.max(1e-300) {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= 8 && k >= 16 {
                return Ok(acc);
            }
            xp *= x;
            k += 1;
        }
        Err(Error::NonConvergence {
            terms: EVAL_TERM_CAP,
            context: format!("{} at x = {x}", self.label),
        })
    }

    /// Radius estimate from the last two nonzero coefficients among the
    /// first `kmax`; infinite when they decay faster than any geometric rate.
    pub fn estimate_radius(&self, kmax: usize) -> f64 {
        let nz: Vec<(usize, f64)> = (0..kmax)
            .map(|k| (k, self.coeff(k).value().norm()))
            .filter(|(_, v)| *v > 0.0)
            .collect();
        if nz.len() < 2 {
            return f64::INFINITY;
        }
        let (k1, v1) = nz[nz.len() - 2];
        let (k2, v2) = nz[nz.len() - 1];
        let r = (v1 / v2).powf(1.0 / (k2 - k1) as f64);
        // Entire functions show a ratio that keeps growing with k.
        if r > 1e3 {
            f64::INFINITY
        } else {
            r
        }
    }
}

/// (a)_k/(c)_k, extended incrementally.
struct RatioMemo {
    a: Jet,
    c: Jet,
    vals: Mutex<Vec<Jet>>,
}

impl RatioMemo {
    fn new(a: Jet, c: Jet) -> Self {
        let one = Jet::one(a.order());
        RatioMemo { a, c, vals: Mutex::new(vec![one]) }
    }

    fn get(&self, k: usize) -> Jet {
        let mut v = self.vals.lock().expect("ratio memo poisoned");
        while v.len() <= k {
            let j = (v.len() - 1) as f64;
            let next = v[v.len() - 1] * (self.a + j) / (self.c + j);
            v.push(next);
        }
        v[k]
    }
}

/// f([a; c] x): coefficient k multiplied by (a)_k/(c)_k.
pub fn hypize(f: &CoeffStream, a: Jet, c: Jet) -> Result<CoeffStream> {
    if a.order() != f.order || c.order() != f.order {
        return Err(Error::OrderMismatch { left: f.order, right: a.order().max(c.order()) });
    }
    if is_nonpositive_integer(c.value()) {
        return Err(Error::pole(c.value(), "hypergeometrization lower parameter"));
    }
    let inner = f.clone();
    let ratio = RatioMemo::new(a, c);
    let label = format!(
        "{}[{};{}]",
        f.label,
        crate::display::fmt_jet(&a),
        crate::display::fmt_jet(&c)
    );
    Ok(CoeffStream::new(label, f.order, f.radius, move |k| inner.coeff(k) * ratio.get(k)))
}

/// Applies [a; c] then [c; a] style inversion: hypize with the roles swapped.
pub fn undo(f: &CoeffStream, a: Jet, c: Jet) -> Result<CoeffStream> {
    hypize(f, c, a)
}

/// Parameter lists {(a+j)/n} over {(c+j)/n}, j < n: hypergeometrizing
/// g(xⁿ) by [a; c] equals hypergeometrizing g by these lists at xⁿ. The
/// n^{nk} factors of numerator and denominator cancel.
pub fn power_split(a: Jet, c: Jet, n: usize) -> Result<(Vec<Jet>, Vec<Jet>)> {
    if n == 0 {
        return Err(Error::precondition("power split needs n >= 1"));
    }
    let nf = n as f64;
    let up = (0..n).map(|j| (a + j as f64) / nf).collect();
    let lo = (0..n).map(|j| (c + j as f64) / nf).collect();
    Ok((up, lo))
}

/// Hypergeometrizes g by the lists pairwise.
pub fn hypize_lists(g: &CoeffStream, upper: &[Jet], lower: &[Jet]) -> Result<CoeffStream> {
    if upper.len() != lower.len() {
        return Err(Error::precondition("parameter lists must pair up"));
    }
    let mut s = g.clone();
    for (a, c) in upper.iter().zip(lower) {
        s = hypize(&s, *a, *c)?;
    }
    Ok(s)
}

/// f^{(n)} hypergeometrized by [1; n+1], so that
/// f(x) = Σ_{k<n} f_k x^k + (xⁿ/n!)·remainder(x).
pub fn taylor_remainder(f: &CoeffStream, n: usize) -> Result<CoeffStream> {
    if n == 0 {
        return Ok(f.clone());
    }
    let inner = f.clone();
    let order = f.order;
    // Coefficients of f^{(n)} are f_{n+k}(k+1)_n.
    let deriv = CoeffStream::new(format!("{}^({n})", f.label), order, f.radius, move |k| {
        let rising: f64 = (1..=n).map(|i| (k + i) as f64).product();
        inner.coeff(n + k) * rising
    });
    hypize(&deriv, Jet::one(order), Jet::real(order, (n + 1) as f64))
}

/// ∂_x x^β f(x^α) = coeff·x^{x_power}·stream(x^α).
#[derive(Clone, Debug)]
pub struct DerivativeForm {
    pub coeff: f64,
    pub x_power: Rational64,
    pub inner_power: Rational64,
    pub stream: CoeffStream,
}

/// ∂_x x^β f(x^α) = βx^{β−1} f([1+β/α; β/α] x^α).
pub fn derivative_rule(beta: Rational64, alpha: Rational64, f: &CoeffStream) -> Result<DerivativeForm> {
    if beta == Rational64::from_integer(0) {
        return Err(Error::precondition("derivative rule needs beta != 0"));
    }
    if alpha == Rational64::from_integer(0) {
        return Err(Error::precondition("derivative rule needs alpha != 0"));
    }
    let r = (beta / alpha).to_f64().expect("finite ratio");
    let inner = f.clone();
    // (1+r)_k/(r)_k = (r+k)/r, which stays finite when r is a negative integer.
    let stream = CoeffStream::new(
        format!("{}[{};{}]", f.label, crate::display::fmt_real(1.0 + r), crate::display::fmt_real(r)),
        f.order,
        f.radius,
        move |k| inner.coeff(k) * ((r + k as f64) / r),
    );
    Ok(DerivativeForm {
        coeff: beta.to_f64().expect("finite beta"),
        x_power: beta - 1,
        inner_power: alpha,
        stream,
    })
}

/// ∂ⁿ_x/n! x^β f(x) = C(β, n)·x^{β−n}·f([1+β; 1+β−n] x).
pub fn derivative_rule_repeated(beta: f64, n: usize, f: &CoeffStream) -> Result<(f64, f64, CoeffStream)> {
    let binom = move |b: f64| -> f64 { (0..n).map(|i| (b - i as f64) / (i + 1) as f64).product() };
    let c0 = binom(beta);
    if c0 == 0.0 {
        return Err(Error::precondition(format!(
            "C({beta}, {n}) vanishes; the rule needs beta outside {{0, ..., n-1}}"
        )));
    }
    let inner = f.clone();
    let stream = CoeffStream::new(
        format!("{}[{};{}]", f.label, crate::display::fmt_real(1.0 + beta), crate::display::fmt_real(1.0 + beta - n as f64)),
        f.order,
        f.radius,
        move |k| inner.coeff(k) * (binom(beta + k as f64) / c0),
    );
    Ok((c0, beta - n as f64, stream))
}

fn real_closed(f: &CoeffStream) -> Result<ClosedForm> {
    f.closed.clone().ok_or_else(|| {
        Error::precondition(format!("{} has no closed form for the quadrature side", f.label))
    })
}

/// |∫₀¹ s^{a−1}(1−s)^{c−a−1} f(sx) ds − Γ(c−a)Γ(a)/Γ(c)·f([a; c] x)| with the
/// integral from the oracle and f from its closed form.
pub fn euler_rep_check(f: &CoeffStream, a: f64, c: f64, x: f64) -> Result<f64> {
    if !(c > a && a > 0.0) {
        return Err(Error::precondition(format!("first Euler representation needs c > a > 0, got a = {a}, c = {c}")));
    }
    let g = real_closed(f)?;
    let lhs = oracle::quad_finite_ends(
        |s, _, one_minus_s| s.powf(a - 1.0) * one_minus_s.powf(c - a - 1.0) * g(s * x),
        0.0,
        1.0,
        1e-13,
    )?
    .value;
    let k = gamma(Complex64::new(c - a, 0.0))? * gamma(Complex64::new(a, 0.0))? / gamma(Complex64::new(c, 0.0))?;
    let order = f.order;
    let h = hypize(f, Jet::real(order, a), Jet::real(order, c))?;
    let rhs = k * h.eval(Complex64::new(x, 0.0), 1e-15)?.value();
    Ok((lhs - rhs.re).abs())
}

/// The second representation: ∫₀¹ s^{a−1}(1−s^α)^{c−1} f(x s^α(1−s^α)) ds
/// against Γ(a/α)Γ(c)/(αΓ(c+a/α))·f([a/α; c/2+a/(2α)][c; (1+c)/2+a/(2α)] x/4).
pub fn euler_rep2_check(f: &CoeffStream, a: f64, c: f64, alpha: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && c > 0.0 && alpha > 0.0) {
        return Err(Error::precondition(format!(
            "second Euler representation needs a, c, alpha > 0, got {a}, {c}, {alpha}"
        )));
    }
    let g = real_closed(f)?;
    let lhs = oracle::quad_finite_ends(
        |s, _, one_minus_s| {
            let sa = s.powf(alpha);
            // 1 − s^α without cancellation near s = 1.
            let rest = if one_minus_s < 0.25 { -(alpha * (-one_minus_s).ln_1p()).exp_m1() } else { 1.0 - sa };
            s.powf(a - 1.0) * rest.powf(c - 1.0) * g(x * sa * rest)
        },
        0.0,
        1.0,
        1e-13,
    )?
    .value;
    let r = a / alpha;
    let k = gamma(Complex64::new(r, 0.0))? * gamma(Complex64::new(c, 0.0))?
        / (gamma(Complex64::new(c + r, 0.0))? * alpha);
    let o = f.order;
    let h = hypize_lists(
        f,
        &[Jet::real(o, r), Jet::real(o, c)],
        &[Jet::real(o, c / 2.0 + r / 2.0), Jet::real(o, (1.0 + c) / 2.0 + r / 2.0)],
    )?;
    let rhs = k * h.eval(Complex64::new(x / 4.0, 0.0), 1e-15)?.value();
    Ok((lhs - rhs.re).abs())
}

/// Pochhammer ratio (a)_k/(c)_k for scalars; exposed for Hadamard checks.
pub fn pochhammer_ratio(a: Complex64, c: Complex64, k: usize) -> Complex64 {
    pochhammer_c(a, k) / pochhammer_c(c, k)
}
