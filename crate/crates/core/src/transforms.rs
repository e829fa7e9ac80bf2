//! Identity calculus: Pfaff, summation formulas, quadratic and parity
//! rewrites, trinomial roots, the representation catalog and a registry of
//! randomly checkable identities.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::display::fmt_real;
use crate::error::{Error, Result};
use crate::hypseries::{eval, eval_z, PFQSpec, DEFAULT_TOL};
use crate::jets::{Jet, DEFAULT_ORDER, MAX_ORDER};
use crate::numkernel::{digamma_jet, gamma, gamma_jet, pochhammer_c, rgamma, rgamma_jet};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn require_2f1(spec: &PFQSpec, what: &str) -> Result<()> {
    if spec.p() != 2 || spec.q() != 1 {
        return Err(Error::InvalidSpec(format!(
            "{what} needs a 2F1, got {}F{}",
            spec.p(),
            spec.q()
        )));
    }
    Ok(())
}

/// Pfaff transform of a 2F1 at argument z: returns the spec (c−a, b; c),
/// the new argument z/(z−1) and the prefactor (1−z)^{−b}.
pub fn pfaff_parts(spec: &PFQSpec, z: Complex64) -> Result<(PFQSpec, Complex64, Jet)> {
    require_2f1(spec, "Pfaff transform")?;
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut(format!("Pfaff transform at z = {z} on [1, inf)")));
    }
    let (a, b, cc) = (spec.upper()[0], spec.upper()[1], spec.lower()[0]);
    let out = PFQSpec::jets(vec![cc - a, b], vec![cc])?;
    // 1 − 1/(1−z) avoids the overflow of z/(z−1) for huge |z|.
    let w = if z.norm() > 1.0 { c(1.0) - crate::numkernel::recip_scaled(c(1.0) - z) } else { z / (z - 1.0) };
    let pref = Jet::constant(spec.order(), c(1.0) - z).powj(&(-b))?;
    Ok((out, w, pref))
}

/// Right-hand side of the Pfaff transform evaluated at x.
pub fn pfaff(spec: &PFQSpec, x: Complex64, tol: f64) -> Result<Jet> {
    let (s, w, pref) = pfaff_parts(spec, spec.argument(x))?;
    Ok(pref * eval_z(&s, w, tol)?)
}

/// 2F1(a, b; 1+a−b; −1) = 2^{−a}√π Γ(1+a−b)/(Γ((1+a)/2)Γ(1+a/2−b)).
pub fn kummer_at_minus1(a: &Jet, b: &Jet) -> Result<Jet> {
    let order = a.order();
    let two = Jet::real(order, 2.0);
    let g = gamma_jet(&(*a - *b + 1.0))?;
    let num = two.powj(&(-*a))? * std::f64::consts::PI.sqrt() * g;
    Ok(num * rgamma_jet(&((*a + 1.0) * 0.5)) * rgamma_jet(&(*a * 0.5 - *b + 1.0)))
}

/// The same sum with the misprinted denominator Γ(1+a/2−b)Γ((1+a)/2−b);
/// kept so `verify` can report how far off it is.
pub fn kummer_at_minus1_misprint(a: Complex64, b: Complex64) -> Result<Complex64> {
    let g = gamma(a - b + 1.0)?;
    Ok(c(2.0).powc(-a)
        * std::f64::consts::PI.sqrt()
        * g
        * rgamma(a * 0.5 - b + 1.0)
        * rgamma((a + 1.0) * 0.5 - b))
}

/// 2F1(a, 1+a−2b; 1+a−b; 1/2) = √π Γ(1+a−b)/(Γ((1+a)/2)Γ(1+a/2−b)),
/// obtained by applying Pfaff (in the first parameter) to the −1 sum.
pub fn sum_at_half(a: &Jet, b: &Jet) -> Result<Jet> {
    let two = Jet::real(a.order(), 2.0);
    Ok(kummer_at_minus1(a, b)? * two.powj(a)?)
}

/// The pair (2F1(a,b;a+b+1/2;x), 3F2(2a,a+b,2b;a+b+1/2,2a+2b;x)); the
/// first squared equals the second.
pub fn clausen_square(a: &Jet, b: &Jet) -> Result<(PFQSpec, PFQSpec)> {
    let lower = *a + *b + 0.5;
    let f = PFQSpec::jets(vec![*a, *b], vec![lower])?;
    let g = PFQSpec::jets(vec![*a * 2.0, *a + *b, *b * 2.0], vec![lower, (*a + *b) * 2.0])?;
    Ok((f, g))
}

/// ((√(1+x)−1)/x)^β = 2^{−β}·2F1(β/2, (β+1)/2; β+1; −x): returns the
/// constant 2^{−β} and the spec.
pub fn binet_sqrt_rep(beta: &Jet) -> Result<(Jet, PFQSpec)> {
    let order = beta.order();
    let spec = PFQSpec::jets(vec![*beta * 0.5, (*beta + 1.0) * 0.5], vec![*beta + 1.0])?
        .with_argument(c(-1.0), Rational64::from_integer(1))?;
    let pref = Jet::real(order, 2.0).powj(&(-*beta))?;
    Ok((pref, spec))
}

/// Even and odd parts of a pFq in its series variable z.
#[derive(Clone, Debug)]
pub struct ParitySplit {
    pub even: PFQSpec,
    pub odd: PFQSpec,
    /// Πa/Πc·γ; the odd part is this times x^β times `odd`.
    pub odd_coeff: Jet,
}

/// f = Σ t_k z^k splits into the 2p F 2q+1 series in 4^{p−q−1}z² for the
/// even indices and z·Πa/Πc times another for the odd ones.
pub fn parity_split(spec: &PFQSpec) -> Result<ParitySplit> {
    let order = spec.order();
    let half = |j: &Jet, s: f64| (*j + s) * 0.5;
    let mut eu = Vec::new();
    let mut ou = Vec::new();
    for a in spec.upper() {
        eu.extend([half(a, 0.0), half(a, 1.0)]);
        ou.extend([half(a, 1.0), half(a, 2.0)]);
    }
    let mut el = Vec::new();
    let mut ol = Vec::new();
    for cc in spec.lower() {
        el.extend([half(cc, 0.0), half(cc, 1.0)]);
        ol.extend([half(cc, 1.0), half(cc, 2.0)]);
    }
    el.push(Jet::real(order, 0.5));
    ol.push(Jet::real(order, 1.5));
    let k = spec.p() as i32 - spec.q() as i32 - 1;
    let g = spec.scale();
    let scale = g * g * 4f64.powi(k);
    let power = spec.power() * 2;
    let even = PFQSpec::new(order, eu, el, scale, power)?;
    let odd = PFQSpec::new(order, ou, ol, scale, power)?;
    let mut coeff = Jet::constant(order, g);
    for a in spec.upper() {
        coeff *= *a;
    }
    for cc in spec.lower() {
        coeff = coeff / *cc;
    }
    Ok(ParitySplit { even, odd, odd_coeff: coeff })
}

impl ParitySplit {
    /// Recombined value: even(x) + x^β·odd_coeff·odd(x).
    pub fn eval(&self, x: Complex64, power: Rational64, tol: f64) -> Result<Jet> {
        let b = *power.numer() as f64 / *power.denom() as f64;
        let xb = if power.is_integer() { x.powi(*power.numer() as i32) } else { x.powf(b) };
        Ok(eval(&self.even, x, tol)? + self.odd_coeff * xb * eval(&self.odd, x, tol)?)
    }
}

/// (3F2(1, a/2, (a+1)/2; c/2, (c+1)/2; −x²), 2F1(1, a; c; ·)); the first at
/// x equals Re of the second at ix for real x.
pub fn real_part_rep(a: &Jet, cc: &Jet) -> Result<(PFQSpec, PFQSpec)> {
    let order = a.order();
    let one = Jet::one(order);
    let lhs = PFQSpec::jets(
        vec![one, *a * 0.5, (*a + 1.0) * 0.5],
        vec![*cc * 0.5, (*cc + 1.0) * 0.5],
    )?
    .with_argument(c(-1.0), Rational64::from_integer(2))?;
    let rhs = PFQSpec::jets(vec![one, *a], vec![*cc])?;
    Ok((lhs, rhs))
}

/// 3F2(a1,a2,a3; c1,c2; 1) = Γ(c2)Γ(σ)/(Γ(σ+a3)Γ(c2−a3))·3F2(a3, c1−a1,
/// c1−a2; c1, σ+a3; 1); returns the Γ factor and the new spec.
pub fn thomae_shift(a: [Jet; 3], cc: [Jet; 2]) -> Result<(Jet, PFQSpec)> {
    let sigma = cc[0] + cc[1] - a[0] - a[1] - a[2];
    if sigma.value().re <= 0.0 || (cc[1] - a[2]).value().re <= 0.0 {
        return Err(Error::Divergent(format!(
            "Thomae shift needs positive parameter excess on both sides, got {} and {}",
            sigma.value(),
            (cc[1] - a[2]).value()
        )));
    }
    let factor = gamma_jet(&cc[1])?
        * gamma_jet(&sigma)?
        * rgamma_jet(&(sigma + a[2]))
        * rgamma_jet(&(cc[1] - a[2]));
    let spec = PFQSpec::jets(vec![a[2], cc[0] - a[0], cc[0] - a[1]], vec![cc[0], sigma + a[2]])?;
    Ok((factor, spec))
}

/// (2F1(a+ε, b+ε; a+b; ·) at jet order 1, 2F1(a, b; a+b; ·)); the [ε]
/// coefficient of the first equals ln(1/(1−x)) times the second.
pub fn log_multiplier(a: Complex64, b: Complex64) -> Result<(PFQSpec, PFQSpec)> {
    let e = Jet::eps(1);
    let ja = e + a;
    let jb = e + b;
    let low = Jet::constant(1, a + b);
    let lhs = PFQSpec::jets(vec![ja, jb], vec![low])?;
    let rhs = PFQSpec::complex(1, &[a, b], &[a + b])?;
    Ok((lhs, rhs))
}

/// 2F1(1, a; a+1; −1) = (a/2)(ψ((a+1)/2) − ψ(a/2)).
pub fn special_sum_15_4_27(a: &Jet) -> Result<Jet> {
    let d = digamma_jet(&((*a + 1.0) * 0.5))? - digamma_jet(&(*a * 0.5))?;
    Ok(*a * 0.5 * d)
}

/// 2F1(1/2+ε, 1/2+ε; 2; −1) in closed form, from differentiating the
/// quadratic transformation at −1.
pub fn special_sum_15_8_24_derived(eps: &Jet) -> Result<Jet> {
    let order = eps.order();
    let m = *eps - 0.5;
    let two = Jet::real(order, 2.0);
    let inner = m * rgamma_jet(&(*eps * 0.5 + 0.25)) * rgamma_jet(&(-*eps * 0.5 + 1.25))
        - rgamma_jet(&(*eps * 0.5 - 0.25)) * rgamma_jet(&(-*eps * 0.5 + 0.75)) * 2.0;
    let den = m * m * two.powj(&(*eps + 0.5))?;
    Ok(inner.checked_div(&den)? * std::f64::consts::PI.sqrt())
}

/// The spec whose value times a solves αyⁿ + y = a: nFn−1 with upper
/// j/n (j < n) and 1, lower j/(n−1) (2 ≤ j ≤ n), scale −αnⁿ/(n−1)^{n−1}
/// and power n−1, after cancellation.
pub fn trinomial_spec(n: u32, alpha: Complex64) -> Result<PFQSpec> {
    if n < 2 {
        return Err(Error::precondition(format!("trinomial degree must be at least 2, got {n}")));
    }
    let order = DEFAULT_ORDER;
    let nf = n as f64;
    let mut upper: Vec<Jet> = (1..n).map(|j| Jet::real(order, j as f64 / nf)).collect();
    upper.push(Jet::one(order));
    let lower: Vec<Jet> = (2..=n).map(|j| Jet::real(order, j as f64 / (nf - 1.0))).collect();
    let scale = -alpha * nf.powi(n as i32) / (nf - 1.0).powi(n as i32 - 1);
    let spec = PFQSpec::new(order, upper, lower, scale, Rational64::from_integer(n as i64 - 1))?;
    Ok(spec.cancel())
}

/// The root of αyⁿ + y = a that tends to a as α → 0.
pub fn trinomial_root(n: u32, alpha: Complex64, a: Complex64) -> Result<Complex64> {
    let spec = trinomial_spec(n, alpha)?;
    let z = spec.argument(a);
    if z.norm() >= 1.0 {
        return Err(Error::Divergent(format!(
            "trinomial series argument |{z}| is not inside the unit disk"
        )));
    }
    Ok(a * eval_z(&spec, z, DEFAULT_TOL)?.value())
}

/// Where a catalog term evaluates its series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Argument {
    /// At the spec's own argument map γx^β.
    Variable,
    /// At a fixed series argument, for constants.
    Fixed(Complex64),
}

/// coeff · x^x_power · [ε^extract] spec(argument).
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Complex64,
    pub x_power: i32,
    pub extract: usize,
    pub spec: PFQSpec,
    pub argument: Argument,
}

type Reference = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A named function or constant as a sum of extracted pFq terms.
#[derive(Clone)]
pub struct Representation {
    pub name: String,
    pub formula: String,
    pub terms: Vec<Term>,
    /// Elementary evaluation used for cross-checks, when one exists.
    reference: Option<Reference>,
    /// Real points at which the representation converges.
    pub domain: (f64, f64),
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("name", &self.name)
            .field("formula", &self.formula)
            .field("terms", &self.terms)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Representation {
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| matches!(t.argument, Argument::Fixed(_)))
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<Complex64> {
        let mut s = c(0.0);
        for t in &self.terms {
            let v = match t.argument {
                Argument::Variable => eval(&t.spec, c(x), tol)?,
                Argument::Fixed(z) => eval_z(&t.spec, z, tol)?,
            };
            s += t.coeff * x.powi(t.x_power) * v.extract(t.extract)?;
        }
        Ok(s)
    }

    pub fn reference(&self, x: f64) -> Option<Complex64> {
        self.reference.as_ref().map(|f| f(x))
    }
}

/// Names accepted by [`catalog`]; `k`, `n` and `a` are numeric arguments.
pub const CATALOG_NAMES: &[&str] = &[
    "zeta(k)",
    "eta(k)",
    "ln_pow(k,a)",
    "half_sqrt_log(k)",
    "arcsin_even(k)",
    "arcsin_odd(k)",
    "arcsin_cubed",
    "harmonic_egf",
    "polylog(n)",
    "ti",
    "catalan_3F2",
    "lemniscate",
    "apery",
    "gelfond",
];

fn parse_call(name: &str) -> Result<(String, Vec<f64>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name.to_string(), Vec::new()));
    };
    let head = name[..open].trim().to_string();
    let body = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::UnknownName(format!("unbalanced parentheses in {name:?}")))?;
    let args = body
        .split(',')
        .map(|s| {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => Ok(p.trim().parse::<f64>()? / q.trim().parse::<f64>()?),
                None => s.parse::<f64>(),
            }
        })
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map_err(|e| Error::UnknownName(format!("bad argument in {name:?}: {e}")))?;
    Ok((head, args))
}

fn int_arg(name: &str, args: &[f64], i: usize, min: usize, max: usize) -> Result<usize> {
    let v = *args
        .get(i)
        .ok_or_else(|| Error::UnknownName(format!("{name} needs argument {}", i + 1)))?;
    if v.fract() != 0.0 || v < min as f64 || v > max as f64 {
        return Err(Error::precondition(format!(
            "{name}: argument {v} must be an integer in [{min}, {max}]"
        )));
    }
    Ok(v as usize)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn zeta_direct(k: usize) -> f64 {
    // Head plus Euler–Maclaurin tail.
    let n = 2000usize;
    let head: f64 = (1..n).rev().map(|j| (j as f64).powi(-(k as i32))).sum();
    let nf = n as f64;
    let kf = k as f64;
    head + nf.powf(1.0 - kf) / (kf - 1.0) + 0.5 * nf.powf(-kf) + kf / 12.0 * nf.powf(-kf - 1.0)
        - kf * (kf + 1.0) * (kf + 2.0) / 720.0 * nf.powf(-kf - 3.0)
}

fn alternating_direct(f: impl Fn(usize) -> f64) -> f64 {
    // Average of two consecutive partial sums of Σ(−1)^j f(j).
    let n = 200_000usize;
    let mut s = 0.0;
    let mut prev = 0.0;
    for j in 0..=n {
        prev = s;
        let t = f(j);
        s += if j % 2 == 0 { t } else { -t };
    }
    0.5 * (s + prev)
}

fn power_series_direct(x: f64, f: impl Fn(usize) -> f64) -> f64 {
    let mut s = 0.0;
    for k in 1..20_000 {
        let t = f(k) * x.powi(k as i32);
        s += t;
        if t.abs() < 1e-18 * s.abs().max(1e-300) && k > 10 {
            break;
        }
    }
    s
}

fn ones(order: usize, n: usize, v: f64) -> Vec<Jet> {
    vec![Jet::real(order, v); n]
}

/// Looks up a representation such as `zeta(3)` or `ln_pow(2,1/2)`.
pub fn catalog(name: &str) -> Result<Representation> {
    let (head, args) = parse_call(name)?;
    let one_arg = Argument::Fixed(c(1.0));
    let minus_one = Argument::Fixed(c(-1.0));
    let simple = |spec: PFQSpec, argument: Argument, extract: usize| Term {
        coeff: c(1.0),
        x_power: 0,
        extract,
        spec,
        argument,
    };
    let order_for = |k: usize| (k + 1).clamp(DEFAULT_ORDER, MAX_ORDER);
    let r = match head.as_str() {
        "zeta" | "apery" => {
            let k = if head == "apery" { 3 } else { int_arg(&head, &args, 0, 2, 12)? };
            let o = DEFAULT_ORDER;
            let spec = PFQSpec::jets(ones(o, k + 1, 1.0), ones(o, k, 2.0))?;
            let z = zeta_direct(k);
            Representation {
                name: format!("zeta({k})"),
                formula: format!("{}", spec).replace("x", "1"),
                terms: vec![simple(spec, one_arg, 0)],
                reference: Some(Arc::new(move |_| c(z))),
                domain: (0.0, 0.0),
            }
        }
        "eta" => {
            let k = int_arg(&head, &args, 0, 1, 12)?;
            let o = DEFAULT_ORDER;
            let spec = PFQSpec::jets(ones(o, k + 1, 1.0), ones(o, k, 2.0))?;
            let v = alternating_direct(move |j| ((j + 1) as f64).powi(-(k as i32)));
            Representation {
                name: format!("eta({k})"),
                formula: format!("{}", spec).replace("x", "-1"),
                terms: vec![simple(spec, minus_one, 0)],
                reference: Some(Arc::new(move |_| c(v))),
                domain: (0.0, 0.0),
            }
        }
        "ln_pow" => {
            let k = int_arg(&head, &args, 0, 0, MAX_ORDER)?;
            let a = *args.get(1).unwrap_or(&0.0);
            let o = order_for(k);
            let spec = PFQSpec::jets(vec![Jet::eps(o) + a], vec![])?;
            let coeff = factorial(k);
            let cs = fmt_real(coeff);
            Representation {
                name: format!("ln_pow({k},{a})"),
                formula: format!("(1-x)^(-{a})*ln(1/(1-x))^{k} = {cs}*[eps^{k}] {spec}"),
                terms: vec![Term { coeff: c(coeff), ..simple(spec, Argument::Variable, k) }],
                reference: Some(Arc::new(move |x| {
                    c((1.0 - x).powf(-a) * (-(1.0 - x).ln()).powi(k as i32))
                })),
                domain: (-0.9, 0.9),
            }
        }
        "half_sqrt_log" => {
            let k = int_arg(&head, &args, 0, 0, MAX_ORDER)?;
            let o = order_for(k);
            let e = Jet::eps(o);
            let spec = PFQSpec::jets(vec![e, e + 0.5], vec![e * 2.0 + 1.0])?;
            let coeff = factorial(k) / (-2f64).powi(k as i32);
            let cs = fmt_real(coeff);
            Representation {
                name: format!("half_sqrt_log({k})"),
                formula: format!("ln((1+sqrt(1-x))/2)^{k} = {cs}*[eps^{k}] {spec}"),
                terms: vec![Term { coeff: c(coeff), ..simple(spec, Argument::Variable, k) }],
                reference: Some(Arc::new(move |x| c(((1.0 + (1.0 - x).sqrt()) / 2.0).ln().powi(k as i32)))),
                domain: (-0.9, 0.9),
            }
        }
        "arcsin_even" => {
            let k = int_arg(&head, &args, 0, 1, MAX_ORDER / 2)?;
            let o = order_for(2 * k);
            let e = Jet::eps(o);
            let spec = PFQSpec::jets(vec![-e, e], vec![Jet::real(o, 0.5)])?
                .with_argument(c(1.0), Rational64::from_integer(2))?;
            let coeff = factorial(2 * k) / (-4f64).powi(k as i32);
            let cs = fmt_real(coeff);
            Representation {
                name: format!("arcsin_even({k})"),
                formula: format!("arcsin(x)^{} = {cs}*[eps^{}] {spec}", 2 * k, 2 * k),
                terms: vec![Term { coeff: c(coeff), ..simple(spec, Argument::Variable, 2 * k) }],
                reference: Some(Arc::new(move |x: f64| c(x.asin().powi(2 * k as i32)))),
                domain: (-0.95, 0.95),
            }
        }
        "arcsin_odd" | "arcsin_cubed" => {
            let k = if head == "arcsin_cubed" { 1 } else { int_arg(&head, &args, 0, 0, MAX_ORDER / 2)? };
            let o = order_for(2 * k);
            let e = Jet::eps(o);
            let spec = PFQSpec::jets(vec![e + 0.5, -e + 0.5], vec![Jet::real(o, 1.5)])?
                .with_argument(c(1.0), Rational64::from_integer(2))?;
            let coeff = factorial(2 * k + 1) / (-4f64).powi(k as i32);
            let cs = fmt_real(coeff);
            Representation {
                name: if head == "arcsin_cubed" { "arcsin_cubed".into() } else { format!("arcsin_odd({k})") },
                formula: format!("arcsin(x)^{} = {cs}*[eps^{}] x*{spec}", 2 * k + 1, 2 * k),
                terms: vec![Term { coeff: c(coeff), x_power: 1, ..simple(spec, Argument::Variable, 2 * k) }],
                reference: Some(Arc::new(move |x: f64| c(x.asin().powi(2 * k as i32 + 1)))),
                domain: (-0.95, 0.95),
            }
        }
        "harmonic_egf" => {
            let o = DEFAULT_ORDER;
            let spec = PFQSpec::jets(vec![Jet::one(o)], vec![-Jet::eps(o) + 1.0])?;
            Representation {
                name: "harmonic_egf".into(),
                formula: format!("sum H_k x^k/k! = [eps] {spec}"),
                terms: vec![simple(spec, Argument::Variable, 1)],
                reference: Some(Arc::new(|x: f64| {
                    let mut s = 0.0;
                    let mut h = 0.0;
                    let mut t = 1.0;
                    for k in 1..400 {
                        h += 1.0 / k as f64;
                        t *= x / k as f64;
                        s += h * t;
                    }
                    c(s)
                })),
                domain: (-5.0, 5.0),
            }
        }
        "polylog" => {
            let n = int_arg(&head, &args, 0, 1, MAX_ORDER - 1)?;
            let o = order_for(n);
            let e = Jet::eps(o);
            let spec = PFQSpec::jets(vec![e; n], ones(o, n - 1, 1.0))?;
            Representation {
                name: format!("polylog({n})"),
                formula: format!("Li_{n}(x) = [eps^{n}] {spec}"),
                terms: vec![simple(spec, Argument::Variable, n)],
                reference: Some(Arc::new(move |x| c(power_series_direct(x, |k| (k as f64).powi(-(n as i32)))))),
                domain: (-0.9, 0.9),
            }
        }
        "ti" => {
            let o = DEFAULT_ORDER;
            let spec = PFQSpec::real(o, &[1.0, 0.5, 0.5], &[1.5, 1.5])?
                .with_argument(c(-1.0), Rational64::from_integer(2))?;
            Representation {
                name: "ti".into(),
                formula: format!("Ti(x) = x*{spec}"),
                terms: vec![Term { x_power: 1, ..simple(spec, Argument::Variable, 0) }],
                reference: Some(Arc::new(|x: f64| {
                    c(alternating_direct(move |j| x.powi(2 * j as i32 + 1) / ((2 * j + 1) as f64).powi(2)))
                })),
                domain: (-1.0, 1.0),
            }
        }
        "catalan_3F2" | "catalan" => {
            let spec = PFQSpec::real(DEFAULT_ORDER, &[0.5, 0.5, 1.0], &[1.5, 1.5])?;
            let v = alternating_direct(|j| ((2 * j + 1) as f64).powi(-2));
            Representation {
                name: "catalan_3F2".into(),
                formula: format!("G = {}", spec).replace("x", "-1"),
                terms: vec![simple(spec, minus_one, 0)],
                reference: Some(Arc::new(move |_| c(v))),
                domain: (0.0, 0.0),
            }
        }
        "lemniscate" => {
            let spec = PFQSpec::real(DEFAULT_ORDER, &[0.5, 0.25], &[1.25])?;
            Representation {
                name: "lemniscate".into(),
                formula: format!("Gamma(1/4)^2/sqrt(pi) = 4*sqrt(2)*{}", spec).replace("x", "1"),
                terms: vec![Term { coeff: c(4.0 * 2f64.sqrt()), ..simple(spec, one_arg, 0) }],
                reference: Some(Arc::new(|_| {
                    let g = gamma(c(0.25)).expect("Γ(1/4) is finite");
                    g * g / std::f64::consts::PI.sqrt()
                })),
                domain: (0.0, 0.0),
            }
        }
        "gelfond" => {
            let i = Complex64::i();
            let s1 = PFQSpec::complex(DEFAULT_ORDER, &[i, -i], &[c(0.5)])?;
            let s2 = PFQSpec::complex(DEFAULT_ORDER, &[c(0.5) + i, c(0.5) - i], &[c(1.5)])?;
            Representation {
                name: "gelfond".into(),
                formula: format!("e^pi = {} + 2*{}", s1, s2).replace("x", "1"),
                terms: vec![simple(s1, one_arg, 0), Term { coeff: c(2.0), ..simple(s2, one_arg, 0) }],
                reference: Some(Arc::new(|_| c(std::f64::consts::PI.exp()))),
                domain: (0.0, 0.0),
            }
        }
        _ => {
            return Err(Error::UnknownName(format!(
                "no catalog entry {name:?}; known: {}",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    Ok(r)
}

type Side = fn(&[f64]) -> Result<Complex64>;
type Sampler = fn(&mut ChaCha8Rng) -> Vec<f64>;

/// An identity with a random parameter sampler over its declared domain.
#[derive(Clone, Copy)]
pub struct Identity {
    pub name: &'static str,
    pub statement: &'static str,
    sample: Sampler,
    lhs: Side,
    rhs: Side,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Identity({})", self.name)
    }
}

/// Worst case over a batch of random draws.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub draws: usize,
    pub max_residual: f64,
    pub worst_params: Vec<f64>,
}

impl Identity {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (self.sample)(rng)
    }

    /// |lhs − rhs| / max(1, |rhs|).
    pub fn residual(&self, params: &[f64]) -> Result<f64> {
        let l = (self.lhs)(params)?;
        let r = (self.rhs)(params)?;
        Ok((l - r).norm() / r.norm().max(1.0))
    }

    pub fn check(&self, draws: usize, seed: u64) -> Result<IdentityReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = (0.0, Vec::new());
        for _ in 0..draws {
            let p = self.sample(&mut rng);
            let r = self.residual(&p)?;
            if !(r <= worst.0) {
                worst = (r, p);
            }
        }
        Ok(IdentityReport {
            name: self.name,
            draws,
            max_residual: worst.0,
            worst_params: worst.1,
        })
    }
}

fn j(x: f64) -> Jet {
    Jet::real(DEFAULT_ORDER, x)
}

fn val(spec: &PFQSpec, z: f64) -> Result<Complex64> {
    Ok(eval_z(spec, c(z), DEFAULT_TOL)?.value())
}

fn u(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// The registered identities, in a fixed order.
pub fn identities() -> Vec<Identity> {
    vec![
        Identity {
            name: "pfaff",
            statement: "2F1(a,b;c;x) = (1-x)^(-b) 2F1(c-a,b;c;x/(x-1))",
            sample: |r| vec![u(r, -2.0, 2.0), u(r, -2.0, 2.0), u(r, 0.3, 3.0), u(r, -0.85, 0.45)],
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, &p[..2], &p[2..3])?, p[3]),
            rhs: |p| {
                let s = PFQSpec::real(DEFAULT_ORDER, &[p[2] - p[0], p[1]], &[p[2]])?;
                Ok(c(1.0 - p[3]).powf(-p[1]) * val(&s, p[3] / (p[3] - 1.0))?)
            },
        },
        Identity {
            name: "clausen_square",
            statement: "2F1(a,b;a+b+1/2;x)^2 = 3F2(2a,a+b,2b;a+b+1/2,2a+2b;x)",
            sample: |r| vec![u(r, 0.1, 1.5), u(r, 0.1, 1.5), u(r, -0.8, 0.8)],
            lhs: |p| {
                let (f, _) = clausen_square(&j(p[0]), &j(p[1]))?;
                Ok(val(&f, p[2])?.powi(2))
            },
            rhs: |p| val(&clausen_square(&j(p[0]), &j(p[1]))?.1, p[2]),
        },
        Identity {
            name: "kummer_minus_one",
            statement: "2F1(a,b;1+a-b;-1) = 2^(-a) sqrt(pi) Gamma(1+a-b)/(Gamma((1+a)/2) Gamma(1+a/2-b))",
            sample: |r| vec![u(r, 0.1, 2.5), u(r, -1.5, 0.4)],
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, p, &[1.0 + p[0] - p[1]])?, -1.0),
            rhs: |p| Ok(kummer_at_minus1(&j(p[0]), &j(p[1]))?.value()),
        },
        Identity {
            name: "sum_at_half",
            statement: "2F1(a,1+a-2b;1+a-b;1/2) = sqrt(pi) Gamma(1+a-b)/(Gamma((1+a)/2) Gamma(1+a/2-b))",
            sample: |r| {
                let a = u(r, -0.9, 2.5);
                vec![a, u(r, -1.0, a + 0.9)]
            },
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, &[p[0], 1.0 + p[0] - 2.0 * p[1]], &[1.0 + p[0] - p[1]])?, 0.5),
            rhs: |p| Ok(sum_at_half(&j(p[0]), &j(p[1]))?.value()),
        },
        Identity {
            name: "parity_split",
            statement: "pFq = even part + odd part",
            sample: |r| {
                let mut p: Vec<f64> = (0..3).map(|_| u(r, -1.5, 2.0)).collect();
                p.extend([u(r, 0.3, 2.5), u(r, 0.3, 2.5), u(r, -0.9, 0.9)]);
                p
            },
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, &p[..3], &p[3..5])?, p[5]),
            rhs: |p| {
                let s = PFQSpec::real(DEFAULT_ORDER, &p[..3], &p[3..5])?;
                let split = parity_split(&s)?;
                // The two halves can each be 1e5 times the sum, so they need
                // full precision for the recombination to hold.
                Ok(split.eval(c(p[5]), s.power(), 1e-16)?.value())
            },
        },
        Identity {
            name: "log_multiplier",
            statement: "[eps] 2F1(a+eps,b+eps;a+b;x) = ln(1/(1-x)) 2F1(a,b;a+b;x)",
            sample: |r| vec![u(r, 0.1, 2.0), u(r, 0.1, 2.0), u(r, -0.9, 0.6)],
            lhs: |p| {
                let (l, _) = log_multiplier(c(p[0]), c(p[1]))?;
                eval_z(&l, c(p[2]), DEFAULT_TOL)?.extract(1)
            },
            rhs: |p| {
                let (_, r) = log_multiplier(c(p[0]), c(p[1]))?;
                Ok(-(1.0 - p[2]).ln() * val(&r, p[2])?)
            },
        },
        Identity {
            name: "rogers_dougall_terminating",
            statement: "4F3(-j,a,b,1/2-a-b-j;1-a-j,1-b-j,a+b+1/2;1) = (2a)_j(a+b)_j(2b)_j/((2a+2b)_j(a)_j(b)_j)",
            sample: |r| {
                let shift = |r: &mut ChaCha8Rng| r.gen_range(0..2) as f64;
                let a = u(r, 0.1, 0.9) + shift(r);
                let b = u(r, 0.1, 0.9) + shift(r);
                vec![r.gen_range(0..=8) as f64, a, b]
            },
            lhs: |p| {
                let (n, a, b) = (p[0], p[1], p[2]);
                let s = PFQSpec::real(
                    DEFAULT_ORDER,
                    &[-n, a, b, 0.5 - a - b - n],
                    &[1.0 - a - n, 1.0 - b - n, a + b + 0.5],
                )?;
                val(&s, 1.0)
            },
            rhs: |p| {
                let (n, a, b) = (p[0] as usize, c(p[1]), c(p[2]));
                Ok(pochhammer_c(a * 2.0, n) * pochhammer_c(a + b, n) * pochhammer_c(b * 2.0, n)
                    / (pochhammer_c((a + b) * 2.0, n) * pochhammer_c(a, n) * pochhammer_c(b, n)))
            },
        },
        Identity {
            name: "bessel_product",
            statement: "0F1(;a;x) 0F1(;b;x) = 2F3((a+b-1)/2,(a+b)/2;a,b,a+b-1;4x)",
            sample: |r| vec![u(r, 0.6, 3.0), u(r, 0.6, 3.0), u(r, -5.0, 5.0)],
            lhs: |p| {
                let f = PFQSpec::real(DEFAULT_ORDER, &[], &[p[0]])?;
                let g = PFQSpec::real(DEFAULT_ORDER, &[], &[p[1]])?;
                Ok(val(&f, p[2])? * val(&g, p[2])?)
            },
            rhs: |p| {
                let s = p[0] + p[1];
                let h = PFQSpec::real(DEFAULT_ORDER, &[(s - 1.0) / 2.0, s / 2.0], &[p[0], p[1], s - 1.0])?;
                val(&h, 4.0 * p[2])
            },
        },
        Identity {
            name: "thomae_shift",
            statement: "3F2(a1,a2,a3;c1,c2;1) = Gamma(c2)Gamma(s)/(Gamma(s+a3)Gamma(c2-a3)) 3F2(a3,c1-a1,c1-a2;c1,s+a3;1)",
            sample: |r| {
                let a1 = u(r, -0.9, 1.5);
                let a2 = u(r, -0.9, 1.5);
                let a3 = u(r, -0.9, 1.5);
                let c1 = u(r, 0.3, 2.5);
                let lo = (a3 + 0.5).max(a1 + a2 + a3 - c1 + 0.5).max(0.3);
                vec![a1, a2, a3, c1, lo + u(r, 0.0, 1.5)]
            },
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, &p[..3], &p[3..5])?, 1.0),
            rhs: |p| {
                let (f, s) = thomae_shift([j(p[0]), j(p[1]), j(p[2])], [j(p[3]), j(p[4])])?;
                Ok(f.value() * val(&s, 1.0)?)
            },
        },
        Identity {
            name: "dlmf_15_4_27",
            statement: "2F1(1,a;a+1;-1) = (a/2)(psi((a+1)/2) - psi(a/2))",
            sample: |r| vec![u(r, 0.2, 4.0)],
            lhs: |p| val(&PFQSpec::real(DEFAULT_ORDER, &[1.0, p[0]], &[p[0] + 1.0])?, -1.0),
            rhs: |p| Ok(special_sum_15_4_27(&j(p[0]))?.value()),
        },
        Identity {
            name: "gelfond",
            statement: "2F1(ib,-ib;1/2;1) + 2b 2F1(1/2+ib,1/2-ib;3/2;1) = e^(pi b)",
            sample: |r| vec![u(r, 0.2, 1.5)],
            lhs: |p| {
                let i = Complex64::new(0.0, p[0]);
                let s1 = PFQSpec::complex(DEFAULT_ORDER, &[i, -i], &[c(0.5)])?;
                let s2 = PFQSpec::complex(DEFAULT_ORDER, &[c(0.5) + i, c(0.5) - i], &[c(1.5)])?;
                Ok(val(&s1, 1.0)? + 2.0 * p[0] * val(&s2, 1.0)?)
            },
            rhs: |p| Ok(c((std::f64::consts::PI * p[0]).exp())),
        },
        Identity {
            name: "real_part_rep",
            statement: "3F2(1,a/2,(a+1)/2;c/2,(c+1)/2;-x^2) = Re 2F1(1,a;c;ix)",
            sample: |r| vec![u(r, -1.5, 2.5), u(r, 0.3, 3.0), u(r, 0.0, 0.9)],
            lhs: |p| {
                let (l, _) = real_part_rep(&j(p[0]), &j(p[1]))?;
                Ok(eval(&l, c(p[2]), DEFAULT_TOL)?.value())
            },
            rhs: |p| {
                let (_, r) = real_part_rep(&j(p[0]), &j(p[1]))?;
                Ok(c(eval_z(&r, Complex64::new(0.0, p[2]), DEFAULT_TOL)?.value().re))
            },
        },
        Identity {
            name: "binet_sqrt",
            statement: "((sqrt(1+x)-1)/x)^beta = 2^(-beta) 2F1(beta/2,(beta+1)/2;beta+1;-x)",
            sample: |r| vec![u(r, -0.8, 3.0), u(r, 0.05, 0.9)],
            lhs: |p| Ok(c((((1.0 + p[1]).sqrt() - 1.0) / p[1]).powf(p[0]))),
            rhs: |p| {
                let (k, s) = binet_sqrt_rep(&j(p[0]))?;
                Ok(k.value() * eval(&s, c(p[1]), DEFAULT_TOL)?.value())
            },
        },
        Identity {
            name: "trinomial_root",
            statement: "alpha y^n + y = a for y = a nFn-1(...)",
            sample: |r| {
                let n = r.gen_range(2..=6) as f64;
                vec![n, u(r, -0.1, 0.1), u(r, 0.05, 0.6)]
            },
            lhs: |p| {
                let y = trinomial_root(p[0] as u32, c(p[1]), c(p[2]))?;
                Ok(p[1] * y.powi(p[0] as i32) + y)
            },
            rhs: |p| Ok(c(p[2])),
        },
    ]
}

/// Draws a random non-degenerate parameter in (lo, hi) away from integers.
pub fn sample_param(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let x = u(rng, lo, hi);
        if (x - x.round()).abs() > 0.05 {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn pfaff_examples() {
        let at = PFQSpec::real(3, &[1.0, 0.5], &[1.5]).unwrap();
        let v = pfaff(&at, c(-1.0), 1e-14).unwrap().value();
        assert!(close(v, c(PI / 4.0), 1e-14));
        assert!(close(pfaff(&at, c(0.0), 1e-14).unwrap().value(), c(1.0), 0.0));
        assert!(matches!(pfaff_parts(&at, c(1.0)), Err(Error::BranchCut(_))));
    }

    #[test]
    fn pfaff_twice_returns_original() {
        let e = Jet::eps(3);
        let s = PFQSpec::jets(vec![e + 0.5, e + 0.5], vec![Jet::one(3)]).unwrap();
        let x = c(0.5);
        let (s1, w1, p1) = pfaff_parts(&s, x).unwrap();
        // Pfaff in the other upper parameter brings (c−a, c−b; c) back.
        let swapped = PFQSpec::jets(vec![s1.upper()[1], s1.upper()[0]], s1.lower().to_vec()).unwrap();
        let (s2, w2, p2) = pfaff_parts(&swapped, w1).unwrap();
        assert!((w2 - x).norm() < 1e-15);
        let lhs = eval_z(&s, x, 1e-14).unwrap();
        let rhs = p1 * p2 * eval_z(&s2, w2, 1e-14).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        // The prefactor pair is (1−x)^{−2ε}.
        let want = Jet::real(3, 0.5).powj(&(e * -2.0)).unwrap();
        assert!((p1 * p2).max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn kummer_examples() {
        let v = kummer_at_minus1(&j(1.0), &j(0.5)).unwrap().value();
        assert!(close(v, c(PI / 4.0), 1e-14));
        let printed = kummer_at_minus1_misprint(c(1.0), c(0.5)).unwrap();
        assert!(close(printed, c(PI.sqrt() / 4.0), 1e-14));
        let s = PFQSpec::real(3, &[0.5, 0.5], &[1.0]).unwrap();
        let series = eval_z(&s, c(-1.0), 1e-14).unwrap().value();
        assert!(close(kummer_at_minus1(&j(0.5), &j(0.5)).unwrap().value(), series, 1e-12));
        assert!(close(series, c(0.834_626_841_674_073_2), 1e-13));
    }

    #[test]
    fn sum_at_half_examples() {
        let v = sum_at_half(&j(0.5), &j(0.25)).unwrap().value();
        assert!(close(v, c(1.311_028_777_146_059_8), 1e-13));
        // b = (1+a)/2 makes the second upper parameter zero.
        assert!(close(sum_at_half(&j(0.7), &j(0.85)).unwrap().value(), c(1.0), 1e-13));
        let s = PFQSpec::real(3, &[1.0, 1.0], &[1.5]).unwrap();
        let series = eval_z(&s, c(0.5), 1e-14).unwrap().value();
        assert!(close(sum_at_half(&j(1.0), &j(0.5)).unwrap().value(), series, 1e-12));
        assert!(close(series, c(PI / 2.0), 1e-13));
    }

    #[test]
    fn clausen_instance() {
        let (f, g) = clausen_square(&j(0.25), &j(0.75)).unwrap();
        let l = eval_z(&f, c(0.5), 1e-14).unwrap().value().powi(2);
        let r = eval_z(&g, c(0.5), 1e-14).unwrap().value();
        assert!(close(l, r, 1e-12));
    }

    #[test]
    fn binet_examples() {
        let (k, s) = binet_sqrt_rep(&j(0.5)).unwrap();
        let v = k.value() * eval(&s, c(3.0), 1e-14).unwrap().value();
        assert!(close(v, c(1.0 / 3f64.sqrt()), 1e-12));
        let (k, s) = binet_sqrt_rep(&j(2.0)).unwrap();
        let v = k.value() * eval(&s, c(0.5), 1e-14).unwrap().value();
        assert!(close(v, c(((1.5f64.sqrt() - 1.0) / 0.5).powi(2)), 1e-13));
    }

    #[test]
    fn parity_split_zeta_and_eta() {
        let z2 = PFQSpec::real(3, &[1.0, 1.0, 1.0], &[2.0, 2.0]).unwrap();
        let split = parity_split(&z2).unwrap();
        let even = eval_z(&split.even, c(1.0), 1e-14).unwrap().value();
        assert!(close(even, c(PI * PI / 8.0), 1e-12));
        let odd = split.odd_coeff.value() * eval_z(&split.odd, c(1.0), 1e-14).unwrap().value();
        // η(2) = even − odd at x = −1.
        assert!(close(even - odd, c(PI * PI / 12.0), 1e-12));
        let at0 = split.eval(c(0.0), z2.power(), 1e-14).unwrap();
        assert_eq!(at0.value(), c(1.0));
    }

    #[test]
    fn real_part_examples() {
        let (l, r) = real_part_rep(&j(1.0), &j(1.5)).unwrap();
        let x = 1.0 / 3f64.sqrt();
        let lv = eval(&l, c(x), 1e-14).unwrap().value();
        let rv = eval_z(&r, Complex64::new(0.0, x), 1e-14).unwrap().value().re;
        let closed = (6.0 * 2f64.sqrt().atan() - 3f64.sqrt() * (5.0 - 2.0 * 6f64.sqrt()).ln()) / (8.0 * 2f64.sqrt());
        assert!((lv.re - closed).abs() < 1e-13 && (rv - closed).abs() < 1e-13);
        assert!((closed - 0.857_588_635_430_868_7).abs() < 1e-15);
        let (l, _) = real_part_rep(&j(2.0), &j(3.5)).unwrap();
        let lv = eval(&l, c(x), 1e-14).unwrap().value().re;
        let s6 = 6f64.sqrt();
        let closed = -22.5 + 45.0 * 2f64.sqrt() / 8.0 * 2f64.sqrt().atan() + 45.0 / 16.0 * s6 * (5.0 + 2.0 * s6).ln();
        assert!((lv - closed).abs() < 1e-11);
        assert!((lv - 0.892_494_270_128_195_2).abs() < 1e-13);
    }

    #[test]
    fn thomae_arcsin_cubed_instance() {
        let e = Jet::eps(3);
        let a = [-e + 0.5, e + 0.5, Jet::real(3, -0.5)];
        let cc = [Jet::real(3, 0.5), Jet::real(3, 1.5)];
        let (f, s) = thomae_shift(a, cc).unwrap();
        assert!(f.max_abs_diff(&Jet::real(3, PI / 4.0)) < 1e-14);
        let want = PFQSpec::jets(vec![Jet::real(3, -0.5), e, -e], vec![Jet::real(3, 0.5), Jet::one(3)]).unwrap();
        for (x, y) in s.upper().iter().zip(want.upper()) {
            assert!(x.max_abs_diff(y) < 1e-15);
        }
        for (x, y) in s.lower().iter().zip(want.lower()) {
            assert!(x.max_abs_diff(y) < 1e-15);
        }
        // a3 = 0 leaves only the Γ ratio.
        let (f, s) = thomae_shift([j(0.3), j(0.4), j(0.0)], [j(1.2), j(1.7)]).unwrap();
        assert!(close(f.value() * eval_z(&s, c(1.0), 1e-13).unwrap().value(), c(1.0), 1e-13));
    }

    #[test]
    fn log_multiplier_examples() {
        let (l, r) = log_multiplier(c(1.0), c(0.5)).unwrap();
        let x = 1.0;
        let lv = x * eval_z(&l, c(-x * x), 1e-14).unwrap().extract(1).unwrap();
        let rv = (1.0 / (1.0 + x * x)).ln() * x * eval_z(&r, c(-x * x), 1e-14).unwrap().value();
        assert!(close(lv, rv, 1e-10));
        assert!(close(rv, c(-(2f64.ln()) * PI / 4.0), 1e-13));
    }

    #[test]
    fn special_sums() {
        let v = special_sum_15_4_27(&j(1.0)).unwrap().value();
        assert!(close(v, c(2f64.ln()), 1e-14));
        let a = (Jet::eps(3) + 1.0) * 0.5;
        let d = special_sum_15_4_27(&a).unwrap();
        let p = |n, x: f64| crate::numkernel::polygamma(n, c(x)).unwrap();
        let want = (p(0, 0.75) - p(0, 0.25)) * 0.25 + (p(1, 0.75) - p(1, 0.25)) / 16.0;
        assert!(close(d.extract(1).unwrap(), want, 1e-13));
        let s = special_sum_15_8_24_derived(&Jet::eps(3)).unwrap();
        assert!(close(s.value(), c(0.906_493_919_846_333_2), 1e-14));
        assert!(close(s.extract(1).unwrap(), c(-0.340_865_392_047_178_9), 1e-13));
        let s2 = special_sum_15_8_24_derived(&Jet::eps(2)).unwrap();
        assert!((s2.extract(1).unwrap() - s.extract(1).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn trinomial_examples() {
        let y = trinomial_root(5, c(0.1), c(0.3)).unwrap();
        assert!((0.1 * y.powi(5) + y - 0.3).norm() < 1e-12);
        assert_eq!(trinomial_root(3, c(0.0), c(0.7)).unwrap(), c(0.7));
        let y = trinomial_root(2, c(0.2), c(0.5)).unwrap();
        let q = (-1.0 + (1.0f64 + 4.0 * 0.2 * 0.5).sqrt()) / (2.0 * 0.2);
        assert!((y - q).norm() < 1e-12);
        let s = trinomial_spec(5, c(1.0)).unwrap();
        assert_eq!(s.to_string(), "4F3(1/5,2/5,3/5,4/5;1/2,3/4,5/4;-3125/256*x^4)");
    }

    #[test]
    fn catalog_entries_match_references() {
        let cases: &[(&str, f64, f64)] = &[
            ("ln_pow(1,0)", 0.5, 1e-13),
            ("ln_pow(2,1/2)", -0.4, 1e-12),
            ("half_sqrt_log(2)", 0.6, 1e-12),
            ("arcsin_even(1)", 0.5, 1e-12),
            ("arcsin_even(2)", 0.7, 1e-11),
            ("arcsin_odd(0)", 0.5, 1e-13),
            ("arcsin_cubed", 0.8, 1e-11),
            ("harmonic_egf", 1.5, 1e-12),
            ("polylog(2)", 0.5, 1e-12),
            ("polylog(3)", -0.7, 1e-12),
            ("ti", 0.9, 1e-12),
            ("zeta(2)", 0.0, 1e-12),
            ("zeta(5)", 0.0, 1e-12),
            ("eta(2)", 0.0, 1e-12),
            ("catalan_3F2", 0.0, 1e-12),
            ("lemniscate", 0.0, 1e-12),
            ("apery", 0.0, 1e-12),
            ("gelfond", 0.0, 1e-10),
        ];
        for &(name, x, tol) in cases {
            let r = catalog(name).unwrap();
            let v = r.eval(x, 1e-14).unwrap();
            let want = r.reference(x).unwrap();
            assert!(close(v, want, tol), "{name}: {v} vs {want}");
        }
        let li2 = catalog("polylog(2)").unwrap().eval(0.5, 1e-14).unwrap();
        let ln2 = 2f64.ln();
        assert!(close(li2, c(PI * PI / 12.0 - ln2 * ln2 / 2.0), 1e-13));
        assert!(close(catalog("arcsin_even(1)").unwrap().eval(0.5, 1e-14).unwrap(), c(0.5f64.asin().powi(2)), 1e-12));
        assert!(catalog("arcsin_cubed").unwrap().formula.contains("-3/2"));
    }

    #[test]
    fn catalog_rejects_unknown() {
        assert!(matches!(catalog("nope"), Err(Error::UnknownName(_))));
        assert!(matches!(catalog("zeta(1)"), Err(Error::Precondition(_))));
    }

    #[test]
    fn registry_smoke() {
        for id in identities() {
            let rep = id.check(5, 7).unwrap();
            assert!(rep.max_residual <= 1e-9, "{}: {:?}", id.name, rep);
        }
    }
}
