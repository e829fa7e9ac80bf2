//! Rows for `verify`: each compares an engine value with an independent
//! reference (closed form or quadrature) under a fixed tolerance.

use std::f64::consts::{LN_2, PI, SQRT_2};

use hyperftc::hypseries::{eval, eval_at_one, eval_z, gauss_sum, PFQSpec};
use hyperftc::integrate::{self, definite_0_to_1, definite_0_to_inf, integrand_catalog};
use hyperftc::multivar::{self, IalphaCase, IalphaVariant};
use hyperftc::numkernel::{gamma, polygamma};
use hyperftc::transforms::{self, identities, parity_split};
use hyperftc::{oracle, Jet};
use num_complex::Complex64;
use num_rational::Rational64;

use crate::record::Record;
use crate::Suite;

const TOL: f64 = 1e-13;
const ORACLE_TOL: f64 = 1e-12;
const IDENTITY_SEED: u64 = 0x5eed;

pub struct Row {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub reference_label: String,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Row {
    fn new(name: &str, value: f64, reference: f64, label: &str, tol: f64) -> Row {
        let error = (value - reference).abs();
        Row {
            name: name.into(),
            value,
            reference,
            reference_label: label.into(),
            error,
            tol,
            pass: error.is_finite() && error <= tol,
            note: None,
        }
    }

    fn failed(name: &str, why: String) -> Row {
        Row {
            name: name.into(),
            value: f64::NAN,
            reference: f64::NAN,
            reference_label: why,
            error: f64::INFINITY,
            tol: 0.0,
            pass: false,
            note: None,
        }
    }

    pub fn record(&self) -> Record {
        let mut r = Record::new(self.name.clone(), Complex64::new(finite_or_zero(self.value), 0.0));
        r.closed_form = Some(self.reference_label.clone());
        r.oracle = self.reference.is_finite().then_some(self.reference);
        r.discrepancy = self.error.is_finite().then_some(self.error);
        r.trace.push(format!("{} tol {:e}", if self.pass { "PASS" } else { "FAIL" }, self.tol));
        r.trace.extend(self.note.clone());
        r
    }
}

fn finite_or_zero(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        0.0
    }
}

type Res<T> = hyperftc::Result<T>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn g(x: f64) -> Res<f64> {
    Ok(gamma(c(x))?.re)
}

fn spec(name: &str) -> Res<integrate::IntegrandSpec> {
    integrand_catalog()?
        .into_iter()
        .find(|c| c.name == name)
        .map(|c| c.spec)
        .ok_or_else(|| hyperftc::Error::UnknownName(name.into()))
}

fn sqrt1p_m1(x: f64) -> f64 {
    x / ((1.0 + x).sqrt() + 1.0)
}

fn halfline(f: impl Fn(f64) -> f64) -> Res<f64> {
    Ok(oracle::quad_halfline(f, ORACLE_TOL)?.value)
}

fn unit(f: impl Fn(f64) -> f64) -> Res<f64> {
    Ok(oracle::quad_finite(f, 0.0, 1.0, ORACLE_TOL)?.value)
}

type Group = fn() -> Res<Vec<Row>>;

fn halfline_rational() -> Res<Vec<Row>> {
    let a = definite_0_to_inf(&spec("inv_1_plus_x2")?, TOL)?.scalar.re;
    let b = definite_0_to_inf(&spec("inv_1_plus_x3")?, TOL)?.scalar.re;
    Ok(vec![
        Row::new("int_0^inf dx/(1+x^2)", a, PI / 2.0, "π/2", 1e-10 * PI / 2.0),
        Row::new("Gamma(1/2)^2", g(0.5)?.powi(2), PI, "π", 1e-12),
        Row::new("int_0^inf dx/(1+x^3)", b, 2.0 * PI / (3.0 * 3f64.sqrt()), "2π/(3√3)", 1e-10),
        Row::new("int_0^inf dx/(1+x^3) oracle", b, halfline(|x| 1.0 / (1.0 + x * x * x))?, "quadrature", 1e-9),
    ])
}

fn nested_radical() -> Res<Vec<Row>> {
    let v = definite_0_to_inf(&spec("nested_radical")?, TOL)?.scalar.re;
    let closed = 4.0 * g(0.25)?.powi(2) / (3.0 * (2.0 - SQRT_2).sqrt() * PI.sqrt());
    let q = halfline(|x| sqrt1p_m1(x).sqrt() * x.powf(-11.0 / 8.0))?;
    Ok(vec![
        Row::new("nested radical", v, closed, "4Γ²(1/4)/(3√(2−√2)√π)", 1e-10),
        Row::new("nested radical oracle", v, q, "quadrature", 1e-8),
    ])
}

fn general_laws() -> Res<Vec<Row>> {
    let mut rows = Vec::new();
    for (a, b) in [(-0.6, 1.0), (-0.35, 0.5)] {
        let v = definite_0_to_inf(&integrate::sqrt_law_integrand(a, b)?, TOL)?.scalar.re;
        let q = halfline(|x| x.powf(a - 1.0) * sqrt1p_m1(x).powf(b))?;
        rows.push(Row::new(&format!("sqrt law ({a}, {b}) formula"), integrate::sqrt_law_closed(a, b)?, q, "quadrature", 1e-7));
        rows.push(Row::new(&format!("sqrt law ({a}, {b}) engine"), v, q, "quadrature", 1e-7));
    }
    let v = definite_0_to_inf(&spec("trinomial")?, TOL)?.scalar.re;
    let q = halfline(|x| x.powf(-1.4) * oracle::trinomial_root_newton(5, 2.0, x).unwrap_or(f64::NAN))?;
    rows.push(Row::new("trinomial law formula", integrate::trinomial_closed(-1.4, 2.0)?, q, "quadrature", 1e-6));
    rows.push(Row::new("trinomial law engine", v, q, "quadrature", 1e-6));
    Ok(rows)
}

fn arcsin_cubed() -> Res<Vec<Row>> {
    let v = definite_0_to_1(&integrate::arcsin_cubed_integrand()?, TOL)?.scalar.re;
    Ok(vec![
        Row::new("int_0^1 (arcsin x/x)^3", v, 1.5 * PI * LN_2 - PI.powi(3) / 16.0, "(3/2)π ln2 − π³/16", 1e-8),
        Row::new("int_0^1 (arcsin x/x)^3 oracle", v, unit(|x| (x.asin() / x).powi(3))?, "quadrature", 1e-8),
    ])
}

fn zeta_values() -> Res<Vec<Row>> {
    let e = Jet::eps(2);
    let z2a = -gauss_sum(&e, &(-e), &Jet::one(2))?.extract(2)?.re;
    let s = PFQSpec::real(0, &[1.0, 1.0, 1.0], &[2.0, 2.0])?;
    let z2b = eval_at_one(&s, TOL)?.value().re;
    let eta = parity_split(&s)?.eval(c(-1.0), Rational64::from_integer(1), TOL)?.value().re;
    let s3 = PFQSpec::real(0, &[1.0; 4], &[2.0; 3])?;
    let z3 = eval_at_one(&s3, TOL)?.value().re;
    let n = 10_000u32;
    let partial: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
    let nf = n as f64;
    let z3_ref = partial + 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3)) + 1.0 / (4.0 * nf.powi(4));
    Ok(vec![
        Row::new("zeta(2) from -[eps^2] 2F1(eps,-eps;1;1)", z2a, PI * PI / 6.0, "π²/6", 1e-8),
        Row::new("zeta(2) from 3F2(1,1,1;2,2;1)", z2b, PI * PI / 6.0, "π²/6", 1e-8),
        Row::new("eta(2) from the parity split", eta, PI * PI / 12.0, "π²/12", 1e-8),
        Row::new("zeta(3) from 4F3(1,1,1,1;2,2,2;1)", z3, z3_ref, "direct sum with tail", 1e-8),
    ])
}

fn catalan() -> Res<Vec<Row>> {
    let i = Complex64::new(0.0, 1.0);
    let s = PFQSpec::real(0, &[1.0, 1.0, 1.0], &[2.0, 2.0])?;
    let a = eval_z(&s, i, TOL)?.value().re;
    let e = Jet::eps(2);
    let b = eval_z(&PFQSpec::jets(vec![e, e], vec![Jet::one(2)])?, i, TOL)?.extract(2)?.im;
    let psi = (polygamma(1, c(0.25))?.re - PI * PI) / 8.0;
    let d = definite_0_to_1(&spec("arctan_over_x")?, TOL)?.scalar.re;
    Ok(vec![
        Row::new("Catalan: Re 3F2(1,1,1;2,2;i)", a, psi, "(ψ′(1/4)−π²)/8", 1e-8),
        Row::new("Catalan: Im [eps^2] 2F1(eps,eps;1;i)", b, psi, "(ψ′(1/4)−π²)/8", 1e-8),
        Row::new("Catalan: int_0^1 arctan(x)/x", d, psi, "(ψ′(1/4)−π²)/8", 1e-8),
    ])
}

fn k_integrals() -> Res<Vec<Row>> {
    let a = definite_0_to_1(&integrate::log_k_integrand(false)?, TOL)?.scalar.re;
    let qa = oracle::quad_finite_ends(
        |t, _, om| -t * (om.ln() + t.ln_1p()) * oracle::elliptic_k_from_complement((om * (1.0 + t)).sqrt()),
        0.0,
        1.0,
        ORACLE_TOL,
    )?
    .value;
    let b = definite_0_to_1(&integrate::log_k_integrand(true)?, TOL)?.scalar.re;
    let want_b = ((2.0 - LN_2) * g(0.25)?.powi(2) + 4.0 * (LN_2 - 4.0) * g(0.75)?.powi(2)) / (4.0 * (2.0 * PI).sqrt());
    let qb = unit(|x| -x * (x * x).ln_1p() * oracle::elliptic_k_imag(x))?;
    Ok(vec![
        Row::new("int x ln(1/(1-x^2)) K(x)", a, 4.0 * (1.0 - LN_2), "4(1−ln2)", 1e-8),
        Row::new("int x ln(1/(1-x^2)) K(x) oracle", a, qa, "quadrature with AGM", 1e-8),
        Row::new("int x ln(1/(1+x^2)) K(ix)", b, want_b, "((2−ln2)Γ²(1/4)+4(ln2−4)Γ²(3/4))/(4√(2π))", 1e-8),
        Row::new("int x ln(1/(1+x^2)) K(ix) oracle", b, qb, "quadrature with AGM", 1e-8),
    ])
}

fn arctan_log() -> Res<Vec<Row>> {
    let alpha = 0.25;
    let v = definite_0_to_inf(&integrate::arctan_log_integrand(alpha)?, TOL)?.scalar.re;
    let q = halfline(|x| -x.atan() * (x * x).ln_1p() / x.powf(2.0 * alpha + 1.0))?;
    Ok(vec![
        Row::new("arctan-log at alpha=1/4 engine", v, q, "quadrature", 1e-7),
        Row::new("arctan-log at alpha=1/4 digamma form", integrate::arctan_log_closed(alpha)?, q, "quadrature", 1e-7),
    ])
}

fn ialpha() -> Res<Vec<Row>> {
    let mut rows = Vec::new();
    let it = multivar::ialpha_closed(IalphaCase::ITrue)?;
    rows.push(Row::new("I_true", it, PI / (2.0 * 6f64.sqrt()), "π/(2√6)", 1e-9));
    rows.push(Row::new("I_true oracle", it, multivar::ialpha_case_oracle(IalphaCase::ITrue, ORACLE_TOL)?, "quadrature", 1e-9));
    for a in [0.3, 1.0 / 3f64.sqrt(), 2.0] {
        let q = multivar::ialpha_case_oracle(IalphaCase::IAlphaTrue(a), ORACLE_TOL)?;
        rows.push(Row::new(&format!("I_alpha,true({a:.6})"), a.atan() / (SQRT_2 * a), q, "quadrature", 1e-9));
    }
    let cases = [
        ("I_0", IalphaCase::I0, 1e-7),
        ("I_1", IalphaCase::I1, 1e-7),
        ("I_-1", IalphaCase::IMinus1, 1e-7),
        ("I_-2", IalphaCase::IMinusN(2), 1e-7),
        ("I_2", IalphaCase::I2, 1e-7),
        ("dI/dalpha at 0", IalphaCase::DerivativeAtZero, 1e-5),
    ];
    for (name, case, tol) in cases {
        rows.push(Row::new(name, multivar::ialpha_closed(case)?, multivar::ialpha_case_oracle(case, ORACLE_TOL)?, "quadrature", tol));
    }
    for a in [-1.0, 0.5, 1.0, 2.0] {
        let s = multivar::ialpha_series(a, IalphaVariant::Direct, 1e-14)?;
        rows.push(Row::new(&format!("F1-tilde series for I_{a}"), s, multivar::ialpha_oracle(a, ORACLE_TOL)?, "quadrature", 1e-7));
    }
    Ok(rows)
}

fn example_3f2() -> Res<Vec<Row>> {
    let s = PFQSpec::real(0, &[2.0, 0.75, 1.25], &[1.75, 2.25])?.with_argument(c(-1.0 / 3.0), Rational64::from_integer(1))?;
    let v = eval(&s, c(1.0), TOL)?.value().re;
    let closed = multivar::eval_3f2_example_closed(3f64.powf(-0.25))?;
    Ok(vec![Row::new("3F2(2,3/4,5/4;7/4,9/4;-1/3)", v, closed, "elementary closed form", 1e-10)])
}

const REFERENCE_GROUPS: [(&str, Group); 11] = [
    ("half-line rational integrals", halfline_rational),
    ("nested radical", nested_radical),
    ("general laws", general_laws),
    ("arcsin cubed", arcsin_cubed),
    ("zeta values", zeta_values),
    ("Catalan", catalan),
    ("K integrals", k_integrals),
    ("arctan-log", arctan_log),
    ("I_alpha", ialpha),
    ("3F2 example", example_3f2),
    ("FTC", ftc),
];

fn ftc() -> Res<Vec<Row>> {
    let mut rows = Vec::new();
    for ci in integrand_catalog()? {
        let form = integrate::antiderivative(&ci.spec)?;
        let r = integrate::verify_ftc(&form, &ci.points)?;
        rows.push(Row::new(&format!("FTC residual {}", ci.name), r, 0.0, "0", 1e-7));
    }
    Ok(rows)
}

/// The −1 and 1/2 sums are often misprinted with denominator
/// Γ(1+a/2−b)Γ((1+a)/2−b). Both are checked in corrected form; this reports
/// where the misprint lands at a = 1, b = 1/2, where the sums are π/4 and π/2.
fn misprint_note(name: &str) -> Option<String> {
    let (a, b) = (1.0, 0.5);
    let wrong = transforms::kummer_at_minus1_misprint(c(a), c(b)).ok()?.re;
    let (wrong, exact) = match name {
        "kummer_minus_one" => (wrong, PI / 4.0),
        "sum_at_half" => (wrong * 2f64.powf(a), PI / 2.0),
        _ => return None,
    };
    Some(format!("misprinted denominator gives {wrong:.15} at a=1, b=1/2; the sum is {exact:.15}"))
}

fn identity_rows() -> Vec<Row> {
    identities()
        .into_iter()
        .map(|id| {
            let mut row = match id.check(100, IDENTITY_SEED) {
                Ok(r) => Row::new(&format!("identity {}", id.name), r.max_residual, 0.0, id.statement, 1e-9),
                Err(e) => Row::failed(&format!("identity {}", id.name), e.to_string()),
            };
            row.note = misprint_note(id.name);
            row
        })
        .collect()
}

pub fn run(suite: Suite) -> Vec<Row> {
    let mut rows = Vec::new();
    if matches!(suite, Suite::Reference | Suite::All) {
        for (name, group) in REFERENCE_GROUPS {
            match group() {
                Ok(r) => rows.extend(r),
                Err(e) => rows.push(Row::failed(name, e.to_string())),
            }
        }
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        rows.extend(identity_rows());
    }
    rows
}

pub fn table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let pad = width - r.name.chars().count();
        out.push_str(&format!(
            "{} {}{}  value {:>22.15e}  ref {:>22.15e}  err {:.2e} (tol {:.0e})  {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            " ".repeat(pad),
            r.value,
            r.reference,
            r.error,
            r.tol,
            r.reference_label
        ));
        if let Some(n) = &r.note {
            out.push_str(&format!("     note: {n}\n"));
        }
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("{} rows, {} passed, {} failed\n", rows.len(), rows.len() - failed, failed));
    out
}
