//! Appell F1, F2 and the two-outer-pair generalization F̃1 as double
//! series, and the I_α family of integrals built on F̃1.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypseries::{self, PFQSpec};
use crate::jets::Jet;
use crate::oracle;

/// Largest block side tried by [`eval_double`].
pub const MAX_BLOCK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleKind {
    F1,
    F2,
    F1Tilde,
}

/// prefactor·Σ_{j,k} O(j+k)·X(j)·Y(k)·x^j y^k where O is a ratio of
/// Pochhammers at j+k and X, Y are pFq-type coefficients in j and k.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleSeriesSpec {
    pub kind: DoubleKind,
    pub outer_upper: Vec<Jet>,
    pub outer_lower: Vec<Jet>,
    pub x_upper: Vec<Jet>,
    pub x_lower: Vec<Jet>,
    pub y_upper: Vec<Jet>,
    pub y_lower: Vec<Jet>,
    pub x: Complex64,
    pub y: Complex64,
    pub prefactor: Complex64,
}

fn jr(order: usize, v: f64) -> Jet {
    Jet::real(order, v)
}

fn jets(order: usize, v: &[f64]) -> Vec<Jet> {
    v.iter().map(|&a| jr(order, a)).collect()
}

impl DoubleSeriesSpec {
    /// F1(a; b1, b2; c; x, y).
    pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, x: Complex64, y: Complex64) -> Self {
        DoubleSeriesSpec {
            kind: DoubleKind::F1,
            outer_upper: jets(0, &[a]),
            outer_lower: jets(0, &[c]),
            x_upper: jets(0, &[b1]),
            x_lower: vec![],
            y_upper: jets(0, &[b2]),
            y_lower: vec![],
            x,
            y,
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    /// F2(a; b1, b2; c1, c2; x, y).
    pub fn appell_f2(a: f64, b1: f64, b2: f64, c1: f64, c2: f64, x: Complex64, y: Complex64) -> Self {
        DoubleSeriesSpec {
            kind: DoubleKind::F2,
            outer_upper: jets(0, &[a]),
            outer_lower: vec![],
            x_upper: jets(0, &[b1]),
            x_lower: jets(0, &[c1]),
            y_upper: jets(0, &[b2]),
            y_lower: jets(0, &[c2]),
            x,
            y,
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    /// F̃1(α1, α2; γ1, γ2; a1, a2; c; b; x, y) with jet parameters.
    pub fn f1_tilde(outer: ([Jet; 2], [Jet; 2]), inner_x: ([Jet; 2], Jet), b: Jet, x: Complex64, y: Complex64) -> Self {
        DoubleSeriesSpec {
            kind: DoubleKind::F1Tilde,
            outer_upper: outer.0.to_vec(),
            outer_lower: outer.1.to_vec(),
            x_upper: inner_x.0.to_vec(),
            x_lower: vec![inner_x.1],
            y_upper: vec![b],
            y_lower: vec![],
            x,
            y,
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    fn order(&self) -> usize {
        self.outer_upper
            .iter()
            .chain(&self.outer_lower)
            .chain(&self.x_upper)
            .chain(&self.x_lower)
            .chain(&self.y_upper)
            .chain(&self.y_lower)
            .map(|j| j.order())
            .max()
            .unwrap_or(0)
    }

    pub fn in_domain(&self) -> bool {
        match self.kind {
            DoubleKind::F1 | DoubleKind::F1Tilde => self.x.norm() < 1.0 && self.y.norm() < 1.0,
            DoubleKind::F2 => self.x.norm() + self.y.norm() < 1.0,
        }
    }
}

/// t_n = Π(up)_n/(Π(lo)_n·(n!)^{fact}) for n < len. Each step divides with
/// removable-zero cancellation so that parameters sitting at a pole of a
/// lower Pochhammer, but approached along a jet direction, keep their limit.
fn coefficient_run(up: &[Jet], lo: &[Jet], factorial: bool, order: usize, len: usize) -> Result<Vec<Jet>> {
    let mut out = Vec::with_capacity(len);
    let mut t = Jet::one(order);
    out.push(t);
    for n in 1..len {
        let m = (n - 1) as f64;
        let mut num = Jet::one(order);
        for a in up {
            num *= a.with_order(order) + m;
        }
        let mut den = Jet::one(order);
        for c in lo {
            den *= c.with_order(order) + m;
        }
        if factorial {
            den = den * n as f64;
        }
        t *= num.div_removable(&den)?;
        out.push(t);
    }
    Ok(out)
}

fn block_sum(o: &[Jet], xs: &[Jet], ys: &[Jet], x: Complex64, y: Complex64, n: usize, order: usize) -> (Jet, f64) {
    let mut s = Jet::zero(order);
    let mut edge = 0.0f64;
    let mut xp = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let mut yp = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let t = o[j + k] * xs[j] * ys[k] * (xp * yp);
            if j == n - 1 || k == n - 1 {
                edge = edge.max(t.value().norm());
            }
            s += t;
            yp *= y;
        }
        xp *= x;
    }
    (s, edge)
}

/// Sums in N×N blocks with N doubling until the block sum settles and the
/// block boundary terms fall below `tol`.
pub fn eval_double(spec: &DoubleSeriesSpec, tol: f64) -> Result<Jet> {
    if !spec.in_domain() {
        return Err(Error::Divergent(format!(
            "{:?} series at ({}, {}) is outside its convergence domain",
            spec.kind, spec.x, spec.y
        )));
    }
    let order = spec.order();
    let mut n = 16;
    let mut prev: Option<Complex64> = None;
    while n <= MAX_BLOCK {
        let o = coefficient_run(&spec.outer_upper, &spec.outer_lower, false, order, 2 * n)?;
        let xs = coefficient_run(&spec.x_upper, &spec.x_lower, true, order, n)?;
        let ys = coefficient_run(&spec.y_upper, &spec.y_lower, true, order, n)?;
        let (s, edge) = block_sum(&o, &xs, &ys, spec.x, spec.y, n, order);
        let v = s.value();
        let scale = v.norm().max(1e-300);
        if let Some(p) = prev {
            if (v - p).norm() <= tol * scale && edge <= tol * scale {
                return Ok(s * spec.prefactor);
            }
        }
        prev = Some(v);
        n *= 2;
    }
    Err(Error::NonConvergence { terms: MAX_BLOCK * MAX_BLOCK, context: format!("{:?} double series", spec.kind) })
}

/// Which of the two equivalent F̃1 forms of I_α to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IalphaVariant {
    /// Inner lists (α/2, (α+1)/2; α+1) and (α/2).
    Direct,
    /// Inner lists (1+α/2, (α+1)/2; α+1) and ((α−1)/2), after Pfaff twice.
    Pfaff,
}

/// I_α = 2^{−α}·F̃1(1, 1/2; 3/4, 5/4; …; −1/3, −1/3). Parameters carry a
/// first-order ε so that α = −1, −2, … is reached as a limit.
pub fn ialpha_series_rep(alpha: f64, variant: IalphaVariant) -> DoubleSeriesSpec {
    let o = 1;
    let a = Jet::linear(o, Complex64::new(alpha, 0.0), Complex64::new(1.0, 0.0));
    let outer = ([jr(o, 1.0), jr(o, 0.5)], [jr(o, 0.75), jr(o, 1.25)]);
    let half = |j: Jet| j * 0.5;
    let (inner, b) = match variant {
        IalphaVariant::Direct => (([half(a), half(a + 1.0)], a + 1.0), half(a)),
        IalphaVariant::Pfaff => (([half(a) + 1.0, half(a + 1.0)], a + 1.0), half(a - 1.0)),
    };
    let third = Complex64::new(-1.0 / 3.0, 0.0);
    let mut s = DoubleSeriesSpec::f1_tilde(outer, inner, b, third, third);
    s.prefactor = Complex64::new(2f64.powf(-alpha), 0.0);
    s
}

/// Value of I_α from its F̃1 representation.
pub fn ialpha_series(alpha: f64, variant: IalphaVariant, tol: f64) -> Result<f64> {
    Ok(eval_double(&ialpha_series_rep(alpha, variant), tol)?.value().re)
}

/// φ(x) = 1 + 4a²x²/(1+x²)².
pub fn phi(a: f64, x: f64) -> f64 {
    let d = 1.0 + x * x;
    1.0 + 4.0 * a * a * x * x / (d * d)
}

/// (1+x²)^{−3/2}(φ+√φ)^{−α} on [0, ∞) with a² = 1/3.
pub fn ialpha_integrand_halfline(alpha: f64, x: f64) -> f64 {
    let p = phi(1.0 / 3f64.sqrt(), x);
    (1.0 + x * x).powf(-1.5) * (p + p.sqrt()).powf(-alpha)
}

/// (√φ+φ)^{−α} on [0, 1] after t = x/√(1+x²), φ = 1 + (4/3)t²(1−t²).
pub fn ialpha_integrand_unit(alpha: f64, t: f64) -> f64 {
    let p = 1.0 + 4.0 / 3.0 * t * t * (1.0 - t * t);
    (p + p.sqrt()).powf(-alpha)
}

/// The two hypergeometric forms of the unit-interval integrand, before and
/// after applying Pfaff twice.
pub fn ialpha_integrand_hyp(alpha: f64, t: f64, variant: IalphaVariant) -> Result<f64> {
    let u = 4.0 / 3.0 * t * t * (1.0 - t * t);
    let (up, pw) = match variant {
        IalphaVariant::Direct => ([alpha / 2.0, (alpha + 1.0) / 2.0], -alpha / 2.0),
        IalphaVariant::Pfaff => ([1.0 + alpha / 2.0, (alpha + 1.0) / 2.0], -(alpha - 1.0) / 2.0),
    };
    let spec = PFQSpec::real(0, &up, &[alpha + 1.0])?;
    let f = hypseries::eval(&spec, Complex64::new(-u, 0.0), 1e-15)?.value().re;
    Ok(2f64.powf(-alpha) * (1.0 + u).powf(pw) * f)
}

/// Oracle value of I_α on the unit interval.
pub fn ialpha_oracle(alpha: f64, tol: f64) -> Result<f64> {
    Ok(oracle::quad_finite(|t| ialpha_integrand_unit(alpha, t), 0.0, 1.0, tol)?.value)
}

/// (1+x²)^{−3/2}/√(φ_a + φ_a^{3/2}).
pub fn ialpha_true_integrand(a: f64, x: f64) -> f64 {
    let p = phi(a, x);
    (1.0 + x * x).powf(-1.5) / (p + p.powf(1.5)).sqrt()
}

/// Cases with a closed form in single-variable functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IalphaCase {
    I0,
    I1,
    IMinus1,
    IMinusN(u32),
    I2,
    DerivativeAtZero,
    ITrue,
    IAlphaTrue(f64),
}

impl IalphaCase {
    pub fn parse(name: &str) -> Result<Self> {
        let n = name.trim();
        Ok(match n {
            "I0" => IalphaCase::I0,
            "I1" => IalphaCase::I1,
            "Iminus1" => IalphaCase::IMinus1,
            "I2" => IalphaCase::I2,
            "dIdalpha_at_0" => IalphaCase::DerivativeAtZero,
            "Itrue" => IalphaCase::ITrue,
            _ => {
                if let Some(rest) = n.strip_prefix("Iminus_n(").and_then(|r| r.strip_suffix(')')) {
                    IalphaCase::IMinusN(rest.trim().parse().map_err(|_| Error::UnknownName(n.into()))?)
                } else if let Some(rest) = n.strip_prefix("Ialpha_true(").and_then(|r| r.strip_suffix(')')) {
                    IalphaCase::IAlphaTrue(rest.trim().parse().map_err(|_| Error::UnknownName(n.into()))?)
                } else {
                    return Err(Error::UnknownName(n.into()));
                }
            }
        })
    }
}

fn pfq_third(up: &[f64], lo: &[f64]) -> Result<f64> {
    let spec = PFQSpec::real(0, up, lo)?;
    Ok(hypseries::eval(&spec, Complex64::new(-1.0 / 3.0, 0.0), 1e-15)?.value().re)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Closed forms for the integrable cases of I_α.
pub fn ialpha_closed(case: IalphaCase) -> Result<f64> {
    let s6 = 6f64.sqrt();
    let at2 = SQRT_2.atan();
    let l = (5.0 + 2.0 * s6).ln();
    Ok(match case {
        IalphaCase::I0 => 1.0,
        IalphaCase::I1 => 0.5 * pfq_third(&[1.0, 0.5, 1.5, 1.0], &[2.0, 0.75, 1.25])?,
        IalphaCase::IMinus1 => pfq_third(&[1.0, 0.5, -0.5], &[0.75, 1.25])? + 53.0 / 45.0,
        IalphaCase::IMinusN(n) => {
            let mut s = 0.0;
            for k in 0..=n {
                s += binomial(n, k) * pfq_third(&[-((n + k) as f64) / 2.0, 1.0, 0.5], &[0.75, 1.25])?;
            }
            s
        }
        IalphaCase::I2 => {
            3.0 * SQRT_2 / 8.0 * at2 + s6 / 16.0 * l - 0.75 * pfq_third(&[1.0, 1.0, 0.5, 2.5], &[0.75, 1.25, 3.0])?
        }
        IalphaCase::DerivativeAtZero => {
            0.5f64.ln() + 2.0 - SQRT_2 / 2.0 * at2 - s6 / 4.0 * l
                - 2.0 / 45.0 * pfq_third(&[1.0, 1.0, 1.5, 1.5], &[2.0, 1.75, 2.25])?
        }
        IalphaCase::ITrue => PI / (2.0 * s6),
        IalphaCase::IAlphaTrue(a) => {
            if a == 0.0 {
                1.0 / SQRT_2
            } else {
                a.atan() / (SQRT_2 * a)
            }
        }
    })
}

/// Oracle value for a case: quadrature of the defining integral, or a
/// central difference of quadratures for the derivative.
pub fn ialpha_case_oracle(case: IalphaCase, tol: f64) -> Result<f64> {
    match case {
        IalphaCase::I0 => ialpha_oracle(0.0, tol),
        IalphaCase::I1 => ialpha_oracle(1.0, tol),
        IalphaCase::IMinus1 => ialpha_oracle(-1.0, tol),
        IalphaCase::IMinusN(n) => ialpha_oracle(-(n as f64), tol),
        IalphaCase::I2 => ialpha_oracle(2.0, tol),
        IalphaCase::DerivativeAtZero => {
            let h = 1e-4;
            Ok((ialpha_oracle(h, tol)? - ialpha_oracle(-h, tol)?) / (2.0 * h))
        }
        IalphaCase::ITrue => ialpha_case_oracle(IalphaCase::IAlphaTrue(1.0 / 3f64.sqrt()), tol),
        IalphaCase::IAlphaTrue(a) => Ok(oracle::quad_halfline(|x| ialpha_true_integrand(a, x), tol)?.value),
    }
}

/// (15/x⁵)·(x/8 + (√2/32)(x²−1)arctan(x√2/(1−x²)) + (√2/64)(x²+1)ln((x²−x√2+1)/(x²+x√2+1))),
/// equal to 3F2(2, 3/4, 5/4; 7/4, 9/4; −x⁴).
pub fn eval_3f2_example_closed(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::precondition(format!("closed form needs 0 < x <= 1, got {x}")));
    }
    let x2 = x * x;
    // At x = 1 the arctan term carries the factor x²−1 and drops out.
    let at = if x == 1.0 { 0.0 } else { SQRT_2 / 32.0 * (x2 - 1.0) * (x * SQRT_2 / (1.0 - x2)).atan() };
    let lg = SQRT_2 / 64.0 * (x2 + 1.0) * ((x2 - x * SQRT_2 + 1.0) / (x2 + x * SQRT_2 + 1.0)).ln();
    Ok((x / 8.0 + at + lg) * 15.0 / x.powi(5))
}

/// The series side of [`eval_3f2_example_closed`].
pub fn eval_3f2_example_series(x: f64) -> Result<f64> {
    let spec = PFQSpec::real(0, &[2.0, 0.75, 1.25], &[1.75, 2.25])?;
    Ok(hypseries::eval(&spec, Complex64::new(-x.powi(4), 0.0), 1e-15)?.value().re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn appell_reductions() {
        let f1 = DoubleSeriesSpec::appell_f1(0.7, 1.3, 0.4, 2.1, c(0.3), c(0.0));
        let v = eval_double(&f1, 1e-15).unwrap().value().re;
        let want = hypseries::eval(&PFQSpec::real(0, &[0.7, 1.3], &[2.1]).unwrap(), c(0.3), 1e-15).unwrap().value().re;
        assert!((v - want).abs() < 1e-12);
        let f2 = DoubleSeriesSpec::appell_f2(0.7, 1.3, 0.4, 2.1, 1.6, c(0.3), c(0.0));
        let v = eval_double(&f2, 1e-15).unwrap().value().re;
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn appell_f1_elementary_case() {
        // F1(a; b1, b2; a; x, y) = (1−x)^{−b1}(1−y)^{−b2}.
        let f1 = DoubleSeriesSpec::appell_f1(1.5, 0.5, 0.25, 1.5, c(0.4), c(-0.3));
        let v = eval_double(&f1, 1e-15).unwrap().value().re;
        assert!((v - 0.6f64.powf(-0.5) * 1.3f64.powf(-0.25)).abs() < 1e-13);
    }

    #[test]
    fn domains_enforced() {
        let f2 = DoubleSeriesSpec::appell_f2(0.7, 1.3, 0.4, 2.1, 1.6, c(0.6), c(0.5));
        assert!(matches!(eval_double(&f2, 1e-12), Err(Error::Divergent(_))));
        let f1 = DoubleSeriesSpec::appell_f1(0.7, 1.3, 0.4, 2.1, c(0.6), c(0.5));
        assert!(eval_double(&f1, 1e-12).is_ok());
    }

    #[test]
    fn ialpha_series_examples() {
        assert!((ialpha_series(0.0, IalphaVariant::Direct, 1e-14).unwrap() - 1.0).abs() < 1e-13);
        let a = ialpha_series(0.5, IalphaVariant::Direct, 1e-14).unwrap();
        let b = ialpha_series(0.5, IalphaVariant::Pfaff, 1e-14).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - 0.666_377_114_268_833_8).abs() < 1e-12);
        let m1 = ialpha_series(-1.0, IalphaVariant::Direct, 1e-14).unwrap();
        assert!((m1 - ialpha_closed(IalphaCase::IMinus1).unwrap()).abs() < 1e-12);
        let m1b = ialpha_series(-1.0, IalphaVariant::Pfaff, 1e-14).unwrap();
        assert!((m1 - m1b).abs() < 1e-12);
    }

    #[test]
    fn closed_cases_frozen() {
        let cases = [
            (IalphaCase::I0, 1.0),
            (IalphaCase::I1, 0.444_703_811_544_794_66),
            (IalphaCase::IMinus1, 2.261_692_595_775_521),
            (IalphaCase::IMinusN(2), 5.144_251_510_965_076),
            (IalphaCase::I2, 0.198_918_386_988_173_13),
            (IalphaCase::DerivativeAtZero, -0.813_245_254_998_229_9),
            (IalphaCase::ITrue, 0.641_274_915_080_932),
            (IalphaCase::IAlphaTrue(0.3), 0.686_970_252_660_645_7),
            (IalphaCase::IAlphaTrue(2.0), 0.391_436_183_067_096_3),
        ];
        for (case, want) in cases {
            let v = ialpha_closed(case).unwrap();
            assert!((v - want).abs() < 1e-12, "{case:?}: {v} vs {want}");
        }
        assert_eq!(IalphaCase::parse("Iminus_n(3)").unwrap(), IalphaCase::IMinusN(3));
        assert!(IalphaCase::parse("I7").is_err());
    }

    #[test]
    fn pfaff_twice_pointwise() {
        for alpha in [0.5, 1.0, 2.0, 0.3] {
            for t in [0.1, 0.4, 0.7, 0.95] {
                let a = ialpha_integrand_hyp(alpha, t, IalphaVariant::Direct).unwrap();
                let b = ialpha_integrand_hyp(alpha, t, IalphaVariant::Pfaff).unwrap();
                assert!((a - b).abs() < 1e-12);
                assert!((a - ialpha_integrand_unit(alpha, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn substitution_identity() {
        for alpha in [-1.0, 0.0, 0.5, 1.0, 2.0] {
            let h = oracle::quad_halfline(|x| ialpha_integrand_halfline(alpha, x), 1e-12).unwrap().value;
            let u = ialpha_oracle(alpha, 1e-12).unwrap();
            assert!((h - u).abs() < 1e-10, "alpha {alpha}: {h} vs {u}");
        }
    }

    #[test]
    fn example_closed_form() {
        let x = 3f64.powf(-0.25);
        let v = eval_3f2_example_closed(x).unwrap();
        assert!((v - eval_3f2_example_series(x).unwrap()).abs() < 1e-10);
        assert!((v - 0.869_339_316_788_364_3).abs() < 1e-12);
        assert!((eval_3f2_example_closed(0.05).unwrap() - 1.0).abs() < 1e-4);
        assert!((eval_3f2_example_closed(1.0).unwrap() - eval_3f2_example_series(1.0).unwrap()).abs() < 1e-10);
    }
}
