//! Complex Γ, log Γ, polygamma and Pochhammer symbols, plus their jet lifts.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::Jet;

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// B_{2k} for k = 1..=12.
const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const ASYMPTOTIC_FROM: f64 = 15.0;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Non-positive integer test, exact.
/// 1/z without overflowing |z|² for huge or tiny |z|.
pub fn recip_scaled(z: Complex64) -> Complex64 {
    let s = z.re.abs().max(z.im.abs());
    if s == 0.0 || !s.is_finite() {
        return Complex64::new(1.0, 0.0) / z;
    }
    (z / s).inv() / s
}

pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// sin(πz) with the real part reduced mod 2 first, so integer z gives an exact 0.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    if z.im == 0.0 && r == r.round() {
        return c(0.0);
    }
    (Complex64::new(r, z.im) * PI).sin()
}

/// cos(πz) with the same reduction as [`sin_pi`].
pub fn cos_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    if z.im == 0.0 && (r - 0.5).abs() % 1.0 == 0.0 {
        return c(0.0);
    }
    (Complex64::new(r, z.im) * PI).cos()
}

fn lanczos_series(z: Complex64) -> Complex64 {
    let mut ser = c(LANCZOS[0]);
    for (j, &cof) in LANCZOS.iter().enumerate().skip(1) {
        ser += cof / (z + j as f64);
    }
    ser
}

fn pole_error(z: Complex64, what: &str) -> Error {
    Error::pole(z, format!("{what} at a non-positive integer"))
}

/// Γ(z). Relative error about 1e−14 for moderate |z|.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z, "gamma"));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        return Ok(c(PI) / (s * gamma(c(1.0) - z)?));
    }
    let t = z + LANCZOS_G + 0.5;
    let ser = lanczos_series(z);
    // (z+g+1/2)^(z+1/2) e^{-(z+g+1/2)} √(2π) ser / z
    let lp = (z + 0.5) * t.ln() - t;
    Ok(lp.exp() * SQRT_2PI * ser / z)
}

/// 1/Γ(z); entire, zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return c(0.0);
    }
    if z.re < 0.5 {
        // 1/Γ(z) = Γ(1−z) sin(πz)/π
        return match gamma(c(1.0) - z) {
            Ok(g) => g * sin_pi(z) / PI,
            Err(_) => c(0.0),
        };
    }
    match gamma(z) {
        Ok(g) => g.inv(),
        Err(_) => c(0.0),
    }
}

/// log Γ(z): principal-branch continuation for Re z ≥ 1/2, reflection
/// (not branch-matched) below.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z, "ln_gamma"));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        return Ok(c(PI.ln()) - s.ln() - ln_gamma(c(1.0) - z)?);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok((z + 0.5) * t.ln() - t + (lanczos_series(z) * SQRT_2PI / z).ln())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ψ^(n)(z), the n-th derivative of the digamma function.
pub fn polygamma(n: usize, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z, "polygamma"));
    }
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 }; // (−1)^{n+1}
    let nfact = factorial(n);
    let mut w = z;
    let mut shift = c(0.0);
    while w.re < ASYMPTOTIC_FROM {
        // ψ^(n)(w) = ψ^(n)(w+1) − (−1)^n n!/w^{n+1}
        shift += w.powi(-(n as i32) - 1);
        w += 1.0;
    }
    let shift = shift * (sign * nfact);
    let inv = w.inv();
    let inv2 = inv * inv;
    let asym = if n == 0 {
        let mut s = w.ln() - inv * 0.5;
        let mut p = inv2;
        for (k, b) in BERNOULLI_2K.iter().enumerate() {
            let k2 = 2.0 * (k + 1) as f64;
            s -= p * (b / k2);
            p *= inv2;
        }
        s
    } else {
        let mut s = inv.powi(n as i32) * factorial(n - 1) + inv.powi(n as i32 + 1) * (nfact * 0.5);
        let mut p = inv.powi(n as i32 + 2);
        for (k, b) in BERNOULLI_2K.iter().enumerate() {
            let k2 = 2 * (k + 1);
            // (2k+n−1)!/(2k)!
            let ratio: f64 = ((k2 + 1)..=(k2 + n - 1)).map(|j| j as f64).product();
            s += p * (b * ratio);
            p *= inv2;
        }
        s * sign
    };
    Ok(asym + shift)
}

pub fn digamma(z: Complex64) -> Result<Complex64> {
    polygamma(0, z)
}

pub fn trigamma(z: Complex64) -> Result<Complex64> {
    polygamma(1, z)
}

/// Powers δ, δ², … of the nilpotent part of a jet.
fn nilpotent_powers(z: &Jet) -> Vec<Jet> {
    let k = z.order();
    let delta = *z - z.value();
    let mut out = Vec::with_capacity(k);
    let mut p = delta;
    for _ in 0..k {
        out.push(p);
        p *= delta;
    }
    out
}

/// Taylor expansion Σ_{m≥0} d_m δ^m/m! given derivatives d_0…d_K at the base.
fn taylor_lift(z: &Jet, derivs: &[Complex64]) -> Jet {
    let k = z.order();
    let mut out = Jet::constant(k, derivs[0]);
    if k == 0 || z.is_scalar() {
        return out;
    }
    for (m, p) in nilpotent_powers(z).iter().enumerate() {
        let m = m + 1;
        out += *p * (derivs[m] / factorial(m));
    }
    out
}

/// Γ(z) for a jet argument, Γ(z₀)·exp(Σ ψ^{(m−1)}(z₀) δ^m/m!).
pub fn gamma_jet(z: &Jet) -> Result<Jet> {
    let z0 = z.value();
    let g0 = gamma(z0)?;
    let k = z.order();
    if k == 0 || z.is_scalar() {
        return Ok(Jet::constant(k, g0));
    }
    let mut derivs = vec![c(0.0)];
    for m in 1..=k {
        derivs.push(polygamma(m - 1, z0)?);
    }
    Ok(taylor_lift(z, &derivs).exp() * g0)
}

/// 1/Γ(z) for a jet argument; finite at the poles of Γ.
pub fn rgamma_jet(z: &Jet) -> Jet {
    let k = z.order();
    let z0 = z.value();
    if k == 0 || z.is_scalar() {
        return Jet::constant(k, rgamma(z0));
    }
    if z0.re >= 0.5 {
        if let Ok(g) = gamma_jet(z) {
            if let Ok(r) = g.recip() {
                return r;
            }
        }
    }
    // 1/Γ(z) = Γ(1−z)·sin(πz)/π with the base of πz reduced mod 2π.
    let shift = 2.0 * (z0.re / 2.0).round();
    let reduced = (*z - shift) * PI;
    let g = gamma_jet(&(-*z + 1.0)).expect("1 - z has positive real part here");
    g * reduced.sin() / PI
}

/// ψ^(n) lifted to a jet argument.
pub fn polygamma_jet(n: usize, z: &Jet) -> Result<Jet> {
    let z0 = z.value();
    let k = z.order();
    let mut derivs = Vec::with_capacity(k + 1);
    for m in 0..=k {
        derivs.push(polygamma(n + m, z0)?);
    }
    Ok(taylor_lift(z, &derivs))
}

pub fn digamma_jet(z: &Jet) -> Result<Jet> {
    polygamma_jet(0, z)
}

/// Rising factorial (a)_k = a(a+1)…(a+k−1).
pub fn pochhammer(a: &Jet, k: usize) -> Jet {
    let mut p = Jet::one(a.order());
    for j in 0..k {
        p *= *a + j as f64;
    }
    p
}

pub fn pochhammer_c(a: Complex64, k: usize) -> Complex64 {
    let mut p = c(1.0);
    for j in 0..k {
        p *= a + j as f64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219;
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn gamma_examples() {
        assert!(rel(gamma(c(5.0)).unwrap(), c(24.0)) < 1e-14);
        assert!(rel(gamma(c(0.5)).unwrap(), c(PI.sqrt())) < 1e-14);
        assert!(rel(gamma(c(0.25)).unwrap(), c(3.625_609_908_221_908)) < 1e-14);
        assert!(rel(gamma(c(-2.5)).unwrap(), c(-0.945_308_720_482_941_9)) < 1e-13);
        // Γ(1+i) from mpmath
        let g = gamma(Complex64::new(1.0, 1.0)).unwrap();
        assert!(rel(g, Complex64::new(0.498_015_668_118_356, -0.154_949_828_301_810_8)) < 1e-13);
        // Γ(30) = 29!
        assert!(rel(gamma(c(30.0)).unwrap(), c(8.841_761_993_739_702e30)) < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        for z in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(c(z)), Err(Error::Pole { .. })));
            assert_eq!(rgamma(c(z)), c(0.0));
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for z in [c(0.3), c(7.5), Complex64::new(2.0, 3.0)] {
            let a = ln_gamma(z).unwrap().exp();
            assert!(rel(a, gamma(z).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn polygamma_examples() {
        assert!(rel(digamma(c(1.0)).unwrap(), c(-EULER_GAMMA)) < 1e-14);
        let t = trigamma(c(0.25)).unwrap();
        assert!(rel(t, c(PI * PI + 8.0 * CATALAN)) < 1e-13);
        let d = digamma(c(1.5)).unwrap() - digamma(c(1.0)).unwrap();
        assert!(rel(d, c(2.0 - 2.0 * std::f64::consts::LN_2)) < 1e-13);
        // ψ''(1) = −2ζ(3)
        let z3 = 1.202_056_903_159_594_2;
        assert!(rel(polygamma(2, c(1.0)).unwrap(), c(-2.0 * z3)) < 1e-13);
        // ψ'''(1) = π⁴/15
        assert!(rel(polygamma(3, c(1.0)).unwrap(), c(PI.powi(4) / 15.0)) < 1e-13);
        assert!(polygamma(0, c(-3.0)).is_err());
    }

    #[test]
    fn gamma_jet_examples() {
        let z = Jet::eps(3) + 1.0;
        let g = gamma_jet(&z).unwrap();
        assert!((g.extract(0).unwrap() - 1.0).norm() < 1e-14);
        assert!((g.extract(1).unwrap() + EULER_GAMMA).norm() < 1e-14);
        // [ε²]Γ(1+ε) = (γ² + π²/6)/2
        let e2 = (EULER_GAMMA * EULER_GAMMA + PI * PI / 6.0) / 2.0;
        assert!((g.extract(2).unwrap() - e2).norm() < 1e-13);
        let s = gamma_jet(&Jet::real(3, 2.0)).unwrap();
        assert!(s.is_scalar() && (s.value() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn k_integral_gamma_ratio() {
        // (π/4)[ε] Γ(2)Γ(1−2ε)/Γ(3/2−ε)² = 2ψ(3/2) − 2ψ(1) = 4(1 − ln 2)
        let e = Jet::eps(3);
        let num = gamma_jet(&(e * -2.0 + 1.0)).unwrap();
        let den = gamma_jet(&(-e + 1.5)).unwrap();
        let r = num / (den * den) * (PI / 4.0);
        let want = 4.0 * (1.0 - std::f64::consts::LN_2);
        assert!((r.extract(1).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn rgamma_jet_through_pole() {
        // 1/Γ(−1+ε) = −ε + O(ε²)
        let z = Jet::eps(3) - 1.0;
        let r = rgamma_jet(&z);
        assert!(r.value().norm() < 1e-15);
        assert!((r.extract(1).unwrap() + 1.0).norm() < 1e-13);
        // and away from poles it is the reciprocal of gamma_jet
        let w = Jet::eps(3) * 0.5 + 2.25;
        let d = rgamma_jet(&w) * gamma_jet(&w).unwrap();
        assert!(d.max_abs_diff(&Jet::one(3)) < 1e-13);
    }

    #[test]
    fn pochhammer_examples() {
        let a = Jet::real(3, 0.7);
        assert_eq!(pochhammer(&a, 0), Jet::one(3));
        assert_eq!(pochhammer(&Jet::one(3), 4).value(), c(24.0));
        let p = pochhammer(&Jet::eps(3), 3);
        assert_eq!(p.extract(1).unwrap(), c(2.0));
        assert_eq!(p.extract(2).unwrap(), c(3.0));
        assert_eq!(p.extract(3).unwrap(), c(1.0));
    }
}
