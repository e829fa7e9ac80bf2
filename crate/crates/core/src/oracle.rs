//! Independent quadrature and elementary evaluators for cross-checking the
//! series engine. Nothing here calls into the hypergeometric code.
//!
//! Integrands receive `(t, t − a, b − t)` so that functions with endpoint
//! singularities can be evaluated without cancellation near the ends.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-11;
pub const NODE_BUDGET: usize = 2_000_000;

const GK_INTERVAL_CAP: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn check_finite(v: f64, t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonConvergence {
            terms: 0,
            context: format!("integrand is not finite at t = {t}"),
        })
    }
}

/// One G7K15 panel on [lo, hi] inside [a, b].
fn gk15<F: Fn(f64, f64, f64) -> f64>(f: &F, a: f64, b: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let half = 0.5 * (hi - lo);
    let mut k = 0.0;
    let mut g = 0.0;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-x, x] };
        for &s in pts {
            // Distances from both ends of [a, b], computed without cancellation.
            let (t, da, db) = if s < 0.0 {
                let d = half * (1.0 + s);
                (lo + d, (lo - a) + d, (b - hi) + half * (1.0 - s))
            } else {
                let d = half * (1.0 - s);
                (hi - d, (lo - a) + half * (1.0 + s), (b - hi) + d)
            };
            let v = check_finite(f(t, da, db), t)?;
            k += wk * v;
            if i % 2 == 1 {
                g += WG[i / 2] * v;
            }
        }
    }
    Ok((k * half, ((k - g) * half).abs()))
}

fn gauss_kronrod<F: Fn(f64, f64, f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Option<QuadratureResult>> {
    let (v, e) = gk15(f, a, b, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { lo: a, hi: b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    while err > tol * total.abs().max(1e-6) {
        if heap.len() >= GK_INTERVAL_CAP || evals >= NODE_BUDGET / 2 {
            return Ok(None);
        }
        let p = heap.pop().expect("heap is non-empty");
        let m = 0.5 * (p.lo + p.hi);
        if m <= p.lo || m >= p.hi {
            return Ok(None);
        }
        let (v1, e1) = gk15(f, a, b, p.lo, m)?;
        let (v2, e2) = gk15(f, a, b, m, p.hi)?;
        evals += 30;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel { lo: p.lo, hi: m, value: v1, error: e1 });
        heap.push(Panel { lo: m, hi: p.hi, value: v2, error: e2 });
    }
    // Re-add to shed accumulated drift in the running totals.
    let (value, error) = heap.iter().fold((0.0, 0.0), |(s, e), p| (s + p.value, e + p.error));
    Ok(Some(QuadratureResult {
        value,
        error_estimate: error.max(f64::EPSILON * value.abs()),
        evaluations: evals,
    }))
}

fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let half = 0.5 * (b - a);
    let evals = std::cell::Cell::new(0usize);
    // Node at parameter t: x = tanh(π/2·sinh t), 1 − |x| = e^{−u}/cosh u.
    let node = |t: f64| -> Result<Option<f64>> {
        let u = FRAC_PI_2 * t.sinh();
        let comp = (-u.abs()).exp() / u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        if !(comp * half > 0.0) || !w.is_finite() || w == 0.0 {
            return Ok(None);
        }
        let near = half * comp;
        let far = half * (2.0 - comp);
        let (x, da, db) = if t < 0.0 { (a + near, near, far) } else { (b - near, far, near) };
        evals.set(evals.get() + 1);
        let v = f(x, da, db);
        if !v.is_finite() {
            if near < 1e-100 * half.max(1.0) {
                return Ok(None);
            }
            return check_finite(v, x).map(Some);
        }
        Ok(Some(w * v))
    };
    let tmax = 6.5;
    let mut sum = node(0.0)?.unwrap_or(0.0);
    let mut abs_sum = sum.abs();
    let mut h = 1.0;
    let mut k = 1.0;
    while k <= tmax {
        for sgn in [-1.0, 1.0] {
            if let Some(v) = node(sgn * k)? {
                sum += v;
                abs_sum += v.abs();
            }
        }
        k += h;
    }
    let mut prev = sum * h * half;
    for _level in 0..12 {
        h *= 0.5;
        let mut t = h;
        while t <= tmax {
            for sgn in [-1.0, 1.0] {
                if let Some(v) = node(sgn * t)? {
                    sum += v;
                    abs_sum += v.abs();
                }
            }
            t += 2.0 * h;
        }
        if evals.get() > NODE_BUDGET {
            break;
        }
        let cur = sum * h * half;
        let diff = (cur - prev).abs();
        let floor = 10.0 * f64::EPSILON * abs_sum * h * half.abs();
        if diff <= tol * cur.abs().max(1e-6) || diff <= floor {
            return Ok(QuadratureResult {
                value: cur,
                error_estimate: diff.max(floor),
                evaluations: evals.get(),
            });
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        terms: evals.get(),
        context: format!("tanh-sinh on [{a}, {b}] did not reach tolerance {tol}"),
    })
}

/// ∫_a^b f where f receives (t, t − a, b − t).
pub fn quad_finite_ends<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    quad_ends_dyn(&f, a, b, tol)
}

fn quad_ends_dyn(f: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::precondition("finite quadrature needs finite limits"));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    if b < a {
        let flipped = |t: f64, da: f64, db: f64| f(t, db, da);
        let r = quad_ends_dyn(&flipped, b, a, tol)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    // Endpoint singularities stall bisection; double-exponential nodes
    // then take over on the whole interval.
    match gauss_kronrod(&f, a, b, tol) {
        Ok(Some(r)) => Ok(r),
        Ok(None) | Err(_) => tanh_sinh(&f, a, b, tol),
    }
}

/// Adaptive Gauss–Kronrod on [a, b], switching to tanh-sinh when
/// refinement stalls.
pub fn quad_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    quad_finite_ends(|t, _, _| f(t), a, b, tol)
}

/// ∫_0^∞ f through x = t/(1 − t); f receives x.
pub fn quad_halfline<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    let g = |t: f64, _da: f64, db: f64| {
        let x = t / db;
        f(x) / (db * db)
    };
    let r = tanh_sinh(&g, 0.0, 1.0, tol)?;
    check_decay(&f)?;
    Ok(r)
}

/// ∫_0^∞ f through x = tan(πt/2).
pub fn quad_halfline_tan<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    let g = |_t: f64, da: f64, db: f64| {
        // tan(πt/2) = cot(π(1 − t)/2), accurate near t = 1.
        let (x, sec2) = if db < 0.5 {
            let c = (FRAC_PI_2 * db).tan();
            (1.0 / c, 1.0 + 1.0 / (c * c))
        } else {
            let x = (FRAC_PI_2 * da).tan();
            (x, 1.0 + x * x)
        };
        f(x) * FRAC_PI_2 * sec2
    };
    let r = tanh_sinh(&g, 0.0, 1.0, tol)?;
    check_decay(&f)?;
    Ok(r)
}

/// Rejects integrands whose x·f(x) does not shrink along a geometric ladder.
fn check_decay<F: Fn(f64) -> f64>(f: &F) -> Result<()> {
    let probe = |x: f64| (x * f(x)).abs();
    let (p1, p2) = (probe(1e8), probe(1e16));
    if p2.is_finite() && p1.is_finite() && p2 > 0.0 && p2 >= p1 {
        return Err(Error::Divergent(format!(
            "integrand does not decay faster than 1/x: |x f(x)| = {p1:e} at 1e8, {p2:e} at 1e16"
        )));
    }
    Ok(())
}

/// Arithmetic–geometric mean of positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral K(k) for 0 ≤ k < 1 given k' = √(1−k²).
pub fn elliptic_k_from_complement(kp: f64) -> f64 {
    PI / (2.0 * agm(1.0, kp))
}

pub fn elliptic_k(k: f64) -> f64 {
    elliptic_k_from_complement(((1.0 - k) * (1.0 + k)).sqrt())
}

/// K at imaginary modulus ix, which is real.
pub fn elliptic_k_imag(x: f64) -> f64 {
    elliptic_k_from_complement((1.0 + x * x).sqrt())
}

/// The non-negative real root of αyⁿ + y = x for x ≥ 0, α ≥ 0, by Newton
/// iteration from above with bisection safeguard.
pub fn trinomial_root_newton(n: i32, alpha: f64, x: f64) -> Result<f64> {
    if x < 0.0 || alpha < 0.0 || n < 2 {
        return Err(Error::precondition("Newton trinomial solver needs x >= 0, alpha >= 0, n >= 2"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if alpha == 0.0 {
        return Ok(x);
    }
    let mut hi = x.min((x / alpha).powf(1.0 / n as f64));
    let mut lo = 0.0;
    let mut y = hi;
    for _ in 0..200 {
        let fy = alpha * y.powi(n) + y - x;
        if fy > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let d = alpha * n as f64 * y.powi(n - 1) + 1.0;
        let mut next = y - fy / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 2.0 * f64::EPSILON * y {
            return Ok(next);
        }
        y = next;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_on_polynomials() {
        let r = quad_finite(|x| x.powi(20) - 3.0 * x.powi(7), -1.0, 2.0, 1e-13).unwrap();
        let want = (2f64.powi(21) + 1.0) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((r.value - want).abs() < 1e-10 * want.abs());
    }

    #[test]
    fn examples() {
        let r = quad_finite(|x| x.powf(-0.5), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
        let g = quad_finite(|x| if x == 0.0 { 1.0 } else { x.atan() / x }, 0.0, 1.0, 1e-12).unwrap();
        let series: f64 = (0..2_000_000).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / ((2 * k + 1) as f64).powi(2)).sum();
        assert!((g.value - 0.915_965_594_177_219).abs() < 1e-13);
        assert!((g.value - series).abs() < 1e-12);
        let r = quad_halfline(|x| 1.0 / (1.0 + x * x), 1e-12).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
        let r = quad_halfline(|x| 1.0 / (1.0 + x * x * x), 1e-12).unwrap();
        assert!((r.value - 1.209_199_576_156_145_2).abs() < 1e-12);
        let r = quad_halfline(|x| (-x * x).exp(), 1e-12).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn k_integral_with_agm() {
        let r = quad_finite_ends(
            |x, _, db| {
                let one_minus_x2 = db * (1.0 + x);
                x * (-one_minus_x2.ln()) * elliptic_k_from_complement(one_minus_x2.sqrt())
            },
            0.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert!((r.value - 4.0 * (1.0 - 2f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn slow_algebraic_decay() {
        // ∫_0^∞ x^{−1.6}(√(1+x)−1) dx; decays like x^{−1.1}.
        let f = |x: f64| x.powf(-1.6) * x / ((1.0 + x).sqrt() + 1.0);
        let a = quad_halfline(f, 1e-12).unwrap();
        let b = quad_halfline_tan(f, 1e-12).unwrap();
        assert!((a.value - 9.921_498_513_503_094).abs() < 1e-9);
        assert!((a.value - b.value).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_decay() {
        assert!(quad_halfline(|x| 1.0 / (1.0 + x), 1e-10).is_err());
    }

    #[test]
    fn honest_error_estimates() {
        let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
            (Box::new(|x| x.exp()), 0.0, 1.0, 1f64.exp() - 1.0),
            (Box::new(|x| x.sin()), 0.0, PI, 2.0),
            (Box::new(|x| x.sqrt()), 0.0, 1.0, 2.0 / 3.0),
            (Box::new(|x| x.powf(-0.5)), 0.0, 1.0, 2.0),
            (Box::new(|x| (-x.ln()).max(0.0)), 0.0, 1.0, 1.0),
            (Box::new(|x| 1.0 / (1.0 + x * x)), 0.0, 1.0, PI / 4.0),
            (Box::new(|x| x.powi(5)), 0.0, 2.0, 64.0 / 6.0),
            (Box::new(|x| (1.0 - x * x).sqrt()), -1.0, 1.0, PI / 2.0),
            (Box::new(|x| x.cos().powi(2)), 0.0, PI, PI / 2.0),
            (Box::new(|x| 1.0 / x), 1.0, 2.0, 2f64.ln()),
        ];
        for (f, a, b, want) in cases {
            let r = quad_finite(f, a, b, 1e-10).unwrap();
            let err = (r.value - want).abs();
            assert!(err <= 5.0 * r.error_estimate.max(f64::EPSILON * want.abs()), "{err} vs {}", r.error_estimate);
        }
    }

    #[test]
    fn newton_quintic() {
        let y = trinomial_root_newton(5, 2.0, 3.0).unwrap();
        assert!((2.0 * y.powi(5) + y - 3.0).abs() < 1e-14);
        assert_eq!(trinomial_root_newton(5, 0.0, 3.0).unwrap(), 3.0);
        let y = trinomial_root_newton(5, 2.0, 1e30).unwrap();
        assert!(((2.0 * y.powi(5) + y) / 1e30 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn agm_k() {
        assert!((elliptic_k(0.0) - PI / 2.0).abs() < 1e-15);
        // K(1/√2) = Γ(1/4)²/(4√π).
        let want = 3.625_609_908_221_908_f64.powi(2) / (4.0 * PI.sqrt());
        assert!((elliptic_k(0.5f64.sqrt()) - want).abs() < 1e-14);
    }
}
