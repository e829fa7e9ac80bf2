//! Summation helpers: compensated accumulation, the Wynn ε-algorithm, and an
//! asymptotic tail for series whose term ratio is z·(1 + O(1/k)).

use num_complex::Complex64;

use crate::jets::Jet;

/// Neumaier-compensated running sum of jets, component by component.
#[derive(Clone, Debug)]
pub struct JetAccumulator {
    order: usize,
    sum: Vec<[f64; 2]>,
    comp: Vec<[f64; 2]>,
}

fn neumaier(s: &mut f64, c: &mut f64, x: f64) {
    let t = *s + x;
    if s.abs() >= x.abs() {
        *c += (*s - t) + x;
    } else {
        *c += (x - t) + *s;
    }
    *s = t;
}

impl JetAccumulator {
    pub fn new(order: usize) -> Self {
        JetAccumulator {
            order,
            sum: vec![[0.0; 2]; order + 1],
            comp: vec![[0.0; 2]; order + 1],
        }
    }

    pub fn add(&mut self, t: &Jet) {
        for (k, z) in t.coeffs().iter().enumerate() {
            neumaier(&mut self.sum[k][0], &mut self.comp[k][0], z.re);
            neumaier(&mut self.sum[k][1], &mut self.comp[k][1], z.im);
        }
    }

    pub fn value(&self) -> Jet {
        let v: Vec<Complex64> = self
            .sum
            .iter()
            .zip(&self.comp)
            .map(|(s, c)| Complex64::new(s[0] + c[0], s[1] + c[1]))
            .collect();
        Jet::new(self.order, &v).expect("accumulator order is valid")
    }
}

/// Largest coefficient modulus, used for stopping tests.
pub fn jet_norm(j: &Jet) -> f64 {
    j.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Wynn's ε-algorithm on a sequence of partial sums; returns the last
/// even-column entry, or `None` when fewer than three sums are given.
pub fn wynn_epsilon(sums: &[Complex64]) -> Option<Complex64> {
    let n = sums.len();
    if n < 3 {
        return None;
    }
    // e[k] holds column j of the table; prev holds column j−1.
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut best = *sums.last().unwrap();
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() == 0.0 {
                // Converged exactly in this column.
                return Some(if col.is_multiple_of(2) { cur[i + 1] } else { best });
            }
            next.push(prev[i + 1] + d.inv());
        }
        col += 1;
        if col.is_multiple_of(2) {
            best = *next.last().unwrap();
        }
        prev = cur;
        cur = next;
    }
    Some(best)
}

fn binom_signed(n: usize, j: usize) -> f64 {
    // Coefficient of u^n in (u/(1+u))^j.
    if j == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if j > n {
        return 0.0;
    }
    if j == n {
        return 1.0;
    }
    let mut c = 1.0;
    // C(n−1, j−1)
    for i in 0..(j - 1) {
        c = c * ((n - 1 - i) as f64) / ((i + 1) as f64);
    }
    if (n - j) % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Power series of Π(1 + a_i u)/Π(1 + c_j u) to degree `m`.
fn ratio_series(upper: &[Jet], lower: &[Jet], order: usize, m: usize) -> Vec<Jet> {
    let mut q = vec![Jet::zero(order); m + 1];
    q[0] = Jet::one(order);
    for a in upper {
        for d in (1..=m).rev() {
            let prev = q[d - 1];
            q[d] += prev * *a;
        }
    }
    for c in lower {
        // multiply by Σ (−c)^n u^n
        let mut out = vec![Jet::zero(order); m + 1];
        let mut pw = vec![Jet::one(order); m + 1];
        for n in 1..=m {
            pw[n] = pw[n - 1] * (-*c);
        }
        for d in 0..=m {
            let mut s = Jet::zero(order);
            for n in 0..=d {
                s += q[d - n] * pw[n];
            }
            out[d] = s;
        }
        q = out;
    }
    q
}

fn g_coeff(h: &[Jet], l: usize, order: usize) -> Jet {
    let mut s = Jet::zero(order);
    for (j, hj) in h.iter().enumerate().take(l + 1) {
        let b = binom_signed(l, j);
        if b != 0.0 {
            s += *hj * b;
        }
    }
    s
}

/// Σ_{k≥N} t_k given t_N, for terms with
/// t_{k+1}/t_k = z·Π(k+a_i)/(Π(k+c_j)·(k+1)) and #upper = #lower + 1.
///
/// The tail is expanded as t_N·h(1/N) (or t_N·N·h(1/N) at z = 1) with h
/// determined order by order from the ratio; `m` is the number of terms.
pub fn asymptotic_tail(
    upper: &[Jet],
    lower: &[Jet],
    z: Complex64,
    n: usize,
    t_n: &Jet,
    m: usize,
) -> Jet {
    let order = t_n.order();
    let u = 1.0 / n as f64;
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        let q = ratio_series(upper, lower, order, m + 1);
        let sigma = -q[1];
        let mut h: Vec<Jet> = Vec::with_capacity(m + 1);
        for nn in 1..=m + 1 {
            // unknown h_{nn−1}; h_{nn−1} and h_nn treated as 0 in e
            let mut e = Jet::zero(order);
            for (mm, qm) in q.iter().enumerate().take(nn + 1) {
                e -= *qm * g_coeff(&h, nn - mm, order);
            }
            let rhs = if nn == 1 { Jet::one(order) - e } else { -e };
            let den = sigma + (nn - 1) as f64;
            h.push(rhs / den);
        }
        let mut s = Jet::zero(order);
        let mut p = 1.0;
        for hn in &h {
            s += *hn * p;
            p *= u;
        }
        return *t_n * s * n as f64;
    }
    let q = ratio_series(upper, lower, order, m);
    // R = Q/(1+u)
    let mut r = vec![Jet::zero(order); m + 1];
    for d in 0..=m {
        let mut s = Jet::zero(order);
        for i in 0..=d {
            let sign = if (d - i) % 2 == 0 { 1.0 } else { -1.0 };
            s += q[i] * sign;
        }
        r[d] = s;
    }
    let inv = (one - z).inv();
    let mut h: Vec<Jet> = Vec::with_capacity(m + 1);
    for nn in 0..=m {
        let mut s = Jet::zero(order);
        for mm in 0..=nn {
            s += r[mm] * g_coeff(&h, nn - mm, order);
        }
        let delta = if nn == 0 { Jet::one(order) } else { Jet::zero(order) };
        h.push((delta + s * z) * inv);
    }
    let mut s = Jet::zero(order);
    let mut p = 1.0;
    for hn in &h {
        s += *hn * p;
        p *= u;
    }
    *t_n * s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(x: f64) -> Jet {
        Jet::real(1, x)
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut acc = JetAccumulator::new(0);
        for x in [1e16, 1.0, -1e16, 1.0] {
            acc.add(&Jet::real(0, x));
        }
        assert_eq!(acc.value().value().re, 2.0);
    }

    #[test]
    fn wynn_on_alternating_log2() {
        let mut s = Complex64::new(0.0, 0.0);
        let mut sums = Vec::new();
        for k in 1..=20 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            s += sign / k as f64;
            sums.push(s);
        }
        let w = wynn_epsilon(&sums).unwrap();
        assert!((w.re - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn tail_of_basel_series() {
        // t_k = 1/(k+1)^2 is the 3F2(1,1,1;2,2;1) term.
        let n = 50;
        let tn = j(1.0 / ((n + 1) as f64).powi(2));
        let tail = asymptotic_tail(&[j(1.0), j(1.0), j(1.0)], &[j(2.0), j(2.0)], Complex64::new(1.0, 0.0), n, &tn, 10);
        let head: f64 = (0..n).map(|k| 1.0 / ((k + 1) as f64).powi(2)).sum();
        let want = std::f64::consts::PI.powi(2) / 6.0;
        assert!((head + tail.value().re - want).abs() < 1e-14);
    }

    #[test]
    fn tail_of_alternating_series() {
        // η(1): t_k = (−1)^k/(k+1) is 2F1(1,1;2;−1).
        let n = 40;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let tn = j(sign / (n + 1) as f64);
        let tail = asymptotic_tail(&[j(1.0), j(1.0)], &[j(2.0)], Complex64::new(-1.0, 0.0), n, &tn, 10);
        let head: f64 = (0..n)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (k + 1) as f64)
            .sum();
        assert!((head + tail.value().re - std::f64::consts::LN_2).abs() < 1e-14);
    }
}
