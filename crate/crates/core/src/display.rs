//! Compact human-readable formatting of numbers and jets.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::jets::Jet;

/// Best rational p/q with q ≤ `max_den` within `tol`, if any.
pub fn as_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    for q in 1..=max_den {
        let p = (x * q as f64).round();
        if (p / q as f64 - x).abs() <= tol * x.abs().max(1.0) && p.abs() < 1e15 {
            return Some(Rational64::new(p as i64, q));
        }
    }
    None
}

pub fn fmt_real(x: f64) -> String {
    match as_rational(x, 1024, 1e-13) {
        Some(r) if *r.denom() == 1 => format!("{}", r.numer()),
        Some(r) => format!("{}/{}", r.numer(), r.denom()),
        None => format!("{x}"),
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return fmt_real(z.re);
    }
    let im = match fmt_real(z.im.abs()).as_str() {
        "1" => "i".to_string(),
        s => format!("{s}i"),
    };
    if z.re == 0.0 {
        if z.im < 0.0 {
            format!("-{im}")
        } else {
            im
        }
    } else {
        let sign = if z.im < 0.0 { "-" } else { "+" };
        format!("{}{sign}{im}", fmt_real(z.re))
    }
}

/// Jet as "base+c1*eps+c2*eps^2", omitting zero coefficients.
pub fn fmt_jet(j: &Jet) -> String {
    let mut out = String::new();
    for (k, z) in j.coeffs().iter().enumerate() {
        if k > 0 && *z == Complex64::new(0.0, 0.0) {
            continue;
        }
        let body = fmt_complex(*z);
        let needs_paren = z.re != 0.0 && z.im != 0.0;
        let body = if needs_paren { format!("({body})") } else { body };
        if k == 0 {
            out.push_str(&body);
            continue;
        }
        let var = if k == 1 { "eps".to_string() } else { format!("eps^{k}") };
        let term = match body.as_str() {
            "1" => var,
            "-1" => format!("-{var}"),
            _ => format!("{body}*{var}"),
        };
        if out == "0" {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_real(0.5), "1/2");
        assert_eq!(fmt_real(-3.0), "-3");
        assert_eq!(fmt_complex(Complex64::new(0.0, 1.0)), "i");
        assert_eq!(fmt_complex(Complex64::new(0.5, -1.0)), "1/2-i");
        let j = Jet::eps(3) * -1.0 + 0.5;
        assert_eq!(fmt_jet(&j), "1/2-eps");
        assert_eq!(fmt_jet(&Jet::eps(3)), "eps");
    }
}
