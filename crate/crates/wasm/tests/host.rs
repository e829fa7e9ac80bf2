use hyperftc_wasm::{curve, ialpha, integral};

#[test]
fn curve_samples_arctan_ratio() {
    let ys = curve("2F1(1,1/2;3/2;-x^2)", 0.5, 2.0, 4).unwrap();
    for (i, y) in ys.iter().enumerate() {
        let x = 0.5 + 0.5 * i as f64;
        assert!((y - x.atan() / x).abs() < 1e-12);
    }
}

#[test]
fn curve_reports_parse_errors() {
    assert!(curve("2F1(1,2;3;x", 0.0, 1.0, 5).is_err());
}

#[test]
fn integral_carries_closed_form() {
    let r = integral("1/(1+x^2)", true).unwrap();
    assert!((r.value() - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    assert!(r.closed_form().is_some());
}

#[test]
fn ialpha_is_finite_on_positive_alpha() {
    assert!(ialpha(0.5, 3.0, 6).iter().all(|v| v.is_finite()));
}
