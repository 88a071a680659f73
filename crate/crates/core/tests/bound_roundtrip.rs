use proptest::prelude::*;
use qtur_core::bound::{big_b, big_b_log_form, f_of, g, h, saturation_value};
use qtur_core::ExtendedReal;

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
}

#[test]
fn inverse_pairs_on_log_grid() {
    for x in log_grid(1e-3, 20.0, 400) {
        let back = g(h(x).unwrap()).unwrap();
        assert!((back - x).abs() <= 1e-10, "g(h({x})) = {back}");
        let fx = f_of(x).unwrap().value().unwrap();
        let back = big_b(fx).unwrap();
        assert!((back - x).abs() <= 1e-10, "B(f({x})) = {back}");
    }
}

#[test]
fn saturation_value_matches_composition() {
    for eps in log_grid(1e-2, 10.0, 100) {
        let via = f_of(h(eps).unwrap()).unwrap().value().unwrap();
        let direct = saturation_value(eps).unwrap().value().unwrap();
        assert!((via - direct).abs() <= 1e-9 * direct);
    }
}

#[test]
fn endpoints() {
    assert_eq!(f_of(0.0).unwrap(), ExtendedReal::Infinite);
    assert_eq!(qtur_core::bound::f(ExtendedReal::<f64>::Infinite).unwrap(), ExtendedReal::Finite(0.0));
    assert_eq!(g(0.0).unwrap(), 0.0);
    assert!(h(-1.0).is_err());
    assert!(big_b(0.0).is_err());
}

proptest! {
    #[test]
    fn h_is_increasing_and_f_decreasing(a in 1e-3f64..30.0, b in 1e-3f64..30.0) {
        prop_assume!(a < b);
        prop_assert!(h(a).unwrap() < h(b).unwrap());
        let (fa, fb) = (f_of(a).unwrap().value().unwrap(), f_of(b).unwrap().value().unwrap());
        prop_assert!(fa > fb);
    }

    #[test]
    fn log_form_agrees(x in 1e-3f64..1e3) {
        let (a, b) = (big_b(x).unwrap(), big_b_log_form(x).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn single_precision_roundtrip(x in 1e-2f32..10.0) {
        let back = g(h(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-5 * x.max(1.0));
    }
}
