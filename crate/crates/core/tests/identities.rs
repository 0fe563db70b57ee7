use proptest::prelude::*;
use thetanorm::gauss::{expansion_sweep, gaussian_remainder};
use thetanorm::{
    certify, decompose, theta_auto, theta_product, theta_series, ScaledReal, ThetaKind,
};

fn kind() -> impl Strategy<Value = ThetaKind> {
    prop_oneof![
        Just(ThetaKind::Theta1),
        Just(ThetaKind::Theta2),
        Just(ThetaKind::Theta3),
        Just(ThetaKind::Theta4),
    ]
}

/// `|a - b|` relative to the larger magnitude, zero when both vanish.
fn rel(a: ScaledReal, b: ScaledReal) -> f64 {
    let scale = if a.cmp_abs(&b).is_ge() {
        a.abs()
    } else {
        b.abs()
    };
    if scale.is_zero() {
        0.0
    } else {
        ((a - b) / scale).abs().to_f64()
    }
}

fn auto(kind: ThetaKind, v: f64, t: f64) -> ScaledReal {
    theta_auto(kind, v, t, 1e-14).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2048))]

    #[test]
    fn sum_and_product_agree(k in kind(), v in -2.0f64..2.0, t in 0.5f64..5.0) {
        let s = theta_series(k, v, t, 1e-13).unwrap().value;
        let p = theta_product(k, v, t, 1e-13).unwrap().value;
        prop_assert!(rel(s, p) <= 10.0 * 2e-13, "{s} vs {p}");
    }

    #[test]
    fn quasi_periodicity(k in kind(), v in -3.0f64..3.0, t in 0.05f64..5.0) {
        let a = auto(k, v, t);
        let b = auto(k, v + 1.0, t);
        let half = matches!(k, ThetaKind::Theta1 | ThetaKind::Theta2);
        let expected = if half { -a } else { a };
        let tol = 1e-11 * (1.0 + (v.abs() + 1.0) * std::f64::consts::PI / t.min(1.0));
        prop_assert!(rel(b, expected) <= tol, "{b} vs {expected}");
    }

    #[test]
    fn theta2_is_shifted_theta1(v in -2.0f64..2.0, t in 0.05f64..5.0) {
        let a = auto(ThetaKind::Theta2, v, t);
        let b = auto(ThetaKind::Theta1, v + 0.5, t);
        prop_assert!(rel(a, b) <= 1e-10, "{a} vs {b}");
    }

    #[test]
    fn parity(k in kind(), v in -2.0f64..2.0, t in 0.05f64..5.0) {
        let a = auto(k, v, t);
        let b = auto(k, -v, t);
        let expected = if k == ThetaKind::Theta1 { -a } else { a };
        prop_assert!(rel(b, expected) <= 1e-12, "{b} vs {expected}");
    }

    #[test]
    fn values_independent_of_route_across_crossover(k in kind(), v in -2.0f64..2.0, t in 0.3f64..3.0) {
        let s = theta_series(k, v, t, 1e-13).unwrap().value;
        let m = thetanorm::theta_transformed(k, v, t, 1e-13).unwrap().value;
        prop_assert!(rel(s, m) <= 1e-11, "{s} vs {m}");
    }

    #[test]
    fn argument_collapse(x in -1.0f64..1.0, t in 1e-4f64..0.2) {
        let y = x * t.sqrt();
        prop_assume!(y.abs() < 0.5);
        let c = decompose(0.5 + y).unwrap().centered;
        let ulp = f64::EPSILON * 0.5f64.max((0.5 + y).abs());
        prop_assert!((c - y).abs() <= ulp, "{c} vs {y}");
    }
}

#[test]
fn monotone_vanishing_of_gaussian_remainder() {
    let ts = [0.3, 0.2, 0.1, 0.05];
    for k in ThetaKind::ALL {
        let r = certify(k, 0.25, 0.9, &ts, 101).unwrap();
        for w in r.sup_measured.windows(2) {
            assert!(w[1] <= w[0], "theta{}: {} then {}", k.index(), w[0], w[1]);
        }
    }
}

#[test]
fn remainder_signs_at_origin() {
    // leading correction is -2e^{-pi/t} for the alternating kinds, +2e^{-pi/t} otherwise
    let t = 0.2;
    let expected = [-1, -1, 1, 1];
    for (k, s) in ThetaKind::ALL.into_iter().zip(expected) {
        let r = gaussian_remainder(k, 0.0, t).unwrap();
        assert_eq!(r.sign(), s, "theta{}", k.index());
        let lead = (2f64.ln() - std::f64::consts::PI / t).exp();
        assert!((r.abs().to_f64() / lead - 1.0).abs() < 1e-6);
    }
}

#[test]
fn expansion_bound_over_half_integer_grid() {
    let vs: Vec<f64> = (0..=40).map(|i| -2.5 + 0.125 * i as f64).collect();
    for k in ThetaKind::ALL {
        for t in [0.25, 0.5, 0.75, 0.9] {
            let s = expansion_sweep(k, t, 1.0, &vs).unwrap();
            assert!(
                s.all_satisfied && s.indeterminate == 0,
                "theta{} t={t}",
                k.index()
            );
        }
    }
}

#[test]
fn gaussian_bound_holds_at_small_t_in_log_space() {
    for k in ThetaKind::ALL {
        let r = certify(k, 1.0, 0.5, &[0.004, 0.005, 0.006], 101).unwrap();
        assert!(r.all_pass, "theta{}", k.index());
        assert!(r.sup_measured.iter().all(|s| s.log_mag() < -400.0));
    }
}
