use astro_float::{BigFloat, RoundingMode};
use thetanorm::oracle::{oracle_theta, OracleArg};
use thetanorm::{theta_auto, theta_product, theta_series, ThetaKind};

#[test]
fn main_path_matches_oracle_on_grid() {
    let vs = [-2.0, -1.37, -0.5, -0.1, 0.0, 0.25, 0.5, 0.93, 1.5, 2.0];
    let ts = [0.01, 0.03, 0.1, 0.4, 0.99, 1.0, 2.5, 10.0];
    for k in ThetaKind::ALL {
        for &t in &ts {
            for &v in &vs {
                let ours = theta_auto(k, v, t, 1e-12).unwrap();
                let o = oracle_theta(k, v, t, 30).unwrap();
                if o.is_zero() {
                    assert!(
                        ours.value.is_zero(),
                        "theta{}({v}|{t}i) should vanish",
                        k.index()
                    );
                    continue;
                }
                let d = o.rel_diff(ours.value);
                assert!(d <= 1e-12, "theta{}({v}|{t}i): rel diff {d:e}", k.index());
            }
        }
    }
}

#[test]
fn direct_routes_match_oracle_at_moderate_t() {
    for k in ThetaKind::ALL {
        for (v, t) in [(0.3, 0.7), (-1.2, 1.6), (0.77, 4.0)] {
            let o = oracle_theta(k, v, t, 30).unwrap();
            let s = theta_series(k, v, t, 1e-13).unwrap().value;
            let p = theta_product(k, v, t, 1e-13).unwrap().value;
            assert!(o.rel_diff(s) <= 1e-12);
            assert!(o.rel_diff(p) <= 1e-12);
        }
    }
}

#[test]
fn self_consistency_between_precisions() {
    for k in ThetaKind::ALL {
        let a = oracle_theta(k, OracleArg::from("0.3"), OracleArg::from("0.7"), 30).unwrap();
        let b = oracle_theta(k, OracleArg::from("0.3"), OracleArg::from("0.7"), 50).unwrap();
        let p = 256;
        let diff = a.value().sub(b.value(), p, RoundingMode::ToEven).abs();
        let scaled = diff.div(b.value(), p, RoundingMode::ToEven);
        let limit = BigFloat::from_f64(1e-28, p);
        assert!(
            scaled.cmp(&limit).unwrap() < 0,
            "theta{}: {} vs {}",
            k.index(),
            a.to_decimal(40),
            b.to_decimal(40)
        );
    }
}

#[test]
fn extreme_scale_value() {
    let o = oracle_theta(ThetaKind::Theta3, 0.3, 0.01, 30).unwrap();
    let ours = theta_auto(ThetaKind::Theta3, 0.3, 0.01, 1e-12).unwrap();
    assert!((ours.value.log_mag() + 25.9717487893).abs() < 1e-9);
    assert!(o.rel_diff(ours.value) <= 1e-13);
}
