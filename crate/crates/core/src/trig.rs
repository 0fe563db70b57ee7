//! `sin(pi x)` and `cos(pi x)` with exact argument reduction, so integer and
//! half-integer arguments give exact zeros.

use std::f64::consts::PI;

/// `x - 2 round(x / 2)`, exact for every finite `x`, in `[-1, 1]`.
fn reduce_mod2(x: f64) -> f64 {
    x - 2.0 * (x / 2.0).round()
}

pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = reduce_mod2(x);
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        (PI * (-1.0 - r)).sin()
    } else {
        (PI * r).sin()
    }
}

pub(crate) fn cos_pi(x: f64) -> f64 {
    let a = reduce_mod2(x).abs();
    if a < 0.25 {
        (PI * a).cos()
    } else if a <= 0.75 {
        (PI * (0.5 - a)).sin()
    } else {
        -(PI * (1.0 - a)).cos()
    }
}
