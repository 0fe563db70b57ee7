//! Evaluation through the imaginary modular transformation `tau -> -1/tau`.
//!
//! On `tau = it` every theta function becomes a Gaussian sum in the dual
//! nome `e^{-pi/t}`:
//!
//! ```text
//! theta1(v|it) = (-1)^[v]  t^{-1/2} sum_n (-1)^n e^{-pi (n - ((v)))^2 / t}
//! theta2(v|it) = (-1)^m_v  t^{-1/2} sum_n (-1)^n e^{-pi (n - [[v]])^2 / t}
//! theta3(v|it) =           t^{-1/2} sum_n        e^{-pi (n - [[v]])^2 / t}
//! theta4(v|it) =           t^{-1/2} sum_n        e^{-pi (n - ((v)))^2 / t}
//! ```
//!
//! so small `t`, where the nome series crawls, needs only a handful of terms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::frac::decompose;
use crate::scaled::ScaledReal;
use crate::theta::{
    check_tol, check_v, tail_threshold, theta_series, EvalReport, Method, Nome, ThetaKind,
    MAX_TERMS,
};

/// Below this `t` the nome series is slower than the transformed sum.
pub const CROSSOVER_T: f64 = 1.0;

/// Valid `t` range for [`transform_identity_residual`].
pub const RESIDUAL_T_RANGE: (f64, f64) = (0.05, 20.0);

/// The pieces of the transformed representation of `theta_kind(v | it)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reduction {
    /// `((v))` for kinds 1 and 4, `[[v]]` for kinds 2 and 3.
    pub w: f64,
    /// `(-1)^[v]` for kind 1, `(-1)^m_v` for kind 2, `+1` otherwise.
    pub sign: i8,
    pub alternating: bool,
}

pub fn reduce(kind: ThetaKind, v: f64) -> Result<Reduction> {
    let d = decompose(v)?;
    Ok(match kind {
        ThetaKind::Theta1 => Reduction {
            w: d.centered,
            sign: d.floor_parity(),
            alternating: true,
        },
        ThetaKind::Theta2 => Reduction {
            w: d.nearest_rem,
            sign: d.nearest_parity(),
            alternating: true,
        },
        ThetaKind::Theta3 => Reduction {
            w: d.nearest_rem,
            sign: 1,
            alternating: false,
        },
        ThetaKind::Theta4 => Reduction {
            w: d.centered,
            sign: 1,
            alternating: false,
        },
    })
}

/// A partial Gaussian sum in the normalised scaling `e^{pi w^2 / t} * sum`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSum {
    pub value: ScaledReal,
    pub tail_bound: ScaledReal,
    pub terms_used: usize,
}

/// `ln` of the single normalised term `e^{-pi (n^2 - 2 n w) / t}`.
fn ln_term(n: f64, w: f64, t: f64) -> f64 {
    -PI * n * (n - 2.0 * w) / t
}

/// `ln` of the geometric majorant of `sum_{|m| >= k}` of the normalised
/// terms: `2 e^{-pi (k^2 - 2k|w|)/t} / (1 - e^{-pi (2k + 1 - 2|w|)/t})`,
/// using `m^2 - 2m|w| >= m(m - 1)` and decreasing term ratios.
fn ln_tail_from(k: usize, w: f64, t: f64) -> f64 {
    let kf = k as f64;
    let wa = w.abs();
    let ratio = -PI * (2.0 * kf + 1.0 - 2.0 * wa) / t;
    std::f64::consts::LN_2 - PI * kf * (kf - 2.0 * wa) / t - (-ratio.exp_m1()).ln()
}

/// `ln |pair_n|` for the pair of indices `n` and `-(n + 1)`:
/// `e^{-pi (n^2 - 2nw)/t} (1 -+ e^{-pi (2n+1)(1+2w)/t})`.
fn ln_pair(n: usize, w: f64, t: f64, alternating: bool) -> f64 {
    let nf = n as f64;
    let gap = -PI * (2.0 * nf + 1.0) * (1.0 + 2.0 * w) / t;
    let factor = if alternating {
        (-gap.exp_m1()).ln()
    } else {
        gap.exp().ln_1p()
    };
    ln_term(nf, w, t) + factor
}

fn pair_sign(n: usize, alternating: bool) -> i8 {
    if alternating && n % 2 == 1 {
        -1
    } else {
        1
    }
}

/// `sum_{n in Z} (+-1)^n e^{-pi (n^2 - 2nw)/t}` for `w` in `[-1/2, 1/2)`,
/// truncated once the tail drops below `tol` relative to the running sum.
pub fn normalized_sum(w: f64, t: f64, alternating: bool, tol: f64) -> GaussianSum {
    let mut value = ScaledReal::ZERO;
    let mut pairs = 0usize;
    loop {
        let ln_p = ln_pair(pairs, w, t, alternating);
        if ln_p > f64::NEG_INFINITY {
            value = value + ScaledReal::new(pair_sign(pairs, alternating), ln_p);
        }
        pairs += 1;
        let ln_tail = ln_tail_from(pairs, w, t);
        let threshold = tail_threshold(value.abs().to_f64(), 1.0, tol);
        if ln_tail < threshold.ln() || 2 * pairs >= MAX_TERMS {
            return GaussianSum {
                value,
                tail_bound: ScaledReal::exp(ln_tail),
                terms_used: 2 * pairs,
            };
        }
    }
}

/// `sum_{|n| >= from} (+-1)^n e^{-pi (n^2 - 2nw)/t}`, summed to full
/// precision of the result itself (the remainder beyond the first terms of
/// the normalised expansion). `from` must be at least 1.
pub fn normalized_remainder(w: f64, t: f64, alternating: bool, from: usize) -> GaussianSum {
    assert!(from >= 1, "remainder must skip at least the n = 0 term");
    // index -from on its own, then pairs (n, -(n+1)) for n >= from
    let lone_sign = if alternating && from % 2 == 1 { -1 } else { 1 };
    let mut value = ScaledReal::new(lone_sign, ln_term(-(from as f64), w, t));
    let mut n = from;
    loop {
        let ln_p = ln_pair(n, w, t, alternating);
        if ln_p > f64::NEG_INFINITY {
            value = value + ScaledReal::new(pair_sign(n, alternating), ln_p);
        }
        n += 1;
        let ln_tail = ln_tail_from(n, w, t);
        let done = if value.is_zero() {
            ln_tail < -1.0e4
        } else {
            ln_tail < value.log_mag() + (1e-17f64).ln()
        };
        if done || 2 * n >= MAX_TERMS {
            return GaussianSum {
                value,
                tail_bound: ScaledReal::exp(ln_tail),
                terms_used: 2 * (n - from) + 1,
            };
        }
    }
}

/// Evaluates `theta_kind(v | it)` through the transformed Gaussian sum.
pub fn theta_transformed(kind: ThetaKind, v: f64, t: f64, tol: f64) -> Result<EvalReport> {
    Nome::new(t)?;
    check_tol(tol)?;
    check_v(v)?;
    let red = reduce(kind, v)?;
    let sum = normalized_sum(red.w, t, red.alternating, tol);
    // t^{-1/2} e^{-pi w^2 / t}
    let scale = ScaledReal::exp(-0.5 * t.ln() - PI * red.w * red.w / t);
    Ok(EvalReport {
        value: (scale * sum.value).with_sign(red.sign),
        terms_used: sum.terms_used,
        tail_bound: scale * sum.tail_bound,
        method: Method::Transformed,
    })
}

/// Picks the faster representation: the nome series for `t >= 1`, the
/// transformed sum below. At `t = 1` both nomes equal `e^{-pi}`.
pub fn theta_auto(kind: ThetaKind, v: f64, t: f64, tol: f64) -> Result<EvalReport> {
    Nome::new(t)?;
    if t >= CROSSOVER_T {
        theta_series(kind, v, t, tol)
    } else {
        theta_transformed(kind, v, t, tol)
    }
}

/// Relative difference between the nome series and the transformed sum,
/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn transform_identity_residual(kind: ThetaKind, v: f64, t: f64) -> Result<f64> {
    let (lo, hi) = RESIDUAL_T_RANGE;
    if !(lo..=hi).contains(&t) {
        return domain(format!(
            "transform_identity_residual requires {lo} <= t <= {hi}, got t = {t}"
        ));
    }
    let tol = 1e-15;
    let a = theta_series(kind, v, t, tol)?.value;
    let b = theta_transformed(kind, v, t, tol)?.value;
    let scale = if a.cmp_abs(&b).is_ge() {
        a.abs()
    } else {
        b.abs()
    };
    if scale.is_zero() {
        return Ok(0.0);
    }
    Ok(((a - b).abs() / scale).to_f64())
}
