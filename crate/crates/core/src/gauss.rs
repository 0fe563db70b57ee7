//! Two-term expansions of the normalised theta functions and the Gaussian
//! approximation `t^{1/2} theta_j(u | it) = e^{-pi x^2} (1 + R)`, with the
//! explicit exponential bounds on their remainders and a harness that
//! measures the true remainders against those bounds.
//!
//! Normalised theta: with `w` the reduced argument and `s` the sign prefactor
//! from [`crate::modular::reduce`],
//!
//! ```text
//! s t^{1/2} e^{pi w^2/t} theta_j(v|it) = 1 -+ 2 e^{-pi/t} cosh(2 pi w / t) + R1
//! |R1| <= 2 e^{-2 pi/t} / (1 - e^{-pi/a}),                 0 < t < a
//! |R2| <= (4 - 2e^{-pi}) / (1 - e^{-pi}) e^{-(pi - eps)/t}, t < eps^2/(4 pi^2 C^2)
//! ```

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::modular::{normalized_remainder, reduce, theta_auto};
use crate::scaled::ScaledReal;
use crate::theta::{check_v, Nome, ThetaKind};

/// Required ratio between a bound and the accuracy of the remainder measured
/// against it.
pub const ACCURACY_MARGIN: f64 = 1e3;

/// Slack on bound comparisons.
const BOUND_SLACK: f64 = 1e-9;

/// How a remainder was measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementRoute {
    /// Evaluate the theta function and subtract the leading part.
    Evaluated,
    /// Sum the neglected terms of the transformed series directly in log space.
    LogSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionReport {
    /// `1 -+ 2 e^{-pi/t} cosh(2 pi w / t)`.
    pub leading: ScaledReal,
    pub remainder_bound: ScaledReal,
    /// `None` when the achievable accuracy cannot decide the comparison.
    pub measured_remainder: Option<ScaledReal>,
    pub satisfied: Option<bool>,
    pub route: MeasurementRoute,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub kind: ThetaKind,
    #[serde(rename = "C")]
    pub c: f64,
    pub eps: f64,
    pub t_values: Vec<f64>,
    /// Per `t`, the sup over the x-grid of `|R2|`.
    pub sup_measured: Vec<ScaledReal>,
    pub bounds: Vec<ScaledReal>,
    pub routes: Vec<MeasurementRoute>,
    pub all_pass: bool,
    /// Least-squares slope of `ln sup|R2|` against `1/t`; `None` with fewer
    /// than two usable points.
    pub decay_slope: Option<f64>,
}

/// Expansion check of one `t` over a grid of `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionSweep {
    pub kind: ThetaKind,
    pub t: f64,
    pub a: f64,
    pub sup_measured: ScaledReal,
    pub bound: ScaledReal,
    pub all_satisfied: bool,
    pub indeterminate: usize,
}

fn check_t(t: f64) -> Result<()> {
    Nome::new(t).map(|_| ())
}

/// `1 - e^{-x}` for `x >= 0`, as a scaled value.
fn one_minus_exp_neg(x: f64) -> ScaledReal {
    ScaledReal::from_f64(-(-x).exp_m1())
}

/// The leading part of the normalised theta: `1 - 2 e^{-pi/t} cosh(2 pi w/t)`
/// for kinds 1 and 2, `1 + ...` for kinds 3 and 4.
///
/// Uses `2 e^{-pi/t} cosh(2 pi w/t) = e^{-pi(1-2|w|)/t} + e^{-pi(1+2|w|)/t}`,
/// both exponents nonpositive for `|w| <= 1/2`.
pub fn leading_expansion(kind: ThetaKind, v: f64, t: f64) -> Result<ScaledReal> {
    check_t(t)?;
    check_v(v)?;
    let w = reduce(kind, v)?.w.abs();
    let near = PI * (1.0 - 2.0 * w) / t;
    let far = ScaledReal::exp(-PI * (1.0 + 2.0 * w) / t);
    Ok(match kind {
        ThetaKind::Theta1 | ThetaKind::Theta2 => one_minus_exp_neg(near) - far,
        ThetaKind::Theta3 | ThetaKind::Theta4 => ScaledReal::ONE + ScaledReal::exp(-near) + far,
    })
}

/// `2 e^{-2 pi/t} / (1 - e^{-pi/a})` for `0 < t < a`.
pub fn expansion_bound(t: f64, a: f64) -> Result<ScaledReal> {
    if !(t > 0.0 && t < a && a.is_finite()) {
        return domain(format!(
            "expansion bound requires 0 < t < a, got t = {t}, a = {a}"
        ));
    }
    Ok(ScaledReal::exp(LN_2 - 2.0 * PI / t) / one_minus_exp_neg(PI / a))
}

fn compare(measured: ScaledReal, err: ScaledReal, bound: ScaledReal) -> Option<bool> {
    let limit = bound * ScaledReal::from_f64(1.0 + BOUND_SLACK);
    let m = measured.abs();
    let lo = m - err;
    let hi = m + err;
    if hi <= limit {
        Some(true)
    } else if lo > limit {
        Some(false)
    } else {
        None
    }
}

/// Rounding error estimate, relative, for a value assembled from log-space
/// factors whose exponents have magnitude up to `log_scale`.
fn rounding(log_scale: f64) -> f64 {
    16.0 * f64::EPSILON * (2.0 + log_scale.abs())
}

/// Measures the expansion remainder `R1` of `theta_kind(v | it)` and checks it
/// against [`expansion_bound`].
pub fn expansion_check(kind: ThetaKind, v: f64, t: f64, a: f64) -> Result<ExpansionReport> {
    let bound = expansion_bound(t, a)?;
    let leading = leading_expansion(kind, v, t)?;
    let red = reduce(kind, v)?;
    let lift = 0.5 * t.ln() + PI * red.w * red.w / t;

    // Evaluated route: accuracy set by the theta tolerance and by rounding
    // in the log-space prefactors.
    let tol = 1e-15;
    let eval = theta_auto(kind, v, t, tol)?;
    let normalized = (eval.value * ScaledReal::exp(lift)).with_sign(red.sign);
    let value_log = if eval.value.is_zero() {
        0.0
    } else {
        eval.value.log_mag()
    };
    let err = (normalized.abs() + leading.abs())
        * ScaledReal::from_f64(rounding(lift) + rounding(value_log))
        + eval.tail_bound * ScaledReal::exp(lift);

    if bound >= err * ScaledReal::from_f64(ACCURACY_MARGIN) {
        let measured = normalized - leading;
        let satisfied = compare(measured, err, bound);
        return Ok(ExpansionReport {
            leading,
            remainder_bound: bound,
            measured_remainder: satisfied.map(|_| measured),
            satisfied,
            route: MeasurementRoute::Evaluated,
        });
    }

    let rem = normalized_remainder(red.w, t, red.alternating, 2);
    let err = rem.value.abs() * ScaledReal::from_f64(rounding(PI * 4.0 / t)) + rem.tail_bound;
    let satisfied = compare(rem.value, err, bound);
    Ok(ExpansionReport {
        leading,
        remainder_bound: bound,
        measured_remainder: satisfied.map(|_| rem.value),
        satisfied,
        route: MeasurementRoute::LogSpace,
    })
}

/// Checks every `v` at one `t` and reports the largest measured remainder.
pub fn expansion_sweep(
    kind: ThetaKind,
    t: f64,
    a: f64,
    v_values: &[f64],
) -> Result<ExpansionSweep> {
    let bound = expansion_bound(t, a)?;
    let reports = v_values
        .par_iter()
        .map(|&v| expansion_check(kind, v, t, a))
        .collect::<Result<Vec<_>>>()?;
    let mut sup = ScaledReal::ZERO;
    let mut indeterminate = 0;
    let mut all_satisfied = true;
    for r in &reports {
        match (r.measured_remainder, r.satisfied) {
            (Some(m), Some(ok)) => {
                if m.cmp_abs(&sup).is_gt() {
                    sup = m.abs();
                }
                all_satisfied &= ok;
            }
            _ => {
                indeterminate += 1;
                all_satisfied = false;
            }
        }
    }
    Ok(ExpansionSweep {
        kind,
        t,
        a,
        sup_measured: sup,
        bound,
        all_satisfied,
        indeterminate,
    })
}

/// Largest `t` admitted for the Gaussian approximation with `|x| <= C` at
/// slack `eps`: `eps^2 / (4 pi^2 C^2)`, which must stay below 1.
///
/// Requires `0 < eps < 1`. The cap `eps < 2C` is not imposed: the bound only
/// needs `2 pi C / sqrt(t) <= eps / t` and `t < 1`, both implied by
/// `t < eps^2/(4 pi^2 C^2) < 1`.
pub fn gaussian_precondition(c: f64, eps: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("C must be positive, got C = {c}"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("eps must satisfy 0 < eps < 1, got eps = {eps}"));
    }
    let t_max = eps * eps / (4.0 * PI * PI * c * c);
    if t_max >= 1.0 {
        return domain(format!(
            "eps^2/(4 pi^2 C^2) = {t_max} must be below 1 for C = {c}, eps = {eps}"
        ));
    }
    Ok(t_max)
}

/// `ln((4 - 2e^{-pi}) / (1 - e^{-pi}))`.
pub fn gaussian_bound_ln_constant() -> f64 {
    let e = (-PI).exp();
    ((4.0 - 2.0 * e) / (1.0 - e)).ln()
}

/// `(4 - 2e^{-pi}) / (1 - e^{-pi}) e^{-(pi - eps)/t}` for `0 < eps < 1`, `0 < t < 1`.
pub fn gaussian_bound(t: f64, eps: f64) -> Result<ScaledReal> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!(
            "Gaussian bound requires 0 < eps < 1, got eps = {eps}"
        ));
    }
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("Gaussian bound requires 0 < t < 1, got t = {t}"));
    }
    Ok(ScaledReal::exp(
        gaussian_bound_ln_constant() - (PI - eps) / t,
    ))
}

fn check_gauss_args(x: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!(
            "Gaussian approximation requires 0 < t < 1, got t = {t}"
        ));
    }
    if !(x.is_finite() && x.abs() * t.sqrt() < 0.5) {
        return domain(format!(
            "Gaussian approximation requires |x| sqrt(t) < 1/2, got x = {x}, t = {t}"
        ));
    }
    Ok(())
}

/// The theta argument paired with `x`: `1/2 + sqrt(t) x` for kinds 1 and 4,
/// `sqrt(t) x` for kinds 2 and 3.
pub fn gaussian_argument(kind: ThetaKind, x: f64, t: f64) -> f64 {
    let y = t.sqrt() * x;
    match kind {
        ThetaKind::Theta1 | ThetaKind::Theta4 => 0.5 + y,
        ThetaKind::Theta2 | ThetaKind::Theta3 => y,
    }
}

/// `(t^{1/2} theta_kind(u | it), e^{-pi x^2})`; their ratio minus one is `R2`.
pub fn gaussian_approx(kind: ThetaKind, x: f64, t: f64) -> Result<(ScaledReal, ScaledReal)> {
    check_gauss_args(x, t)?;
    let u = gaussian_argument(kind, x, t);
    let theta = theta_auto(kind, u, t, 1e-15)?;
    let approx = ScaledReal::exp(0.5 * t.ln()) * theta.value;
    Ok((approx, ScaledReal::exp(-PI * x * x)))
}

/// `R2` summed term by term: `sum_{n != 0} (+-1)^n e^{-pi n^2/t + 2 pi n x / sqrt(t)}`,
/// exact in log space at any `t`. The argument collapse `((1/2 + x sqrt t)) =
/// [[x sqrt t]] = x sqrt t` is applied analytically.
pub fn gaussian_remainder(kind: ThetaKind, x: f64, t: f64) -> Result<ScaledReal> {
    check_gauss_args(x, t)?;
    let alternating = matches!(kind, ThetaKind::Theta1 | ThetaKind::Theta2);
    Ok(normalized_remainder(x * t.sqrt(), t, alternating, 1).value)
}

/// Measures `R2` at one point by the route the bound allows.
fn measure_r2(
    kind: ThetaKind,
    x: f64,
    t: f64,
    bound: ScaledReal,
) -> Result<(ScaledReal, MeasurementRoute)> {
    let err = rounding(PI * x * x) + rounding(2.0 * PI * x / t.sqrt()) + rounding(t.ln()) + 1e-15;
    if bound.to_f64() >= ACCURACY_MARGIN * err {
        let (approx, target) = gaussian_approx(kind, x, t)?;
        Ok((
            approx / target - ScaledReal::ONE,
            MeasurementRoute::Evaluated,
        ))
    } else {
        Ok((gaussian_remainder(kind, x, t)?, MeasurementRoute::LogSpace))
    }
}

/// `n` evenly spaced points on `[-c, c]`, endpoints included.
pub fn symmetric_grid(c: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                c
            } else {
                -c + 2.0 * c * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Sweeps a uniform grid of `x_count` points on `[-C, C]` for every `t` and
/// compares `sup |R2|` with [`gaussian_bound`].
pub fn certify(
    kind: ThetaKind,
    c: f64,
    eps: f64,
    t_values: &[f64],
    x_count: usize,
) -> Result<CertificationReport> {
    if t_values.is_empty() {
        return domain("certify needs at least one t value");
    }
    if x_count < 2 {
        return domain(format!("certify needs x_count >= 2, got {x_count}"));
    }
    let t_max = gaussian_precondition(c, eps)?;
    let limit = t_max.min(1.0);
    for &t in t_values {
        if !(t > 0.0 && t < limit) {
            return domain(format!(
                "t={t} \u{2265} t_max={t_max:.6} for C={c}, eps={eps}"
            ));
        }
    }

    let xs = symmetric_grid(c, x_count);
    let per_t = t_values
        .par_iter()
        .map(|&t| {
            let bound = gaussian_bound(t, eps)?;
            let measured = xs
                .par_iter()
                .map(|&x| measure_r2(kind, x, t, bound))
                .collect::<Result<Vec<_>>>()?;
            let route = if measured.iter().any(|m| m.1 == MeasurementRoute::LogSpace) {
                MeasurementRoute::LogSpace
            } else {
                MeasurementRoute::Evaluated
            };
            let sup = measured
                .iter()
                .map(|m| m.0.abs())
                .fold(ScaledReal::ZERO, |acc, r| if r > acc { r } else { acc });
            Ok((sup, bound, route))
        })
        .collect::<Result<Vec<_>>>()?;

    let sup_measured: Vec<_> = per_t.iter().map(|p| p.0).collect();
    let bounds: Vec<_> = per_t.iter().map(|p| p.1).collect();
    let routes = per_t.iter().map(|p| p.2).collect();
    let all_pass = sup_measured.iter().zip(&bounds).all(|(s, b)| s <= b);

    let (inv_t, ln_sup): (Vec<f64>, Vec<f64>) = t_values
        .iter()
        .zip(&sup_measured)
        .filter(|(_, s)| !s.is_zero())
        .map(|(t, s)| (1.0 / t, s.log_mag()))
        .unzip();

    Ok(CertificationReport {
        kind,
        c,
        eps,
        t_values: t_values.to_vec(),
        sup_measured,
        bounds,
        routes,
        all_pass,
        decay_slope: ls_slope(&inv_t, &ln_sup),
    })
}
