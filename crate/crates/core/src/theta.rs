//! Direct evaluation of the four Jacobi theta functions `theta_j(v | it)`
//! for real `v` and `t > 0`, from their nome series and from their triple
//! products. Every evaluation carries a rigorous bound on the discarded tail.
//!
//! With `tau = it` the nome is `q = e^{pi i tau} = e^{-pi t}` in `(0, 1)`.
//! The bilateral sums fold into one-sided trigonometric sums:
//!
//! ```text
//! theta1 = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi v)
//! theta2 = 2 sum_{n>=0}        q^{(n+1/2)^2} cos((2n+1) pi v)
//! theta3 = 1 + 2 sum_{n>=1}        q^{n^2} cos(2 pi n v)
//! theta4 = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2 pi n v)
//! ```

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::scaled::ScaledReal;
use crate::trig::{cos_pi, sin_pi};

/// Hard cap on summation length; only reached for absurdly small `t`.
pub(crate) const MAX_TERMS: usize = 50_000_000;

/// Which of the four theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaKind {
    Theta1,
    Theta2,
    Theta3,
    Theta4,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [
        ThetaKind::Theta1,
        ThetaKind::Theta2,
        ThetaKind::Theta3,
        ThetaKind::Theta4,
    ];

    pub fn index(self) -> u8 {
        match self {
            ThetaKind::Theta1 => 1,
            ThetaKind::Theta2 => 2,
            ThetaKind::Theta3 => 3,
            ThetaKind::Theta4 => 4,
        }
    }

    pub fn from_index(j: u8) -> Result<Self> {
        match j {
            1 => Ok(ThetaKind::Theta1),
            2 => Ok(ThetaKind::Theta2),
            3 => Ok(ThetaKind::Theta3),
            4 => Ok(ThetaKind::Theta4),
            _ => domain(format!("theta kind must be 1, 2, 3 or 4, got {j}")),
        }
    }

    /// Kinds 1 and 2 carry the `2 q^{1/4}` prefactor and half-integer exponents.
    pub(crate) fn is_half_integer(self) -> bool {
        matches!(self, ThetaKind::Theta1 | ThetaKind::Theta2)
    }

    pub(crate) fn is_alternating(self) -> bool {
        matches!(self, ThetaKind::Theta1 | ThetaKind::Theta4)
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s
            .strip_prefix("theta")
            .or_else(|| s.strip_prefix("Theta"))
            .unwrap_or(s);
        match digits.parse::<u8>() {
            Ok(j) => ThetaKind::from_index(j),
            Err(_) => domain(format!("unrecognised theta kind {s:?}")),
        }
    }
}

impl Serialize for ThetaKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

/// How an [`EvalReport`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DirectSeries,
    Product,
    Transformed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DirectSeries => "direct_series",
            Method::Product => "product",
            Method::Transformed => "transformed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A theta value together with the rigorous bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub value: ScaledReal,
    pub terms_used: usize,
    /// Bound on `|exact - value|`, in the same scaling as `value`.
    pub tail_bound: ScaledReal,
    pub method: Method,
}

/// Nome `q = e^{-pi t}` of the point `tau = it`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    t: f64,
}

impl Nome {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return domain(format!("t must be positive and finite, got {t}"));
        }
        Ok(Nome { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `ln q = -pi t`.
    pub fn ln_q(&self) -> f64 {
        -PI * self.t
    }

    pub fn q(&self) -> f64 {
        self.ln_q().exp()
    }

    /// `ln(1 - q^k)` computed without cancellation.
    pub(crate) fn ln_one_minus_pow(&self, k: f64) -> f64 {
        (-(self.ln_q() * k).exp_m1()).ln()
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return domain(format!("tol must be positive and finite, got {tol}"));
    }
    Ok(())
}

pub(crate) fn check_v(v: f64) -> Result<()> {
    if !v.is_finite() {
        return domain(format!("v must be finite, got {v}"));
    }
    Ok(())
}

/// Result of [`q_pochhammer`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pochhammer {
    pub value: f64,
    pub err_bound: f64,
    pub factors_used: usize,
}

/// `(a; q)_inf = prod_{k>=0} (1 - a q^k)`.
///
/// The loop stops once the remaining factors can move the partial product
/// by less than `tol`: for `|prod_{k>=K}(1 + x_k) - 1| <= exp(sum |x_k|) - 1`
/// with `sum_{k>=K} |a||q|^k = |a||q|^K / (1 - |q|)`.
pub fn q_pochhammer(a: f64, q: f64, tol: f64) -> Result<Pochhammer> {
    if q.is_nan() || q.abs() >= 1.0 {
        return domain(format!("q-Pochhammer symbol requires |q| < 1, got q = {q}"));
    }
    check_tol(tol)?;
    if !a.is_finite() {
        return domain(format!("a must be finite, got {a}"));
    }

    let mut value = 1.0;
    let mut qk = 1.0;
    let mut factors_used = 0;
    loop {
        value *= 1.0 - a * qk;
        qk *= q;
        factors_used += 1;
        let rest = a.abs() * qk.abs() / (1.0 - q.abs());
        let err_bound = value.abs() * rest.exp_m1();
        if err_bound < tol || factors_used >= MAX_TERMS {
            return Ok(Pochhammer {
                value,
                err_bound,
                factors_used,
            });
        }
    }
}

/// The threshold a tail has to beat: `tol` relative to the leading-term
/// scale, or to the running value when that is smaller (down to machine
/// precision of the scale).
pub(crate) fn tail_threshold(partial_abs: f64, scale: f64, tol: f64) -> f64 {
    tol * partial_abs.clamp(f64::EPSILON * scale, scale)
}

/// Evaluates `theta_kind(v | it)` by its one-sided nome series.
///
/// Truncates at the first `N` whose geometric tail bound (e.g.
/// `2 q^{(N+1)^2} / (1 - q^{2N+3})` for kinds 3 and 4) drops below `tol`
/// relative to the running sum; the bound actually used is reported. When
/// the terms cancel so strongly that `f64` rounding would exceed the
/// requested accuracy, the same terms are re-summed in double-double.
pub fn theta_series(kind: ThetaKind, v: f64, t: f64, tol: f64) -> Result<EvalReport> {
    let nome = Nome::new(t)?;
    check_tol(tol)?;
    check_v(v)?;
    let lq = nome.ln_q();
    let half = kind.is_half_integer();
    let negate = |n: usize| kind.is_alternating() && n % 2 == 1;

    // Period-preserving reduction of v: 2 for kinds 1, 2 and 1 for kinds 3, 4.
    let vr = if half {
        v - 2.0 * (v / 2.0).round()
    } else {
        v - v.round()
    };
    // Half-integer kinds: 2 q^{1/4} sum_{n>=0} (+-1)^n q^{n(n+1)} trig((2n+1) pi v).
    // Integer kinds: 1 + 2 sum_{n>=1} (+-1)^n q^{n^2} cos(2 pi n v).
    let exponent = |n: usize| {
        if half {
            (n * (n + 1)) as f64
        } else {
            (n * n) as f64
        }
    };
    let phase = |n: usize| {
        if half {
            (2 * n + 1) as f64
        } else {
            (2 * n) as f64
        }
    };
    let weight = if half { 1.0 } else { 2.0 };
    let first = usize::from(!half);
    let trig = |x: f64| {
        if kind == ThetaKind::Theta1 {
            sin_pi(x)
        } else {
            cos_pi(x)
        }
    };
    let ln_tail_after = |n: usize| {
        let nf = n as f64;
        if half {
            // sum_{m>N} q^{m(m+1)} <= q^{(N+1)(N+2)} / (1 - q^{2N+4})
            lq * (nf + 1.0) * (nf + 2.0) - nome.ln_one_minus_pow(2.0 * nf + 4.0)
        } else {
            LN_2 + lq * (nf + 1.0) * (nf + 1.0) - nome.ln_one_minus_pow(2.0 * nf + 3.0)
        }
    };

    let mut sum = if half { 0.0 } else { 1.0 };
    let mut abs_sum = sum;
    let mut n = first;
    let ln_tail = loop {
        let term = weight * (lq * exponent(n)).exp() * trig(phase(n) * vr);
        sum += if negate(n) { -term } else { term };
        abs_sum += term.abs();
        let ln_tail = ln_tail_after(n);
        if ln_tail.exp() < tail_threshold(sum.abs(), 1.0, tol) || n + 1 >= MAX_TERMS {
            break ln_tail;
        }
        n += 1;
    };
    let last = n;

    if 4.0 * f64::EPSILON * abs_sum > tol * sum.abs() {
        let lq_dd = Dd::neg_pi_times(t);
        let mut acc = Dd::from_f64(if half { 0.0 } else { 1.0 });
        for n in first..=last {
            let arg = Dd::prod(phase(n), vr);
            let tr = if kind == ThetaKind::Theta1 {
                arg.sin_pi()
            } else {
                arg.cos_pi()
            };
            let term = (lq_dd.mul_f64(exponent(n)).exp() * tr).mul_f64(weight);
            acc = if negate(n) { acc - term } else { acc + term };
        }
        sum = acc.to_f64();
    }

    let terms_used = last + 1;
    let (value, tail_bound) = if half {
        let prefactor = ScaledReal::exp(LN_2 + lq / 4.0);
        (
            prefactor * ScaledReal::from_f64(sum),
            prefactor * ScaledReal::exp(ln_tail),
        )
    } else {
        (ScaledReal::from_f64(sum), ScaledReal::exp(ln_tail))
    };
    Ok(EvalReport {
        value,
        terms_used,
        tail_bound,
        method: Method::DirectSeries,
    })
}

/// `ln(1 - 2 q^m c + q^{2m})` where `1 - c = 2 s2` (minus pairing) or
/// `ln(1 + 2 q^m c + q^{2m})` where `1 + c = 2 s2` (plus pairing); both reduce
/// to `ln((1 - q^m)^2 + 4 q^m s2)`.
fn ln_paired_factor(nome: &Nome, m: f64, s2: f64, signed_c: f64) -> f64 {
    let qm = (nome.ln_q() * m).exp();
    if qm < 0.5 {
        (qm * (qm - 2.0 * signed_c)).ln_1p()
    } else {
        let one_minus = -(nome.ln_q() * m).exp_m1();
        (one_minus * one_minus + 4.0 * qm * s2).ln()
    }
}

/// Evaluates `theta_kind(v | it)` by its Jacobi triple product, e.g.
/// `theta3 = prod_{k>=1} (1 - q^{2k})(1 + 2 q^{2k-1} cos 2 pi v + q^{4k-2})`.
///
/// Factors are accumulated in log space. The loop stops by the same
/// remaining-factor rule as [`q_pochhammer`], applied to the relative error.
pub fn theta_product(kind: ThetaKind, v: f64, t: f64, tol: f64) -> Result<EvalReport> {
    let nome = Nome::new(t)?;
    check_tol(tol)?;
    check_v(v)?;
    let lq = nome.ln_q();
    let q = nome.q();

    let (sin_v, cos_v) = (sin_pi(v), cos_pi(v));
    let c = cos_pi(2.0 * v);
    let (s2, signed_c) = match kind {
        ThetaKind::Theta1 | ThetaKind::Theta4 => (sin_v * sin_v, c),
        ThetaKind::Theta2 | ThetaKind::Theta3 => (cos_v * cos_v, -c),
    };
    // Exponent of q in the paired factor for index k >= 1.
    let pair_exp = |k: f64| {
        if kind.is_half_integer() {
            2.0 * k
        } else {
            2.0 * k - 1.0
        }
    };

    let (mut sign, mut ln_mag) = if kind.is_half_integer() {
        let trig = if kind == ThetaKind::Theta1 {
            sin_v
        } else {
            cos_v
        };
        if trig == 0.0 {
            return Ok(EvalReport {
                value: ScaledReal::ZERO,
                terms_used: 1,
                tail_bound: ScaledReal::ZERO,
                method: Method::Product,
            });
        }
        (trig.signum() as i8, LN_2 + lq / 4.0 + trig.abs().ln())
    } else {
        (1i8, 0.0)
    };

    let mut k = 0usize;
    loop {
        k += 1;
        let kf = k as f64;
        let m = pair_exp(kf);
        let paired = ln_paired_factor(&nome, m, s2, signed_c);
        if paired == f64::NEG_INFINITY {
            // theta1/theta2 vanish through the prefactor; theta3/theta4 at
            // their zeros (which need complex v) cannot occur for real v.
            sign = 0;
            ln_mag = f64::NEG_INFINITY;
            break;
        }
        ln_mag += nome.ln_one_minus_pow(2.0 * kf) + paired;

        // sum_{j>K} (q^{2j} + 2 q^{m_j} + q^{2 m_j})
        let rest = (q.powf(2.0 * kf + 2.0) / (1.0 - q * q)
            + 2.0 * q.powf(pair_exp(kf + 1.0)) / (1.0 - q * q)
            + q.powf(2.0 * pair_exp(kf + 1.0)) / (1.0 - q.powi(4)))
        .exp_m1();
        if rest < tol || k >= MAX_TERMS {
            let value = ScaledReal::new(sign, ln_mag);
            return Ok(EvalReport {
                value,
                terms_used: k,
                tail_bound: value.abs() * ScaledReal::from_f64(rest),
                method: Method::Product,
            });
        }
    }
    Ok(EvalReport {
        value: ScaledReal::new(sign, ln_mag),
        terms_used: k,
        tail_bound: ScaledReal::ZERO,
        method: Method::Product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: ScaledReal, b: f64) -> f64 {
        (a.to_f64() - b).abs() / b.abs()
    }

    #[test]
    fn pochhammer_examples() {
        let p = q_pochhammer(0.0, 0.9, 1e-12).unwrap();
        assert_eq!((p.value, p.factors_used), (1.0, 1));
        let p = q_pochhammer(0.5, 0.5, 1e-12).unwrap();
        assert!((p.value - 0.288_788_095_086_602_4).abs() < 1e-12);
        assert!(p.err_bound < 1e-12);
        let p = q_pochhammer(1.0, 0.5, 1e-12).unwrap();
        assert_eq!(p.value, 0.0);
        assert!(q_pochhammer(0.5, 1.0, 1e-12).is_err());
        assert!(q_pochhammer(0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn series_examples() {
        let r = theta_series(ThetaKind::Theta1, 0.0, 0.7, 1e-12).unwrap();
        assert_eq!(r.value.sign(), 0);
        let r = theta_series(ThetaKind::Theta3, 0.0, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 1.086_434_811_213_308) < 1e-12);
        let r = theta_series(ThetaKind::Theta2, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value.to_f64() - 0.913_579_138_156_116_8).abs() < 1e-12);
        let r = theta_series(ThetaKind::Theta4, 0.5, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 1.086_434_811_213_308) < 1e-12);
    }

    #[test]
    fn product_examples() {
        let r = theta_product(ThetaKind::Theta1, 0.0, 1.0, 1e-12).unwrap();
        assert!(r.value.is_zero());
        let r = theta_product(ThetaKind::Theta3, 0.0, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 1.086_434_811_213_308) < 1e-12);
        let r = theta_product(ThetaKind::Theta2, 0.5, 1.0, 1e-12).unwrap();
        assert!(r.value.is_zero());
    }

    #[test]
    fn domain_errors() {
        assert!(theta_series(ThetaKind::Theta3, 0.0, 0.0, 1e-12).is_err());
        assert!(theta_series(ThetaKind::Theta3, 0.0, -1.0, 1e-12).is_err());
        assert!(theta_series(ThetaKind::Theta3, 0.0, 1.0, 0.0).is_err());
        assert!(theta_product(ThetaKind::Theta3, 0.0, f64::NAN, 1e-12).is_err());
        assert!(theta_product(ThetaKind::Theta3, f64::INFINITY, 1.0, 1e-12).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("3".parse::<ThetaKind>().unwrap(), ThetaKind::Theta3);
        assert_eq!("theta1".parse::<ThetaKind>().unwrap(), ThetaKind::Theta1);
        assert!("5".parse::<ThetaKind>().is_err());
    }

    #[test]
    fn truncation_is_honest() {
        for kind in ThetaKind::ALL {
            for &(v, t) in &[(0.3, 0.6), (-1.2, 1.0), (0.77, 2.5)] {
                let r = theta_series(kind, v, t, 1e-6).unwrap();
                let fine = theta_series(kind, v, t, 1e-15).unwrap();
                assert!(fine.terms_used >= r.terms_used);
                let change = (fine.value - r.value).abs();
                assert!(change <= r.tail_bound, "{kind} {v} {t}");
            }
        }
    }

    #[test]
    fn large_t_does_not_underflow() {
        let r = theta_series(ThetaKind::Theta2, 0.1, 1000.0, 1e-12).unwrap();
        let expected = 2f64.ln() - PI * 1000.0 / 4.0 + (PI * 0.1).cos().ln();
        assert!((r.value.log_mag() - expected).abs() < 1e-12);
        let p = theta_product(ThetaKind::Theta2, 0.1, 1000.0, 1e-12).unwrap();
        assert!((p.value.log_mag() - expected).abs() < 1e-12);
    }
}
