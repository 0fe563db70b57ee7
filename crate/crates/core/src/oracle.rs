//! High-precision reference values of `theta_j(v | it)`.
//!
//! Sums the bilateral series of the definitions directly,
//!
//! ```text
//! theta1 = sum_n (-1)^n q^{(n+1/2)^2} sin((2n+1) pi v)
//! theta2 = sum_n        q^{(n+1/2)^2} cos((2n+1) pi v)
//! theta3 = sum_n        q^{n^2}       cos(2n pi v)
//! theta4 = sum_n (-1)^n q^{n^2}       cos(2n pi v)
//! ```
//!
//! over `n` in `[-N, N]` with arbitrary-precision floats. It never uses the
//! modular transformation, so agreement with the fast evaluators checks the
//! transformation code independently. Slow by design; for tests and audits.
//!
//! Working precision starts at `digits + 10` decimal digits and is raised
//! when the terms cancel, until the requested digits survive.

use std::f64::consts::{LN_10, LN_2};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{domain, Error, Result};
use crate::scaled::ScaledReal;
use crate::theta::ThetaKind;

const RM: RoundingMode = RoundingMode::ToEven;
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;
const MIN_T: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 8;

/// A real argument for the oracle: an `f64` taken exactly, or a decimal string.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleArg {
    Float(f64),
    Decimal(String),
}

impl From<f64> for OracleArg {
    fn from(x: f64) -> Self {
        OracleArg::Float(x)
    }
}

impl From<&str> for OracleArg {
    fn from(s: &str) -> Self {
        OracleArg::Decimal(s.to_owned())
    }
}

impl OracleArg {
    fn to_big(&self, p: usize, cc: &mut Consts) -> Result<BigFloat> {
        let b = match self {
            OracleArg::Float(x) => BigFloat::from_f64(*x, p.max(64)),
            OracleArg::Decimal(s) => BigFloat::parse(s, Radix::Dec, p, RM, cc),
        };
        if b.is_nan() || b.is_inf() {
            return domain(format!("oracle argument {self:?} is not a finite number"));
        }
        Ok(b)
    }
}

/// A reference value with the precision it was computed at.
#[derive(Debug, Clone)]
pub struct OracleValue {
    value: BigFloat,
    digits: u32,
    terms: usize,
    precision_bits: usize,
}

fn big_to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    let s = x
        .format(Radix::Dec, RM, cc)
        .expect("formatting a finite big float");
    s.parse()
        .or_else(|_| s.replace(".e", "e").parse())
        .expect("big float decimal form parses as f64")
}

impl OracleValue {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Number of bilateral terms summed.
    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let mut cc = consts();
        big_to_f64(&self.value, &mut cc)
    }

    /// Sign and natural-log magnitude, valid far outside the `f64` range.
    pub fn to_scaled(&self) -> ScaledReal {
        if self.value.is_zero() {
            return ScaledReal::ZERO;
        }
        let mut cc = consts();
        let ln = self.value.abs().ln(self.precision_bits, RM, &mut cc);
        let sign = if self.value.is_negative() { -1 } else { 1 };
        ScaledReal::new(sign, big_to_f64(&ln, &mut cc))
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mut cc = consts();
        let p = ((digits as f64 * BITS_PER_DIGIT) as usize + 8).min(self.precision_bits);
        let mut rounded = self.value.clone();
        rounded
            .set_precision(p, RM)
            .expect("rounding precision is valid");
        rounded
            .format(Radix::Dec, RM, &mut cc)
            .expect("formatting a finite big float")
    }

    /// `|approx - self| / |self|`, evaluated at the oracle's precision. Zero
    /// when both vanish, infinite when only the reference does.
    pub fn rel_diff(&self, approx: ScaledReal) -> f64 {
        if self.value.is_zero() {
            return if approx.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let mut cc = consts();
        let p = self.precision_bits;
        let a = if approx.is_zero() {
            BigFloat::from_f64(0.0, p)
        } else {
            let m = BigFloat::from_f64(approx.log_mag(), p).exp(p, RM, &mut cc);
            if approx.sign() < 0 {
                m.neg()
            } else {
                m
            }
        };
        let d = a.sub(&self.value, p, RM).div(&self.value, p, RM).abs();
        big_to_f64(&d, &mut cc)
    }
}

fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

fn is_neg(x: &BigFloat) -> bool {
    x.is_negative() && !x.is_zero()
}

/// `sin(pi x)` or `cos(pi x)` with exact reduction, so integer and
/// half-integer arguments give exact zeros.
fn trig_pi(x: &BigFloat, cosine: bool, pi: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let two = BigFloat::from_i32(2, p);
    let one = BigFloat::from_i32(1, p);
    let half = BigFloat::from_f64(0.5, p);
    // r = x - 2 floor(x/2 + 1/2), in [-1, 1)
    let k = x.div(&two, p, RM).add(&half, p, RM).floor();
    let r = x.sub(&k.mul(&two, p, RM), p, RM);
    let sin_of = |y: &BigFloat, cc: &mut Consts| y.mul(pi, p, RM).sin(p, RM, cc);
    let cos_of = |y: &BigFloat, cc: &mut Consts| y.mul(pi, p, RM).cos(p, RM, cc);

    if cosine {
        let a = r.abs();
        if a.cmp(&BigFloat::from_f64(0.25, p)) < Some(0) {
            cos_of(&a, cc)
        } else if a.cmp(&BigFloat::from_f64(0.75, p)) <= Some(0) {
            sin_of(&half.sub(&a, p, RM), cc)
        } else {
            cos_of(&one.sub(&a, p, RM), cc).neg()
        }
    } else if r.cmp(&half) > Some(0) {
        sin_of(&one.sub(&r, p, RM), cc)
    } else if r.cmp(&half.neg()) < Some(0) {
        sin_of(&one.neg().sub(&r, p, RM), cc)
    } else {
        sin_of(&r, cc)
    }
}

struct Pass {
    sum: BigFloat,
    abs_sum: BigFloat,
    terms: usize,
}

fn bilateral_pass(
    kind: ThetaKind,
    v: &BigFloat,
    t: &BigFloat,
    t_f64: f64,
    digits: u32,
    p: usize,
    cc: &mut Consts,
) -> Result<Pass> {
    let pi = cc.pi(p, RM);
    let neg_pi_t = pi.mul(t, p, RM).neg();
    let half = kind.is_half_integer();
    let cosine = kind != ThetaKind::Theta1;
    let alternating = kind.is_alternating();
    let pi_t = std::f64::consts::PI * t_f64;

    let term = |n: i64, cc: &mut Consts| -> BigFloat {
        // exponent e_n and phase multiplier of v
        let (e, mult) = if half {
            let m = BigFloat::from_i64(2 * n + 1, p);
            let e = m.mul(&m, p, RM).div(&BigFloat::from_i32(4, p), p, RM);
            (e, m)
        } else {
            let m = BigFloat::from_i64(2 * n, p);
            (BigFloat::from_i64(n * n, p), m)
        };
        let mag = e.mul(&neg_pi_t, p, RM).exp(p, RM, cc);
        let tr = trig_pi(&mult.mul(v, p, RM), cosine, &pi, p, cc);
        let x = mag.mul(&tr, p, RM);
        if alternating && n.rem_euclid(2) == 1 {
            x.neg()
        } else {
            x
        }
    };

    let mut sum = BigFloat::from_i32(0, p);
    let mut abs_sum = BigFloat::from_i32(0, p);
    let mut terms = 0usize;
    let ln_target = -(digits as f64) * LN_10;
    let mut big_n: i64 = 0;
    loop {
        // indices with the same magnitude: n, and -n (integer kinds) or -n-1
        let partners: Vec<i64> = if half {
            vec![big_n, -big_n - 1]
        } else if big_n == 0 {
            vec![0]
        } else {
            vec![big_n, -big_n]
        };
        for n in partners {
            let x = term(n, cc);
            abs_sum = abs_sum.add(&x.abs(), p, RM);
            sum = sum.add(&x, p, RM);
            terms += 1;
        }
        // tail of the remaining indices, both sides
        let nf = big_n as f64;
        let (lead, ratio) = if half {
            ((nf + 1.5) * (nf + 1.5), 2.0 * nf + 4.0)
        } else {
            ((nf + 1.0) * (nf + 1.0), 2.0 * nf + 3.0)
        };
        let ln_tail = LN_2 - pi_t * lead - (-(-pi_t * ratio).exp_m1()).ln();
        let ln_ref = if sum.is_zero() {
            // nothing to be relative to yet; use the leading-term scale
            if half {
                LN_2 - pi_t / 4.0
            } else {
                0.0
            }
        } else {
            let l = sum.abs().ln(p, RM, cc);
            big_to_f64(&l, cc)
        };
        if ln_tail < ln_ref + ln_target {
            return Ok(Pass {
                sum,
                abs_sum,
                terms,
            });
        }
        big_n += 1;
        if big_n > 1_000_000 {
            return Err(Error::OracleRefused(format!(
                "series did not converge for t = {t_f64}"
            )));
        }
    }
}

/// Evaluates `theta_kind(v | it)` to `digits` significant digits.
pub fn oracle_theta(
    kind: ThetaKind,
    v: impl Into<OracleArg>,
    t: impl Into<OracleArg>,
    digits: u32,
) -> Result<OracleValue> {
    let mut cc = consts();
    let p = 64 + ((digits as f64 + 10.0) * BITS_PER_DIGIT) as usize;
    let v = v.into().to_big(p, &mut cc)?;
    let t = t.into().to_big(p, &mut cc)?;
    oracle_theta_big(kind, &v, &t, digits)
}

/// As [`oracle_theta`], for arguments already held as big floats.
pub fn oracle_theta_big(
    kind: ThetaKind,
    v: &BigFloat,
    t: &BigFloat,
    digits: u32,
) -> Result<OracleValue> {
    if !(20..=100).contains(&digits) {
        return domain(format!("oracle digits must be in [20, 100], got {digits}"));
    }
    let mut cc = consts();
    if v.is_nan() || v.is_inf() {
        return domain("oracle v must be finite");
    }
    if t.is_nan() || t.is_inf() || t.is_zero() || is_neg(t) {
        return domain("oracle t must be positive and finite");
    }
    let t_f64 = big_to_f64(t, &mut cc);
    if t_f64 < MIN_T {
        return Err(Error::OracleRefused(format!(
            "t = {t_f64:e} is below {MIN_T:e}; use the transformed sums"
        )));
    }

    let mut p = ((digits as f64 + 10.0) * BITS_PER_DIGIT) as usize + 64;
    for _ in 0..MAX_ATTEMPTS {
        let pass = bilateral_pass(kind, v, t, t_f64, digits, p, &mut cc)?;
        let lost_bits = if pass.abs_sum.is_zero() {
            0.0
        } else if pass.sum.is_zero() {
            f64::INFINITY
        } else {
            let ratio = pass.abs_sum.div(&pass.sum.abs(), p, RM).ln(p, RM, &mut cc);
            big_to_f64(&ratio, &mut cc) / LN_2
        };
        let spare = p as f64 - digits as f64 * BITS_PER_DIGIT - lost_bits;
        if spare >= 10.0 * BITS_PER_DIGIT {
            return Ok(OracleValue {
                value: pass.sum,
                digits,
                terms: pass.terms,
                precision_bits: p,
            });
        }
        p += if lost_bits.is_finite() {
            lost_bits as usize + 128
        } else {
            4 * p
        };
    }
    // Full cancellation at every precision tried: the value is zero to far
    // beyond the requested digits.
    Ok(OracleValue {
        value: BigFloat::from_i32(0, p),
        digits,
        terms: 0,
        precision_bits: p,
    })
}
