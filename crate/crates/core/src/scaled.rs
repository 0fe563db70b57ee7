//! Sign plus natural-log magnitude reals.
//!
//! Quantities such as `e^{-pi/t}` at `t = 1e-3` (about `e^{-3141.6}`) or the
//! prefactor `e^{pi w^2 / t}` leave the `f64` range long before they stop
//! being meaningful. [`ScaledReal`] keeps them as `sign * exp(log_mag)` so
//! products are additions and comparisons against exponential bounds are
//! subtractions of exponents.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

/// `sign * e^{log_mag}`; `sign == 0` is exactly zero and `log_mag` is then
/// ignored (kept at `-inf`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScaledReal {
    sign: i8,
    log_mag: f64,
}

/// How a conversion to a plain `f64` went.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Range {
    Normal,
    Underflow,
    Overflow,
}

/// Result of [`ScaledReal::to_plain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plain {
    pub value: f64,
    pub range: Range,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: ScaledReal = ScaledReal {
        sign: 1,
        log_mag: 0.0,
    };

    /// Builds `sign * e^{log_mag}`. A zero sign or a `-inf` magnitude gives zero.
    ///
    /// Panics if `sign` is not in `{-1, 0, 1}` or if `log_mag` is NaN or `+inf`
    /// for a nonzero sign.
    pub fn new(sign: i8, log_mag: f64) -> Self {
        assert!((-1..=1).contains(&sign), "sign must be -1, 0 or 1");
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        assert!(
            log_mag.is_finite(),
            "log magnitude must be finite, got {log_mag}"
        );
        ScaledReal { sign, log_mag }
    }

    /// `e^{exponent}`.
    pub fn exp(exponent: f64) -> Self {
        Self::new(1, exponent)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            ScaledReal {
                sign: 1,
                log_mag: self.log_mag,
            }
        }
    }

    /// Multiplies by `(-1)^k` style signs.
    pub fn with_sign(self, s: i8) -> Self {
        Self::new(self.sign * s, self.log_mag)
    }

    pub fn powf(self, p: f64) -> Self {
        assert!(self.sign >= 0, "powf of a negative scaled value");
        if self.sign == 0 {
            return self;
        }
        Self::new(1, self.log_mag * p)
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    /// Converts to `f64`, flagging values outside the normal range.
    pub fn to_plain(&self) -> Plain {
        if self.sign == 0 {
            return Plain {
                value: 0.0,
                range: Range::Normal,
            };
        }
        let mag = self.log_mag.exp();
        let range = if mag.is_infinite() {
            Range::Overflow
        } else if mag < f64::MIN_POSITIVE {
            Range::Underflow
        } else {
            Range::Normal
        };
        Plain {
            value: f64::from(self.sign) * mag,
            range,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_plain().value
    }

    /// Orders by absolute value.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log_mag()
            .partial_cmp(&other.log_mag())
            .expect("log magnitudes are never NaN")
    }
}

impl Default for ScaledReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl PartialEq for ScaledReal {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == 0 || self.log_mag == other.log_mag)
    }
}

impl PartialOrd for ScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_mag.partial_cmp(&other.log_mag),
                _ => other.log_mag.partial_cmp(&self.log_mag),
            },
            ord => Some(ord),
        }
    }
}

impl Mul for ScaledReal {
    type Output = ScaledReal;

    fn mul(self, rhs: ScaledReal) -> ScaledReal {
        if self.sign == 0 || rhs.sign == 0 {
            return ScaledReal::ZERO;
        }
        ScaledReal::new(self.sign * rhs.sign, self.log_mag + rhs.log_mag)
    }
}

impl Div for ScaledReal {
    type Output = ScaledReal;

    /// Panics on division by zero.
    fn div(self, rhs: ScaledReal) -> ScaledReal {
        assert!(rhs.sign != 0, "division by a zero scaled value");
        if self.sign == 0 {
            return ScaledReal::ZERO;
        }
        ScaledReal::new(self.sign * rhs.sign, self.log_mag - rhs.log_mag)
    }
}

impl Add for ScaledReal {
    type Output = ScaledReal;

    fn add(self, rhs: ScaledReal) -> ScaledReal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.log_mag - big.log_mag;
        if big.sign == small.sign {
            return ScaledReal::new(big.sign, big.log_mag + d.exp().ln_1p());
        }
        // 1 - e^d without cancellation
        let rest = -d.exp_m1();
        if rest <= f64::EPSILON * big.log_mag.abs().max(1.0) {
            return ScaledReal::ZERO;
        }
        ScaledReal::new(big.sign, big.log_mag + rest.ln())
    }
}

impl Neg for ScaledReal {
    type Output = ScaledReal;

    fn neg(self) -> ScaledReal {
        self.with_sign(-1)
    }
}

impl Sub for ScaledReal {
    type Output = ScaledReal;

    fn sub(self, rhs: ScaledReal) -> ScaledReal {
        self + (-rhs)
    }
}

impl std::iter::Sum for ScaledReal {
    fn sum<I: Iterator<Item = ScaledReal>>(iter: I) -> ScaledReal {
        iter.fold(ScaledReal::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}
