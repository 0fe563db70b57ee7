//! Minimal double-double arithmetic (about 106 significant bits) used by the
//! direct series when its terms cancel too strongly for plain `f64`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};
const LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e - p2 + self.lo;
        let (hi, lo) = quick_two_sum(q1, (s + e) / b);
        Dd { hi, lo }
    }

    fn scale_pow2(self, k: i32) -> Dd {
        // split so neither factor overflows or underflows on its own
        let a = 2f64.powi(k / 2);
        let b = 2f64.powi(k - k / 2);
        Dd {
            hi: self.hi * a * b,
            lo: self.lo * a * b,
        }
    }

    /// `e^x`, accurate to a few units of `2^-104` relative for `x` above -700.
    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = (self - LN_2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        // Taylor series of e^r - 1 for |r| < 3.4e-4
        let mut term = r;
        let mut sum = r;
        for i in 2..=11 {
            term = (term * r).div_f64(i as f64);
            sum = sum + term;
        }
        // (1 + s)^2 - 1 = s (2 + s), repeated 10 times
        for _ in 0..10 {
            sum = sum * (sum + Dd::from_f64(2.0));
        }
        (sum + Dd::ONE).scale_pow2(k as i32)
    }

    fn sin_taylor(x: Dd) -> Dd {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut i = 1.0;
        while term.hi.abs() > 1e-34 {
            term = -(term * x2).div_f64((i + 1.0) * (i + 2.0));
            sum = sum + term;
            i += 2.0;
        }
        sum
    }

    fn cos_taylor(x: Dd) -> Dd {
        let x2 = x * x;
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        let mut i = 0.0;
        while term.hi.abs() > 1e-34 {
            term = -(term * x2).div_f64((i + 1.0) * (i + 2.0));
            sum = sum + term;
            i += 2.0;
        }
        sum
    }

    /// `x - 2 round(x / 2)`, in `[-1, 1]`.
    fn reduce_mod2(self) -> Dd {
        let k = (self.hi / 2.0).round();
        let r = self - Dd::from_f64(2.0 * k);
        if r.hi > 1.0 {
            r - Dd::from_f64(2.0)
        } else if r.hi < -1.0 {
            r + Dd::from_f64(2.0)
        } else {
            r
        }
    }

    pub fn sin_pi(self) -> Dd {
        let r = self.reduce_mod2();
        if r.hi > 0.5 {
            Dd::sin_taylor(PI * (Dd::ONE - r))
        } else if r.hi < -0.5 {
            Dd::sin_taylor(PI * (Dd::from_f64(-1.0) - r))
        } else {
            Dd::sin_taylor(PI * r)
        }
    }

    pub fn cos_pi(self) -> Dd {
        let mut a = self.reduce_mod2();
        if a.hi < 0.0 {
            a = -a;
        }
        if a.hi < 0.25 {
            Dd::cos_taylor(PI * a)
        } else if a.hi <= 0.75 {
            Dd::sin_taylor(PI * (Dd::from_f64(0.5) - a))
        } else {
            -Dd::cos_taylor(PI * (Dd::ONE - a))
        }
    }

    /// `-pi * x`.
    pub fn neg_pi_times(x: f64) -> Dd {
        -PI.mul_f64(x)
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_f64_and_is_consistent() {
        for &x in &[-40.0, -3.3, -0.5, 0.0, 0.7, 12.0] {
            let e = Dd::from_f64(x).exp();
            assert!((e.to_f64() - f64::exp(x)).abs() <= 4e-16 * f64::exp(x));
        }
        // e^a e^b == e^(a+b) well below f64 precision
        let a = Dd::from_f64(-1.25).exp();
        let b = Dd::from_f64(-2.5).exp();
        let ab = Dd::from_f64(-3.75).exp();
        let d = (a * b - ab).to_f64();
        assert!(d.abs() < 1e-30);
    }

    #[test]
    fn trig_identities() {
        for i in -50..50 {
            let x = Dd::from_f64(i as f64 * 0.0371);
            let s = x.sin_pi();
            let c = x.cos_pi();
            let one = (s * s + c * c - Dd::ONE).to_f64();
            assert!(one.abs() < 1e-30, "{one}");
        }
        assert_eq!(Dd::from_f64(3.0).sin_pi().to_f64(), 0.0);
        assert_eq!(Dd::from_f64(1.5).cos_pi().to_f64(), 0.0);
        // sin(pi/6) = 1/2 exactly
        let s = Dd::from_f64(1.0 / 6.0).sin_pi();
        assert!((s.to_f64() - 0.5).abs() < 1e-16);
    }
}
