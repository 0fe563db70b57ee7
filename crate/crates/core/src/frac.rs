//! Integer and fractional reductions of a real number.
//!
//! Three reductions are used by the transformed theta representations:
//!
//! - floor split: `x = [x] + {x}` with `0 <= {x} < 1`,
//! - centered fractional part: `((x)) = {x} - 1/2`, in `[-1/2, 1/2)`,
//! - nearest-integer split: `x = m_x + [[x]]` with `[[x]]` in `[-1/2, 1/2)`.
//!
//! Half-integers round up in the nearest-integer split, so `-0.5` maps to
//! `m = 0, rem = -0.5` and `2.5` maps to `m = 3, rem = -0.5`.

use serde::Serialize;

use crate::error::{domain, Result};

/// Largest magnitude whose floor still fits an `i64`.
const INT_LIMIT: f64 = 9.223_372_036_854_775e18;

/// All reductions of one real number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub x: f64,
    /// `[x]`, the floor of `x`.
    pub int_part: i64,
    /// `{x}` in `[0, 1)`.
    pub frac_part: f64,
    /// `((x)) = {x} - 1/2` in `[-1/2, 1/2)`.
    pub centered: f64,
    /// `m_x`, the nearest integer with half-integers rounded up.
    pub nearest_int: i64,
    /// `[[x]] = x - m_x` in `[-1/2, 1/2)`.
    pub nearest_rem: f64,
}

impl Decomposition {
    /// `(-1)^[x]`.
    pub fn floor_parity(&self) -> i8 {
        if self.int_part.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `(-1)^{m_x}`.
    pub fn nearest_parity(&self) -> i8 {
        if self.nearest_int.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Computes every reduction of `x`.
///
/// `x - floor(x)` and `x - m_x` are exact in binary floating point except
/// for negative `x` so close to zero that `x + 1` rounds up to `1`; there
/// the fractional part is pinned to the largest double below one.
pub fn decompose(x: f64) -> Result<Decomposition> {
    if !x.is_finite() {
        return domain(format!("decompose requires a finite input, got {x}"));
    }
    if x.abs() >= INT_LIMIT {
        return domain(format!(
            "decompose input {x:e} exceeds the i64 integer range"
        ));
    }

    let floor = x.floor();
    let mut frac_part = x - floor;
    if frac_part >= 1.0 {
        frac_part = 1.0 - f64::EPSILON / 2.0;
    }
    let int_part = floor as i64;

    let (nearest_int, nearest_rem) = if frac_part >= 0.5 {
        let m = int_part + 1;
        (m, x - m as f64)
    } else {
        (int_part, x - floor)
    };
    // x - m is exact, but keep the half-open range even if the pinned
    // fractional part pushed the rounding decision.
    let nearest_rem = nearest_rem.clamp(-0.5, 0.5 - f64::EPSILON / 4.0);

    Ok(Decomposition {
        x,
        int_part,
        frac_part,
        centered: frac_part - 0.5,
        nearest_int,
        nearest_rem,
    })
}
