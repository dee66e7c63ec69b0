//! Scalar helpers shared by the field model.
//!
//! `core` has no transcendental functions, so everything routes through
//! `libm`.

use core::f64::consts::{PI, TAU};

pub(crate) use libm::{acos, atan2, cos, pow, sin, sincos, sqrt};

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // r + TAU can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Unnormalised sinc, `sin(x) / x`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        sin(x) / x
    }
}

/// `10 log10(x)`.
pub fn to_db(x: f64) -> f64 {
    10.0 * libm::log10(x)
}

/// Inverse of [`to_db`].
pub fn from_db(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Degrees to radians.
pub fn deg(x: f64) -> f64 {
    x * PI / 180.0
}

/// Radians to degrees.
pub fn to_deg(x: f64) -> f64 {
    x * 180.0 / PI
}

/// `x^k` for a non-negative integer `k` by repeated squaring.
pub(crate) fn powu(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}
