//! Signed-log arithmetic.
//!
//! A [`SignedLog`] stores a real number as a sign and the natural log of its
//! magnitude, so products of factorials and large powers stay finite.

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    negative: bool,
    ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { negative: false, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { negative: false, ln_abs: 0.0 };

    /// A positive value given by its natural log.
    pub const fn from_ln(ln_abs: f64) -> Self {
        SignedLog { negative: false, ln_abs }
    }

    pub const fn from_parts(negative: bool, ln_abs: f64) -> Self {
        SignedLog { negative, ln_abs }
    }

    pub fn from_f64(x: f64) -> Self {
        SignedLog { negative: x.is_sign_negative() && x != 0.0, ln_abs: libm::log(libm::fabs(x)) }
    }

    pub fn is_negative(&self) -> bool {
        self.negative && !self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn abs(self) -> Self {
        SignedLog { negative: false, ..self }
    }

    /// Converts to a plain float, failing if the magnitude exceeds `f64::MAX`.
    pub fn to_f64(self) -> Result<f64> {
        let mag = libm::exp(self.ln_abs);
        if mag.is_infinite() {
            return Err(Error::Overflow { ln_abs: self.ln_abs });
        }
        Ok(if self.negative { -mag } else { mag })
    }

    pub fn powi(self, n: i32) -> Self {
        SignedLog {
            negative: self.negative && n % 2 != 0,
            ln_abs: if n == 0 { 0.0 } else { self.ln_abs * f64::from(n) },
        }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, rhs: SignedLog) -> SignedLog {
        if self.is_zero() || rhs.is_zero() {
            return SignedLog::ZERO;
        }
        SignedLog { negative: self.negative != rhs.negative, ln_abs: self.ln_abs + rhs.ln_abs }
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> SignedLog {
        SignedLog { negative: !self.negative, ..self }
    }
}

impl Add for SignedLog {
    type Output = SignedLog;

    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = match self.ln_abs.partial_cmp(&rhs.ln_abs) {
            Some(Ordering::Less) => (rhs, self),
            _ => (self, rhs),
        };
        let d = small.ln_abs - big.ln_abs;
        if big.negative == small.negative {
            SignedLog { negative: big.negative, ln_abs: big.ln_abs + libm::log1p(libm::exp(d)) }
        } else if d == 0.0 {
            SignedLog::ZERO
        } else {
            // |big| > |small|: ln(|big| - |small|) = ln|big| + ln(1 - e^d)
            SignedLog { negative: big.negative, ln_abs: big.ln_abs + libm::log1p(-libm::exp(d)) }
        }
    }
}

impl core::iter::Sum for SignedLog {
    fn sum<I: Iterator<Item = SignedLog>>(iter: I) -> SignedLog {
        iter.fold(SignedLog::ZERO, |acc, x| acc + x)
    }
}

/// Numerically stable `ln(sum(exp(x_i)))` over a slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| libm::exp(v - max)).sum();
    max + libm::log(sum)
}
