//! Floating-point abstraction for the numerical parts of the crate.
//!
//! Everything numerical is written against [`Real`], implemented for `f64` and
//! for [`DoubleDouble`] (an unevaluated sum of two doubles, about 32
//! significant digits), which is what makes high-order truncation errors
//! measurable below the `f64` round-off floor.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub trait Real:
    Copy
    + Debug
    + Display
    + Default
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Convergence threshold of fixed-point iterations on quantities of order one.
    const FIXED_POINT_TOL: f64;
    /// Smallest relative tolerance the integrator accepts.
    const MIN_TOLERANCE: f64;

    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;

    fn zero() -> Self {
        Self::of(0.0)
    }
    fn one() -> Self {
        Self::of(1.0)
    }
    fn pi() -> Self;
    fn tau() -> Self {
        Self::pi() * Self::of(2.0)
    }

    fn sqrt(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    /// Four-quadrant arctangent of `self / x`.
    fn atan2(self, x: Self) -> Self;
    fn abs(self) -> Self;
    fn floor(self) -> Self;
    fn round(self) -> Self;
    fn is_finite(self) -> bool;

    fn is_nan(self) -> bool {
        self.partial_cmp(&self).is_none()
    }
    fn max(self, other: Self) -> Self {
        if other > self || self.is_nan() {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if other < self || self.is_nan() {
            other
        } else {
            self
        }
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn powi(self, n: i32) -> Self {
        let mut result = Self::one();
        let mut base = self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result *= base;
            }
            base *= base;
            e >>= 1;
        }
        if n < 0 {
            Self::one() / result
        } else {
            result
        }
    }

    /// `num / den` correctly rounded to the working precision.
    fn ratio(num: &BigInt, den: &BigInt) -> Self;
}

impl Real for f64 {
    const FIXED_POINT_TOL: f64 = 1e-13;
    const MIN_TOLERANCE: f64 = 1e-14;

    fn of(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn tau() -> Self {
        std::f64::consts::TAU
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn ratio(num: &BigInt, den: &BigInt) -> Self {
        DoubleDouble::ratio(num, den).as_f64()
    }
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

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

const PI_DD: DoubleDouble = DoubleDouble { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };
const FRAC_PI_2_DD: DoubleDouble = DoubleDouble { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };
const TAYLOR_EPS: f64 = 1e-35;

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    /// Normalized sum of two doubles.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self::from(hi);
        }
        let rest = n - big_of(hi);
        Self::from_sum(hi, rest.to_f64().unwrap_or(0.0))
    }

    /// Taylor sums for `|r| <= pi/4`.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut s = r;
        let mut term = r;
        let mut k = 1.0;
        loop {
            term = -(term * r2) / Self::from((k + 1.0) * (k + 2.0));
            k += 2.0;
            s += term;
            if term.hi.abs() < TAYLOR_EPS {
                break;
            }
        }
        let mut c = Self::one();
        let mut term = Self::one();
        let mut k = 0.0;
        loop {
            term = -(term * r2) / Self::from((k + 1.0) * (k + 2.0));
            k += 2.0;
            c += term;
            if term.hi.abs() < TAYLOR_EPS {
                break;
            }
        }
        (s, c)
    }
}

fn big_of(x: f64) -> BigInt {
    let (mantissa, exponent, sign) = num_traits::float::FloatCore::integer_decode(x);
    let m = BigInt::from(mantissa) * BigInt::from(sign);
    if exponent >= 0 {
        m << exponent as usize
    } else {
        m >> (-exponent) as usize
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e}, {:e})", self.hi, self.lo)
    }
}

impl Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{}", self.hi)
        } else {
            write!(f, "{} {:+e}", self.hi, self.lo)
        }
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Self::from(q1);
        }
        let r = self - b * Self::from(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Self::from(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Real for DoubleDouble {
    const FIXED_POINT_TOL: f64 = 1e-29;
    const MIN_TOLERANCE: f64 = 1e-30;

    fn of(x: f64) -> Self {
        Self::from(x)
    }

    fn as_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn pi() -> Self {
        PI_DD
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from(self.hi.sqrt());
        }
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let resid = (self - Self { hi: p, lo: e }).as_f64();
        Self::from_sum(x, resid / (2.0 * x))
    }

    fn sin_cos(self) -> (Self, Self) {
        if !self.is_finite() {
            return (Self::from(f64::NAN), Self::from(f64::NAN));
        }
        let k = (self / FRAC_PI_2_DD).round();
        let r = self - k * FRAC_PI_2_DD;
        let (s, c) = Self::sin_cos_reduced(r);
        match (k.hi.rem_euclid(4.0)) as u8 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn atan2(self, x: Self) -> Self {
        let t = Self::from(self.hi.atan2(x.hi));
        if !t.is_finite() || (self.hi == 0.0 && x.hi == 0.0) {
            return t;
        }
        // Newton step on sin(t) x - cos(t) y = 0 doubles the correct digits
        let (s, c) = t.sin_cos();
        t + (self * c - x * s) / (x * c + self * s)
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Self { hi, lo }
        } else {
            Self::from(hi)
        }
    }

    fn round(self) -> Self {
        (self + Self::from(0.5)).floor()
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn ratio(num: &BigInt, den: &BigInt) -> Self {
        Self::from_bigint(num) / Self::from_bigint(den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::of(x)
    }

    #[test]
    fn division_is_double_double_accurate() {
        for (a, b) in [(1.0, 3.0), (2.0, 7.0), (-5.5, 0.1), (1e10, 3.3e-7)] {
            let q = dd(a) / dd(b);
            let err = ((q * dd(b) - dd(a)) / dd(a)).abs().as_f64();
            assert!(err < 1e-31, "{a}/{b}: {err}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        for x in [2.0, 0.3, 1e-8, 12345.678] {
            let r = dd(x).sqrt();
            let err = ((r * r - dd(x)) / dd(x)).abs().as_f64();
            assert!(err < 1e-31, "{x}: {err}");
        }
    }

    #[test]
    fn trig_identities_hold_at_large_arguments() {
        for x in [0.1, 1.0, -2.5, 100.3, 1234.5] {
            let (s, c) = dd(x).sin_cos();
            assert!((s * s + c * c - DoubleDouble::one()).abs().as_f64() < 1e-31);
            assert!((s.as_f64() - x.sin()).abs() < 1e-14 * x.abs().max(1.0));
            // double-angle relation probes the low word
            let (s2, _) = (dd(x) * dd(2.0)).sin_cos();
            assert!((s2 - dd(2.0) * s * c).abs().as_f64() < 1e-29, "{x}");
        }
        // pi/6 is not representable; compare sin(pi/6) against 1/2
        let (s, _) = (DoubleDouble::pi() / dd(6.0)).sin_cos();
        assert!((s - dd(0.5)).abs().as_f64() < 1e-31);
    }

    #[test]
    fn atan2_is_refined() {
        let y = dd(0.3);
        let x = dd(-0.7);
        let t = y.atan2(x);
        let (s, c) = t.sin_cos();
        let resid = (s * x - c * y).as_f64().abs();
        assert!(resid < 1e-31, "{resid}");
        assert!((t.as_f64() - 0.3f64.atan2(-0.7)).abs() < 1e-15);
    }

    #[test]
    fn exact_ratios() {
        let r = DoubleDouble::ratio(&BigInt::from(10803), &BigInt::from(256));
        assert_eq!(r.as_f64(), 10803.0 / 256.0);
        let third = DoubleDouble::ratio(&BigInt::from(1), &BigInt::from(3));
        let err = ((third * dd(3.0)) - dd(1.0)).abs().as_f64();
        assert!(err < 1e-31, "{err}");
        let big = BigInt::from(3).pow(80);
        let r = DoubleDouble::ratio(&big, &(big.clone() * BigInt::from(7)));
        assert!((r * dd(7.0) - dd(1.0)).abs().as_f64() < 1e-31);
        assert_eq!(f64::ratio(&BigInt::from(1), &BigInt::from(3)), 1.0 / 3.0);
    }

    #[test]
    fn floor_and_round() {
        let x = DoubleDouble::from_sum(3.0, -1e-20);
        assert_eq!(x.floor().as_f64(), 2.0);
        assert_eq!(dd(2.5).round().as_f64(), 3.0);
        assert_eq!(dd(-2.3).floor().as_f64(), -3.0);
        assert_eq!(dd(2.0).powi(-2).as_f64(), 0.25);
    }
}
