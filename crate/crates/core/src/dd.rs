//! Double-double scalar used to evaluate the closed-form solution without
//! losing the binary64 digits that cancel in `y1 * antiderivative(1/alpha^2)`.
//!
//! Thin wrapper over [`twofloat::TwoFloat`]. Division is reimplemented: the
//! wrapped two-word by two-word division forms `1 - b*(1/b)` without a fused
//! multiply-add and is only binary64 accurate for divisors such as 3.

use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Float, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

#[derive(Debug, Default, Clone, Copy, PartialEq, PartialOrd)]
pub struct DoubleDouble(TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self(<TwoFloat as From<f64>>::from(x))
    }
}

impl From<DoubleDouble> for f64 {
    fn from(x: DoubleDouble) -> Self {
        // `hi` is the sum rounded to nearest.
        x.0.hi()
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

macro_rules! forward_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for DoubleDouble {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                Self($tr::$m(self.0, rhs.0))
            }
        }
    )*};
}

forward_binop!(Add add, Sub sub, Mul mul, Rem rem);

impl Div for DoubleDouble {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let b = rhs.0;
        // 1/b.hi as an exact-to-two-words quotient, then one Newton step to
        // account for b.lo.
        let r0 = TwoFloat::new_div(1.0, b.hi());
        if !r0.hi().is_finite() || b.hi() == 0.0 {
            return <Self as From<f64>>::from(self.0.hi() / b.hi());
        }
        let one = <TwoFloat as From<f64>>::from(1.0);
        let r = r0 + r0 * (one - b * r0);
        Self(self.0 * r)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self(<TwoFloat as From<f64>>::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self(<TwoFloat as From<f64>>::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Self)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.hi())
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Self(<TwoFloat as From<i64>>::from(n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Self(<TwoFloat as From<u64>>::from(n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(<Self as From<f64>>::from(n))
    }
    fn from_f32(n: f32) -> Option<Self> {
        Some(<Self as From<f64>>::from(<f64 as From<f32>>::from(n)))
    }
}

impl NumCast for DoubleDouble {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        <TwoFloat as NumCast>::from(n).map(Self)
    }
}

macro_rules! forward_unary {
    ($($m:ident),*) => {$(
        fn $m(self) -> Self {
            Self(Float::$m(self.0))
        }
    )*};
}

macro_rules! forward_pred {
    ($($m:ident),*) => {$(
        fn $m(self) -> bool {
            Float::$m(self.0)
        }
    )*};
}

macro_rules! forward_const {
    ($($m:ident),*) => {$(
        fn $m() -> Self {
            Self(<TwoFloat as Float>::$m())
        }
    )*};
}

macro_rules! forward_binary {
    ($($m:ident),*) => {$(
        fn $m(self, other: Self) -> Self {
            Self(Float::$m(self.0, other.0))
        }
    )*};
}

impl Float for DoubleDouble {
    forward_const!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, epsilon, max_value);
    forward_pred!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);
    forward_unary!(
        floor, ceil, round, trunc, fract, abs, signum, sqrt, exp, exp2, ln, log2, log10, cbrt, sin,
        cos, tan, asin, acos, atan, exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh
    );
    forward_binary!(max, min, powf, log, hypot, atan2);

    #[allow(deprecated)]
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Self::zero()
        }
    }

    fn classify(self) -> FpCategory {
        self.0.classify()
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn powi(self, n: i32) -> Self {
        let mut acc = Self::one();
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }

    fn integer_decode(self) -> (u64, i16, i8) {
        Float::integer_decode(self.0)
    }
}
