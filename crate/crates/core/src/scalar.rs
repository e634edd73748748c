//! Scalar abstraction shared by every numerical kernel in the crate.
//!
//! All math is written against [`Real`], which is implemented for `f32` and
//! `f64`. Complex values are `num_complex::Complex<S>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable by the averaging, spectral and analysis kernels.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self;

    /// Converts a count or index.
    fn of_usize(n: usize) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn of_usize(n: usize) -> Self {
        n as f32
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn of_usize(n: usize) -> Self {
        n as f64
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Reduces `x` into `[0, 1)`.
#[inline]
pub fn frac<S: Real>(x: S) -> S {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1
    if r >= S::one() {
        S::zero()
    } else {
        r
    }
}

/// `k·x mod 1` with the product formed error-free (two-product via fma), so
/// the phase stays accurate for large `k`.
#[inline]
pub fn frac_mul<S: Real>(k: u64, x: S) -> S {
    if k == 0 {
        return S::zero();
    }
    let kk = S::from_u64(k).expect("index representable");
    let hi = kk * x;
    let lo = kk.mul_add(x, -hi);
    frac(frac(hi) + lo)
}

/// `e^{2πi t}` for a phase `t` measured in turns.
#[inline]
pub fn turn<S: Real>(t: S) -> Complex<S> {
    // reduce to [-1/2, 1/2) so the sin/cos argument stays small
    let mut r = frac(t);
    let half = S::lit(0.5);
    if r >= half {
        r -= S::one();
    }
    let (s, c) = (S::TAU() * r).sin_cos();
    Complex::new(c, s)
}

/// `sin(π t)` evaluated after reducing `t` to the nearest integer offset,
/// accurate when `t` is close to an integer.
#[inline]
pub fn sin_pi<S: Real>(t: S) -> S {
    let n = t.round();
    let r = t - n;
    let s = (S::PI() * r).sin();
    let odd = n.to_i64().map(|i| i.rem_euclid(2) == 1).unwrap_or(false);
    if odd {
        -s
    } else {
        s
    }
}
