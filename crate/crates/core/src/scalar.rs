//! Scalar abstraction for the numeric core.
//!
//! Everything numerical in this crate is generic over [`Real`], which is any
//! IEEE float with the usual transcendental operations plus conversions from
//! `f64` (used for frozen constants such as ζ(3)). `f32` works but the
//! default tolerances throughout assume `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for pulling an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// ζ(3), Apéry's constant.
#[inline]
pub fn zeta3<T: Real>() -> T {
    real(1.202_056_903_159_594_3)
}

/// Compensated (Kahan) accumulator.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Extend<T> for KahanSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_harmonic_tail() {
        let mut k = KahanSum::<f32>::new();
        let mut naive = 0.0f32;
        for n in 1..100_000u32 {
            let t = 1.0f32 / n as f32;
            k.add(t);
            naive += t;
        }
        let exact: f64 = (1..100_000u32).map(|n| 1.0 / n as f64).sum();
        assert!((k.value() as f64 - exact).abs() < (naive as f64 - exact).abs());
    }

    #[test]
    fn real_casts() {
        assert_eq!(real::<f64>(0.5), 0.5);
        assert_eq!(real::<f32>(0.5), 0.5f32);
    }
}
