//! Scalar abstraction: all model math is generic over [`Real`], which is
//! implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

/// Floating-point scalar usable by the models, oracles and estimators.
///
/// Bundles the numeric traits the math needs with the handful of sampling
/// primitives and special functions that `num_traits::Float` does not carry.
pub trait Real:
    Float + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// One draw from the standard normal distribution.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One draw from the uniform distribution on `[lo, hi)`.
    fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self;

    /// One Poisson count with the given mean. A non-positive mean yields 0.
    fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: Self) -> u64;

    /// Complementary error function.
    fn erfc(self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self {
        rng.random_range(lo..hi)
    }

    #[inline]
    fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: Self) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        let draw: f64 = Poisson::new(mean).expect("finite positive mean").sample(rng);
        draw as u64
    }

    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self {
        rng.random_range(lo..hi)
    }

    #[inline]
    fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: Self) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        let draw: f32 = Poisson::new(mean).expect("finite positive mean").sample(rng);
        draw as u64
    }

    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn cast<T: Real>(value: f64) -> T {
    T::from_f64(value).expect("f64 constant representable in scalar type")
}
