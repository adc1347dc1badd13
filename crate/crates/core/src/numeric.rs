//! Log-space numerics shared by the densities, oracles and estimators.
//!
//! Products of up to ten Gaussian densities underflow in linear space, so
//! every density in this crate is composed in log space and only mapped back
//! through a shared max-shift.

use crate::real::{cast, Real};

/// `0.5 * ln(2 * pi)`.
pub(crate) fn half_ln_two_pi<T: Real>() -> T {
    cast(0.5 * (2.0 * std::f64::consts::PI).ln())
}

/// Log-density of `Normal(mean, sigma^2)` at `x`.
#[inline]
pub fn log_normal_pdf<T: Real>(x: T, mean: T, sigma: T) -> T {
    let z = (x - mean) / sigma;
    -sigma.ln() - half_ln_two_pi::<T>() - cast::<T>(0.5) * z * z
}

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_sum_exp2<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() && b == T::neg_infinity() {
        return T::neg_infinity();
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// Log of the standard normal CDF, `ln Phi(z)`.
///
/// Uses the complementary error function while its value is representable and
/// switches to the asymptotic tail expansion beyond that, so deep tails never
/// round to `-inf` prematurely.
pub fn log_ndtr<T: Real>(z: T) -> T {
    let half: T = cast(0.5);
    let inv_sqrt2: T = cast(std::f64::consts::FRAC_1_SQRT_2);
    if z > cast(8.0) {
        // Phi(z) ~= 1; ln(1 - q) with q the tiny upper tail.
        let q = half * (z * inv_sqrt2).erfc();
        return (-q).ln_1p();
    }
    let p = half * (-z * inv_sqrt2).erfc();
    if p > T::min_positive_value() / T::epsilon() {
        return p.ln();
    }
    // ln Phi(z) for z << 0: -z^2/2 - ln(-z) - ln(2 pi)/2 + ln(1 - 1/z^2 + 3/z^4)
    let z2 = z * z;
    let series = -T::one() / z2 + cast::<T>(3.0) / (z2 * z2);
    -half * z2 - (-z).ln() - half_ln_two_pi::<T>() + series.ln_1p()
}

/// `ln(Phi(hi) - Phi(lo))` for `hi > lo`, stable in both tails.
pub fn log_ndtr_diff<T: Real>(hi: T, lo: T) -> T {
    debug_assert!(hi >= lo);
    // Reflect when the interval sits in the upper tail: Phi(hi) - Phi(lo) =
    // Phi(-lo) - Phi(-hi), and lower-tail evaluations keep full precision.
    let (a, b) = if hi + lo > T::zero() { (-lo, -hi) } else { (hi, lo) };
    let log_a = log_ndtr(a);
    let log_b = log_ndtr(b);
    log_a + (-(log_b - log_a).exp()).ln_1p()
}
