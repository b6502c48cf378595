//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library computes in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative tolerance that adaptive routines aim for by default.
    fn default_rel_tol() -> Self {
        let floor = Self::epsilon() * lit(100.0);
        lit::<Self>(1e-10).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into the working scalar.
#[inline]
pub fn count<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("count representable in scalar type")
}

/// `x * e` in log space with the convention `0 * ln 0 = 0`, used for
/// `z^0` factors evaluated at `z = 0`.
#[inline]
pub(crate) fn ln_pow<T: Scalar>(x: T, exponent: T) -> T {
    if exponent == T::zero() {
        T::zero()
    } else {
        exponent * x.ln()
    }
}

/// `ln(Σ exp(terms))`, stable for widely spread magnitudes.
pub(crate) fn log_sum_exp<T: Scalar>(terms: &[T]) -> T {
    let max = terms.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || !max.is_finite() {
        return max;
    }
    let sum = terms.iter().fold(T::zero(), |acc, &t| acc + (t - max).exp());
    max + sum.ln()
}
