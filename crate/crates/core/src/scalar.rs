//! Floating-point scalar abstraction shared by the operator engine.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::{Float, FromPrimitive, ToPrimitive};

use crate::Rational;

/// Real scalar type used for operator matrices.
///
/// Implemented for `f32` and `f64`. Exact quantities (state weights, δ values)
/// stay in [`Rational`] and are converted through [`Scalar::from_rational`].
pub trait Scalar:
    Float + FromPrimitive + AddAssign + SubAssign + MulAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Machine epsilon scaled for "numerically zero" decisions.
    fn tiny() -> Self;

    fn from_rational(q: &Rational) -> Self {
        Self::from_f64(rational_to_f64(q)).expect("finite rational")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tiny() -> Self {
        1e-300
    }
}

impl Scalar for f32 {
    fn tiny() -> Self {
        1e-37
    }
}

/// Converts a big rational to the nearest `f64` without overflowing on large
/// numerators or denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            // Shift both sides down until they fit.
            let shift = n.bits().max(d.bits()).saturating_sub(1000);
            let n: BigInt = n >> shift;
            let d: BigInt = d >> shift;
            n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
        }
    }
}
